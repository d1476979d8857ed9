from django.conf import settings
from django.core.exceptions import ImproperlyConfigured

DEFAULTS = {
    'BRUTE_MIN_MAX_VERTICES': 14,
    'BRUTE_MIN_WORKERS': 4,
    'CHAIN_LENGTH': None,
    'EPS_HALVING_LIMIT': 64,
    'OUTPUT_ROOT': 'runs',
    'FULL_SCALE_TESTS': False,
}


def setting(name):
    """Read a LOGICPOLY tunable, falling back to the built-in default"""
    try:
        configured = getattr(settings, 'LOGICPOLY', {})
    except ImproperlyConfigured:
        # Library use without a configured Django project
        configured = {}
    return configured.get(name, DEFAULTS[name])
