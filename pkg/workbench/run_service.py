import logging
import threading
from pathlib import Path

from django.utils import timezone

from geometry.conf import setting
from reduction.cnf import normalize
from reduction.conditions import check_logical_conditions
from reduction.construction import build_logical_polytope

from .fileformats import parse_dimacs, save_build

logger = logging.getLogger(__name__)


def run_directory(run):
    return Path(setting('OUTPUT_ROOT')) / f"run-{run.id}"


def process_run(run):
    """Build, save and check the logical polytope of a ConstructionRun"""
    try:
        run.status = 'processing'
        run.save()

        formula = normalize(parse_dimacs(run.formula))
        lp = build_logical_polytope(formula, chain_length=run.chain_length)
        run.C, run.V = formula.C, formula.V
        run.m, run.n, run.K = lp.params.m, lp.params.n, lp.params.K

        directory = save_build(lp, run_directory(run))
        run.output_dir = str(directory)
        run.save()

        report = check_logical_conditions(lp, workers=setting('BRUTE_MIN_WORKERS'))
        run.conditions = report.as_dict()
        if not report.verdict:
            failed = [name for name, problems in report.failures.items() if problems]
            raise RuntimeError(f"conditions failed: {', '.join(failed)}")

        run.status = 'completed'
        run.completed_at = timezone.now()
        run.save()
        logger.info("run %d completed: n=%d K=%d", run.id, run.n, run.K)
        return True

    except Exception as e:
        logger.exception("run %d failed", run.id)
        run.status = 'failed'
        run.error_message = str(e)
        run.save()
        return False


def start_run(run):
    """Process the run in a background thread"""
    thread = threading.Thread(target=process_run, args=(run,))
    thread.start()
    return thread
