import json
import logging
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from gadgets.exceptions import GadgetError
from geometry.exceptions import GeometryError
from reduction.exceptions import ReductionError, TriviallySatisfied, Unsupported
from stacked.exceptions import StackedError
from sweep.exceptions import SweepError

from ..exceptions import FileFormatError

logger = logging.getLogger(__name__)

EXIT_FAILURE = 1
EXIT_UNSUPPORTED = 2
EXIT_TRIVIALLY_SATISFIED = 3
EXIT_CHECK_FAILED = 4

EXIT_CODES = (
    (Unsupported, EXIT_UNSUPPORTED),
    (TriviallySatisfied, EXIT_TRIVIALLY_SATISFIED),
    ((ReductionError, GeometryError, GadgetError, SweepError, StackedError, FileFormatError), EXIT_FAILURE),
)


def edge_argument(value):
    """'i,j' on the command line"""
    try:
        i, j = (int(part) for part in value.split(','))
    except ValueError:
        raise CommandError(f"edge must look like 'i,j', got {value!r}") from None
    return i, j


class WorkbenchCommand(BaseCommand):
    """
    A command with a text and a JSON rendering of its report. Library errors
    become CommandErrors carrying the exit code of their kind.
    """

    def add_arguments(self, parser):
        parser.add_argument('--format', choices=('text', 'json'), default='text')
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    def handle(self, *args, **options):
        self.as_json = options['format'] == 'json'
        try:
            self.run(**options)
        except CommandError:
            raise
        except Exception as e:
            for kinds, code in EXIT_CODES:
                if isinstance(e, kinds):
                    logger.debug("%s failed with %s", self.__module__, type(e).__name__)
                    raise CommandError(f"{type(e).__name__}: {e}", returncode=code) from e
            raise

    def run(self, **options):
        raise NotImplementedError

    def emit(self, data, lines=()):
        if self.as_json:
            self.stdout.write(json.dumps(data, indent=2, sort_keys=True, default=str))
        else:
            for line in lines:
                self.stdout.write(line)

    def check_failed(self, message):
        raise CommandError(message, returncode=EXIT_CHECK_FAILED)

    def read(self, path):
        try:
            return Path(path).read_text()
        except OSError as e:
            raise CommandError(f"cannot read {path}: {e}") from e

    def write(self, path, text):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
        return path
