from geometry.conf import setting
from reduction.conditions import check_logical_conditions

from ...fileformats import load_build
from ..base import WorkbenchCommand


class Command(WorkbenchCommand):
    help = "Check the five conditions of a logical polytope build"

    def add_command_arguments(self, parser):
        parser.add_argument('directory')

    def run(self, directory, **options):
        lp = load_build(directory)
        report = check_logical_conditions(lp, workers=setting('BRUTE_MIN_WORKERS'))
        lines = []
        for name, problems in report.failures.items():
            lines.append(f"{name}: {'pass' if not problems else 'FAIL'}")
            lines.extend(f"  {problem}" for problem in problems)
        self.emit(report.as_dict(), lines)
        if not report.verdict:
            self.check_failed("some conditions fail")
