from geometry.conf import setting
from geometry.triangulation import validate

from ...fileformats import load_polytope, load_triangulation
from ..base import WorkbenchCommand


class Command(WorkbenchCommand):
    help = "Exactly validate a triangulation of a polytope"

    def add_command_arguments(self, parser):
        parser.add_argument('polytope')
        parser.add_argument('triangulation')

    def run(self, polytope, triangulation, **options):
        P = load_polytope(self.read(polytope))
        T = load_triangulation(self.read(triangulation), P)
        report = validate(P, T, workers=setting('BRUTE_MIN_WORKERS'))
        lines = [f"valid: {'yes' if report.verdict else 'no'}", f"tetrahedra: {len(T)}"]
        lines.extend(f"  {kind} {' '.join(map(str, indices))}" for kind, indices in report.failures)
        self.emit(report.as_dict(), lines)
        if not report.verdict:
            self.check_failed(f"{len(report.failures)} validation failures")
