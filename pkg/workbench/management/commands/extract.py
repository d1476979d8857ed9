from reduction.extract import extract_assignment

from ...fileformats import load_build, load_triangulation
from ..base import WorkbenchCommand


class Command(WorkbenchCommand):
    help = "Read the assignment off a triangulation of a logical polytope"

    def add_command_arguments(self, parser):
        parser.add_argument('directory')
        parser.add_argument('triangulation')

    def run(self, directory, triangulation, **options):
        lp = load_build(directory)
        T = load_triangulation(self.read(triangulation), lp.polytope)
        result = extract_assignment(lp, T)
        assignment = result.assignment
        original = {
            str(old): value != flipped
            for (old, flipped), value in zip(lp.formula.origin, assignment.values)
        }
        lines = [f"assignment: {assignment.as_bits()}", f"satisfies: {'yes' if result.satisfies else 'no'}"]
        if original:
            lines.append("original: " + " ".join(f"x{k}={int(v)}" for k, v in original.items()))
        self.emit({**result.as_dict(), 'original': original}, lines)
