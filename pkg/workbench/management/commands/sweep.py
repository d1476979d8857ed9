from pathlib import Path

from reduction.cnf import Assignment
from sweep.builder import size_report, sweep_triangulate

from ...fileformats import dump_triangulation, load_build
from ..base import WorkbenchCommand


class Command(WorkbenchCommand):
    help = "Triangulate a build by sweeping with a satisfying assignment"

    def add_command_arguments(self, parser):
        parser.add_argument('directory')
        parser.add_argument('--assignment', required=True, help="one 0/1 digit per variable of the restricted formula")
        parser.add_argument('-o', '--output', help="triangulation file, default <directory>/sweep-<bits>.tri")
        parser.add_argument('--no-check', action='store_true', help="skip the exact validation of the result")

    def run(self, directory, assignment, output=None, no_check=False, **options):
        lp = load_build(directory)
        try:
            values = Assignment.from_bits(assignment)
        except ValueError as e:
            self.check_failed(str(e))
        if len(values) != lp.V:
            self.check_failed(f"assignment has {len(values)} digits, the formula has {lp.V} variables")
        T = sweep_triangulate(lp, values, check=not no_check)
        path = self.write(output or Path(directory) / f"sweep-{values.as_bits()}.tri", dump_triangulation(T))
        report = size_report(lp, T)
        self.emit(
            {**report, 'triangulation': str(path)},
            [
                f"size={report['size']} (cupolas {report['cupola_tetras']}, interface {report['interface_tetras']})",
                f"size<=K: {'yes' if report['within_K'] else 'no'}",
                f"size<=ceiling: {'yes' if report['within_ceiling'] else 'no'} ({report['ceiling']})",
                f"written to {path}",
            ],
        )
