from reduction.cnf import normalize
from reduction.construction import build_logical_polytope

from ...fileformats import parse_dimacs, save_build, write_off
from ..base import WorkbenchCommand


class Command(WorkbenchCommand):
    help = "Build the logical polytope of a formula and write its build directory"

    def add_command_arguments(self, parser):
        parser.add_argument('cnf')
        parser.add_argument('-o', '--output', required=True, help="build directory")
        parser.add_argument('--chain-length', type=int, help="override the cupola chain length m")
        parser.add_argument('--off', action='store_true', help="also write a lossy polytope.off")

    def run(self, cnf, output, chain_length=None, off=False, **options):
        formula = normalize(parse_dimacs(self.read(cnf)))
        lp = build_logical_polytope(formula, chain_length=chain_length)
        directory = save_build(lp, output)
        if off:
            self.write(directory / 'polytope.off', write_off(lp.polytope))
        prm = lp.params
        self.emit(
            {**prm.as_dict(), 'directory': str(directory)},
            [f"n={prm.n} m={prm.m} K={prm.K}", f"written to {directory}"],
        )
