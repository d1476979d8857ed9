from reduction.cnf import normalize

from ...fileformats import parse_dimacs
from ..base import WorkbenchCommand


class Command(WorkbenchCommand):
    help = "Bring a DIMACS formula to the two-positive, one-negative occurrence pattern"

    def add_command_arguments(self, parser):
        parser.add_argument('cnf')
        parser.add_argument('-o', '--output', help="write the restricted formula here instead of stdout")

    def run(self, cnf, output=None, **options):
        formula = parse_dimacs(self.read(cnf))
        restricted = normalize(formula)
        dimacs = restricted.as_dimacs()
        if output:
            self.write(output, dimacs)
        self.emit(
            {
                'variables': restricted.V,
                'clauses': [list(c) for c in restricted.clauses],
                'origin': [list(pair) for pair in restricted.origin],
                'changed': restricted.clauses != formula.clauses or restricted.V != formula.V,
            },
            [] if output else [dimacs.rstrip("\n")],
        )
