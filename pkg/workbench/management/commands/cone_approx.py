from geometry.triangulation import cone_triangulation

from ...fileformats import dump_triangulation, load_polytope
from ..base import WorkbenchCommand


class Command(WorkbenchCommand):
    help = "Cone a polytope from one vertex, a triangulation with at most 2n - 7 tetrahedra"

    def add_command_arguments(self, parser):
        parser.add_argument('polytope')
        parser.add_argument('--apex', type=int, required=True)
        parser.add_argument('-o', '--output')

    def run(self, polytope, apex, output=None, **options):
        P = load_polytope(self.read(polytope))
        if not 0 <= apex < P.n:
            self.check_failed(f"apex {apex} is not a vertex of a {P.n}-vertex polytope")
        T = cone_triangulation(P, apex)
        text = dump_triangulation(T)
        data = {'size': len(T), 'n': P.n, 'bound': 2 * P.n - 7}
        if output:
            data['triangulation'] = str(self.write(output, text))
            self.emit(data, [f"size: {len(T)}", f"written to {output}"])
        else:
            self.emit({**data, 'tetrahedra': [list(t) for t in sorted(T.tetras)]}, [text.rstrip("\n")])
