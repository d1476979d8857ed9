from geometry.triangulation import brute_min, size_bounds

from ...fileformats import dump_triangulation, load_polytope
from ..base import WorkbenchCommand, edge_argument


class Command(WorkbenchCommand):
    help = "Exhaustive minimal triangulation of a small polytope"

    def add_command_arguments(self, parser):
        parser.add_argument('polytope')
        parser.add_argument('--forbid-edge', action='append', type=edge_argument, default=[], metavar='I,J')
        parser.add_argument('--require-edge', action='append', type=edge_argument, default=[], metavar='I,J')
        parser.add_argument('--budget', type=int, help="give up after this many search nodes")
        parser.add_argument('--deterministic', action='store_true', help="sequential search")
        parser.add_argument('--max-vertices', type=int, help="raise the size guard")
        parser.add_argument('-o', '--output', help="witness triangulation file")

    def run(self, polytope, forbid_edge, require_edge, budget=None, deterministic=False,
            max_vertices=None, output=None, **options):
        P = load_polytope(self.read(polytope))
        size, witness = brute_min(
            P,
            forbidden_edges=forbid_edge,
            required_edges=require_edge,
            budget=budget,
            deterministic=deterministic,
            max_vertices=max_vertices,
        )
        lines = [f"size: {size}"]
        data = {'size': size, 'n': P.n, 'bounds': size_bounds(P.n)}
        if output:
            path = self.write(output, dump_triangulation(witness))
            data['witness'] = str(path)
            lines.append(f"witness written to {path}")
        else:
            data['witness'] = [list(t) for t in sorted(witness.tetras)]
            lines.append(dump_triangulation(witness).rstrip("\n"))
        self.emit(data, lines)
