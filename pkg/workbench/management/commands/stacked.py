from stacked.minors import forbidden_minor
from stacked.recognizer import is_stacked_graph, stacked_triangulation

from ...exceptions import FileFormatError
from ...fileformats import dump_triangulation, load_graph, load_polytope
from ..base import WorkbenchCommand


def _certificate_lines(cert, depth=0):
    pad = "  " * depth
    if cert.is_leaf:
        yield f"{pad}leaf {' '.join(map(str, cert.vertices))}"
        return
    yield f"{pad}cut {' '.join(map(str, cert.separator))}"
    for child in cert.children:
        yield from _certificate_lines(child, depth + 1)


class Command(WorkbenchCommand):
    help = "Decide whether a polytope (or its skeleton given as an edge list) is stacked"

    def add_command_arguments(self, parser):
        parser.add_argument('path', help="polytope file or edge-list file")
        parser.add_argument('--triangulate', metavar='FILE', help="write the n - 3 triangulation (polytope input only)")
        parser.add_argument('--minor', action='store_true', help="name the forbidden minor when not stacked")

    def run(self, path, triangulate=None, minor=False, **options):
        text = self.read(path)
        g = load_graph(text)
        cert = is_stacked_graph(g)
        data = {'stacked': cert is not None, 'n': g.number_of_nodes()}
        lines = [f"stacked: {'yes' if cert else 'no'}"]
        if cert:
            data['certificate'] = cert.as_dict()
            lines.extend(_certificate_lines(cert))
            if triangulate:
                try:
                    P = load_polytope(text)
                except FileFormatError:
                    self.check_failed("--triangulate needs a polytope file, not an edge list")
                T = stacked_triangulation(P, cert)
                self.write(triangulate, dump_triangulation(T))
                data['triangulation'] = {'size': len(T), 'file': triangulate}
                lines.append(f"triangulation with {len(T)} tetrahedra written to {triangulate}")
        elif minor:
            found = forbidden_minor(g)
            data['minor'] = found.value if found else None
            lines.append(f"minor: {found.value if found else 'none found'}")
        self.emit(data, lines)
