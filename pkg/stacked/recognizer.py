"""
Recognition of stacked 3-polytopes through 3-decomposability of their
skeleton, and the n - 3 triangulation read off a decomposition.

A graph is k-decomposable when it has at most k + 1 vertices, or when some
set S of at most k vertices disconnects it and every component, with S added
back as a clique, is again k-decomposable.
"""
import logging
from dataclasses import dataclass, field
from itertools import combinations

import networkx as nx

from geometry.kernel import Sign, orient4
from geometry.triangulation import Triangulation, tetra, validate

from .exceptions import Disconnected, NonRealizableCut

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StackedCertificate:
    vertices: tuple
    separator: tuple = None
    children: tuple = field(default=())

    @property
    def is_leaf(self):
        return self.separator is None

    def leaves(self):
        if self.is_leaf:
            yield self
            return
        for child in self.children:
            yield from child.leaves()

    def as_dict(self):
        data = {'vertices': list(self.vertices)}
        if not self.is_leaf:
            data['separator'] = list(self.separator)
            data['children'] = [child.as_dict() for child in self.children]
        return data


class _Decomposer:
    def __init__(self, k):
        self.k = k
        self.memo = {}
        self.calls = 0

    def decompose(self, g):
        key = (frozenset(g.nodes), frozenset(frozenset(e) for e in g.edges))
        if key not in self.memo:
            self.memo[key] = self._decompose(g)
        return self.memo[key]

    def _decompose(self, g):
        self.calls += 1
        nodes = sorted(g.nodes)
        if len(nodes) <= self.k + 1:
            return StackedCertificate(vertices=tuple(nodes))
        for size in range(1, self.k + 1):
            for S in combinations(nodes, size):
                rest = g.subgraph(set(nodes) - set(S))
                if nx.is_connected(rest):
                    continue
                children = []
                for component in sorted(nx.connected_components(rest), key=min):
                    child = g.subgraph(component | set(S)).copy()
                    child.add_edges_from(combinations(S, 2))
                    certificate = self.decompose(child)
                    if certificate is None:
                        break
                    children.append(certificate)
                else:
                    return StackedCertificate(vertices=tuple(nodes), separator=S, children=tuple(children))
        return None


def is_stacked_graph(g, k=3):
    """A decomposition certificate when g is k-decomposable, otherwise None"""
    if g.number_of_nodes() == 0 or not nx.is_connected(g):
        raise Disconnected("the graph must be connected and non-empty")
    decomposer = _Decomposer(k)
    certificate = decomposer.decompose(g)
    logger.info("%d-decomposability of a %d-vertex graph: %s after %d subproblems",
                k, g.number_of_nodes(), "yes" if certificate else "no", decomposer.calls)
    return certificate


def is_stacked(P):
    return is_stacked_graph(P.skeleton()) is not None


def _realize(P, cert, tetras):
    points = P.vertices
    if cert.is_leaf:
        if len(cert.vertices) != 4:
            raise NonRealizableCut(f"leaf {cert.vertices} is not a tetrahedron")
        if orient4(*(points[i] for i in cert.vertices)) == Sign.ZERO:
            raise NonRealizableCut(f"leaf {cert.vertices} is flat")
        tetras.append(tetra(*cert.vertices))
        return
    if len(cert.separator) != 3:
        raise NonRealizableCut(f"separator {cert.separator} is not a triangle")
    a, b, c = (points[i] for i in cert.separator)
    sides = set()
    for child in cert.children:
        own = [v for v in child.vertices if v not in cert.separator]
        signs = {orient4(a, b, c, points[v]) for v in own}
        if len(signs) != 1 or Sign.ZERO in signs:
            raise NonRealizableCut(f"plane of {cert.separator} does not keep {own} on one side")
        sides |= signs
        _realize(P, child, tetras)
    if len(sides) != 2:
        raise NonRealizableCut(f"separator {cert.separator} does not cut the polytope in two")


def stacked_triangulation(P, cert):
    """The triangulation with n - 3 tetrahedra described by a decomposition of P's skeleton"""
    tetras = []
    _realize(P, cert, tetras)
    T = Triangulation(P, frozenset(tetras))
    report = validate(P, T)
    if not report.verdict:
        raise NonRealizableCut(f"the decomposition does not triangulate P: {report.failures[:3]}")
    logger.info("stacked triangulation with %d tetrahedra of a %d-vertex polytope", len(T), P.n)
    return T
