"""
Minor tests for the two graphs that obstruct stackedness among 3-polytope
skeletons: the octahedron and the pentagonal prism.
"""
import logging
from enum import Enum

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher

logger = logging.getLogger(__name__)


class ForbiddenMinor(str, Enum):
    OCTAHEDRON = 'Octahedron'
    PENTAGONAL_PRISM = 'PentagonalPrism'


def octahedron_graph():
    return nx.complete_multipartite_graph(2, 2, 2)


def pentagonal_prism_graph():
    return nx.circular_ladder_graph(5)


PATTERNS = {
    ForbiddenMinor.OCTAHEDRON: octahedron_graph,
    ForbiddenMinor.PENTAGONAL_PRISM: pentagonal_prism_graph,
}


def _key(g):
    return frozenset(g.nodes), frozenset(frozenset(e) for e in g.edges)


def has_minor(g, h):
    """
    Exact minor test by contracting edges and deleting vertices until g has
    as many vertices as h, then looking for h as a subgraph. Every operation
    on a connected graph removes at least one edge, which bounds the search.
    """
    target_nodes, target_edges = h.number_of_nodes(), h.number_of_edges()
    seen = set()

    def search(current):
        if not nx.is_connected(current):
            return any(search(current.subgraph(c).copy()) for c in nx.connected_components(current))
        key = _key(current)
        if key in seen:
            return False
        seen.add(key)
        n, e = current.number_of_nodes(), current.number_of_edges()
        if n < target_nodes or e - (n - target_nodes) < target_edges:
            return False
        if n == target_nodes:
            return GraphMatcher(current, h).subgraph_is_monomorphic()
        for u, v in sorted(current.edges):
            keep, drop = min(u, v), max(u, v)
            if search(nx.contracted_nodes(current, keep, drop, self_loops=False)):
                return True
        for v in sorted(current.nodes):
            smaller = current.copy()
            smaller.remove_node(v)
            if search(smaller):
                return True
        return False

    found = search(nx.Graph(g))
    logger.debug("minor search over %d states: %s", len(seen), found)
    return found


def forbidden_minor(g):
    """The first obstruction found as a minor of g, or None"""
    for name, pattern in PATTERNS.items():
        if has_minor(g, pattern()):
            logger.info("graph has a %s minor", name.value)
            return name
    return None
