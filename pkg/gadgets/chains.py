"""
Vertex-edge chains: m points on a parabola just beyond an edge (q0, qend)
between two triangular facets (a, q0, qend) and (b, q0, qend).
"""
import logging
from fractions import Fraction

from geometry.exceptions import UnknownFace
from geometry.kernel import EPS, Line3, PolyPoint, line_plane_point, plane_value_poly
from geometry.polytope import PolytopeBuilder

from .exceptions import NotAFacetPair, PlaneDoesNotSeparate

logger = logging.getLogger(__name__)


def chain_parameters(m):
    return [Fraction(i, 4 * m) for i in range(1, m + 1)]


def _fan(cycle, apex, chain):
    """Triangles apex-q_i-q_{i+1} that keep the orientation of the replaced facet"""
    start = cycle.index(apex)
    rotated = cycle[start:] + cycle[:start]
    steps = list(zip(chain, chain[1:]))
    if rotated[1] == chain[0]:
        return [(apex, u, v) for u, v in steps]
    return [(apex, v, u) for u, v in steps]


def _facet(P, indices, label):
    try:
        cycle = P.facets[P.facet_index(indices)]
    except UnknownFace:
        raise NotAFacetPair(f"{label} {tuple(indices)} is not a facet") from None
    if len(cycle) != 3:
        raise NotAFacetPair(f"{label} {tuple(indices)} is not a triangle")
    return list(cycle), P.facet_planes[P.facet_index(indices)]


def attach_chain(P, a, b, q0, qend, G, m):
    """
    Place q_1..q_m beyond the edge (q0, qend) and return the new polytope.

    The new vertices get the indices P.n .. P.n + m - 1 in chain order.
    They lie in the plane H through the edge spanned along the outward
    bisector of the two facet normals, on q0's side of G.
    """
    if m == 0:
        return P
    if m < 0:
        raise ValueError(f"chain length must be non-negative, got {m}")
    cycle_a, plane_a = _facet(P, (a, q0, qend), "first facet")
    cycle_b, plane_b = _facet(P, (b, q0, qend), "second facet")

    p0, p1 = P.vertices[q0], P.vertices[qend]
    side = G.side(p0)
    if side == 0 or G.side(p1) != -side:
        raise PlaneDoesNotSeparate(f"{G} does not strictly separate vertices {q0} and {qend}")

    n1, n2 = plane_a.a, plane_b.a
    c = n1.dot(n2)
    bisector = n1 * (n2.norm2() - c) + n2 * (n1.norm2() - c)
    edge = p1 - p0
    h_normal = edge.cross(bisector)

    D = line_plane_point(Line3.through(p0, p1), G)
    sigma = (D - p0).dot(edge) / edge.norm2()
    w = G.a.cross(h_normal)
    if w.dot(n1) < 0:
        w = -w

    builder = PolytopeBuilder.from_polytope(P)
    new = builder.reserve(m)
    chain = [q0] + new + [qend]

    placed = {}
    extra = []
    for index, t in zip(new, chain_parameters(m)):
        s = (4 * sigma - 1) * t + (2 - 4 * sigma) * t * t
        lift = 4 * t * (1 - t)
        point = PolyPoint.lift(p0 + edge * s) + PolyPoint.lift(w) * (EPS * lift)
        placed[index] = point
        extra.append(plane_value_poly(G, point) * int(side))
        extra.append(plane_value_poly(plane_a, point))
        extra.append(plane_value_poly(plane_b, point))

    added = _fan(cycle_a, a, chain) + _fan(cycle_b, b, chain)
    builder.commit(placed, removed=[(a, q0, qend), (b, q0, qend)], added=added, extra=extra,
                   label=f"chain({q0},{qend})")
    logger.debug("attached %d chain points beyond edge (%d, %d)", m, q0, qend)
    return builder.to_polytope()
