"""
Cupolas: a Schoenhardt frame glued beyond a facet with a vertex-edge chain
on each of its three edges (A_i, B_{i+1}).
"""
import logging
from dataclasses import dataclass

from geometry.exceptions import ParallelElements, UnknownFace
from geometry.kernel import EPS, PolyPoint, choose_eps, line_plane_point, plane_through, plane_value_poly
from geometry.polytope import face_key, glue_beyond, hull3
from geometry.triangulation import tetra

from .chains import attach_chain
from .exceptions import ApexNotInCone, ConeMissesFacet, LineMissesFacet, NotSchonhardt
from .frames import BODY_FACETS, SchonhardtFrame, visibility_cone

logger = logging.getLogger(__name__)

CHAIN_KEYS = ((1, 2), (2, 3), (3, 1))


@dataclass(frozen=True)
class CupolaRecord:
    """
    Where a cupola sits inside its host polytope. All fields except ``frame``
    and ``cone`` are vertex indices of the host.
    """
    frame: SchonhardtFrame
    m: int
    bottom: tuple
    skylight: tuple
    chains: dict
    cone: object
    host: tuple

    def A(self, i):
        return self.bottom[(i - 1) % 3]

    def B(self, i):
        return self.skylight[(i - 1) % 3]

    def chain_points(self):
        return [q for key in CHAIN_KEYS for q in self.chains[key][1:-1]]

    def vertices(self):
        return list(self.bottom) + list(self.skylight) + self.chain_points()

    def frame_index(self, position):
        """Host index of frame position 0..5 (A1, A2, A3, B1, B2, B3)"""
        return self.bottom[position] if position < 3 else self.skylight[position - 3]

    def as_dict(self):
        return {
            'm': self.m,
            'bottom': list(self.bottom),
            'skylight': list(self.skylight),
            'chains': {f"{i},{j}": list(chain) for (i, j), chain in self.chains.items()},
            'host': list(self.host),
            'frame': self.frame.as_dict(),
            'cone': self.cone.as_dict(),
        }


def _rising(line, plane, offset):
    """Point where the line meets the plane a.x = b + offset + eps"""
    denom = plane.a.dot(line.direction)
    if denom == 0:
        raise ParallelElements("line runs parallel to the facet")
    t0 = (plane.b + offset - plane.a.dot(line.base)) / denom
    return PolyPoint.lift(line.point_at(t0)) + PolyPoint.lift(line.direction / denom) * EPS


def _turn(p, q, x, normal):
    return (q - p).cross(x - p).dot(normal)


def _pierce_requirements(triangle, crossings, normal):
    """The crossing points stay inside the triangle with its orientation at eps = 0"""
    triangle = [PolyPoint.lift(p) for p in triangle]
    crossings = [PolyPoint.lift(x) for x in crossings]
    orientation = _turn(*triangle, normal)
    sign = 1 if orientation.coefficient(0) > 0 else -1
    requirements = [orientation * sign]
    for x in crossings:
        for i in range(3):
            requirements.append(_turn(triangle[i], triangle[(i + 1) % 3], x, normal) * sign)
    return requirements


def _beneath_requirements(P, skip, points):
    """Every point strictly beneath each facet of P except ``skip``"""
    requirements = []
    for j, plane in enumerate(P.facet_planes):
        if j == skip:
            continue
        requirements.extend(-plane_value_poly(plane, x) for x in points)
    return requirements


def _check_preconditions(P, facet, V, lines):
    k = P.facet_index(facet)
    if not V.meets_facet_interior(P, facet):
        raise ConeMissesFacet(f"cone does not meet facet {P.facets[k]} in a triangle inside it")
    F = P.facet_planes[k]
    others = [q for j, q in enumerate(P.facet_planes) if j != k]
    for g in lines:
        try:
            x = line_plane_point(g, F)
        except ParallelElements:
            raise LineMissesFacet(f"{g} is parallel to facet {P.facets[k]}") from None
        if any(q.value(x) >= 0 for q in others):
            raise LineMissesFacet(f"{g} does not pierce the relative interior of facet {P.facets[k]}")
        if not V.contains(x):
            raise LineMissesFacet(f"{g} meets the facet outside the cone")
    return k


def _frame_stages(P, k, V, lines):
    """Bottom triangle and skylight for one labelling of the cone's edges"""
    F = P.facet_planes[k]
    edges = V.edge_lines()

    D = [_rising(l, F, 0) for l in edges]
    crossings = [_rising(g, F, 0) for g in lines]
    requirements = [plane_value_poly(F, x) for x in D]
    requirements += _beneath_requirements(P, k, D)
    requirements += _pierce_requirements(D, crossings, F.a)
    delta = choose_eps(requirements, label="cupola bottom")
    D = [x.at(delta) for x in D]
    crossings = [x.at(delta) for x in crossings]

    A = [PolyPoint.lift(D[i]) + PolyPoint.lift(D[i] - D[(i + 2) % 3]) * EPS for i in range(3)]
    requirements = _beneath_requirements(P, k, A) + _pierce_requirements(A, crossings, F.a)
    stretch = choose_eps(requirements, label="prolongation")
    A = [x.at(stretch) for x in A]

    host = P.facets[k]
    P1 = glue_beyond(P, host, A)
    bottom = tuple(range(P.n, P.n + 3))
    k1 = P1.facet_index(bottom)

    B = [_rising(l, F, delta) for l in edges]
    crossings = [_rising(g, F, delta) for g in lines]
    requirements = [plane_value_poly(P1.facet_planes[k1], x) for x in B]
    requirements += _beneath_requirements(P1, k1, B)
    requirements += _pierce_requirements(B, crossings, F.a)
    lift = choose_eps(requirements, label="skylight")
    B = [x.at(lift) for x in B]
    logger.debug("cupola frame: delta = %s, prolongation = %s, skylight lift = %s", delta, stretch, lift)
    return P1, bottom, SchonhardtFrame(*A, *B)


def build_cupola(P, facet, V, m, lines=()):
    """
    Glue an m-cupola with visibility cone V beyond the facet.

    Returns the new polytope and its CupolaRecord. The host keeps its vertex
    indices; the cupola adds A1..A3, B1..B3 and then the chains (1,2), (2,3),
    (3,1) in order. Every line in ``lines`` pierces both the bottom triangle
    and the skylight.
    """
    lines = list(lines)
    k = _check_preconditions(P, facet, V, lines)
    host = P.facets[k]

    for labelled in (V, V.reversed()):
        P1, bottom, frame = _frame_stages(P, k, labelled, lines)
        if not frame.is_valid():
            logger.debug("cone labelling %s gives no Schoenhardt frame", labelled.planes)
            continue
        cone = visibility_cone(frame)
        if cone.same_cone(V):
            break
        logger.debug("cone labelling %s changes the visibility cone", labelled.planes)
    else:
        raise NotSchonhardt(f"no labelling of the cone yields a Schoenhardt frame over facet {host}")

    P2 = glue_beyond(P1, bottom, frame.points[3:])
    skylight = tuple(range(P1.n, P1.n + 3))

    current = P2
    chains = {}
    for i, j in CHAIN_KEYS:
        a, b = skylight[i - 1], bottom[j - 1]
        q0, qend = bottom[i - 1], skylight[j - 1]
        G = plane_through(frame.B(i), frame.A(i + 1), frame.B(i + 2))
        start = current.n
        current = attach_chain(current, a, b, q0, qend, G, m)
        chains[(i, j)] = (q0, *range(start, start + m), qend)

    record = CupolaRecord(
        frame=frame,
        m=m,
        bottom=bottom,
        skylight=skylight,
        chains=chains,
        cone=cone,
        host=tuple(host),
    )
    logger.info("cupola over facet %s: m = %d, %d vertices in total", host, m, current.n)
    return current, record


def audit_cupola(P, rec):
    """Problems with the cupola conditions inside the host polytope, empty when it is sound"""
    problems = []
    points = tuple(P.vertices[rec.frame_index(p)] for p in range(6))
    if points != rec.frame.points:
        problems.append("frame coordinates differ from the host vertices")
    if not rec.frame.is_valid():
        problems.append("frame is not in Schoenhardt position")
        return problems
    if not visibility_cone(rec.frame).same_cone(rec.cone):
        problems.append("recorded cone is not the frame's visibility cone")

    def has_facet(indices):
        try:
            P.facet_index(indices)
            return True
        except UnknownFace:
            return False

    if not has_facet(rec.skylight):
        problems.append(f"skylight {rec.skylight} is not a facet")
    for i, j in CHAIN_KEYS:
        chain = rec.chains[(i, j)]
        if len(chain) != rec.m + 2 or chain[0] != rec.A(i) or chain[-1] != rec.B(j):
            problems.append(f"chain {(i, j)} does not run from A{i} to B{j} with {rec.m} inner points")
            continue
        for u, v in zip(chain, chain[1:]):
            for apex in (rec.B(i), rec.A(j)):
                if not has_facet((apex, u, v)):
                    problems.append(f"({apex}, {u}, {v}) is not a facet")
        G = plane_through(rec.frame.B(i), rec.frame.A(i + 1), rec.frame.B(i + 2))
        far = G.side(rec.frame.B(i + 1))
        for q in chain[1:-1]:
            if G.side(P.vertices[q]) != -far:
                problems.append(f"chain point {q} is not beyond the plane B{i} A{j} B{i + 2}")
    return problems


def triangulate_cupola(P, rec, v, host=None):
    """
    Triangulate conv(v, host facet, cupola) with at most 3m + 16 tetrahedra:
    the chain tetrahedra, then v coned to the seven non-bottom faces of the
    Schoenhardt body and to the side faces of conv(host facet, bottom).
    """
    host = tuple(host) if host is not None else rec.host
    x = P.vertices[v]
    if not rec.cone.contains(x):
        raise ApexNotInCone(f"vertex {v} is not inside the visibility cone")

    tetras = []
    for i, j in CHAIN_KEYS:
        chain = rec.chains[(i, j)]
        for u, w in zip(chain, chain[1:]):
            tetras.append(tetra(rec.B(i), rec.A(j), u, w))

    for face in BODY_FACETS[1:]:
        tetras.append(tetra(v, *(rec.frame_index(p) for p in face)))

    labels = [v] + list(host) + list(rec.bottom)
    K = hull3([P.vertices[i] for i in labels])
    bottom = face_key(rec.bottom)
    for cycle in K.facets:
        mapped = [labels[K.origin[j]] for j in cycle]
        if v in mapped or face_key(mapped) == bottom:
            continue
        for i in range(1, len(mapped) - 1):
            tetras.append(tetra(v, mapped[0], mapped[i], mapped[i + 1]))

    logger.debug("cupola triangulation from vertex %d: %d tetrahedra", v, len(tetras))
    return tetras


def cupola_region(P, rec, v, host=None):
    """
    The convex hull of v, the host facet and the cupola, with the map from
    host indices to its own vertex indices.
    """
    host = tuple(host) if host is not None else rec.host
    labels = sorted({v, *host, *rec.vertices()})
    region = hull3([P.vertices[i] for i in labels])
    index = {labels[old]: new for new, old in enumerate(region.origin)}
    return region, index
