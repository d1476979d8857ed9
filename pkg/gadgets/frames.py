"""
Schoenhardt frames, their visibility cones and the skylight predicate.

Vertex order inside a frame is always (A1, A2, A3, B1, B2, B3). The bottom
triangle is (A1, A2, A3), the skylight is (B1, B2, B3), and the three reflex
diagonals are (B_i, A_{i+1}).
"""
import logging
from dataclasses import dataclass
from itertools import combinations, product

from geometry.exceptions import DegenerateInput, DegenerateSpan, ParallelElements
from geometry.kernel import (
    Point3,
    Sign,
    line_plane_point,
    orient4,
    plane_through,
    planes_line,
    planes_point,
    segment_meets_tetra,
    volume6,
)
from geometry.polytope import hull3, is_beyond

from .exceptions import NotSchonhardt

logger = logging.getLogger(__name__)

A1, A2, A3, B1, B2, B3 = range(6)


def a_index(i):
    """Position of A_i for a cyclic 1-based i"""
    return (i - 1) % 3


def b_index(i):
    return 3 + (i - 1) % 3


# Facets of the hull octahedron: bottom, skylight and the edges (A_i, B_{i+1}).
HULL_FACETS = frozenset(
    [frozenset((A1, A2, A3)), frozenset((B1, B2, B3))]
    + [frozenset((a_index(i), a_index(i + 1), b_index(i + 1))) for i in (1, 2, 3)]
    + [frozenset((a_index(i), b_index(i + 1), b_index(i))) for i in (1, 2, 3)]
)

# Boundary of the non-convex Schoenhardt body; the band uses the reflex diagonals.
BODY_FACETS = (
    ((A1, A2, A3), (B1, B2, B3))
    + tuple((a_index(i), b_index(i), a_index(i + 1)) for i in (1, 2, 3))
    + tuple((b_index(i), a_index(i + 1), b_index(i + 1)) for i in (1, 2, 3))
)

DIAGONALS = tuple((b_index(i), a_index(i + 1)) for i in (1, 2, 3))


@dataclass(frozen=True)
class SchonhardtFrame:
    A1: Point3
    A2: Point3
    A3: Point3
    B1: Point3
    B2: Point3
    B3: Point3

    @classmethod
    def of(cls, points):
        points = [p if isinstance(p, Point3) else Point3(*p) for p in points]
        if len(points) != 6:
            raise NotSchonhardt(f"a frame has 6 points, got {len(points)}")
        return cls(*points)

    @property
    def points(self):
        return (self.A1, self.A2, self.A3, self.B1, self.B2, self.B3)

    def A(self, i):
        return self.points[a_index(i)]

    def B(self, i):
        return self.points[b_index(i)]

    def is_valid(self):
        return is_schonhardt_position(self.points)

    def require_valid(self):
        if not self.is_valid():
            raise NotSchonhardt(f"{self} is not in Schoenhardt position")
        return self

    def hull(self):
        return hull3(self.points)

    def diagonals(self):
        return tuple((self.points[i], self.points[j]) for i, j in DIAGONALS)

    def as_dict(self):
        return {name: [str(c) for c in getattr(self, name)] for name in ('A1', 'A2', 'A3', 'B1', 'B2', 'B3')}


CANONICAL_FRAME = SchonhardtFrame(
    Point3(4, 0, 0), Point3(0, 4, 0), Point3(0, 0, 4),
    Point3(6, 1, 3), Point3(3, 6, 1), Point3(1, 3, 6),
)


def is_schonhardt_position(points):
    """
    True when the labelled points form a twisted prism with the reflex
    diagonals (B_i, A_{i+1}).

    All fifteen simplices must be non-degenerate, the hull must be the
    octahedron with edges (A_i, B_{i+1}), and the three simplices spanned by
    two bottom and two top vertices across the band must carry the sign the
    remaining orientations force.
    """
    points = [p if isinstance(p, Point3) else Point3(*p) for p in points]
    if len(points) != 6:
        return False
    if any(volume6(*(points[i] for i in quad)) == 0 for quad in combinations(range(6), 4)):
        return False
    try:
        hull = hull3(points)
    except DegenerateSpan:
        return False
    if hull.n != 6:
        return False
    facets = frozenset(frozenset(hull.origin[i] for i in cycle) for cycle in hull.facets)
    if facets != HULL_FACETS:
        return False

    base = orient4(points[A1], points[A2], points[A3], points[B1])
    forced = [
        orient4(points[a_index(i)], points[a_index(i + 1)], points[b_index(i + 1)], points[b_index(i + 2)])
        for i in (1, 2, 3)
    ]
    return all(sign == -base for sign in forced)


def frame_search(bound=6):
    """
    Enumerate integer frames over the bottom (4,0,0), (0,4,0), (0,0,4) whose
    top is the orbit of B1 under the coordinate rotation (x, y, z) -> (z, x, y).

    Returns the certified frames ordered by the size of B1.
    """
    bottom = (Point3(4, 0, 0), Point3(0, 4, 0), Point3(0, 0, 4))
    found = []
    for x, y, z in product(range(bound + 1), repeat=3):
        b1 = Point3(x, y, z)
        top = (b1, Point3(z, x, y), Point3(y, z, x))
        if is_schonhardt_position(bottom + top):
            found.append(SchonhardtFrame(*bottom, *top))
    found.sort(key=lambda f: (max(abs(c) for c in f.B1), tuple(f.B1)))
    logger.debug("frame search up to %d found %d frames", bound, len(found))
    return found


@dataclass(frozen=True)
class Cone3:
    """
    Open triangular cone, the points strictly on the positive side of three
    planes. For a frame the planes are ordered (B1 B2 A2), (B2 B3 A3), (B3 B1 A1);
    edge line l_i is the one through B_i.
    """
    planes: tuple

    def __post_init__(self):
        planes = tuple(self.planes)
        if len(planes) != 3:
            raise DegenerateInput(f"a triangular cone needs 3 planes, got {len(planes)}")
        object.__setattr__(self, 'planes', planes)
        planes_point(*planes)

    @property
    def apex(self):
        return planes_point(*self.planes)

    def contains(self, x):
        return all(plane.value(x) > 0 for plane in self.planes)

    def edge_lines(self):
        p1, p2, p3 = self.planes
        return (planes_line(p3, p1), planes_line(p1, p2), planes_line(p2, p3))

    def rays(self):
        """Directions of the extreme rays, leaving the apex into the cone"""
        p1, p2, p3 = self.planes
        result = []
        for (g, h), opposite in (((p3, p1), p2), ((p1, p2), p3), ((p2, p3), p1)):
            d = g.a.cross(h.a)
            if opposite.a.dot(d) < 0:
                d = -d
            result.append(d)
        return tuple(result)

    def reversed(self):
        """Same cone with the opposite cyclic labelling of its edges"""
        p1, p2, p3 = self.planes
        return Cone3((p1, p3, p2))

    def section(self, plane):
        return tuple(line_plane_point(line, plane) for line in self.edge_lines())

    def same_cone(self, other):
        return frozenset(self.planes) == frozenset(other.planes)

    def meets_facet_interior(self, P, facet):
        """Is the cone's intersection with the facet a triangle inside its relative interior"""
        k = P.facet_index(facet)
        plane = P.facet_planes[k]
        side = Sign.of(plane.value(self.apex))
        if side == Sign.ZERO:
            return False
        if any(Sign.of(plane.a.dot(d)) != -side for d in self.rays()):
            return False
        try:
            corners = self.section(plane)
        except ParallelElements:
            return False
        others = [q for j, q in enumerate(P.facet_planes) if j != k]
        return all(q.value(c) < 0 for c in corners for q in others)

    def as_dict(self):
        return {'planes': [[str(c) for c in (*p.a, p.b)] for p in self.planes]}


def visibility_cone(frame):
    """The cone bounded by the planes (B_i, B_{i+1}, A_{i+1}), opening towards the skylight"""
    frame.require_valid()
    planes = []
    for i in (1, 2, 3):
        plane = plane_through(frame.B(i), frame.B(i + 1), frame.A(i + 1))
        if plane.value(frame.B(i + 2)) < 0:
            plane = plane.flipped()
        planes.append(plane)
    return Cone3(tuple(planes))


def sees_skylight(frame, x):
    """conv(x, B1, B2, B3) misses the relative interior of every reflex diagonal"""
    frame.require_valid()
    tet = (x, frame.B1, frame.B2, frame.B3)
    if volume6(*tet) == 0:
        # x lies in the skylight plane; the diagonals only touch it at B_i
        return True
    return not any(segment_meets_tetra(diagonal, tet) for diagonal in frame.diagonals())


def beyond_diagonal_edge(frame, x):
    """
    Sufficient condition for not seeing the skylight: x lies beyond one hull
    edge (A_i, B_{i+1}) and on the far side of the plane (B_i, A_{i+1}, B_{i+2})
    from B_{i+1}.
    """
    frame.require_valid()
    hull = frame.hull()
    for i in (1, 2, 3):
        if not is_beyond(hull, (a_index(i), b_index(i + 1)), x):
            continue
        plane = plane_through(frame.B(i), frame.A(i + 1), frame.B(i + 2))
        if plane.side(x) * plane.side(frame.B(i + 1)) < 0:
            return True
    return False
