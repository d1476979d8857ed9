"""
Convex 3-polytopes with exact facet data.

``Polytope3`` is the immutable value every other app passes around. ``hull3``
builds one from a point cloud; ``PolytopeBuilder`` grows one stage by stage
when the facet structure is known in advance and new points depend on a
small parameter epsilon.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction

import networkx as nx

from .kernel import (
    PolyPoint,
    Point3,
    Sign,
    centroid,
    choose_eps,
    det3,
    orient4,
    plane_through,
    poly_volume6,
)
from .exceptions import ConvexityViolation, DegenerateInput, DegenerateSpan, UnknownFace

logger = logging.getLogger(__name__)


def face_key(indices):
    return tuple(sorted(indices))


def _rotate_to_min(cycle):
    start = cycle.index(min(cycle))
    return tuple(cycle[start:] + cycle[:start])


@dataclass(frozen=True)
class Polytope3:
    vertices: tuple
    facets: tuple
    facet_planes: tuple = field(default=None)
    origin: tuple = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'vertices', tuple(self.vertices))
        object.__setattr__(self, 'facets', tuple(tuple(f) for f in self.facets))
        if self.facet_planes is None:
            planes = tuple(
                plane_through(*(self.vertices[i] for i in cycle[:3])) for cycle in self.facets
            )
            object.__setattr__(self, 'facet_planes', planes)
        object.__setattr__(self, '_facet_lookup', {face_key(f): k for k, f in enumerate(self.facets)})

    @property
    def n(self):
        return len(self.vertices)

    def edges(self):
        result = set()
        for cycle in self.facets:
            for i, u in enumerate(cycle):
                v = cycle[(i + 1) % len(cycle)]
                result.add((min(u, v), max(u, v)))
        return sorted(result)

    def facet_index(self, indices):
        try:
            return self._facet_lookup[face_key(indices)]
        except KeyError:
            raise UnknownFace(f"{face_key(indices)} is not a facet") from None

    def facets_containing(self, indices):
        """Facet positions whose vertex set contains the face; checks that it is a face"""
        wanted = set(indices)
        if not wanted:
            raise UnknownFace("empty face")
        containing = [k for k, f in enumerate(self.facets) if wanted <= set(f)]
        if not containing:
            raise UnknownFace(f"{face_key(indices)} lies in no facet")
        common = set(self.facets[containing[0]])
        for k in containing[1:]:
            common &= set(self.facets[k])
        if common != wanted:
            raise UnknownFace(f"{face_key(indices)} is not a face")
        return containing

    def contains(self, x, strict=False):
        for plane in self.facet_planes:
            value = plane.value(x)
            if value > 0 or (strict and value == 0):
                return False
        return True

    def interior_point(self):
        return centroid(self.vertices)

    def volume(self):
        return volume(self)

    def skeleton(self):
        return skeleton(self)

    def is_beyond(self, face, x):
        return is_beyond(self, face, x)

    def audit(self, full=True):
        """
        Return a list of human readable problems, empty when the polytope is valid.

        With full=False only the Euler relation, planarity and local convexity
        at edges are checked; the full audit also tests every vertex against
        every non-incident facet.
        """
        problems = []
        v, e, f = self.n, len(self.edges()), len(self.facets)
        if v - e + f != 2:
            problems.append(f"Euler relation fails: {v} - {e} + {f} != 2")

        used = set()
        for k, cycle in enumerate(self.facets):
            used.update(cycle)
            plane = self.facet_planes[k]
            if len(cycle) < 3 or len(set(cycle)) != len(cycle):
                problems.append(f"facet {cycle} is not a simple cycle")
                continue
            pts = [self.vertices[i] for i in cycle]
            if any(plane.value(p) != 0 for p in pts):
                problems.append(f"facet {cycle} is not planar")
            for i in range(len(pts)):
                turn = (pts[(i + 1) % len(pts)] - pts[i]).cross(pts[(i + 2) % len(pts)] - pts[(i + 1) % len(pts)])
                if turn.dot(plane.a) <= 0:
                    problems.append(f"facet {cycle} is not strictly convex counterclockwise")
                    break
        if used != set(range(self.n)):
            problems.append(f"vertices {sorted(set(range(self.n)) - used)} lie on no facet")

        if full:
            for k, cycle in enumerate(self.facets):
                members = set(cycle)
                plane = self.facet_planes[k]
                for i, p in enumerate(self.vertices):
                    if i not in members and plane.value(p) >= 0:
                        problems.append(f"vertex {i} is not strictly below facet {cycle}")
        else:
            problems.extend(_edge_convexity_problems(self))
        return problems


def _edge_convexity_problems(P):
    problems = []
    owner = {}
    for k, cycle in enumerate(P.facets):
        for i, u in enumerate(cycle):
            owner[(u, cycle[(i + 1) % len(cycle)])] = k
    for (u, v), k in owner.items():
        other = owner.get((v, u))
        if other is None:
            problems.append(f"edge {(u, v)} has no opposite facet")
            continue
        third = next(w for w in P.facets[other] if w not in (u, v))
        if P.facet_planes[k].value(P.vertices[third]) >= 0:
            problems.append(f"edge {(u, v)} is not strictly convex")
    return problems


def hull3(points):
    """Exact incremental convex hull with coplanar triangles merged into polygons"""
    points = [p if isinstance(p, Point3) else Point3(*p) for p in points]
    seed = _initial_simplex(points)
    inside = centroid([points[i] for i in seed])

    faces = set()
    for omit in range(4):
        tri = [seed[j] for j in range(4) if j != omit]
        if orient4(*(points[i] for i in tri), inside) > 0:
            tri = [tri[0], tri[2], tri[1]]
        faces.add(tuple(tri))

    for index, p in enumerate(points):
        if index in seed:
            continue
        visible = [f for f in faces if orient4(points[f[0]], points[f[1]], points[f[2]], p) > 0]
        if not visible:
            continue
        directed = {(f[i], f[(i + 1) % 3]) for f in visible for i in range(3)}
        horizon = [(u, v) for (u, v) in directed if (v, u) not in directed]
        faces.difference_update(visible)
        for u, v in horizon:
            faces.add((u, v, index))

    return _merge_coplanar(points, faces)


def _initial_simplex(points):
    if not points:
        raise DegenerateSpan("no points")
    a = 0
    b = next((i for i, p in enumerate(points) if p != points[a]), None)
    if b is None:
        raise DegenerateSpan("all points coincide")
    c = next(
        (i for i, p in enumerate(points) if not (points[b] - points[a]).cross(p - points[a]).is_zero()),
        None,
    )
    if c is None:
        raise DegenerateSpan("points are collinear")
    d = next((i for i, p in enumerate(points) if orient4(points[a], points[b], points[c], p) != 0), None)
    if d is None:
        raise DegenerateSpan("points are coplanar")
    return (a, b, c, d)


def _merge_coplanar(points, faces):
    groups = {}
    for f in faces:
        plane = plane_through(*(points[i] for i in f))
        groups.setdefault(plane, []).append(f)

    cycles = []
    for group in groups.values():
        directed = {(f[i], f[(i + 1) % 3]) for f in group for i in range(3)}
        successor = {u: v for (u, v) in directed if (v, u) not in directed}
        start = min(successor)
        cycle = [start]
        while successor[cycle[-1]] != start:
            cycle.append(successor[cycle[-1]])
        cycles.append(_drop_collinear(points, cycle))

    used = sorted({i for cycle in cycles for i in cycle})
    renumber = {old: new for new, old in enumerate(used)}
    facets = sorted(_rotate_to_min([renumber[i] for i in cycle]) for cycle in cycles)
    return Polytope3(
        vertices=tuple(points[i] for i in used),
        facets=tuple(facets),
        origin=tuple(used),
    )


def _drop_collinear(points, cycle):
    changed = True
    while changed and len(cycle) > 3:
        changed = False
        for i in range(len(cycle)):
            u, v, w = cycle[i - 1], cycle[i], cycle[(i + 1) % len(cycle)]
            if (points[v] - points[u]).cross(points[w] - points[v]).is_zero():
                cycle = cycle[:i] + cycle[i + 1:]
                changed = True
                break
    return cycle


def volume(P):
    v0 = P.vertices[0]
    total = Fraction(0)
    for cycle in P.facets:
        f0 = P.vertices[cycle[0]] - v0
        for i in range(1, len(cycle) - 1):
            total += det3(f0, P.vertices[cycle[i]] - v0, P.vertices[cycle[i + 1]] - v0)
    return total / 6


def is_beyond(P, face, x):
    containing = set(P.facets_containing(face))
    for k, plane in enumerate(P.facet_planes):
        value = plane.value(x)
        if k in containing:
            if value <= 0:
                return False
        elif value >= 0:
            return False
    return True


def attach_check(P, Q, facet_p, facet_q):
    """Can P be attached to Q along the given facets: each lies beyond the other's facet"""
    P.facet_index(facet_p)
    Q.facet_index(facet_q)
    shared = set(P.vertices) & set(Q.vertices)
    for v in P.vertices:
        if v not in shared and not is_beyond(Q, facet_q, v):
            return False
    for v in Q.vertices:
        if v not in shared and not is_beyond(P, facet_p, v):
            return False
    return True


def skeleton(P):
    graph = nx.Graph()
    graph.add_nodes_from(range(P.n))
    graph.add_edges_from(P.edges())
    return graph


class PolytopeBuilder:
    """
    Mutable facet complex used during staged constructions.

    Each ``commit`` places some points whose coordinates are polynomials in
    epsilon, swaps facets, derives the local convexity requirements around the
    touched region, picks epsilon with ``choose_eps`` and then re-checks the
    result exactly.
    """

    def __init__(self, vertices=(), facets=()):
        self.vertices = list(vertices)
        self.facets = {}
        self.incident = {}
        for cycle in facets:
            self._add_facet(tuple(cycle))

    @classmethod
    def from_polytope(cls, P):
        return cls(P.vertices, P.facets)

    def _add_facet(self, cycle):
        key = face_key(cycle)
        self.facets[key] = cycle
        for v in cycle:
            self.incident.setdefault(v, set()).add(key)

    def _remove_facet(self, key):
        cycle = self.facets.pop(key)
        for v in cycle:
            self.incident[v].discard(key)

    def reserve(self, count=1):
        """Indices for points that will be placed by the next commit"""
        start = len(self.vertices)
        self.vertices.extend([None] * count)
        return list(range(start, start + count))

    def facet(self, indices):
        try:
            return self.facets[face_key(indices)]
        except KeyError:
            raise UnknownFace(f"{face_key(indices)} is not a facet") from None

    def facets_at(self, vertex):
        return [self.facets[k] for k in sorted(self.incident.get(vertex, ()))]

    def plane(self, indices):
        cycle = self.facet(indices)
        return plane_through(*(self.vertices[i] for i in cycle[:3]))

    def oriented(self, cycle, reference):
        """Orient a cycle so that the given point lies on its negative side"""
        cycle = tuple(cycle)
        if orient4(*(self.vertices[i] for i in cycle[:3]), reference) > 0:
            return (cycle[0],) + tuple(reversed(cycle[1:]))
        return cycle

    def horizon(self, removed):
        """Directed boundary edges of the union of the given facets"""
        directed = []
        for key in removed:
            cycle = self.facet(key)
            directed.extend((cycle[i], cycle[(i + 1) % len(cycle)]) for i in range(len(cycle)))
        edges = set(directed)
        return [(u, v) for (u, v) in directed if (v, u) not in edges]

    def cone_requirements(self, cycles, placed):
        """Local convexity requirements (positive polynomials) for facets near the given cycles"""
        position = lambda i: placed[i] if i in placed else PolyPoint.lift(self.vertices[i])
        checked = set()
        for cycle in cycles:
            for v in cycle:
                checked.update(self.incident.get(v, ()))
        for v in placed:
            checked.update(self.incident.get(v, ()))

        requirements = []
        for key in sorted(checked):
            cycle = self.facets[key]
            a, b, c = (position(i) for i in cycle[:3])
            for w in cycle[3:]:
                if not poly_volume6(a, b, c, position(w)).is_zero():
                    raise ConvexityViolation(f"facet {cycle} would not stay planar")
            members = set(cycle)
            star = set()
            for v in cycle:
                for other in self.incident[v]:
                    star.update(self.facets[other])
            for w in sorted(star - members):
                requirements.append(-poly_volume6(a, b, c, position(w)))
            n = len(cycle)
            normal = (b - a).cross(c - a)
            for i in range(n):
                u, v, w = (position(cycle[(i + j) % n]) for j in range(3))
                requirements.append((v - u).cross(w - v).dot(normal))
        return requirements

    def commit(self, placed, removed=(), added=(), extra=(), label="eps"):
        """
        Apply one construction step.

        ``placed`` maps vertex indices (reserved or existing) to PolyPoints,
        ``removed`` lists facets by vertex set, ``added`` lists new cycles
        ordered counterclockwise from outside. ``extra`` holds further
        requirement polynomials that must be positive. Returns the epsilon used.
        """
        placed = {i: PolyPoint.lift(p) for i, p in placed.items()}
        for key in removed:
            self._remove_facet(face_key(key))
        for cycle in added:
            self._add_facet(tuple(cycle))

        requirements = self.cone_requirements(added, placed) + list(extra)
        eps = choose_eps(requirements, label=label) if requirements else Fraction(1)
        for i, p in placed.items():
            self.vertices[i] = p.at(eps)
        self.check_local(added, placed)
        logger.info("%s = %s (%d requirements, %d vertices)", label, eps, len(requirements), len(self.vertices))
        return eps

    def check_local(self, cycles=(), placed=()):
        keys = set()
        for cycle in cycles:
            for v in cycle:
                keys.update(self.incident.get(v, ()))
        for v in placed:
            keys.update(self.incident.get(v, ()))
        for key in sorted(keys):
            cycle = self.facets[key]
            pts = [self.vertices[i] for i in cycle]
            if any(p is None for p in pts):
                raise ConvexityViolation(f"facet {cycle} uses an unplaced vertex")
            plane = plane_through(*pts[:3])
            if any(plane.value(p) != 0 for p in pts[3:]):
                raise ConvexityViolation(f"facet {cycle} is not planar")
            star = set()
            for v in cycle:
                for other in self.incident[v]:
                    star.update(self.facets[other])
            for w in star - set(cycle):
                if plane.side(self.vertices[w]) != Sign.NEG:
                    raise ConvexityViolation(f"vertex {w} is not below facet {cycle}")

    def to_polytope(self):
        if any(p is None for p in self.vertices):
            raise DegenerateInput("builder still has unplaced vertices")
        facets = sorted(_rotate_to_min(list(cycle)) for cycle in self.facets.values())
        return Polytope3(vertices=tuple(self.vertices), facets=tuple(facets))


def glue_beyond(P, facet, points):
    """
    conv(P and points) for points that all lie beyond the given facet and
    beneath every other one. P keeps its vertex indices, the new points follow
    in the given order.
    """
    points = [p if isinstance(p, Point3) else Point3(*p) for p in points]
    for x in points:
        if not is_beyond(P, facet, x):
            raise ConvexityViolation(f"{x} is not beyond facet {face_key(facet)} only")
    k = P.facet_index(facet)
    cycle = P.facets[k]
    local_points = [P.vertices[i] for i in cycle] + points
    local = hull3(local_points)
    if local.n != len(local_points):
        raise ConvexityViolation("a glued point is not a vertex of the new hull")

    labels = list(cycle) + list(range(P.n, P.n + len(points)))
    bottom = face_key(cycle)
    facets = [f for j, f in enumerate(P.facets) if j != k]
    for local_cycle in local.facets:
        mapped = [labels[local.origin[j]] for j in local_cycle]
        if face_key(mapped) != bottom:
            facets.append(_rotate_to_min(mapped))
    return Polytope3(vertices=P.vertices + tuple(points), facets=tuple(sorted(facets)))
