"""
Triangulations of convex 3-polytopes: exact validation, exhaustive minimal
search for small inputs, the coning triangulation and the size bounds.
"""
import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb

from .conf import setting
from .exceptions import BudgetExceeded, ConvexityViolation, NoTriangulation, TooLarge
from .kernel import Point3, centroid, det3, volume6

logger = logging.getLogger(__name__)

BAD_PAIR = 'BadPair'
VOLUME_MISMATCH = 'VolumeMismatch'
TETRA_OUTSIDE = 'TetraOutside'
DEGENERATE_TETRA = 'DegenerateTetra'


def tetra(*indices):
    if len(indices) == 1:
        indices = tuple(indices[0])
    if len(set(indices)) != 4:
        raise ValueError(f"a tetrahedron needs 4 distinct vertices, got {indices}")
    return tuple(sorted(indices))


def normalize_edge(i, j):
    return (min(i, j), max(i, j))


@dataclass(frozen=True)
class Triangulation:
    polytope: object
    tetras: frozenset

    def __post_init__(self):
        object.__setattr__(self, 'tetras', frozenset(tetra(t) for t in self.tetras))

    def __len__(self):
        return len(self.tetras)

    def __iter__(self):
        return iter(sorted(self.tetras))

    def edges(self):
        return {normalize_edge(u, v) for t in self.tetras for u, v in combinations(t, 2)}

    def containing(self, triangle):
        """Tetrahedra having the given triangle as a face"""
        tri = set(triangle)
        return [t for t in sorted(self.tetras) if tri <= set(t)]


@dataclass
class ValidationReport:
    failures: list = field(default_factory=list)
    tetra_count: int = 0
    pair_checks: int = 0

    @property
    def verdict(self):
        return not self.failures

    def add(self, kind, indices):
        self.failures.append((kind, tuple(indices)))

    def kinds(self):
        return {kind for kind, _ in self.failures}

    def as_dict(self):
        return {
            'verdict': self.verdict,
            'tetra_count': self.tetra_count,
            'pair_checks': self.pair_checks,
            'failures': [{'kind': kind, 'indices': list(indices)} for kind, indices in self.failures],
        }


# ----------------------------------------------------------------------
# Proper intersection of two tetrahedra given by vertex indices
# ----------------------------------------------------------------------

def _open_halfplane_2d(vectors, edge):
    """Do the projections of the vectors perpendicular to edge lie in an open half-plane"""
    e2 = edge.norm2()

    def cross(u, v):
        return det3(edge, u, v)

    def dot(u, v):
        return u.dot(v) * e2 - u.dot(edge) * v.dot(edge)

    for u in vectors:
        if all(v is u or cross(u, v) > 0 or (cross(u, v) == 0 and dot(u, v) > 0) for v in vectors):
            return True
    return False


def _open_halfspace_3d(vectors):
    """Is there n with n.v > 0 for every vector"""
    candidate = Point3(0, 0, 0)
    for u, v in combinations(vectors, 2):
        normal = u.cross(v)
        if normal.is_zero():
            continue
        for ray in (normal, -normal):
            if all(ray.dot(w) >= 0 for w in vectors):
                candidate = candidate + ray
    return not candidate.is_zero() and all(candidate.dot(w) > 0 for w in vectors)


def _strictly_separated(first, second):
    axes = []
    for pts in (first, second):
        for omit in range(4):
            a, b, c = (pts[j] for j in range(4) if j != omit)
            axes.append((b - a).cross(c - a))
    edges1 = [q - p for p, q in combinations(first, 2)]
    edges2 = [q - p for p, q in combinations(second, 2)]
    axes.extend(e1.cross(e2) for e1 in edges1 for e2 in edges2)
    for axis in axes:
        if axis.is_zero():
            continue
        s1 = [axis.dot(p) for p in first]
        s2 = [axis.dot(p) for p in second]
        if max(s1) < min(s2) or max(s2) < min(s1):
            return True
    return False


def proper_pair(vertices, t1, t2):
    """Closed intersection of two tetrahedra equals the hull of their shared vertices"""
    shared = sorted(set(t1) & set(t2))
    only1 = [i for i in t1 if i not in shared]
    only2 = [i for i in t2 if i not in shared]
    k = len(shared)
    if k == 4:
        return False
    if k == 3:
        a, b, c = (vertices[i] for i in shared)
        s1 = volume6(a, b, c, vertices[only1[0]])
        s2 = volume6(a, b, c, vertices[only2[0]])
        return s1 * s2 < 0
    if k == 2:
        u, v = (vertices[i] for i in shared)
        vectors = [vertices[i] - u for i in only1] + [u - vertices[i] for i in only2]
        return _open_halfplane_2d(vectors, v - u)
    if k == 1:
        o = vertices[shared[0]]
        vectors = [vertices[i] - o for i in only1] + [o - vertices[i] for i in only2]
        return _open_halfspace_3d(vectors)
    return _strictly_separated([vertices[i] for i in t1], [vertices[i] for i in t2])


def _bbox(vertices, t):
    pts = [vertices[i] for i in t]
    return (
        tuple(min(p[axis] for p in pts) for axis in range(3)),
        tuple(max(p[axis] for p in pts) for axis in range(3)),
    )


def validate(P, T, workers=None):
    """Check non-degeneracy, pairwise proper intersection and the volume identity"""
    vertices = [tuple(p) for p in P.vertices]
    points = P.vertices
    report = ValidationReport(tetra_count=len(T.tetras))

    usable = []
    total = Fraction(0)
    for t in sorted(T.tetras):
        if any(i < 0 or i >= P.n for i in t):
            report.add(TETRA_OUTSIDE, t)
            continue
        vol = volume6(*(points[i] for i in t))
        if vol == 0:
            report.add(DEGENERATE_TETRA, t)
            continue
        if not P.contains(centroid([points[i] for i in t])):
            report.add(TETRA_OUTSIDE, t)
            continue
        total += abs(vol)
        usable.append(t)

    boxes = {t: _bbox(vertices, t) for t in usable}
    order = sorted(usable, key=lambda t: boxes[t][0][0])
    candidates = []
    for i, t1 in enumerate(order):
        lo1, hi1 = boxes[t1]
        for t2 in order[i + 1:]:
            lo2, hi2 = boxes[t2]
            if lo2[0] > hi1[0]:
                break
            if all(lo2[a] <= hi1[a] and lo1[a] <= hi2[a] for a in (1, 2)):
                candidates.append((t1, t2))
    report.pair_checks = len(candidates)

    def check(pair):
        return pair, proper_pair(points, *pair)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(check, candidates))
    else:
        results = [check(pair) for pair in candidates]
    for (t1, t2), ok in results:
        if not ok:
            report.add(BAD_PAIR, t1 + t2)

    if total / 6 != P.volume():
        report.add(VOLUME_MISMATCH, ())
    logger.debug("validated %d tetrahedra, %d pair checks, %d failures",
                 report.tetra_count, report.pair_checks, len(report.failures))
    return report


# ----------------------------------------------------------------------
# Coning and bounds
# ----------------------------------------------------------------------

def cone_triangulation(P, apex):
    if not 0 <= apex < P.n:
        raise ValueError(f"apex {apex} is not a vertex")
    tetras = set()
    for cycle in P.facets:
        if apex in cycle:
            continue
        for i in range(1, len(cycle) - 1):
            tetras.add(tetra(apex, cycle[0], cycle[i], cycle[i + 1]))
    # the apex lies on at least three facets, so at most 2n - 7
    if len(tetras) > 2 * P.n - 7:
        raise ConvexityViolation(f"coning from {apex} gave {len(tetras)} tetrahedra, more than 2n - 7 = {2 * P.n - 7}")
    return Triangulation(P, frozenset(tetras))


def size_bounds(n):
    if n < 4:
        raise ValueError("a 3-polytope has at least 4 vertices")
    return {
        'lower': n - 3,
        'total_upper': comb(n, 2) - 2 * n + 3,
        'minimal_upper': 2 * n - 10 if n > 12 else None,
    }


# ----------------------------------------------------------------------
# Exhaustive minimal search
# ----------------------------------------------------------------------

class _Search:
    def __init__(self, P, forbidden, required, budget):
        self.P = P
        self.points = P.vertices
        self.forbidden = forbidden
        self.required = required
        self.budget = budget
        self.nodes = 0
        self.best = None
        self.lock = threading.Lock()
        self.compat = {}
        self.boundary = set()
        for cycle in P.facets:
            self.boundary.update(combinations(sorted(cycle), 3))
        self.lower = P.n - 3

    def allowed(self, t):
        if any(e in self.forbidden for e in combinations(t, 2)):
            return False
        return volume6(*(self.points[i] for i in t)) != 0

    def compatible(self, t1, t2):
        key = (t1, t2) if t1 < t2 else (t2, t1)
        cached = self.compat.get(key)
        if cached is None:
            cached = proper_pair(self.points, t1, t2)
            self.compat[key] = cached
        return cached

    def open_triangles(self, chosen):
        count = {}
        for t in chosen:
            for tri in combinations(t, 3):
                count[tri] = count.get(tri, 0) + 1
        return sorted(tri for tri, c in count.items() if c == 1 and tri not in self.boundary)

    def record(self, chosen):
        with self.lock:
            if self.best is None or len(chosen) < len(self.best):
                self.best = frozenset(chosen)
                logger.debug("brute_min improved to %d", len(chosen))

    def best_size(self):
        with self.lock:
            return None if self.best is None else len(self.best)

    def tick(self):
        with self.lock:
            self.nodes += 1
            if self.budget is not None and self.nodes > self.budget:
                raise BudgetExceeded(f"search exceeded {self.budget} nodes")

    def done(self):
        size = self.best_size()
        return size is not None and size <= self.lower

    def explore(self, chosen):
        self.tick()
        if self.done():
            return
        frontier = self.open_triangles(chosen)
        if not frontier:
            edges = {e for t in chosen for e in combinations(t, 2)}
            if self.required <= edges:
                self.record(chosen)
            return
        best = self.best_size()
        if best is not None and len(chosen) + 1 >= best:
            return

        tri = frontier[0]
        owner = next(t for t in chosen if set(tri) <= set(t))
        inner = next(i for i in owner if i not in tri)
        a, b, c = (self.points[i] for i in tri)
        side = volume6(a, b, c, self.points[inner])
        for w in range(self.P.n):
            if w in tri or w == inner:
                continue
            if volume6(a, b, c, self.points[w]) * side >= 0:
                continue
            candidate = tetra(*tri, w)
            if candidate in chosen or not self.allowed(candidate):
                continue
            if all(self.compatible(candidate, t) for t in chosen):
                self.explore(chosen | {candidate})


def _generic_interior_point(P):
    base = P.interior_point()
    triples = list(combinations(P.vertices, 3))
    k = 7
    while True:
        shift = Point3(Fraction(1, k), Fraction(1, k * k), Fraction(1, k * k * k))
        x = base + shift
        if P.contains(x, strict=True) and all(volume6(a, b, c, x) != 0 for a, b, c in triples):
            return x
        k += 1


def _strictly_contains(points, t, x):
    corners = [points[i] for i in t]
    orientation = volume6(*corners)
    if orientation == 0:
        return False
    for i in range(4):
        swapped = list(corners)
        swapped[i] = x
        if volume6(*swapped) * orientation <= 0:
            return False
    return True


def brute_min(P, forbidden_edges=(), required_edges=(), budget=None, deterministic=True, max_vertices=None):
    """Smallest triangulation respecting the edge constraints, with a witness"""
    limit = max_vertices if max_vertices is not None else setting('BRUTE_MIN_MAX_VERTICES')
    if P.n > limit:
        raise TooLarge(f"{P.n} vertices exceed the exhaustive search limit of {limit}")

    forbidden = {normalize_edge(*e) for e in forbidden_edges}
    required = {normalize_edge(*e) for e in required_edges}
    search = _Search(P, forbidden, required, budget)

    x = _generic_interior_point(P)
    seeds = [
        t for t in combinations(range(P.n), 4)
        if search.allowed(t) and _strictly_contains(P.vertices, t, x)
    ]
    logger.debug("brute_min over %d vertices with %d seeds", P.n, len(seeds))

    if deterministic:
        for seed in seeds:
            search.explore(frozenset([seed]))
    else:
        workers = setting('BRUTE_MIN_WORKERS')
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for future in [pool.submit(search.explore, frozenset([seed])) for seed in seeds]:
                future.result()

    if search.best is None:
        raise NoTriangulation("no triangulation satisfies the edge constraints")
    logger.info("brute_min: size %d after %d nodes", len(search.best), search.nodes)
    return len(search.best), Triangulation(P, search.best)
