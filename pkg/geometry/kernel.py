"""
Exact rational primitives for 3-space.

Every coordinate is a ``fractions.Fraction``; nothing in here touches floating
point. Points double as vectors. Predicates return ``Sign`` values or booleans
decided by determinant signs only.
"""
import logging
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from math import gcd, lcm

from .conf import setting
from .exceptions import (
    CollinearPoints,
    DegenerateInput,
    DegenerateTetrahedron,
    DegenerateTriangle,
    DuplicateParameters,
    EpsilonSelectionFailed,
    NonPositiveAtZero,
    ParallelElements,
)

logger = logging.getLogger(__name__)

ZERO = Fraction(0)
ONE = Fraction(1)


def rational(value):
    """Coerce ints, strings like '3/4' and Fractions into a reduced Fraction"""
    return value if isinstance(value, Fraction) else Fraction(value)


class Sign(IntEnum):
    NEG = -1
    ZERO = 0
    POS = 1

    @classmethod
    def of(cls, value):
        if value > 0:
            return cls.POS
        if value < 0:
            return cls.NEG
        return cls.ZERO

    def __str__(self):
        return {-1: '-', 0: '0', 1: '+'}[int(self)]


@dataclass(frozen=True, slots=True)
class Point3:
    x: Fraction
    y: Fraction
    z: Fraction

    def __post_init__(self):
        for name in ('x', 'y', 'z'):
            object.__setattr__(self, name, rational(getattr(self, name)))

    @classmethod
    def of(cls, *coords):
        return cls(*coords)

    def __iter__(self):
        yield self.x
        yield self.y
        yield self.z

    def __add__(self, other):
        return Point3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other):
        return Point3(self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self):
        return Point3(-self.x, -self.y, -self.z)

    def __mul__(self, k):
        return Point3(self.x * k, self.y * k, self.z * k)

    __rmul__ = __mul__

    def __truediv__(self, k):
        k = rational(k)
        return Point3(self.x / k, self.y / k, self.z / k)

    def dot(self, other):
        return self.x * other.x + self.y * other.y + self.z * other.z

    def cross(self, other):
        return Point3(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )

    def norm2(self):
        return self.dot(self)

    def is_zero(self):
        return self.x == 0 and self.y == 0 and self.z == 0

    def __repr__(self):
        return f"({self.x}, {self.y}, {self.z})"


ORIGIN = Point3(0, 0, 0)


def centroid(points):
    points = list(points)
    total = ORIGIN
    for p in points:
        total = total + p
    return total / len(points)


def midpoint(p, q):
    return (p + q) / 2


def det3(u, v, w):
    return u.dot(v.cross(w))


def volume6(p1, p2, p3, p4):
    """Signed six-fold volume, the value of the homogeneous 4x4 determinant"""
    return det3(p2 - p1, p3 - p1, p4 - p1)


def orient4(p1, p2, p3, p4):
    return Sign.of(volume6(p1, p2, p3, p4))


# ----------------------------------------------------------------------
# Oriented matroid checks
# ----------------------------------------------------------------------

def gp_terms(a, b, x1, x2, x3, x4):
    """The three sign products of the 3-term Grassmann-Pluecker relation on (a, b | x1..x4)"""
    return (
        orient4(a, b, x1, x2) * orient4(a, b, x3, x4),
        -(orient4(a, b, x1, x3) * orient4(a, b, x2, x4)),
        orient4(a, b, x1, x4) * orient4(a, b, x2, x3),
    )


def gp_signs_consistent(terms):
    """All zero, or both signs present"""
    values = set(terms)
    return values == {0} or (1 in values and -1 in values)


def gp_holds(a, b, x1, x2, x3, x4):
    return gp_signs_consistent(gp_terms(a, b, x1, x2, x3, x4))


@dataclass(frozen=True)
class Circuit:
    """Signed Radon partition of five points, indices are 0-based"""
    signs: tuple
    positive: tuple
    negative: tuple
    coefficients: tuple

    def negated(self):
        return Circuit(
            tuple(Sign(-s) for s in self.signs),
            self.negative,
            self.positive,
            tuple(-c for c in self.coefficients),
        )

    def witness(self, points):
        """Common point of conv(C+) and conv(C-), computed from the exact coefficients"""
        weight = sum(self.coefficients[i] for i in self.positive)
        total = ORIGIN
        for i in self.positive:
            total = total + points[i] * self.coefficients[i]
        return total / weight


def circuit_coefficients(points):
    """Affine dependence of five points: lambda_i = (-1)^i [omit x_i] with 1-based i"""
    coefficients = []
    for i in range(5):
        rest = [p for j, p in enumerate(points) if j != i]
        sign = -1 if (i + 1) % 2 else 1
        coefficients.append(sign * volume6(*rest))
    return tuple(coefficients)


def circuit5(x1, x2, x3, x4, x5):
    points = (x1, x2, x3, x4, x5)
    coefficients = circuit_coefficients(points)
    if all(c == 0 for c in coefficients):
        return None
    signs = tuple(Sign.of(c) for c in coefficients)
    return Circuit(
        signs=signs,
        positive=tuple(i for i, s in enumerate(signs) if s > 0),
        negative=tuple(i for i, s in enumerate(signs) if s < 0),
        coefficients=coefficients,
    )


# ----------------------------------------------------------------------
# Polynomials in epsilon
# ----------------------------------------------------------------------

class UniPoly:
    """Polynomial a_0 + a_1 e + ... + a_d e^d with rational coefficients, kept trimmed"""

    __slots__ = ('coefficients',)

    def __init__(self, coefficients=()):
        coefficients = [rational(c) for c in coefficients]
        while coefficients and coefficients[-1] == 0:
            coefficients.pop()
        self.coefficients = tuple(coefficients)

    @classmethod
    def constant(cls, value):
        return cls((value,))

    @classmethod
    def lift(cls, value):
        return value if isinstance(value, UniPoly) else cls.constant(value)

    @property
    def degree(self):
        return len(self.coefficients) - 1

    def is_zero(self):
        return not self.coefficients

    def coefficient(self, k):
        return self.coefficients[k] if k < len(self.coefficients) else ZERO

    def __call__(self, eps):
        result = ZERO
        for c in reversed(self.coefficients):
            result = result * eps + c
        return result

    def __add__(self, other):
        other = UniPoly.lift(other)
        size = max(len(self.coefficients), len(other.coefficients))
        return UniPoly(self.coefficient(k) + other.coefficient(k) for k in range(size))

    __radd__ = __add__

    def __neg__(self):
        return UniPoly(-c for c in self.coefficients)

    def __sub__(self, other):
        return self + (-UniPoly.lift(other))

    def __rsub__(self, other):
        return UniPoly.lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, UniPoly):
            other = rational(other)
            return UniPoly(c * other for c in self.coefficients)
        if self.is_zero() or other.is_zero():
            return UniPoly()
        product = [ZERO] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            if a == 0:
                continue
            for j, b in enumerate(other.coefficients):
                product[i + j] += a * b
        return UniPoly(product)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, UniPoly) and self.coefficients == other.coefficients

    def __hash__(self):
        return hash(self.coefficients)

    def lowest_order(self):
        """Split p = e^k q with q(0) != 0; returns (k, q)"""
        k = 0
        while k < len(self.coefficients) and self.coefficients[k] == 0:
            k += 1
        return k, UniPoly(self.coefficients[k:])

    def __repr__(self):
        if self.is_zero():
            return "UniPoly(0)"
        terms = [f"{c}e^{k}" if k else str(c) for k, c in enumerate(self.coefficients) if c]
        return "UniPoly(" + " + ".join(terms) + ")"


EPS = UniPoly((0, 1))


def eps_threshold(p):
    """Largest guaranteed-safe epsilon: min(1, a_0 / (2 (|a_1| + ... + |a_d|)))"""
    a0 = p.coefficient(0)
    if a0 <= 0:
        raise NonPositiveAtZero(f"p(0) = {a0} is not positive")
    tail = sum(abs(c) for c in p.coefficients[1:])
    if tail == 0:
        return ONE
    return min(ONE, a0 / (2 * tail))


def eps_threshold_all(polys):
    result = ONE
    for index, p in enumerate(polys):
        try:
            result = min(result, eps_threshold(p))
        except NonPositiveAtZero as exc:
            raise NonPositiveAtZero(str(exc), index=index) from exc
    return result


def dyadic_floor(r):
    """Largest 2^-k not exceeding r, for 0 < r <= 1"""
    r = rational(r)
    if r <= 0:
        raise ValueError(f"dyadic_floor needs a positive argument, got {r}")
    if r >= 1:
        return ONE
    k = max(0, r.denominator.bit_length() - r.numerator.bit_length() - 1)
    while Fraction(1, 2 ** k) > r:
        k += 1
    return Fraction(1, 2 ** k)


def choose_eps(requirements, label="eps"):
    """
    Pick one epsilon that makes every requirement polynomial positive.

    Requirements may vanish to some order at 0; only the sign of the leading
    low-order coefficient matters for small epsilon, so the factor e^k is dropped
    before the threshold is computed. The result is rounded down to a power of
    two and then re-checked exactly.
    """
    requirements = list(requirements)
    stripped = []
    for index, p in enumerate(requirements):
        if p.is_zero():
            raise NonPositiveAtZero("requirement vanishes identically", index=index)
        stripped.append(p.lowest_order()[1])
    eps = dyadic_floor(eps_threshold_all(stripped))

    for _ in range(setting('EPS_HALVING_LIMIT')):
        if all(p(eps) > 0 for p in requirements):
            logger.debug("%s = %s over %d requirements", label, eps, len(requirements))
            return eps
        eps /= 2
    raise EpsilonSelectionFailed(f"could not certify {label} after halving")


@dataclass(frozen=True)
class PolyPoint:
    """A point whose coordinates are polynomials in epsilon"""
    x: UniPoly
    y: UniPoly
    z: UniPoly

    @classmethod
    def lift(cls, p):
        if isinstance(p, PolyPoint):
            return p
        return cls(UniPoly.constant(p.x), UniPoly.constant(p.y), UniPoly.constant(p.z))

    def __add__(self, other):
        other = PolyPoint.lift(other)
        return PolyPoint(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other):
        other = PolyPoint.lift(other)
        return PolyPoint(self.x - other.x, self.y - other.y, self.z - other.z)

    def __mul__(self, k):
        return PolyPoint(self.x * k, self.y * k, self.z * k)

    __rmul__ = __mul__

    def dot(self, other):
        other = PolyPoint.lift(other)
        return self.x * other.x + self.y * other.y + self.z * other.z

    def cross(self, other):
        other = PolyPoint.lift(other)
        return PolyPoint(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )

    def at(self, eps):
        return Point3(self.x(eps), self.y(eps), self.z(eps))


def poly_volume6(p1, p2, p3, p4):
    """volume6 with polynomial coordinates, as a polynomial in epsilon"""
    p1 = PolyPoint.lift(p1)
    u = PolyPoint.lift(p2) - p1
    v = PolyPoint.lift(p3) - p1
    w = PolyPoint.lift(p4) - p1
    return u.dot(v.cross(w))


def plane_value_poly(plane, p):
    """a . p - b for a fixed plane and a point with polynomial coordinates"""
    p = PolyPoint.lift(p)
    return p.x * plane.a.x + p.y * plane.a.y + p.z * plane.a.z - plane.b


# ----------------------------------------------------------------------
# Parabolas
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class QuadCurve:
    """p(t) = a + b t + c t^2"""
    a: Point3
    b: Point3
    c: Point3

    def eval(self, t):
        t = rational(t)
        return self.a + self.b * t + self.c * (t * t)


def parabola_through(p0, p1, p2, t0, t1, t2):
    ts = [rational(t) for t in (t0, t1, t2)]
    if len(set(ts)) != 3:
        raise DuplicateParameters(f"parameters {ts} are not pairwise distinct")
    if (p1 - p0).cross(p2 - p0).is_zero():
        raise CollinearPoints("parabola needs three non-collinear points")

    a = b = c = ORIGIN
    points = (p0, p1, p2)
    for i in range(3):
        tj, tk = (ts[j] for j in range(3) if j != i)
        denom = (ts[i] - tj) * (ts[i] - tk)
        weight = points[i] / denom
        c = c + weight
        b = b - weight * (tj + tk)
        a = a + weight * (tj * tk)
    return QuadCurve(a, b, c)


# ----------------------------------------------------------------------
# Planes and lines
# ----------------------------------------------------------------------

def _primitive(values):
    """Scale rationals by a positive factor to coprime integers"""
    values = [rational(v) for v in values]
    denominator = 1
    for v in values:
        denominator = lcm(denominator, v.denominator)
    ints = [int(v * denominator) for v in values]
    content = 0
    for i in ints:
        content = gcd(content, i)
    if content == 0:
        return [Fraction(0)] * len(values)
    return [Fraction(i // content) for i in ints]


@dataclass(frozen=True)
class Plane:
    """Oriented plane a.x = b; the positive side is a.x > b"""
    a: Point3
    b: Fraction

    def __post_init__(self):
        if self.a.is_zero():
            raise DegenerateInput("plane normal is zero")
        a1, a2, a3, b = _primitive([*self.a, self.b])
        object.__setattr__(self, 'a', Point3(a1, a2, a3))
        object.__setattr__(self, 'b', b)

    def value(self, x):
        return self.a.dot(x) - self.b

    def side(self, x):
        return Sign.of(self.value(x))

    def contains(self, x):
        return self.value(x) == 0

    def flipped(self):
        return Plane(-self.a, -self.b)

    def shifted(self, delta):
        """Parallel plane a.x = b + delta, unnormalized delta in units of a"""
        return Plane(self.a, self.b + rational(delta))

    def parallel_through(self, p):
        return Plane(self.a, self.a.dot(p))

    def unoriented_key(self):
        """Canonical form up to orientation: first nonzero coefficient positive"""
        coeffs = (*self.a, self.b)
        lead = next(c for c in coeffs if c != 0)
        return coeffs if lead > 0 else tuple(-c for c in coeffs)

    def __repr__(self):
        return f"Plane({self.a.x}x + {self.a.y}y + {self.a.z}z = {self.b})"


def plane_through(p, q, r):
    normal = (q - p).cross(r - p)
    if normal.is_zero():
        raise DegenerateInput(f"points {p}, {q}, {r} are collinear")
    return Plane(normal, normal.dot(p))


@dataclass(frozen=True)
class Line3:
    base: Point3
    direction: Point3

    def __post_init__(self):
        if self.direction.is_zero():
            raise DegenerateInput("line direction is zero")
        d = _primitive(list(self.direction))
        lead = next(c for c in d if c != 0)
        if lead < 0:
            d = [-c for c in d]
        object.__setattr__(self, 'direction', Point3(*d))

    @classmethod
    def through(cls, p, q):
        return cls(p, q - p)

    def point_at(self, t):
        return self.base + self.direction * rational(t)

    def contains(self, x):
        return (x - self.base).cross(self.direction).is_zero()


def line_plane_point(line, plane):
    denom = plane.a.dot(line.direction)
    if denom == 0:
        raise ParallelElements("line is parallel to the plane")
    t = (plane.b - plane.a.dot(line.base)) / denom
    return line.point_at(t)


def planes_line(h1, h2):
    d = h1.a.cross(h2.a)
    if d.is_zero():
        raise ParallelElements("planes are parallel")
    base = (h2.a.cross(d) * h1.b + d.cross(h1.a) * h2.b) / d.norm2()
    return Line3(base, d)


def planes_point(h1, h2, h3):
    det = det3(h1.a, h2.a, h3.a)
    if det == 0:
        raise ParallelElements("planes do not meet in a single point")
    return (
        h2.a.cross(h3.a) * h1.b + h3.a.cross(h1.a) * h2.b + h1.a.cross(h2.a) * h3.b
    ) / det


# ----------------------------------------------------------------------
# Incidence predicates
# ----------------------------------------------------------------------

def _drop_axis(normal):
    values = [abs(c) for c in normal]
    axis = values.index(max(values))
    keep = [i for i in range(3) if i != axis]
    return lambda p: (tuple(p)[keep[0]], tuple(p)[keep[1]])


def orient2(u, v, w):
    return (v[0] - u[0]) * (w[1] - u[1]) - (v[1] - u[1]) * (w[0] - u[0])


def segment_meets_triangle_relint(s, t):
    """Open segment s = (p, q) against the relative interior of triangle t = (a, b, c)"""
    p, q = s
    a, b, c = t
    normal = (b - a).cross(c - a)
    if normal.is_zero():
        raise DegenerateTriangle(f"triangle {t} is degenerate")

    sp, sq = orient4(a, b, c, p), orient4(a, b, c, q)
    if sp != 0 or sq != 0:
        if sp == 0 or sq == 0 or sp == sq:
            return False
        first = orient4(p, q, a, b)
        return first != 0 and orient4(p, q, b, c) == first and orient4(p, q, c, a) == first

    # Coplanar: clip the open segment against three open half-planes.
    project = _drop_axis(normal)
    a2, b2, c2, p2, q2 = (project(v) for v in (a, b, c, p, q))
    turn = 1 if orient2(a2, b2, c2) > 0 else -1
    lo, hi = ZERO, ONE
    for u, v in ((a2, b2), (b2, c2), (c2, a2)):
        alpha = turn * orient2(u, v, p2)
        beta = turn * orient2(u, v, q2) - alpha
        if beta == 0:
            if alpha <= 0:
                return False
        elif beta > 0:
            lo = max(lo, -alpha / beta)
        else:
            hi = min(hi, -alpha / beta)
    return lo < hi


def _tetra_facets(tet):
    """Four inward-oriented planes of a tetrahedron"""
    p0, p1, p2, p3 = tet
    if volume6(p0, p1, p2, p3) == 0:
        raise DegenerateTetrahedron(f"tetrahedron {tet} is flat")
    planes = []
    for i in range(4):
        rest = [tet[j] for j in range(4) if j != i]
        plane = plane_through(*rest)
        if plane.side(tet[i]) < 0:
            plane = plane.flipped()
        planes.append(plane)
    return planes


def _edges(tet):
    return [tet[j] - tet[i] for i in range(4) for j in range(i + 1, 4)]


def _separating_axes(t1, t2):
    axes = [pl.a for pl in _tetra_facets(t1)] + [pl.a for pl in _tetra_facets(t2)]
    for e1 in _edges(t1):
        for e2 in _edges(t2):
            axis = e1.cross(e2)
            if not axis.is_zero():
                axes.append(axis)
    return axes


def tetra_open_intersect(t1, t2):
    """Do the open interiors of two tetrahedra meet (separating-axis test)"""
    for axis in _separating_axes(t1, t2):
        first = [axis.dot(p) for p in t1]
        second = [axis.dot(p) for p in t2]
        if max(first) <= min(second) or max(second) <= min(first):
            return False
    return True


def tetras_disjoint(t1, t2):
    """Are the closed tetrahedra disjoint; touching counts as meeting"""
    for axis in _separating_axes(t1, t2):
        first = [axis.dot(p) for p in t1]
        second = [axis.dot(p) for p in t2]
        if max(first) < min(second) or max(second) < min(first):
            return True
    return False


def segment_meets_tetra(s, tet):
    """Open segment against the closed tetrahedron"""
    p, q = s
    lower, upper = None, None
    for plane in _tetra_facets(tet):
        alpha = plane.value(p)
        beta = plane.value(q) - alpha
        if beta == 0:
            if alpha < 0:
                return False
            continue
        bound = -alpha / beta
        if beta > 0:
            lower = bound if lower is None else max(lower, bound)
        else:
            upper = bound if upper is None else min(upper, bound)
    if lower is not None and upper is not None and lower > upper:
        return False
    return (lower is None or lower < 1) and (upper is None or upper > 0)
