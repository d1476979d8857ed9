"""
Visibility cones prescribed by a sight plane.

The plane H cuts the facet F in a segment. Inside H a wedge bounded by two
lines l', r' and a line f' just outside P encloses the sight vertices; the
three bounding planes of the cone are H rotated a little about l', r' and f'.
"""
import logging

from geometry.conf import setting
from geometry.exceptions import EpsilonSelectionFailed, NonPositiveAtZero, ParallelElements
from geometry.kernel import (
    EPS,
    Plane,
    PolyPoint,
    UniPoly,
    choose_eps,
    midpoint,
    orient2,
)

from .exceptions import EmptySight, PlaneMissesFacetInterior, SightOutsideFacet
from .frames import Cone3

logger = logging.getLogger(__name__)


def _affine2(fn):
    """Coefficients (alpha, beta, gamma) of an affine function of (X, Y)"""
    gamma = fn((0, 0))
    return fn((1, 0)) - gamma, fn((0, 1)) - gamma, gamma


def _eval2(coeffs, p):
    alpha, beta, gamma = coeffs
    return alpha * p[0] + beta * p[1] + gamma


def _leading_sign(p):
    """Sign of a polynomial for all small positive epsilon, 0 if it vanishes"""
    if p.is_zero():
        return 0
    _, q = p.lowest_order()
    return 1 if q.coefficient(0) > 0 else -1


class _SightFrame:
    """Affine coordinates (X, Y) on H with Y increasing towards the outside of F"""

    def __init__(self, H, outward):
        h = H.a
        self.H = H
        self.up = outward * h.norm2() - h * outward.dot(h)
        self.right = h.cross(outward)

    def coords(self, x):
        return (self.right.dot(x), self.up.dot(x))

    def lift(self, coeffs, v):
        """Raw plane (normal, offset) through the line {coeffs = 0} of H and the point v"""
        alpha, beta, gamma = coeffs
        h = self.H.a
        kappa = -_eval2(coeffs, self.coords(v)) / h.norm2()
        normal = self.right * alpha + self.up * beta + h * kappa
        offset = kappa * self.H.b - gamma
        return normal, offset


def _segment(P, cycle, H):
    """Endpoints of F cap H"""
    points = []
    for i, u in enumerate(cycle):
        w = cycle[(i + 1) % len(cycle)]
        pu, pw = P.vertices[u], P.vertices[w]
        hu, hw = H.value(pu), H.value(pw)
        if hu == 0:
            points.append(pu)
        elif hu * hw < 0:
            points.append(pu + (pw - pu) * (hu / (hu - hw)))
    unique = []
    for p in points:
        if p not in unique:
            unique.append(p)
    return unique


def _extreme(anchor, candidates, sign):
    """Candidate c such that every candidate lies on the given side of the line anchor -> c"""
    for c in candidates:
        if all(sign * orient2(anchor, c, t) >= 0 for t in candidates):
            return c
    raise SightOutsideFacet("no supporting line through the anchor")


def make_visibility_cone(P, facet, H, marked=()):
    """
    Triangular cone meeting the facet in a triangle inside its relative
    interior and containing, strictly, exactly the vertices of P on H that
    are not on the facet, together with the marked points of relint(F) on H.
    """
    k = P.facet_index(facet)
    cycle = P.facets[k]
    F = P.facet_planes[k]
    values = [H.value(P.vertices[i]) for i in cycle]
    if not (any(v > 0 for v in values) and any(v < 0 for v in values)):
        raise PlaneMissesFacetInterior(f"{H} does not cross the relative interior of facet {cycle}")

    others = [q for j, q in enumerate(P.facet_planes) if j != k]
    marked = list(marked)
    for x in marked:
        if H.value(x) != 0 or F.value(x) != 0 or any(q.value(x) >= 0 for q in others):
            raise PlaneMissesFacetInterior(f"marked point {x} is not in relint(F) on {H}")

    members = set(cycle)
    sight = [i for i in range(P.n) if i not in members and H.value(P.vertices[i]) == 0]
    if not sight:
        raise EmptySight(f"no vertex of P lies on {H} outside facet {cycle}")

    frame = _SightFrame(H, F.a)
    ends = sorted(_segment(P, cycle, H), key=lambda p: frame.coords(p)[0])
    end_left, end_right = frame.coords(ends[0]), frame.coords(ends[-1])
    top = end_left[1]

    sight2 = [frame.coords(P.vertices[i]) for i in sight]
    marked2 = sorted(frame.coords(x) for x in marked)
    if marked2:
        anchor_left, anchor_right = marked2[0], marked2[-1]
    else:
        anchor_left = anchor_right = frame.coords(midpoint(ends[0], ends[-1]))

    s_left = _extreme(anchor_left, sight2, 1)
    s_right = _extreme(anchor_right, sight2, -1)
    l_base = _affine2(lambda x: orient2(anchor_left, s_left, x))
    r_base = _affine2(lambda x: -orient2(anchor_right, s_right, x))

    # Shift l and r outwards by delta and put f' at height delta^2 above F cap H.
    mid_top = ((anchor_left[0] + anchor_right[0]) / 2, top)
    requirements = [
        UniPoly((-_eval2(l_base, end_left), -1)),
        UniPoly((-_eval2(r_base, end_right), -1)),
        UniPoly((_eval2(l_base, mid_top), 1, l_base[1])),
        UniPoly((_eval2(r_base, mid_top), 1, r_base[1])),
    ]
    delta = choose_eps(requirements, label="sight wedge")

    center = midpoint(ends[0], ends[-1]) + H.a
    inside = [P.vertices[i] for i in sight] + marked
    outside = sorted(set(range(P.n)) - set(sight))

    for _ in range(setting('EPS_HALVING_LIMIT')):
        l_coeffs = (l_base[0], l_base[1], l_base[2] + delta)
        r_coeffs = (r_base[0], r_base[1], r_base[2] + delta)
        f_coeffs = (0, -1, top + delta * delta)
        raw = [frame.lift(c, center) for c in (l_coeffs, r_coeffs, f_coeffs)]
        try:
            eps, cone = _rotate(P, k, H, raw, inside, outside)
        except (NonPositiveAtZero, EpsilonSelectionFailed, ParallelElements) as exc:
            logger.debug("sight wedge delta = %s rejected: %s", delta, exc)
            delta /= 2
            continue
        if _audit(P, facet, cone, inside, outside):
            logger.info("visibility cone over facet %s: %d sight vertices, delta = %s, eps = %s",
                        cycle, len(sight), delta, eps)
            return cone
        delta /= 2
    raise SightOutsideFacet(f"could not enclose vertices {sight} in a cone over facet {cycle}")


def _rotate(P, k, H, raw, inside, outside):
    """Pick the rotation epsilon and return it with the resulting cone"""
    F = P.facet_planes[k]
    (n_l, b_l), (n_r, b_r), (n_f, b_f) = raw
    normals = [
        PolyPoint.lift(H.a) + PolyPoint.lift(n_l) * EPS,
        PolyPoint.lift(H.a) + PolyPoint.lift(n_r) * EPS,
        PolyPoint.lift(-H.a) + PolyPoint.lift(n_f) * EPS,
    ]
    offsets = [H.b + EPS * b_l, H.b + EPS * b_r, -H.b + EPS * b_f]

    def value(j, x):
        return normals[j].dot(x) - offsets[j]

    requirements = []
    for x in inside:
        requirements.extend(value(j, x) for j in range(3))
    for i in outside:
        x = P.vertices[i]
        side = H.value(x)
        if side < 0:
            requirements.append(-value(0, x))
        elif side > 0:
            requirements.append(-value(2, x))
        else:
            # a vertex of F on H must fall outside l' or r'
            j = 0 if (n_l.dot(x) - b_l) < 0 else 1
            requirements.append(-value(j, x))

    det = normals[0].dot(normals[1].cross(normals[2]))
    det_sign = _leading_sign(det)
    if det_sign == 0:
        raise ParallelElements("rotated planes do not meet in a point")
    requirements.append(det * det_sign)

    numerator = (
        normals[1].cross(normals[2]) * offsets[0]
        + normals[2].cross(normals[0]) * offsets[1]
        + normals[0].cross(normals[1]) * offsets[2]
    )
    apex_side = (numerator.dot(F.a) - det * F.b) * det_sign
    apex_sign = _leading_sign(apex_side)
    if apex_sign == 0:
        raise ParallelElements("cone apex stays on the facet plane")
    requirements.append(apex_side * apex_sign)

    facet_normal = PolyPoint.lift(F.a)
    for g, h in ((2, 0), (0, 1), (1, 2)):
        edge = normals[g].cross(normals[h])
        # each extreme ray has to run towards the facet plane
        requirements.append(edge.dot(F.a) * (-apex_sign * det_sign))
        corner_det = facet_normal.dot(edge)
        corner_sign = _leading_sign(corner_det)
        if corner_sign == 0:
            raise ParallelElements("cone edge parallel to the facet")
        corner = (
            edge * UniPoly.constant(F.b)
            + normals[h].cross(facet_normal) * offsets[g]
            + facet_normal.cross(normals[g]) * offsets[h]
        )
        for j, q in enumerate(P.facet_planes):
            if j != k:
                requirements.append((corner_det * q.b - corner.dot(q.a)) * corner_sign)

    eps = choose_eps(requirements, label="cone rotation")
    planes = tuple(Plane(normals[j].at(eps), offsets[j](eps)) for j in range(3))
    return eps, Cone3(planes)


def _audit(P, facet, cone, inside, outside):
    if not all(cone.contains(x) for x in inside):
        return False
    if any(cone.contains(P.vertices[i]) for i in outside):
        return False
    return cone.meets_facet_interior(P, facet)
