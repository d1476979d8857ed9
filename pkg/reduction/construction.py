"""
The logical polytope of a restricted formula.

The polytope is grown in five stages: a wedge with one roof per variable,
ridges and preliminary literal vertices on the roofs, literal vertices pushed
just outside their roof faces, the spine bent into a convex chain with one
triangle per clause, and finally one cupola over every back gable and every
spine triangle. Each stage has one small parameter; it is chosen with
``choose_eps`` from the requirement that every expected facet keeps the
other vertices strictly beneath it, then the stage is checked against an
exact hull.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction

from gadgets.cones import make_visibility_cone
from gadgets.cupola import build_cupola
from geometry.conf import setting
from geometry.exceptions import ConvexityViolation
from geometry.kernel import (
    EPS,
    Line3,
    Plane,
    Point3,
    PolyPoint,
    choose_eps,
    line_plane_point,
    midpoint,
    plane_through,
    poly_volume6,
)
from geometry.polytope import face_key, hull3

from .params import params

logger = logging.getLogger(__name__)

ROOF_ROLES = ('zT', 'zF', 'zL', 'zR', 'zA', 'zB')
LITERAL_SLOTS = ('x1', 'x2', 'x3bar')

# strictly inside the wedge for every V and every stage
INSIDE = Point3(Fraction(1, 4), Fraction(1, 2), Fraction(1, 2))


def roof_height(x):
    return x * (1 - x) + 1


@dataclass(frozen=True)
class Layout:
    """
    Vertex numbering of the base polytope: spine c_0..c_2C, the roof corners
    at y = 0 and y = 1 ordered by x, the ridge points z_A, z_B of every roof,
    then x1, x2, x3bar of every variable. Cupola vertices follow.

    Roofs are numbered from right to left: roof 1 touches x = 1.
    """
    C: int
    V: int

    @property
    def front0(self):
        return 2 * self.C + 1

    @property
    def back0(self):
        return self.front0 + self.V + 1

    @property
    def ridge0(self):
        return self.back0 + self.V + 1

    @property
    def literal0(self):
        return self.ridge0 + 2 * self.V

    @property
    def size(self):
        return self.literal0 + 3 * self.V

    def spine(self, j):
        if not 0 <= j <= 2 * self.C:
            raise IndexError(f"spine index {j} outside 0..{2 * self.C}")
        return j

    def front(self, k):
        return self.front0 + k

    def back(self, k):
        return self.back0 + k

    def roof(self, i):
        k = self.V - i
        return {
            'zT': self.front(k),
            'zF': self.front(k + 1),
            'zL': self.back(k),
            'zR': self.back(k + 1),
            'zA': self.ridge0 + 2 * (i - 1),
            'zB': self.ridge0 + 2 * (i - 1) + 1,
        }

    def literals(self, i):
        base = self.literal0 + 3 * (i - 1)
        return {'x1': base, 'x2': base + 1, 'x3bar': base + 2}

    def clause_triangle(self, l):
        return (self.spine(2 * l - 2), self.spine(2 * l - 1), self.spine(2 * l))

    def gable(self, i):
        r = self.roof(i)
        return (r['zL'], r['zR'], r['zB'])

    def u(self, j):
        """y coordinate of spine point c_j"""
        if j == 2 * self.C:
            return Fraction(1)
        return Fraction(j, 4 * self.C)

    def roof_facets(self, i, stage):
        r = self.roof(i)
        zT, zF, zL, zR, zA, zB = (r[k] for k in ROOF_ROLES)
        if stage < 2:
            return [(zT, zF, zR, zL)]
        facets = [(zT, zF, zA), (zL, zR, zB)]
        if stage < 3:
            return facets + [(zT, zA, zB, zL), (zF, zR, zB, zA)]
        lit = self.literals(i)
        x1, x2, x3 = lit['x1'], lit['x2'], lit['x3bar']
        facets += [(zT, zA, x3), (zA, zB, x3), (zB, zL, x3), (zL, zT, x3)]
        facets += [(x1, zA, zF), (zA, x1, x2), (zB, zA, x2), (zB, x2, zR), (x2, x1, zR), (x1, zF, zR)]
        return facets

    def facets(self, stage):
        """
        Expected facets of the base polytope after a stage (1, 2, 3, 4 for
        the even spine points, 5 once the odd points are out). Clause
        triangles and gables are included; the cupolas replace them.
        """
        C, V = self.C, self.V
        c = self.spine
        left, right = self.front(0), self.front(V)
        facets = [
            tuple([c(0)] + [self.front(k) for k in range(V + 1)]),
            tuple([c(2 * C)] + [self.back(k) for k in reversed(range(V + 1))]),
        ]
        if stage < 4:
            facets.append((c(0), left, self.back(0), c(2 * C)))
            facets.append((c(0), c(2 * C), self.back(V), right))
        else:
            facets.append((c(2 * C), self.back(0), left))
            facets.append((c(2 * C), right, self.back(V)))
            for l in range(1, C + 1):
                facets.append((c(2 * l - 2), c(2 * l), left))
                if stage == 4:
                    facets.append((c(2 * l - 2), right, c(2 * l)))
                else:
                    facets.append((c(2 * l - 1), right, c(2 * l - 2)))
                    facets.append((c(2 * l - 1), c(2 * l), right))
                    facets.append(self.clause_triangle(l))
        for i in range(1, V + 1):
            facets.extend(self.roof_facets(i, stage))
        return facets

    def active(self, stage):
        """Vertices of the base polytope after a stage"""
        C, V = self.C, self.V
        if stage < 4:
            spine = [0, 2 * C]
        elif stage == 4:
            spine = list(range(0, 2 * C + 1, 2))
        else:
            spine = list(range(2 * C + 1))
        corners = list(range(self.front0, self.ridge0))
        ridges = list(range(self.ridge0, self.literal0)) if stage >= 2 else []
        literals = list(range(self.literal0, self.size)) if stage >= 3 else []
        return spine + corners + ridges + literals


def _small_sign(p):
    """Sign of a polynomial for all small positive epsilon"""
    if p.is_zero():
        return 0
    _, q = p.lowest_order()
    return 1 if q.coefficient(0) > 0 else -1


def support_requirements(points, facets, active, inside=INSIDE):
    """
    Requirement polynomials saying that each facet stays planar with every
    other active vertex strictly on the side of ``inside``.
    """
    requirements = []
    for cycle in facets:
        a, b, c = (points[i] for i in cycle[:3])
        sigma = _small_sign(poly_volume6(a, b, c, inside))
        if sigma == 0:
            raise ConvexityViolation(f"facet {cycle} passes through the reference point")
        for w in cycle[3:]:
            if not poly_volume6(a, b, c, points[w]).is_zero():
                raise ConvexityViolation(f"facet {cycle} is not planar")
        members = set(cycle)
        for v in active:
            if v not in members:
                requirements.append(poly_volume6(a, b, c, points[v]) * sigma)
    return requirements


def check_stage(points, active, facets):
    """Differences between the exact hull of the active points and the expected facets"""
    P = hull3([points[i] for i in active])
    if P.n != len(active):
        lost = sorted(set(active) - {active[j] for j in P.origin})
        return [f"vertices {lost} are not extreme"]
    found = {face_key(active[P.origin[j]] for j in cycle) for cycle in P.facets}
    expected = {face_key(f) for f in facets}
    problems = [f"missing facet {f}" for f in sorted(expected - found)]
    problems += [f"unexpected facet {f}" for f in sorted(found - expected)]
    return problems


def _run_stage(label, points, moving, active, facets):
    poly = {i: moving[i] if i in moving else PolyPoint.lift(points[i]) for i in active}
    t = choose_eps(support_requirements(poly, facets, active), label=label)
    problems = []
    for _ in range(setting('EPS_HALVING_LIMIT')):
        placed = dict(points)
        placed.update({i: p.at(t) for i, p in moving.items()})
        problems = check_stage(placed, active, facets)
        if not problems:
            logger.info("%s = %s", label, t)
            return t, placed
        logger.debug("%s = %s rejected: %s", label, t, problems[0])
        t /= 2
    raise ConvexityViolation(f"{label}: {problems[0]}")


def _outward(plane, inside=INSIDE):
    return plane.flipped() if plane.value(inside) > 0 else plane


def _flat(v):
    """Component of v inside the planes y = const"""
    return Point3(v.x, 0, v.z)


@dataclass(frozen=True)
class LogicalPolytope:
    formula: object
    params: object
    polytope: object
    layout: Layout
    variable_cupolas: tuple
    clause_cupolas: tuple
    constants: dict = field(default_factory=dict, compare=False)

    @property
    def C(self):
        return self.layout.C

    @property
    def V(self):
        return self.layout.V

    @property
    def m(self):
        return self.params.m

    @property
    def spine(self):
        return tuple(range(2 * self.C + 1))

    def roof(self, i):
        return self.layout.roof(i)

    def literals(self, i):
        return self.layout.literals(i)

    def literal_clause(self, i, slot):
        return dict(zip(LITERAL_SLOTS, self.formula.literal_clauses(i)))[slot]

    def clause_triangle(self, l):
        return self.layout.clause_triangle(l)

    def clause_literal_vertices(self, l):
        return [self.literals(i)[slot] for i, slot in self.formula.clause_literals(l)]

    def variable_cupola(self, i):
        return self.variable_cupolas[i - 1]

    def clause_cupola(self, l):
        return self.clause_cupolas[l - 1]

    def roles(self):
        """Role of every vertex: (kind, detail) with kind spine, corner, ridge, literal or cupola"""
        layout = self.layout
        roles = {}
        for j in self.spine:
            roles[j] = ('spine', f"c{j}")
        for k in range(self.V + 1):
            roles[layout.front(k)] = ('corner', f"front {k}")
            roles[layout.back(k)] = ('corner', f"back {k}")
        for i in range(1, self.V + 1):
            r = self.roof(i)
            roles[r['zA']] = ('ridge', f"zA^{i}")
            roles[r['zB']] = ('ridge', f"zB^{i}")
            for slot, v in self.literals(i).items():
                roles[v] = ('literal', f"{slot}^{i}")
        for kind, records in (('var', self.variable_cupolas), ('clause', self.clause_cupolas)):
            for number, rec in enumerate(records, start=1):
                for v in rec.vertices():
                    roles[v] = ('cupola', f"{kind} {number}")
        return roles


def _literal_lines(layout, points, anchors, formula):
    """The lines d (literal to clause anchor) and g (inside H^i, through z_F or z_T, meeting d)"""
    d_lines, g_lines, sight_planes = {}, {}, {}
    for i in range(1, layout.V + 1):
        r = layout.roof(i)
        H = plane_through(points[r['zT']], points[r['zF']], midpoint(points[r['zL']], points[r['zB']]))
        sight_planes[i] = H
        for slot, clause in zip(LITERAL_SLOTS, formula.literal_clauses(i)):
            x = points[layout.literals(i)[slot]]
            d = Line3.through(x, anchors[clause])
            p = line_plane_point(d, H)
            start = points[r['zT']] if slot == 'x3bar' else points[r['zF']]
            d_lines[(i, slot)] = d
            g_lines[(i, slot)] = Line3.through(start, p)
    return d_lines, g_lines, sight_planes


def build_logical_polytope(formula, chain_length=None):
    """Build the logical polytope of a restricted formula"""
    C, V = formula.C, formula.V
    prm = params(C, V, chain_length)
    layout = Layout(C, V)
    c = layout.spine
    points = {}

    # Stage 1: the wedge
    points[c(0)] = Point3(0, 0, 0)
    points[c(2 * C)] = Point3(0, 1, 0)
    for k in range(V + 1):
        x = Fraction(k, V)
        points[layout.front(k)] = Point3(x, 0, roof_height(x))
        points[layout.back(k)] = Point3(x, 1, roof_height(x))
    problems = check_stage(points, layout.active(1), layout.facets(1))
    if problems:
        raise ConvexityViolation(f"wedge: {problems[0]}")

    # Stage 2: roof ridges
    up = PolyPoint.lift(Point3(0, 0, 1)) * EPS
    moving = {}
    for i in range(1, V + 1):
        r = layout.roof(i)
        base = midpoint(points[r['zT']], points[r['zF']])
        moving[r['zA']] = PolyPoint.lift(base + Point3(0, Fraction(1, 3), 0)) + up
        moving[r['zB']] = PolyPoint.lift(base + Point3(0, Fraction(2, 3), 0)) + up
    t_roof, points = _run_stage("t_roof", points, moving, layout.active(2), layout.facets(2))

    for j in range(1, 2 * C):
        points[c(j)] = Point3(0, layout.u(j), 0)
    anchors = {l: points[c(2 * l - 1)] for l in range(1, C + 1)}

    # Stage 3: literal vertices, first on the diagonals of the roof faces, then pushed out
    moving = {}
    for i in range(1, V + 1):
        r = layout.roof(i)
        zT, zF, zB = points[r['zT']], points[r['zF']], points[r['zB']]
        right = _outward(plane_through(zF, points[r['zR']], zB))
        left = _outward(plane_through(zT, points[r['zA']], zB))
        for slot, clause in zip(LITERAL_SLOTS, formula.literal_clauses(i)):
            start, face = (zT, left) if slot == 'x3bar' else (zF, right)
            x = start + (zB - start) * (layout.u(2 * clause - 1) * Fraction(3, 2))
            direction = x - anchors[clause]
            speed = face.a.dot(direction)
            if speed <= 0:
                raise ConvexityViolation(f"literal {slot}^{i} cannot leave its roof face towards the outside")
            moving[layout.literals(i)[slot]] = PolyPoint.lift(x) + PolyPoint.lift(direction / speed) * EPS
    t_literal, points = _run_stage("t_literal", points, moving, layout.active(3), layout.facets(3))

    # Stage 4: even spine points onto a parabola in the plane x = z / 2
    moving = {}
    for l in range(C):
        y = layout.u(2 * l)
        s = (y - 1) ** 2
        moving[c(2 * l)] = PolyPoint.lift(Point3(0, y, 0)) + PolyPoint.lift(Point3(s / 2, 0, s)) * EPS
    t_even, points = _run_stage("t_even", points, moving, layout.active(4), layout.facets(4))

    for l in range(1, C + 1):
        lo, hi = points[c(2 * l - 2)], points[c(2 * l)]
        fraction = (layout.u(2 * l - 1) - lo.y) / (hi.y - lo.y)
        points[c(2 * l - 1)] = lo + (hi - lo) * fraction
        anchors[l] = points[c(2 * l - 1)]

    # ... then each odd spine point, inside its plane y = u(2l-1), a little beyond
    # G_l = (c_{2l-2}, c_{2l}, z_F^1) and beneath the x = 0 side face on the same edge
    moving = {}
    zF1, zT_last = points[layout.front(V)], points[layout.front(0)]
    for l in range(1, C + 1):
        lo, hi = points[c(2 * l - 2)], points[c(2 * l)]
        g = _flat(_outward(plane_through(lo, hi, zF1)).a)
        f = _flat(_outward(plane_through(lo, hi, zT_last)).a)
        gg, ff, gf = g.dot(g), f.dot(f), g.dot(f)
        slack = (gg * ff - gf * gf) / (2 * abs(gf) + 2 * ff)
        # target is beyond G_l (g . d > 0) and beneath the side face (f . d < 0)
        start = points[c(2 * l - 1)]
        target = start + g * ff - f * (gf + slack)
        moving[c(2 * l - 1)] = PolyPoint.lift(start) + PolyPoint.lift(target - start) * EPS
    t_odd, points = _run_stage("t_odd", points, moving, layout.active(5), layout.facets(5))

    for l in range(1, C + 1):
        anchors[l] = midpoint(points[c(2 * l - 1)], anchors[l])

    base = hull3([points[i] for i in range(layout.size)])
    if base.n != layout.size or base.origin != tuple(range(layout.size)):
        raise ConvexityViolation("the base polytope lost a vertex")

    # Stage 5: cupolas
    d_lines, g_lines, sight_planes = _literal_lines(layout, points, anchors, formula)
    P = base
    variable_cupolas = []
    for i in range(1, V + 1):
        gable = layout.gable(i)
        lines = [g_lines[(i, slot)] for slot in LITERAL_SLOTS]
        F = P.facet_planes[P.facet_index(gable)]
        marked = [line_plane_point(g, F) for g in lines]
        cone = make_visibility_cone(P, gable, sight_planes[i], marked)
        P, record = build_cupola(P, gable, cone, prm.m, lines=lines)
        variable_cupolas.append(record)
        logger.info("variable %d: cupola over gable %s", i, gable)

    clause_cupolas = []
    for l in range(1, C + 1):
        triangle = layout.clause_triangle(l)
        lines = [d_lines[(i, slot)] for i, slot in formula.clause_literals(l)]
        H = Plane(Point3(0, 1, 0), layout.u(2 * l - 1))
        cone = make_visibility_cone(P, triangle, H, [anchors[l]])
        P, record = build_cupola(P, triangle, cone, prm.m, lines=lines)
        clause_cupolas.append(record)
        logger.info("clause %d: cupola over spine triangle %s", l, triangle)

    if P.n != prm.n:
        raise ConvexityViolation(f"built {P.n} vertices, the parameters promise {prm.n}")
    logger.info("logical polytope: C=%d V=%d m=%d n=%d K=%d", C, V, prm.m, prm.n, prm.K)
    return LogicalPolytope(
        formula=formula,
        params=prm,
        polytope=P,
        layout=layout,
        variable_cupolas=tuple(variable_cupolas),
        clause_cupolas=tuple(clause_cupolas),
        constants={'t_roof': t_roof, 't_literal': t_literal, 't_even': t_even, 't_odd': t_odd},
    )
