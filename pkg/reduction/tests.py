import dataclasses
from unittest import skipUnless

from django.test import SimpleTestCase, override_settings

from geometry.conf import setting
from geometry.kernel import Point3, plane_through
from geometry.polytope import Polytope3, face_key

from .cnf import Assignment, CnfFormula, RestrictedFormula, normalize
from .conditions import (
    BLOCKING,
    CONDITIONS,
    CONVEXITY,
    VISIBILITY,
    check_convexity,
    check_logical_conditions,
    check_visibility,
    is_left_of,
)
from .construction import INSIDE, LITERAL_SLOTS, Layout, build_logical_polytope
from .exceptions import EmptyClauseProduced, TriviallySatisfied, Unsupported, ZeroSize
from .params import default_chain_length, params

EXAMPLE_FORMULA = CnfFormula(4, ((1, -2, 3, -4), (-1, 2, -3, 4), (1, 2, 3, 4)))
TWO_VARIABLES = RestrictedFormula(2, ((1, 2), (1, -2), (-1, 2)))
ONE_VARIABLE = RestrictedFormula(1, ((1,), (1,), (-1,)))


class ParamsTests(SimpleTestCase):
    def test_known_values(self):
        for (C, V), (m, n, K) in {
            (3, 4): (102, 2221, 2319),
            (3, 1): (45, 580, 621),
            (3, 2): (64, 1013, 1073),
        }.items():
            prm = params(C, V)
            self.assertEqual((prm.m, prm.n, prm.K), (m, n, K))
            self.assertFalse(prm.chain_override)

    def test_size_identity(self):
        for C in range(1, 51):
            for V in range(1, 51):
                prm = params(C, V)
                self.assertEqual(prm.K, prm.n + prm.m - 4)
                self.assertEqual(prm.m, default_chain_length(C, V))
                self.assertGreater(prm.m, prm.p_T - prm.p_n)

    def test_sweep_bound_is_K_at_the_default_chain_length(self):
        prm = params(3, 4)
        self.assertEqual(prm.sweep_bound, prm.K)

    def test_sweep_ceiling(self):
        prm = params(2, 3, chain_length=1)
        self.assertEqual(prm.cupola_bound, 19)
        self.assertEqual(prm.sweep_ceiling, 19 * 5 + 3 * 24)

    def test_zero_size(self):
        with self.assertRaises(ZeroSize):
            params(0, 3)
        with self.assertRaises(ZeroSize):
            params(3, 0)

    def test_chain_override(self):
        prm = params(3, 1, chain_length=1)
        self.assertEqual((prm.m, prm.n), (1, 52))
        self.assertTrue(prm.chain_override)

    @override_settings(LOGICPOLY={'CHAIN_LENGTH': 2})
    def test_chain_length_setting(self):
        self.assertEqual(setting('CHAIN_LENGTH'), 2)
        self.assertEqual(params(3, 2).m, 2)


class NormalizeTests(SimpleTestCase):
    def test_example_formula_is_unchanged(self):
        restricted = normalize(EXAMPLE_FORMULA)
        self.assertEqual(restricted.clauses, EXAMPLE_FORMULA.clauses)
        self.assertEqual(restricted.literal_clauses(1), (1, 3, 2))
        self.assertEqual(restricted.literal_clauses(2), (2, 3, 1))
        self.assertTrue(all(not flipped for _, flipped in restricted.origin))

    def test_resolution_merges_clauses(self):
        f = CnfFormula(3, ((1, 2), (-1, 3), (2, -3), (-2, 3)))
        restricted = normalize(f)
        self.assertEqual(restricted.clauses, ((1, 2), (1, -2), (-1, 2)))
        self.assertEqual([old for old, _ in restricted.origin], [2, 3])

    def test_flip(self):
        restricted = normalize(CnfFormula(2, ((-1, 2), (-1, -2), (1, 2))))
        self.assertEqual(restricted.clauses, ((1, 2), (1, -2), (-1, 2)))
        self.assertEqual(restricted.origin, ((1, True), (2, False)))

    def test_unsupported(self):
        with self.assertRaises(Unsupported):
            normalize(CnfFormula(2, ((1, 2), (1, -2), (-1, 2), (-1, -2))))

    def test_empty_clause(self):
        with self.assertRaises(EmptyClauseProduced):
            normalize(CnfFormula(1, ((1,), (-1,))))

    def test_trivially_satisfied(self):
        with self.assertRaises(TriviallySatisfied):
            normalize(CnfFormula(2, ((1, 2), (1, -2))))

    def test_restricted_pattern_is_enforced(self):
        with self.assertRaises(Unsupported):
            RestrictedFormula(1, ((1,), (-1,)))
        self.assertTrue(TWO_VARIABLES.is_restricted())

    def test_clause_literals(self):
        self.assertEqual(TWO_VARIABLES.clause_literals(1), [(1, 'x1'), (2, 'x1')])
        self.assertEqual(TWO_VARIABLES.clause_literals(3), [(1, 'x3bar'), (2, 'x2')])

    def test_assignment(self):
        a = Assignment.from_bits("01")
        self.assertEqual(a.as_bits(), "01")
        self.assertFalse(a[1])
        self.assertTrue(a[2])
        self.assertFalse(a.satisfies(TWO_VARIABLES))
        self.assertTrue(Assignment.from_bits("11").satisfies(TWO_VARIABLES))
        with self.assertRaises(ValueError):
            Assignment.from_bits("012")


class LayoutTests(SimpleTestCase):
    def test_numbering(self):
        layout = Layout(C=3, V=1)
        self.assertEqual(layout.size, 7 * 1 + 2 * 3 + 3)
        roof = layout.roof(1)
        self.assertEqual((roof['zT'], roof['zF'], roof['zL'], roof['zR']), (7, 8, 9, 10))
        self.assertEqual(layout.literals(1), {'x1': 13, 'x2': 14, 'x3bar': 15})
        self.assertEqual(layout.clause_triangle(2), (2, 3, 4))

    def test_neighbouring_roofs_share_corners(self):
        layout = Layout(C=2, V=3)
        for i in (1, 2):
            self.assertEqual(layout.roof(i)['zT'], layout.roof(i + 1)['zF'])
            self.assertEqual(layout.roof(i)['zL'], layout.roof(i + 1)['zR'])

    def test_final_facets_satisfy_euler(self):
        layout = Layout(C=3, V=2)
        facets = layout.facets(5)
        edges = {face_key((f[k], f[(k + 1) % len(f)])) for f in facets for k in range(len(f))}
        self.assertEqual(layout.size - len(edges) + len(facets), 2)


class BuildTests(SimpleTestCase):
    formula = TWO_VARIABLES

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.lp = build_logical_polytope(cls.formula, chain_length=1)

    def test_vertex_count(self):
        self.assertEqual(self.lp.polytope.n, self.lp.params.n)
        self.assertEqual(self.lp.polytope.n, params(self.formula.C, self.formula.V, 1).n)

    def test_roles_partition_the_vertices(self):
        roles = self.lp.roles()
        self.assertEqual(sorted(roles), list(range(self.lp.polytope.n)))
        kinds = [kind for kind, _ in roles.values()]
        self.assertEqual(kinds.count('literal'), 3 * self.formula.V)
        self.assertEqual(kinds.count('spine'), 2 * self.formula.C + 1)

    def test_constants_are_positive(self):
        self.assertEqual(set(self.lp.constants), {'t_roof', 't_literal', 't_even', 't_odd'})
        self.assertTrue(all(t > 0 for t in self.lp.constants.values()))

    def test_all_conditions_hold(self):
        report = check_logical_conditions(self.lp)
        self.assertEqual(report.failures, {name: [] for name in CONDITIONS})
        self.assertTrue(report.as_dict()['verdict'])

    def test_polytope_audit(self):
        self.assertEqual(self.lp.polytope.audit(full=False), [])

    def test_odd_spine_points_stick_out_past_their_planes(self):
        P, layout, spine = self.lp.polytope, self.lp.layout, self.lp.spine
        zF1, zT_last = P.vertices[layout.front(self.formula.V)], P.vertices[layout.front(0)]
        for l in range(1, self.formula.C + 1):
            lo, mid, hi = (P.vertices[spine[j]] for j in (2 * l - 2, 2 * l - 1, 2 * l))
            with self.subTest(clause=l):
                self.assertEqual(mid.y, layout.u(2 * l - 1))
                G = plane_through(lo, hi, zF1)
                self.assertLess(G.side(mid) * G.side(INSIDE), 0)
                side = plane_through(lo, hi, zT_last)
                self.assertGreater(side.side(mid) * side.side(INSIDE), 0)

    def test_literals_sit_on_their_clause_cupolas(self):
        for l in range(1, self.formula.C + 1):
            rec = self.lp.clause_cupola(l)
            self.assertEqual(rec.host, self.lp.clause_triangle(l))
            for v in self.lp.clause_literal_vertices(l):
                self.assertTrue(rec.cone.contains(self.lp.polytope.vertices[v]))

    def test_literal_moved_onto_the_ridge_breaks_visibility(self):
        P = self.lp.polytope
        vertices = list(P.vertices)
        x1 = self.lp.literals(1)['x1']
        vertices[x1] = vertices[self.lp.roof(1)['zA']]
        moved = dataclasses.replace(
            self.lp, polytope=Polytope3(vertices=vertices, facets=P.facets, facet_planes=P.facet_planes)
        )
        self.assertNotEqual(check_visibility(moved), [])

    def test_flat_spine_breaks_convexity(self):
        P = self.lp.polytope
        vertices = list(P.vertices)
        lo, hi = vertices[0], vertices[2]
        y = self.lp.layout.u(1)
        vertices[1] = lo + (hi - lo) * ((y - lo.y) / (hi.y - lo.y))
        flat = dataclasses.replace(
            self.lp, polytope=Polytope3(vertices=vertices, facets=P.facets, facet_planes=P.facet_planes)
        )
        self.assertNotEqual(check_convexity(flat), [])


class UnsatisfiableBuildTests(BuildTests):
    formula = ONE_VARIABLE

    def test_vertex_count(self):
        self.assertEqual(self.lp.polytope.n, 52)


class LeftOfTests(SimpleTestCase):
    def test_negative_x_side(self):
        p, q, a = Point3(0, 0, 0), Point3(0, 1, 0), Point3(0, 0, 1)
        self.assertTrue(is_left_of(p, q, a, Point3(-1, 5, 5)))
        self.assertFalse(is_left_of(p, q, a, Point3(1, 0, 0)))
        self.assertFalse(is_left_of(p, q, a, Point3(0, 3, 3)))


@skipUnless(setting('FULL_SCALE_TESTS'), "full-scale builds are slow")
class FullScaleTests(SimpleTestCase):
    def test_example_formula(self):
        lp = build_logical_polytope(normalize(EXAMPLE_FORMULA), chain_length=None)
        self.assertEqual(lp.polytope.n, 2221)
        self.assertTrue(check_logical_conditions(lp).verdict)

    def test_unsatisfiable_single_variable(self):
        lp = build_logical_polytope(ONE_VARIABLE)
        self.assertEqual(lp.polytope.n, 580)
        report = check_logical_conditions(lp)
        self.assertTrue(report.passed(CONVEXITY))
        self.assertTrue(report.passed(VISIBILITY))
        self.assertTrue(report.passed(BLOCKING))
