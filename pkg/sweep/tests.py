from unittest import skipUnless

from django.test import SimpleTestCase

from gadgets.cupola import triangulate_cupola
from geometry.conf import setting
from geometry.triangulation import Triangulation, tetra, validate
from reduction.cnf import Assignment, RestrictedFormula
from reduction.construction import build_logical_polytope
from reduction.exceptions import ApexOutsideCone, SkylightNotFound
from reduction.extract import extract_assignment, skylight_apex

from .builder import InterfaceState, size_report, sweep_triangulate
from .exceptions import UnsatisfiedAssignment

# X and Y share the two positive clauses; exactly one of them may be true
EXCLUSIVE = RestrictedFormula(2, ((1, 2), (1, 2), (-1, -2)))
TWO_VARIABLES = RestrictedFormula(2, ((1, 2), (1, -2), (-1, 2)))


class InterfaceTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.lp = build_logical_polytope(EXCLUSIVE, chain_length=1)

    def test_initial_interface_lies_on_the_boundary(self):
        roof = self.lp.roof(1)
        state = InterfaceState(apex=roof['zF'], back=roof['zR'])
        facets = {tuple(sorted(f)) for f in self.lp.polytope.facets}
        for triangle in state.triangles(self.lp):
            self.assertIn(triangle, facets)

    def test_closed_clause_contributes_one_segment(self):
        roof = self.lp.roof(1)
        state = InterfaceState(apex=roof['zF'], back=roof['zR'], satisfied={2})
        self.assertEqual(len(state.segments(self.lp)), 2 * self.lp.C - 1)
        self.assertIn((2, 4), state.segments(self.lp))


class SweepTests(SimpleTestCase):
    formula = EXCLUSIVE
    assignments = ("10", "01")

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.lp = build_logical_polytope(cls.formula, chain_length=1)
        cls.sweeps = {
            bits: sweep_triangulate(cls.lp, Assignment.from_bits(bits), check=False)
            for bits in cls.assignments
        }

    def test_sweeps_are_valid(self):
        for bits, T in self.sweeps.items():
            with self.subTest(bits=bits):
                report = validate(self.lp.polytope, T)
                self.assertEqual(report.failures, [])

    def test_round_trip(self):
        for bits, T in self.sweeps.items():
            with self.subTest(bits=bits):
                result = extract_assignment(self.lp, T)
                self.assertEqual(result.assignment.as_bits(), bits)
                self.assertTrue(result.satisfies)
                self.assertEqual(result.as_dict(), {"assignment": bits, "satisfies": True})

    def test_clause_skylights_see_true_literals(self):
        for bits, T in self.sweeps.items():
            assignment = Assignment.from_bits(bits)
            for l in range(1, self.lp.C + 1):
                apex = skylight_apex(T, self.lp.clause_cupola(l))
                (i, slot), = [
                    (i, slot) for i, slot in self.formula.clause_literals(l) if self.lp.literals(i)[slot] == apex
                ]
                self.assertEqual(assignment[i], slot != 'x3bar')

    def test_size_is_reported(self):
        for T in self.sweeps.values():
            report = size_report(self.lp, T)
            self.assertEqual(report['size'], len(T))
            self.assertEqual(report['K'], self.lp.params.K)
            self.assertEqual(report['within_K'], len(T) <= self.lp.params.K)

    def test_size_within_ceiling(self):
        prm = self.lp.params
        for bits, T in self.sweeps.items():
            with self.subTest(bits=bits):
                report = size_report(self.lp, T)
                self.assertTrue(report['within_ceiling'])
                self.assertLessEqual(report['size'], prm.sweep_ceiling)
                self.assertLessEqual(report['cupola_tetras'], prm.cupola_bound * (prm.C + prm.V))
                self.assertLessEqual(report['interface_tetras'], prm.V * (6 * prm.C + 12))
                self.assertEqual(report['cupola_tetras'] + report['interface_tetras'], len(T))

    def test_every_cupola_within_its_bound(self):
        records = [self.lp.variable_cupola(i) for i in range(1, self.lp.V + 1)]
        records += [self.lp.clause_cupola(l) for l in range(1, self.lp.C + 1)]
        for T in self.sweeps.values():
            for rec in records:
                cupola = triangulate_cupola(self.lp.polytope, rec, skylight_apex(T, rec))
                self.assertLessEqual(len(cupola), self.lp.params.cupola_bound)
                self.assertTrue(set(cupola) <= T.tetras)

    def test_unsatisfying_assignment(self):
        for bits in ("00", "11"):
            if Assignment.from_bits(bits).satisfies(self.formula):
                continue
            with self.assertRaises(UnsatisfiedAssignment):
                sweep_triangulate(self.lp, Assignment.from_bits(bits))


class AllTrueSweepTests(SweepTests):
    formula = TWO_VARIABLES
    assignments = ("11",)


class ExtractionErrorTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.lp = build_logical_polytope(EXCLUSIVE, chain_length=1)
        cls.T = sweep_triangulate(cls.lp, Assignment.from_bits("10"), check=False)

    def _on_skylight(self):
        rec = self.lp.variable_cupola(1)
        (on_skylight,) = self.T.containing(rec.skylight)
        return rec, on_skylight

    def test_missing_skylight_tetrahedron(self):
        _, on_skylight = self._on_skylight()
        broken = Triangulation(self.lp.polytope, self.T.tetras - {on_skylight})
        with self.assertRaises(SkylightNotFound):
            extract_assignment(self.lp, broken)

    def test_chain_vertex_as_apex(self):
        rec, on_skylight = self._on_skylight()
        chain_vertex = rec.chain_points()[0]
        broken = Triangulation(
            self.lp.polytope, (self.T.tetras - {on_skylight}) | {tetra(chain_vertex, *rec.skylight)}
        )
        with self.assertRaises(ApexOutsideCone):
            extract_assignment(self.lp, broken)


@skipUnless(setting('FULL_SCALE_TESTS'), "full-scale builds are slow")
class FullScaleSweepTests(SimpleTestCase):
    def test_two_variables_all_true(self):
        lp = build_logical_polytope(TWO_VARIABLES)
        self.assertEqual(lp.params.K, 1073)
        T = sweep_triangulate(lp, Assignment.from_bits("11"))
        result = extract_assignment(lp, T)
        self.assertEqual(result.assignment.as_bits(), "11")
        self.assertTrue(result.satisfies)
