import json
import shutil
import tempfile
from fractions import Fraction
from io import StringIO
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase, override_settings

from geometry.corpus import cube, octahedron, tetrahedron, triangular_prism
from geometry.triangulation import Triangulation, cone_triangulation
from reduction.cnf import Assignment, RestrictedFormula, normalize
from reduction.construction import build_logical_polytope
from sweep.builder import sweep_triangulate

from .exceptions import DimacsSyntaxError, FileFormatError, HeaderMismatch, TautologicalClause
from .fileformats import (
    ROLES_FILE,
    dump_edge_list,
    dump_polytope,
    dump_role_map,
    dump_triangulation,
    format_rational,
    load_build,
    load_edge_list,
    load_graph,
    load_polytope,
    load_role_map,
    load_triangulation,
    parse_dimacs,
    parse_rational,
    save_build,
    write_off,
)
from .models import ConstructionRun
from .run_service import process_run

EXCLUSIVE_CNF = "c X or Y twice, never both\np cnf 2 3\n1 2 0\n1 2 0\n-1 -2 0\n"
EXCLUSIVE = RestrictedFormula(2, ((1, 2), (1, 2), (-1, -2)))
EXAMPLE_CNF = "p cnf 4 3\n1 -2 3 -4 0\n-1 2 -3 4 0\n1 2 3 4 0\n"


class RationalTests(SimpleTestCase):
    def test_format(self):
        self.assertEqual(format_rational(3), "3")
        self.assertEqual(format_rational(Fraction(-6, 4)), "-3/2")

    def test_parse_is_strict(self):
        self.assertEqual(parse_rational("-7/12"), -parse_rational("7/12"))
        for token in ("2/4", "1.5", "1/-2", "-0", "+1", "1/0", "0/5"):
            with self.subTest(token=token), self.assertRaises(FileFormatError):
                parse_rational(token)


class DimacsTests(SimpleTestCase):
    def test_single_unit_clause(self):
        f = parse_dimacs("p cnf 1 1\n1 0\n")
        self.assertEqual((f.V, f.clauses), (1, ((1,),)))

    def test_tautology(self):
        with self.assertRaises(TautologicalClause) as ctx:
            parse_dimacs("p cnf 2 1\n1 -1 0\n")
        self.assertEqual(ctx.exception.line, 2)

    def test_comments_spanning_clauses_and_duplicates(self):
        f = parse_dimacs("c first\np cnf 3 2\n1 2\n 2 -3 0\n3 3 0\n%\n0\n")
        self.assertEqual(f.clauses, ((1, 2, -3), (3,)))

    def test_header_mismatch(self):
        with self.assertRaises(HeaderMismatch):
            parse_dimacs("p cnf 2 2\n1 2 0\n")
        with self.assertRaises(HeaderMismatch):
            parse_dimacs("p cnf 2 1\n1 3 0\n")

    def test_syntax_errors(self):
        for text, line in (
            ("1 2 0\n", 1),
            ("p cnf 2 1\n1 x 0\n", 2),
            ("p dnf 2 1\n1 0\n", 1),
            ("p cnf 2 1\n1 2\n", 2),
        ):
            with self.subTest(text=text), self.assertRaises(DimacsSyntaxError) as ctx:
                parse_dimacs(text)
            self.assertEqual(ctx.exception.line, line)

    def test_example_formula_is_already_restricted(self):
        f = parse_dimacs(EXAMPLE_CNF)
        self.assertEqual((f.C, f.V), (3, 4))
        self.assertEqual(normalize(f).clauses, f.clauses)

    def test_as_dimacs_reads_back(self):
        self.assertEqual(parse_dimacs(EXCLUSIVE.as_dimacs()).clauses, EXCLUSIVE.clauses)


class PolytopeFileTests(SimpleTestCase):
    def test_round_trip(self):
        for P in (tetrahedron(), cube(), octahedron(), triangular_prism(), cube(side=3)):
            text = dump_polytope(P)
            loaded = load_polytope(text)
            self.assertEqual(loaded, P)
            self.assertEqual(dump_polytope(loaded), text)

    def test_cube_layout(self):
        lines = dump_polytope(cube()).splitlines()
        self.assertEqual(lines[0], "polytope3 8 6")
        self.assertEqual(lines[1 + 7], "v 1 1 1")
        self.assertTrue(all(line.startswith("f 4 ") for line in lines[9:]))

    def test_bad_files(self):
        good = dump_polytope(tetrahedron())
        for bad in (
            good.replace("polytope3 4 4", "polytope3 5 4"),
            good.replace("f 3 ", "f 4 ", 1),
            good + "v 0 0 0\n",
            "polytope3 4 1\nv 0 0 0\nv 1 0 0\nv 0 1 0\nv 0 0 1\nf 3 0 1 9\n",
        ):
            with self.subTest(bad=bad), self.assertRaises(FileFormatError):
                load_polytope(bad)

    def test_off_is_float(self):
        lines = write_off(octahedron()).splitlines()
        self.assertEqual(lines[:2], ["OFF", "6 8 0"])
        self.assertEqual(len(lines), 2 + 6 + 8)


class TriangulationFileTests(SimpleTestCase):
    def test_round_trip(self):
        P = cube()
        T = cone_triangulation(P, 0)
        text = dump_triangulation(T)
        self.assertEqual(text.splitlines()[0], "triangulation 6")
        self.assertEqual(load_triangulation(text, P).tetras, T.tetras)
        self.assertEqual(dump_triangulation(load_triangulation(text, P)), text)

    def test_rejects_unsorted_repeated_and_foreign(self):
        P = cube()
        for bad in (
            "triangulation 1\nt 1 0 2 4\n",
            "triangulation 2\nt 0 1 2 4\nt 0 1 2 4\n",
            "triangulation 1\nt 0 1 2 8\n",
            "triangulation 2\nt 0 1 2 4\n",
        ):
            with self.subTest(bad=bad), self.assertRaises(FileFormatError):
                load_triangulation(bad, P)


class GraphFileTests(SimpleTestCase):
    def test_edge_list(self):
        g = octahedron().skeleton()
        text = dump_edge_list(g)
        self.assertTrue(text.startswith("graph 6 12\n"))
        loaded = load_edge_list(text)
        self.assertEqual(sorted(map(sorted, loaded.edges)), sorted(map(sorted, g.edges)))
        self.assertEqual(dump_edge_list(loaded), text)

    def test_load_graph_accepts_both(self):
        self.assertEqual(load_graph(dump_polytope(cube())).number_of_edges(), 12)
        self.assertEqual(load_graph("graph 3 2\ne 0 1\ne 1 2\n").number_of_edges(), 2)
        with self.assertRaises(FileFormatError):
            load_graph("triangulation 0\n")
        with self.assertRaises(FileFormatError):
            load_edge_list("graph 2 1\ne 1 1\n")


class BuildDirectoryTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.tmp = Path(tempfile.mkdtemp())
        cls.lp = build_logical_polytope(normalize(parse_dimacs(EXCLUSIVE_CNF)), chain_length=1)
        cls.directory = save_build(cls.lp, cls.tmp / "exclusive")
        cls.roles = (cls.directory / ROLES_FILE).read_text()

    @classmethod
    def tearDownClass(cls):
        shutil.rmtree(cls.tmp)
        super().tearDownClass()

    def test_files(self):
        names = sorted(p.name for p in self.directory.iterdir())
        self.assertEqual(names, ['formula.cnf', 'params.json', 'polytope.poly', 'roles.txt'])
        summary = json.loads((self.directory / 'params.json').read_text())
        self.assertEqual((summary['m'], summary['n'], summary['K']), (1, 68, self.lp.params.K))
        self.assertTrue(summary['chain_override'])

    def test_role_map_records(self):
        lines = self.roles.splitlines()
        self.assertEqual(lines[:4], ["param C 3", "param V 2", "param m 1", f"param K {self.lp.params.K}"])
        self.assertIn("spine 6 6", lines)
        self.assertEqual(sum(line.startswith("cupola ") for line in lines), 3 * 5)
        self.assertEqual(sum(line.startswith("cone ") for line in lines), 3 * 5)
        self.assertEqual(sum(line.startswith("host ") for line in lines), 5)

    def test_round_trip(self):
        loaded = load_build(self.directory)
        self.assertEqual(dump_role_map(loaded), self.roles)
        self.assertEqual(dump_polytope(loaded.polytope), dump_polytope(self.lp.polytope))
        self.assertEqual(loaded.params, self.lp.params)
        self.assertEqual(loaded.formula, self.lp.formula)
        self.assertEqual(loaded.formula.origin, self.lp.formula.origin)
        self.assertEqual(loaded.variable_cupolas, self.lp.variable_cupolas)
        self.assertEqual(loaded.clause_cupolas, self.lp.clause_cupolas)
        self.assertEqual(loaded.roles(), self.lp.roles())

    def test_loaded_build_sweeps_the_same(self):
        loaded = load_build(self.directory)
        bits = Assignment.from_bits("10")
        self.assertEqual(
            sweep_triangulate(loaded, bits, check=False).tetras,
            sweep_triangulate(self.lp, bits, check=False).tetras,
        )

    def test_corrupted_role_maps(self):
        P = self.lp.polytope
        cone_line = next(line for line in self.roles.splitlines() if line.startswith("cone "))
        for bad in (
            self.roles.replace("spine 1 1\n", "spine 1 2\n"),
            self.roles.replace(cone_line + "\n", "", 1),
            self.roles.replace("param m 1\n", "param m 2\n"),
            self.roles + "gable 1 2 3\n",
            self.roles.replace("literal 1 1 ", "literal 1 4 "),
        ):
            with self.assertRaises(FileFormatError):
                load_role_map(bad, self.lp.formula, P)


@override_settings(LOGICPOLY={'CHAIN_LENGTH': 1, 'BRUTE_MIN_WORKERS': 1})
class CommandTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.tmp = Path(tempfile.mkdtemp())
        cls.cnf = cls.tmp / "exclusive.cnf"
        cls.cnf.write_text(EXCLUSIVE_CNF)
        cls.build = cls.tmp / "build"
        for name, P in (('cube', cube()), ('octahedron', octahedron()), ('prism', triangular_prism()),
                        ('tetrahedron', tetrahedron())):
            (cls.tmp / f"{name}.poly").write_text(dump_polytope(P))
        call_command('build', str(cls.cnf), output=str(cls.build), stdout=StringIO())

    @classmethod
    def tearDownClass(cls):
        shutil.rmtree(cls.tmp)
        super().tearDownClass()

    def call(self, *args, **options):
        out = StringIO()
        call_command(*args, stdout=out, **options)
        return out.getvalue()

    def write_cnf(self, name, text):
        path = self.tmp / name
        path.write_text(text)
        return str(path)

    def test_build_prints_the_parameters(self):
        out = self.call('build', str(self.cnf), output=str(self.tmp / "again"), chain_length=1, off=True)
        self.assertIn("n=68 m=1 K=", out)
        self.assertTrue((self.tmp / "again" / "polytope.off").exists())

    def test_check(self):
        data = json.loads(self.call('check_conditions', str(self.build), format='json'))
        self.assertTrue(data['verdict'])
        self.assertIn("convexity: pass", self.call('check_conditions', str(self.build)).lower())

    def test_sweep_verify_extract(self):
        for bits in ("10", "01"):
            with self.subTest(bits=bits):
                tri = self.tmp / f"sweep-{bits}.tri"
                out = self.call('sweep', str(self.build), assignment=bits, output=str(tri))
                self.assertIn("size<=K: ", out)
                self.assertIn("size<=ceiling: yes", out)
                self.assertIn("valid: yes", self.call('verify', str(self.build / "polytope.poly"), str(tri)))
                out = self.call('extract', str(self.build), str(tri))
                self.assertIn(f"assignment: {bits}", out)
                self.assertIn("satisfies: yes", out)
                data = json.loads(self.call('extract', str(self.build), str(tri), format='json'))
                self.assertEqual((data['assignment'], data['satisfies']), (bits, True))

    def test_sweep_rejects_bad_assignments(self):
        with self.assertRaises(CommandError) as ctx:
            self.call('sweep', str(self.build), assignment="1")
        self.assertEqual(ctx.exception.returncode, 4)
        with self.assertRaises(CommandError) as ctx:
            self.call('sweep', str(self.build), assignment="11")
        self.assertEqual(ctx.exception.returncode, 1)

    def test_verify_reports_failures(self):
        P = cube()
        T = cone_triangulation(P, 0)
        broken = Triangulation(P, frozenset(sorted(T.tetras)[1:]))
        tri = self.tmp / "broken.tri"
        tri.write_text(dump_triangulation(broken))
        with self.assertRaises(CommandError) as ctx:
            self.call('verify', str(self.tmp / "cube.poly"), str(tri))
        self.assertEqual(ctx.exception.returncode, 4)

    def test_normalize_exit_codes(self):
        out = self.call('normalize', self.write_cnf("example.cnf", EXAMPLE_CNF), format='json')
        self.assertFalse(json.loads(out)['changed'])
        with self.assertRaises(CommandError) as ctx:
            self.call('normalize', self.write_cnf("three.cnf", "p cnf 1 4\n1 0\n1 0\n1 0\n-1 0\n"))
        self.assertEqual(ctx.exception.returncode, 2)
        with self.assertRaises(CommandError) as ctx:
            self.call('normalize', self.write_cnf("pure.cnf", "p cnf 1 1\n1 0\n"))
        self.assertEqual(ctx.exception.returncode, 3)
        with self.assertRaises(CommandError) as ctx:
            self.call('normalize', self.write_cnf("taut.cnf", "p cnf 2 1\n1 -1 0\n"))
        self.assertEqual(ctx.exception.returncode, 1)

    def test_stacked(self):
        self.assertIn("stacked: yes", self.call('stacked', str(self.tmp / "cube.poly")))
        out = self.call('stacked', str(self.tmp / "octahedron.poly"), minor=True)
        self.assertIn("stacked: no", out)
        self.assertIn("minor: Octahedron", out)
        tri = self.tmp / "prism-stacked.tri"
        data = json.loads(self.call('stacked', str(self.tmp / "prism.poly"), triangulate=str(tri), format='json'))
        self.assertEqual(data['triangulation']['size'], 3)
        self.assertIn("valid: yes", self.call('verify', str(self.tmp / "prism.poly"), str(tri)))

    def test_minsearch(self):
        self.assertIn("size: 1", self.call('minsearch', str(self.tmp / "tetrahedron.poly")))
        data = json.loads(self.call('minsearch', str(self.tmp / "octahedron.poly"), deterministic=True,
                                    format='json'))
        self.assertEqual(data['size'], 4)
        self.assertEqual(data['bounds']['lower'], 3)

    def test_cone_approx(self):
        tri = self.tmp / "cone.tri"
        self.assertIn("size: 6", self.call('cone_approx', str(self.tmp / "cube.poly"), apex=0, output=str(tri)))
        self.assertIn("valid: yes", self.call('verify', str(self.tmp / "cube.poly"), str(tri)))
        with self.assertRaises(CommandError):
            self.call('cone_approx', str(self.tmp / "cube.poly"), apex=8)


class ConstructionRunTests(TestCase):
    def setUp(self):
        self.tmp = tempfile.mkdtemp()
        self.addCleanup(shutil.rmtree, self.tmp)

    def process(self, formula, chain_length=1):
        run = ConstructionRun.objects.create(formula=formula, chain_length=chain_length)
        with override_settings(LOGICPOLY={'OUTPUT_ROOT': self.tmp, 'BRUTE_MIN_WORKERS': 1}):
            ok = process_run(run)
        run.refresh_from_db()
        return ok, run

    def test_completed_run(self):
        ok, run = self.process(EXCLUSIVE_CNF)
        self.assertTrue(ok)
        self.assertEqual(run.status, 'completed')
        self.assertEqual((run.C, run.V, run.m, run.n), (3, 2, 1, 68))
        self.assertIsNotNone(run.completed_at)
        self.assertTrue(run.conditions['verdict'])
        self.assertEqual(load_build(run.output_dir).params.n, 68)

    def test_failed_run(self):
        ok, run = self.process("p cnf 1 1\n1 0\n")
        self.assertFalse(ok)
        self.assertEqual(run.status, 'failed')
        self.assertIn("discarded", run.error_message)

    def test_views(self):
        _, done = self.process(EXCLUSIVE_CNF)
        pending = ConstructionRun.objects.create(formula=EXCLUSIVE_CNF)

        runs = self.client.get('/runs/').json()['runs']
        self.assertEqual([r['id'] for r in runs], [pending.id, done.id])
        self.assertEqual(len(self.client.get('/runs/?status=pending').json()['runs']), 1)
        self.assertEqual(self.client.get(f'/runs/{done.id}/').json()['n'], 68)
        self.assertTrue(self.client.get(f'/runs/{done.id}/conditions/').json()['verdict'])
        self.assertEqual(self.client.get(f'/runs/{pending.id}/conditions/').status_code, 409)
        self.assertEqual(self.client.get('/runs/999/').status_code, 404)
        self.assertEqual(self.client.post('/runs/').status_code, 405)
