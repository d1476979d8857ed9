import networkx as nx
from django.test import SimpleTestCase

from geometry.corpus import cube, octahedron, pentagonal_prism, random_stacked, tetrahedron, triangular_prism
from geometry.triangulation import brute_min, validate

from .exceptions import Disconnected, NonRealizableCut
from .minors import ForbiddenMinor, forbidden_minor, has_minor, octahedron_graph, pentagonal_prism_graph
from .recognizer import StackedCertificate, is_stacked, is_stacked_graph, stacked_triangulation

CORPUS = {
    'tetrahedron': tetrahedron,
    'cube': cube,
    'octahedron': octahedron,
    'triangular prism': triangular_prism,
    'pentagonal prism': pentagonal_prism,
}


class RecognizerTests(SimpleTestCase):
    def test_k4_is_a_leaf(self):
        cert = is_stacked_graph(nx.complete_graph(4))
        self.assertTrue(cert.is_leaf)
        self.assertEqual(cert.vertices, (0, 1, 2, 3))

    def test_cube_is_stacked(self):
        cert = is_stacked_graph(cube().skeleton())
        self.assertIsNotNone(cert)
        self.assertEqual(len(list(cert.leaves())), 5)

    def test_octahedron_is_not_stacked(self):
        self.assertIsNone(is_stacked_graph(octahedron().skeleton()))
        self.assertFalse(is_stacked(octahedron()))

    def test_pentagonal_prism_is_not_stacked(self):
        self.assertIsNone(is_stacked_graph(pentagonal_prism().skeleton()))

    def test_disconnected(self):
        with self.assertRaises(Disconnected):
            is_stacked_graph(nx.Graph([(0, 1), (2, 3)]))

    def test_certificate_as_dict(self):
        data = is_stacked_graph(triangular_prism().skeleton()).as_dict()
        self.assertEqual(len(data['separator']), 3)
        self.assertEqual(len(data['children']), 2)


class StackedTriangulationTests(SimpleTestCase):
    def check_size(self, P):
        T = stacked_triangulation(P, is_stacked_graph(P.skeleton()))
        self.assertTrue(validate(P, T).verdict)
        self.assertEqual(len(T), P.n - 3)
        return T

    def test_tetrahedron(self):
        self.check_size(tetrahedron())

    def test_cube(self):
        self.check_size(cube())

    def test_triangular_prism(self):
        self.check_size(triangular_prism())

    def test_random_stacked(self):
        for stackings in range(1, 26, 4):
            with self.subTest(stackings=stackings):
                P = random_stacked(stackings, seed=stackings)
                self.assertEqual(P.n, 4 + stackings)
                self.check_size(P)

    def test_brute_min_agrees_on_small_instances(self):
        for stackings in (1, 2, 3):
            P = random_stacked(stackings, seed=7)
            size, _ = brute_min(P)
            self.assertEqual(size, P.n - 3)

    def test_octahedron_needs_more(self):
        size, _ = brute_min(octahedron())
        self.assertEqual(size, 4)

    def test_flat_leaf_is_rejected(self):
        P = cube()
        with self.assertRaises(NonRealizableCut):
            stacked_triangulation(P, StackedCertificate(vertices=(0, 1, 2, 3)))


class MinorTests(SimpleTestCase):
    def test_patterns_are_their_own_minors(self):
        self.assertEqual(forbidden_minor(octahedron_graph()), ForbiddenMinor.OCTAHEDRON)
        self.assertEqual(forbidden_minor(pentagonal_prism_graph()), ForbiddenMinor.PENTAGONAL_PRISM)

    def test_k4_has_none(self):
        self.assertIsNone(forbidden_minor(nx.complete_graph(4)))

    def test_octahedron_is_a_minor_of_k6(self):
        self.assertTrue(has_minor(nx.complete_graph(6), octahedron_graph()))

    def test_octahedron_survives_a_subdivision(self):
        g = octahedron_graph()
        g.remove_edge(0, 2)
        g.add_edges_from([(0, 'mid'), ('mid', 2)])
        self.assertTrue(has_minor(nx.convert_node_labels_to_integers(g), octahedron_graph()))

    def test_recognizer_agrees_with_the_minors(self):
        polytopes = {name: make() for name, make in CORPUS.items()}
        polytopes.update({f"stacked {s}": random_stacked(s, seed=s) for s in (1, 2, 3, 4)})
        for name, P in polytopes.items():
            with self.subTest(polytope=name):
                g = P.skeleton()
                self.assertEqual(is_stacked_graph(g) is None, forbidden_minor(g) is not None)
