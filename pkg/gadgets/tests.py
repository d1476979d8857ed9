import random
from fractions import Fraction

from django.test import SimpleTestCase

from geometry.corpus import cube
from geometry.exceptions import NoTriangulation
from geometry.kernel import Line3, Plane, Point3, plane_through, segment_meets_triangle_relint
from geometry.polytope import hull3, is_beyond
from geometry.triangulation import Triangulation, brute_min, tetra, validate

from .chains import attach_chain, chain_parameters
from .cones import make_visibility_cone
from .cupola import audit_cupola, build_cupola, cupola_region, triangulate_cupola
from .exceptions import (
    ApexNotInCone,
    ConeMissesFacet,
    EmptySight,
    LineMissesFacet,
    NotAFacetPair,
    NotSchonhardt,
    PlaneDoesNotSeparate,
    PlaneMissesFacetInterior,
)
from .frames import (
    A1,
    B2,
    CANONICAL_FRAME,
    DIAGONALS,
    HULL_FACETS,
    SchonhardtFrame,
    beyond_diagonal_edge,
    frame_search,
    is_schonhardt_position,
    sees_skylight,
    visibility_cone,
)

ORIGIN = Point3(0, 0, 0)
THIRD = Fraction(8, 3)


def host_tetrahedron():
    """Facet (1, 2, 3) lies on x + y + z = 8"""
    return hull3([ORIGIN, Point3(8, 0, 0), Point3(0, 8, 0), Point3(0, 0, 8)])


def sight_plane():
    return Plane(Point3(1, 1, -2), 0)


def marked_point():
    return Point3(THIRD, THIRD, THIRD)


class FrameTests(SimpleTestCase):
    def test_canonical_frame_is_valid(self):
        self.assertTrue(CANONICAL_FRAME.is_valid())

    def test_canonical_hull_is_the_twisted_octahedron(self):
        hull = CANONICAL_FRAME.hull()
        self.assertEqual(hull.n, 6)
        self.assertEqual(frozenset(frozenset(cycle) for cycle in hull.facets), HULL_FACETS)

    def test_untriangulable_without_diagonals(self):
        hull = CANONICAL_FRAME.hull()
        with self.assertRaises(NoTriangulation):
            brute_min(hull, forbidden_edges=DIAGONALS)
        self.assertEqual(brute_min(hull)[0], 4)

    def test_mirror_image_is_valid(self):
        mirrored = SchonhardtFrame.of([Point3(-p.x, p.y, p.z) for p in CANONICAL_FRAME.points])
        self.assertTrue(mirrored.is_valid())

    def test_rotated_skylight_labels_are_rejected(self):
        a1, a2, a3, b1, b2, b3 = CANONICAL_FRAME.points
        self.assertFalse(is_schonhardt_position([a1, a2, a3, b2, b3, b1]))

    def test_prism_is_not_schonhardt(self):
        points = [Point3(x, y, z) for z in (0, 1) for x, y in ((0, 0), (2, 0), (0, 2))]
        self.assertFalse(is_schonhardt_position(points))

    def test_require_valid(self):
        frame = SchonhardtFrame.of([(0, 0, 0), (2, 0, 0), (0, 2, 0), (0, 0, 1), (2, 0, 1), (0, 2, 1)])
        with self.assertRaises(NotSchonhardt):
            frame.require_valid()
        with self.assertRaises(NotSchonhardt):
            SchonhardtFrame.of([(0, 0, 0)] * 5)

    def test_frame_search_finds_the_canonical_frame(self):
        found = frame_search(6)
        self.assertIn(CANONICAL_FRAME, found)
        self.assertTrue(all(frame.is_valid() for frame in found))


class VisibilityConeTests(SimpleTestCase):
    def setUp(self):
        self.cone = visibility_cone(CANONICAL_FRAME)

    def test_first_plane_and_apex(self):
        self.assertEqual(self.cone.planes[0], Plane(Point3(-3, 1, 7), 4))
        fifth = Fraction(4, 5)
        self.assertEqual(self.cone.apex, Point3(fifth, fifth, fifth))

    def test_edge_lines_pass_through_the_skylight(self):
        for line, b in zip(self.cone.edge_lines(), (CANONICAL_FRAME.B1, CANONICAL_FRAME.B2, CANONICAL_FRAME.B3)):
            self.assertTrue(line.contains(b))

    def test_bottom_section_extends_to_the_bottom_triangle(self):
        bottom = plane_through(CANONICAL_FRAME.A1, CANONICAL_FRAME.A2, CANONICAL_FRAME.A3)
        d1, d2, d3 = self.cone.section(bottom)
        self.assertEqual(d1, Point3(Fraction(36, 19), Fraction(16, 19), Fraction(24, 19)))
        self.assertEqual(CANONICAL_FRAME.A1, d1 + (d1 - d3) * 2)
        self.assertEqual(CANONICAL_FRAME.A2, d2 + (d2 - d1) * 2)

    def test_reversed_labelling_is_the_same_cone(self):
        self.assertTrue(self.cone.reversed().same_cone(self.cone))
        self.assertEqual(self.cone.reversed().apex, self.cone.apex)

    def test_rays_enter_the_cone(self):
        apex = self.cone.apex
        for ray in self.cone.rays():
            self.assertFalse(self.cone.contains(apex + ray))
        inner = apex + self.cone.rays()[0] + self.cone.rays()[1] + self.cone.rays()[2]
        self.assertTrue(self.cone.contains(inner))

    def test_skylight_and_bottom_centroids_are_inside(self):
        self.assertTrue(self.cone.contains(Point3(Fraction(10, 3), Fraction(10, 3), Fraction(10, 3))))
        self.assertFalse(self.cone.contains(ORIGIN))


class SkylightTests(SimpleTestCase):
    def setUp(self):
        self.cone = visibility_cone(CANONICAL_FRAME)

    def test_points_in_the_cone_see_the_skylight(self):
        rng = random.Random(7)
        checked = 0
        while checked < 200:
            x = Point3(*(Fraction(rng.randint(-40, 120), 10) for _ in range(3)))
            if not self.cone.contains(x):
                continue
            self.assertTrue(sees_skylight(CANONICAL_FRAME, x), x)
            checked += 1

    def test_origin_is_blocked_by_a_diagonal(self):
        self.assertFalse(sees_skylight(CANONICAL_FRAME, ORIGIN))

    def test_skylight_plane_points_see_it(self):
        centroid = (CANONICAL_FRAME.B1 + CANONICAL_FRAME.B2 + CANONICAL_FRAME.B3) / 3
        self.assertTrue(sees_skylight(CANONICAL_FRAME, centroid))

    def test_beyond_a_diagonal_edge_means_blind(self):
        # just outside the edge A1 B2, on A1's side of the plane B1 A2 B3
        x = Point3(5, Fraction(9, 8), -1)
        hull = CANONICAL_FRAME.hull()
        self.assertTrue(is_beyond(hull, (A1, B2), x))
        plane = plane_through(CANONICAL_FRAME.B1, CANONICAL_FRAME.A2, CANONICAL_FRAME.B3)
        self.assertLess(plane.side(x) * plane.side(CANONICAL_FRAME.B2), 0)
        self.assertTrue(beyond_diagonal_edge(CANONICAL_FRAME, x))
        self.assertFalse(sees_skylight(CANONICAL_FRAME, x))

    def test_points_beyond_any_diagonal_edge_are_blind(self):
        rng = random.Random(11)
        along = CANONICAL_FRAME.B2 - CANONICAL_FRAME.A1
        outward = Point3(18, 6, -18)
        for _ in range(60):
            t = Fraction(rng.randint(1, 64), 512)
            s = Fraction(rng.randint(1, 64), 1024)
            x = CANONICAL_FRAME.A1 + along * t + outward * s
            for _ in range(3):
                with self.subTest(x=x):
                    self.assertTrue(beyond_diagonal_edge(CANONICAL_FRAME, x))
                    self.assertFalse(sees_skylight(CANONICAL_FRAME, x))
                x = Point3(x.z, x.x, x.y)

    def test_random_points_beyond_an_edge_never_see(self):
        rng = random.Random(5)
        along = CANONICAL_FRAME.B2 - CANONICAL_FRAME.A1
        outward = Point3(18, 6, -18)
        blind = 0
        for _ in range(400):
            t, s = Fraction(rng.randint(0, 64), 128), Fraction(rng.randint(0, 64), 256)
            x = CANONICAL_FRAME.A1 + along * t + outward * s
            if beyond_diagonal_edge(CANONICAL_FRAME, x):
                blind += 1
                self.assertFalse(sees_skylight(CANONICAL_FRAME, x), x)
        self.assertGreater(blind, 0)

    def test_interior_points_are_not_beyond_an_edge(self):
        centroid = (CANONICAL_FRAME.A1 + CANONICAL_FRAME.B3) / 2
        self.assertFalse(beyond_diagonal_edge(CANONICAL_FRAME, centroid))


class ChainTests(SimpleTestCase):
    def setUp(self):
        # a = 0, b = 1, q0 = 2, qend = 3
        self.P = hull3([Point3(0, 1, 2), Point3(0, 1, -2), Point3(-3, 0, 0), Point3(3, 0, 0)])
        self.G = Plane(Point3(1, 0, 0), 0)

    def test_parameters(self):
        self.assertEqual(chain_parameters(2), [Fraction(1, 8), Fraction(1, 4)])

    def test_two_point_chain(self):
        Q = attach_chain(self.P, 0, 1, 2, 3, self.G, 2)
        self.assertEqual(Q.n, 6)
        self.assertEqual(len(Q.facets), 8)
        self.assertEqual(Q.audit(), [])
        for q in (4, 5):
            x = Q.vertices[q]
            self.assertLess(x.x, 0)
            self.assertLess(x.y, 0)
            self.assertEqual(x.z, 0)
        lateral = [f for f in Q.facets if set(f) & {4, 5}]
        self.assertEqual(len(lateral), 6)

    def test_chain_triangles_fan_from_both_apexes(self):
        Q = attach_chain(self.P, 0, 1, 2, 3, self.G, 2)
        chain = [2, 4, 5, 3]
        for apex in (0, 1):
            for u, v in zip(chain, chain[1:]):
                Q.facet_index((apex, u, v))

    def test_original_edge_disappears(self):
        Q = attach_chain(self.P, 0, 1, 2, 3, self.G, 1)
        self.assertNotIn((2, 3), Q.edges())
        self.assertIn((0, 1), Q.edges())

    def test_zero_length_is_identity(self):
        self.assertIs(attach_chain(self.P, 0, 1, 2, 3, self.G, 0), self.P)

    def test_negative_length(self):
        with self.assertRaises(ValueError):
            attach_chain(self.P, 0, 1, 2, 3, self.G, -1)

    def test_plane_has_to_separate(self):
        with self.assertRaises(PlaneDoesNotSeparate):
            attach_chain(self.P, 0, 1, 2, 3, Plane(Point3(1, 0, 0), 5), 2)

    def test_facets_must_exist(self):
        with self.assertRaises(NotAFacetPair):
            attach_chain(cube(), 0, 7, 1, 3, self.G, 1)


class MakeVisibilityConeTests(SimpleTestCase):
    def test_single_sight_vertex(self):
        P = host_tetrahedron()
        cone = make_visibility_cone(P, (1, 2, 3), sight_plane())
        self.assertTrue(cone.contains(P.vertices[0]))
        for i in (1, 2, 3):
            self.assertFalse(cone.contains(P.vertices[i]))
        self.assertTrue(cone.meets_facet_interior(P, (1, 2, 3)))

    def test_marked_point_is_enclosed(self):
        P = host_tetrahedron()
        cone = make_visibility_cone(P, (1, 2, 3), sight_plane(), marked=[marked_point()])
        self.assertTrue(cone.contains(marked_point()))
        self.assertTrue(cone.contains(P.vertices[0]))
        self.assertTrue(cone.meets_facet_interior(P, (1, 2, 3)))

    def test_cube_top_with_two_sight_vertices(self):
        P = cube()
        top = (1, 3, 7, 5)
        cone = make_visibility_cone(P, top, Plane(Point3(0, 2, -1), 0))
        self.assertTrue(cone.contains(P.vertices[0]))
        self.assertTrue(cone.contains(P.vertices[4]))
        for i in (1, 2, 3, 5, 6, 7):
            self.assertFalse(cone.contains(P.vertices[i]))
        self.assertTrue(cone.meets_facet_interior(P, top))

    def test_empty_sight(self):
        with self.assertRaises(EmptySight):
            make_visibility_cone(host_tetrahedron(), (1, 2, 3), Plane(Point3(1, 1, -2), 1))

    def test_plane_missing_the_facet(self):
        with self.assertRaises(PlaneMissesFacetInterior):
            make_visibility_cone(host_tetrahedron(), (1, 2, 3), Plane(Point3(0, 0, 1), -1))

    def test_marked_point_off_the_plane(self):
        with self.assertRaises(PlaneMissesFacetInterior):
            make_visibility_cone(host_tetrahedron(), (1, 2, 3), sight_plane(), marked=[Point3(4, 2, 2)])


class CupolaTests(SimpleTestCase):
    m = 2

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        host = host_tetrahedron()
        cls.host = host
        cls.line = Line3.through(ORIGIN, marked_point())
        cls.cone = make_visibility_cone(host, (1, 2, 3), sight_plane(), marked=[marked_point()])
        cls.P, cls.rec = build_cupola(host, (1, 2, 3), cls.cone, cls.m, lines=[cls.line])

    def test_vertex_count_and_layout(self):
        self.assertEqual(self.P.n, 4 + 6 + 3 * self.m)
        self.assertEqual(self.rec.bottom, (4, 5, 6))
        self.assertEqual(self.rec.skylight, (7, 8, 9))
        self.assertEqual(self.P.vertices[:4], self.host.vertices)
        self.assertEqual(self.rec.chains[(1, 2)], (4, *range(10, 10 + self.m), 8))

    def test_polytope_and_record_are_sound(self):
        self.assertEqual(self.P.audit(), [])
        self.assertEqual(audit_cupola(self.P, self.rec), [])
        self.assertTrue(self.rec.frame.is_valid())
        self.assertTrue(self.rec.cone.same_cone(self.cone))

    def test_line_pierces_bottom_and_skylight(self):
        segment = (ORIGIN, Point3(4, 4, 4))
        for triangle in (self.rec.bottom, self.rec.skylight):
            points = tuple(self.P.vertices[i] for i in triangle)
            self.assertTrue(segment_meets_triangle_relint(segment, points))

    def test_host_facet_is_gone_and_others_stay(self):
        facets = {frozenset(f) for f in self.P.facets}
        self.assertNotIn(frozenset((1, 2, 3)), facets)
        for f in ((0, 1, 2), (0, 1, 3), (0, 2, 3)):
            self.assertIn(frozenset(f), facets)

    def test_small_triangulation_from_the_sight_vertex(self):
        tetras = triangulate_cupola(self.P, self.rec, 0)
        self.assertLessEqual(len(tetras), 3 * self.m + 16)
        region, index = cupola_region(self.P, self.rec, 0)
        T = Triangulation(region, frozenset(tetra(*(index[i] for i in t)) for t in tetras))
        self.assertTrue(validate(region, T).verdict)

    def test_apex_outside_the_cone(self):
        with self.assertRaises(ApexNotInCone):
            triangulate_cupola(self.P, self.rec, 1)

    def test_as_dict(self):
        data = self.rec.as_dict()
        self.assertEqual(data['m'], self.m)
        self.assertEqual(data['chains']['1,2'], [4, *range(10, 10 + self.m), 8])


class SingleChainCupolaTests(CupolaTests):
    m = 1


class CupolaPreconditionTests(SimpleTestCase):
    def test_cone_must_meet_the_facet(self):
        small = hull3([ORIGIN, Point3(1, 0, 0), Point3(0, 1, 0), Point3(0, 0, 1)])
        with self.assertRaises(ConeMissesFacet):
            build_cupola(small, (1, 2, 3), visibility_cone(CANONICAL_FRAME), 1)

    def test_line_must_meet_the_facet_inside_the_cone(self):
        host = host_tetrahedron()
        cone = make_visibility_cone(host, (1, 2, 3), sight_plane())
        with self.assertRaises(LineMissesFacet):
            build_cupola(host, (1, 2, 3), cone, 1, lines=[Line3.through(ORIGIN, Point3(1, 0, 0))])
