import random
from fractions import Fraction

import networkx as nx
from django.test import SimpleTestCase

from .corpus import cube, drum, octahedron, random_stacked, tetrahedron, triangular_prism
from .exceptions import (
    CollinearPoints,
    ConvexityViolation,
    DegenerateInput,
    DegenerateSpan,
    DegenerateTetrahedron,
    DegenerateTriangle,
    DuplicateParameters,
    NonPositiveAtZero,
    NoTriangulation,
    ParallelElements,
    TooLarge,
    UnknownFace,
)
from .kernel import (
    EPS,
    Line3,
    Plane,
    Point3,
    PolyPoint,
    Sign,
    UniPoly,
    choose_eps,
    circuit5,
    dyadic_floor,
    eps_threshold,
    eps_threshold_all,
    gp_holds,
    gp_signs_consistent,
    line_plane_point,
    orient4,
    parabola_through,
    plane_through,
    planes_line,
    planes_point,
    segment_meets_tetra,
    segment_meets_triangle_relint,
    tetra_open_intersect,
    tetras_disjoint,
)
from .polytope import PolytopeBuilder, attach_check, glue_beyond, hull3, is_beyond, skeleton, volume
from .triangulation import (
    BAD_PAIR,
    VOLUME_MISMATCH,
    Triangulation,
    brute_min,
    cone_triangulation,
    proper_pair,
    size_bounds,
    validate,
)


def random_point(rng, bound=20, den=4):
    return Point3(*(Fraction(rng.randint(-bound, bound), rng.randint(1, den)) for _ in range(3)))


def random_poly(rng, degree=8, size=10 ** 6):
    coefficients = [Fraction(rng.randint(1, size), rng.randint(1, 50))]
    coefficients += [Fraction(rng.randint(-size, size), rng.randint(1, 50)) for _ in range(rng.randint(0, degree))]
    return UniPoly(coefficients)


STANDARD = [Point3(0, 0, 0), Point3(1, 0, 0), Point3(0, 1, 0), Point3(0, 0, 1)]


class OrientationTests(SimpleTestCase):
    def test_standard_simplex_is_positive(self):
        self.assertEqual(orient4(*STANDARD), Sign.POS)

    def test_coplanar_points_give_zero(self):
        self.assertEqual(orient4(Point3(0, 0, 0), Point3(1, 0, 0), Point3(0, 1, 0), Point3(3, 5, 0)), Sign.ZERO)

    def test_swap_flips_sign(self):
        p1, p2, p3, p4 = STANDARD
        self.assertEqual(orient4(p2, p1, p3, p4), Sign.NEG)

    def test_orient_is_alternating(self):
        rng = random.Random(11)
        for _ in range(1000):
            pts = [random_point(rng) for _ in range(4)]
            base = orient4(*pts)
            i, j = rng.sample(range(4), 2)
            swapped = list(pts)
            swapped[i], swapped[j] = swapped[j], swapped[i]
            self.assertEqual(orient4(*swapped), -base)


class GrassmannPlueckerTests(SimpleTestCase):
    def test_identity_on_random_configurations(self):
        rng = random.Random(7)
        for _ in range(10000):
            pts = [random_point(rng, bound=6, den=3) for _ in range(6)]
            self.assertTrue(gp_holds(*pts))

    def test_all_coplanar_takes_zero_branch(self):
        pts = [Point3(x, y, 0) for x, y in ((0, 0), (1, 0), (0, 1), (2, 3), (5, 1), (4, 4))]
        self.assertTrue(gp_holds(*pts))

    def test_corrupted_sign_triple_is_rejected(self):
        self.assertFalse(gp_signs_consistent((1, 1, 0)))
        self.assertFalse(gp_signs_consistent((-1, 0, 0)))
        self.assertTrue(gp_signs_consistent((1, -1, 0)))


class CircuitTests(SimpleTestCase):
    def test_centroid_against_vertices(self):
        circuit = circuit5(*STANDARD, Point3(Fraction(1, 4), Fraction(1, 4), Fraction(1, 4)))
        parts = {circuit.positive, circuit.negative}
        self.assertEqual(parts, {(4,), (0, 1, 2, 3)})

    def test_crossing_diagonals_leave_fifth_point_out(self):
        pts = [Point3(0, 0, 0), Point3(2, 2, 2), Point3(2, 0, 0), Point3(0, 2, 2), Point3(7, -3, 11)]
        circuit = circuit5(*pts)
        self.assertEqual(circuit.signs[4], Sign.ZERO)
        self.assertEqual({circuit.positive, circuit.negative}, {(0, 1), (2, 3)})

    def test_identically_zero_returns_none(self):
        pts = [Point3(i, 0, 0) for i in range(5)]
        self.assertIsNone(circuit5(*pts))

    def test_convex_position_split(self):
        pts = [Point3(0, 0, 0), Point3(4, 0, 0), Point3(0, 4, 0), Point3(0, 0, 4), Point3(3, 3, 3)]
        circuit = circuit5(*pts)
        sizes = sorted((len(circuit.positive), len(circuit.negative)))
        self.assertIn(sizes, ([2, 3], [1, 4]))
        self.assertTrue(all(sizes))

    def test_witness_lies_in_both_hulls(self):
        rng = random.Random(3)
        for _ in range(200):
            pts = [random_point(rng, bound=5, den=2) for _ in range(5)]
            circuit = circuit5(*pts)
            if circuit is None:
                continue
            self.assertEqual(circuit.witness(pts), circuit.negated().witness(pts))


class EpsilonTests(SimpleTestCase):
    def test_constant_polynomial(self):
        self.assertEqual(eps_threshold(UniPoly([1])), 1)

    def test_linear_polynomial(self):
        self.assertEqual(eps_threshold(UniPoly([1, -4])), Fraction(1, 8))

    def test_quadratic_polynomial(self):
        self.assertEqual(eps_threshold(UniPoly([2, 3, -5])), Fraction(1, 8))

    def test_non_positive_constant_term(self):
        with self.assertRaises(NonPositiveAtZero):
            eps_threshold(UniPoly([0, 1]))

    def test_threshold_all(self):
        self.assertEqual(eps_threshold_all([UniPoly([1, -4]), UniPoly([2, 3, -5])]), Fraction(1, 8))
        self.assertEqual(eps_threshold_all([UniPoly([1])]), 1)
        self.assertEqual(eps_threshold_all([]), 1)

    def test_threshold_all_reports_index(self):
        with self.assertRaises(NonPositiveAtZero) as ctx:
            eps_threshold_all([UniPoly([1]), UniPoly([1, 2]), UniPoly([-1])])
        self.assertEqual(ctx.exception.index, 2)

    def test_random_polynomials_stay_positive(self):
        rng = random.Random(5)
        for _ in range(1000):
            p = random_poly(rng)
            r = eps_threshold(p)
            for eps in (r, r / 2, r / 10, r / 10 ** 6):
                self.assertGreater(p(eps), 0)

    def test_joint_threshold_on_grid(self):
        rng = random.Random(6)
        polys = [random_poly(rng, degree=5, size=1000) for _ in range(100)]
        r = eps_threshold_all(polys)
        for k in range(1, 51):
            eps = r * k / 50
            self.assertTrue(all(p(eps) > 0 for p in polys))

    def test_polynomial_arithmetic(self):
        self.assertEqual((1 + EPS) * (1 - EPS), UniPoly([1, 0, -1]))
        self.assertEqual((EPS * EPS).lowest_order(), (2, UniPoly([1])))

    def test_dyadic_floor(self):
        self.assertEqual(dyadic_floor(Fraction(1, 3)), Fraction(1, 4))
        self.assertEqual(dyadic_floor(Fraction(1, 4)), Fraction(1, 4))
        self.assertEqual(dyadic_floor(Fraction(5, 4)), 1)

    def test_choose_eps_handles_vanishing_requirements(self):
        eps = choose_eps([EPS * (1 - 8 * EPS), UniPoly([3, -1])])
        self.assertEqual(eps, Fraction(1, 16))

    def test_poly_point_evaluation(self):
        p = PolyPoint.lift(Point3(1, 2, 3)) + PolyPoint(EPS, UniPoly(), EPS * EPS)
        self.assertEqual(p.at(Fraction(1, 2)), Point3(Fraction(3, 2), 2, Fraction(13, 4)))


class ParabolaTests(SimpleTestCase):
    def test_interpolates_middle_point(self):
        curve = parabola_through(Point3(0, 0, 0), Point3(1, 1, 0), Point3(2, 0, 0), 0, Fraction(1, 2), 1)
        self.assertEqual(curve.eval(Fraction(1, 2)), Point3(1, 1, 0))
        self.assertEqual(curve.eval(0), Point3(0, 0, 0))
        self.assertEqual(curve.eval(1), Point3(2, 0, 0))

    def test_samples_are_coplanar(self):
        p0, p1, p2 = Point3(1, 2, 3), Point3(4, -1, 2), Point3(0, 5, -2)
        curve = parabola_through(p0, p1, p2, 0, 1, 3)
        for t in (0, Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), 1):
            self.assertEqual(orient4(p0, p1, p2, curve.eval(t)), Sign.ZERO)

    def test_chord_planes_separate_the_arc(self):
        p0, p1, p2 = Point3(0, 0, 0), Point3(2, 3, 1), Point3(4, 0, 2)
        curve = parabola_through(p0, p1, p2, 0, Fraction(1, 2), 1)
        normal = (p1 - p0).cross(p2 - p0)
        grid = [Fraction(k, 20) for k in range(21)]
        for l, r in ((grid[2], grid[9]), (grid[5], grid[18]), (grid[0], grid[20])):
            a, b = curve.eval(l), curve.eval(r)
            plane = plane_through(a, b, a + normal)
            inner = {plane.side(curve.eval(t)) for t in grid if l < t < r}
            outer = {plane.side(curve.eval(t)) for t in grid if t < l or t > r}
            self.assertEqual(len(inner), 1)
            self.assertNotIn(Sign.ZERO, inner)
            if outer:
                self.assertEqual(outer, {Sign(-inner.pop())})

    def test_collinear_points_rejected(self):
        with self.assertRaises(CollinearPoints):
            parabola_through(Point3(0, 0, 0), Point3(1, 1, 1), Point3(2, 2, 2), 0, 1, 2)

    def test_duplicate_parameters_rejected(self):
        with self.assertRaises(DuplicateParameters):
            parabola_through(Point3(0, 0, 0), Point3(1, 0, 0), Point3(0, 1, 0), 0, 1, 1)


class PlaneAndLineTests(SimpleTestCase):
    def test_plane_through_orientation(self):
        plane = plane_through(Point3(0, 0, 0), Point3(1, 0, 0), Point3(0, 1, 0))
        self.assertEqual(plane, Plane(Point3(0, 0, 1), 0))
        self.assertEqual(plane.side(Point3(0, 0, 1)), Sign.POS)

    def test_plane_is_primitive(self):
        plane = plane_through(Point3(0, 0, 2), Point3(4, 0, 2), Point3(0, 4, 2))
        self.assertEqual((plane.a, plane.b), (Point3(0, 0, 1), 2))
        self.assertEqual(plane.flipped().unoriented_key(), plane.unoriented_key())

    def test_side_matches_orientation(self):
        rng = random.Random(2)
        for _ in range(200):
            p, q, r, x = (random_point(rng) for _ in range(4))
            try:
                plane = plane_through(p, q, r)
            except DegenerateInput:
                continue
            self.assertEqual(plane.side(x), orient4(p, q, r, x))

    def test_line_meets_plane(self):
        line = Line3(Point3(0, 0, 0), Point3(0, 0, 1))
        self.assertEqual(line_plane_point(line, Plane(Point3(0, 0, 1), 5)), Point3(0, 0, 5))

    def test_parallel_line_rejected(self):
        with self.assertRaises(ParallelElements):
            line_plane_point(Line3(Point3(0, 0, 0), Point3(1, 0, 0)), Plane(Point3(0, 0, 1), 5))

    def test_two_planes_meet_in_line(self):
        line = planes_line(Plane(Point3(1, 0, 0), 0), Plane(Point3(0, 1, 0), 0))
        self.assertEqual(line.direction, Point3(0, 0, 1))
        self.assertTrue(line.contains(Point3(0, 0, 0)))

    def test_three_planes_meet_in_point(self):
        point = planes_point(Plane(Point3(1, 0, 0), 1), Plane(Point3(0, 1, 0), 2), Plane(Point3(1, 1, 1), 6))
        self.assertEqual(point, Point3(1, 2, 3))

    def test_collinear_plane_rejected(self):
        with self.assertRaises(DegenerateInput):
            plane_through(Point3(0, 0, 0), Point3(1, 1, 1), Point3(2, 2, 2))


TRIANGLE = (Point3(-1, -1, 0), Point3(2, 0, 0), Point3(0, 2, 0))


def _oracle_segment_triangle(s, t):
    """Non-coplanar brute force: intersect with the plane and test barycentric coordinates"""
    p, q = s
    plane = plane_through(*t)
    vp, vq = plane.value(p), plane.value(q)
    if vp == 0 or vq == 0 or (vp > 0) == (vq > 0):
        return False
    x = p + (q - p) * (vp / (vp - vq))
    a, b, c = t
    n = (b - a).cross(c - a)
    weights = [(c - b).cross(x - b).dot(n), (a - c).cross(x - c).dot(n), (b - a).cross(x - a).dot(n)]
    return all(w > 0 for w in weights)


class SegmentTriangleTests(SimpleTestCase):
    def test_crossing_at_interior(self):
        self.assertTrue(segment_meets_triangle_relint((Point3(0, 0, -1), Point3(0, 0, 1)), TRIANGLE))

    def test_touching_a_vertex_only(self):
        s = (Point3(-1, -1, -1), Point3(-1, -1, 1))
        self.assertFalse(segment_meets_triangle_relint(s, TRIANGLE))

    def test_endpoint_on_triangle(self):
        s = (Point3(0, 0, 0), Point3(0, 0, 1))
        self.assertFalse(segment_meets_triangle_relint(s, TRIANGLE))

    def test_coplanar_crossing(self):
        s = (Point3(-3, 0, 0), Point3(3, 0, 0))
        self.assertTrue(segment_meets_triangle_relint(s, TRIANGLE))

    def test_coplanar_along_an_edge(self):
        s = (Point3(-4, -2, 0), Point3(5, 1, 0))
        self.assertFalse(segment_meets_triangle_relint(s, TRIANGLE))

    def test_degenerate_triangle(self):
        with self.assertRaises(DegenerateTriangle):
            segment_meets_triangle_relint(
                (Point3(0, 0, 0), Point3(1, 1, 1)),
                (Point3(0, 0, 0), Point3(1, 0, 0), Point3(2, 0, 0)),
            )

    def test_agrees_with_barycentric_oracle(self):
        rng = random.Random(13)
        for _ in range(1000):
            t = tuple(random_point(rng, bound=6, den=1) for _ in range(3))
            if (t[1] - t[0]).cross(t[2] - t[0]).is_zero():
                continue
            s = (random_point(rng, bound=6, den=1), random_point(rng, bound=6, den=1))
            if orient4(*t, s[0]) == 0 and orient4(*t, s[1]) == 0:
                continue
            self.assertEqual(segment_meets_triangle_relint(s, t), _oracle_segment_triangle(s, t))


BIG = (Point3(0, 0, 0), Point3(4, 0, 0), Point3(0, 4, 0), Point3(0, 0, 4))


def shifted(tet, v):
    return tuple(p + v for p in tet)


class TetraIntersectionTests(SimpleTestCase):
    def test_identical(self):
        self.assertTrue(tetra_open_intersect(BIG, BIG))

    def test_sharing_a_facet(self):
        other = (Point3(0, 0, 0), Point3(4, 0, 0), Point3(0, 4, 0), Point3(1, 1, -3))
        self.assertFalse(tetra_open_intersect(BIG, other))

    def test_overlapping(self):
        half = Fraction(1, 2)
        self.assertTrue(tetra_open_intersect(BIG, shifted(BIG, Point3(half, half, half))))

    def test_far_apart(self):
        self.assertFalse(tetra_open_intersect(BIG, shifted(BIG, Point3(10, 0, 0))))

    def test_closed_disjointness(self):
        touching = (Point3(0, 0, 0), Point3(4, 0, 0), Point3(0, 4, 0), Point3(1, 1, -3))
        self.assertFalse(tetras_disjoint(BIG, touching))
        self.assertFalse(tetras_disjoint(BIG, shifted(BIG, Point3(4, 0, 0))))
        self.assertTrue(tetras_disjoint(BIG, shifted(BIG, Point3(5, 0, 0))))
        self.assertFalse(tetras_disjoint(BIG, BIG))

    def test_degenerate(self):
        flat = (Point3(0, 0, 0), Point3(1, 0, 0), Point3(0, 1, 0), Point3(1, 1, 0))
        with self.assertRaises(DegenerateTetrahedron):
            tetra_open_intersect(BIG, flat)

    def test_segment_against_closed_tetra(self):
        self.assertTrue(segment_meets_tetra((Point3(1, 1, -1), Point3(1, 1, 1)), BIG))
        self.assertFalse(segment_meets_tetra((Point3(5, 5, 5), Point3(6, 6, 6)), BIG))
        self.assertFalse(segment_meets_tetra((Point3(-1, 0, 0), Point3(0, 0, 0)), BIG))
        self.assertTrue(segment_meets_tetra((Point3(-1, 0, 0), Point3(1, 0, 0)), BIG))


class HullTests(SimpleTestCase):
    def test_tetrahedron(self):
        P = tetrahedron()
        self.assertEqual(P.n, 4)
        self.assertEqual(len(P.facets), 4)
        self.assertTrue(all(len(f) == 3 for f in P.facets))

    def test_cube(self):
        P = cube()
        self.assertEqual(len(P.facets), 6)
        self.assertTrue(all(len(f) == 4 for f in P.facets))
        self.assertEqual(len(P.edges()), 12)
        self.assertEqual(P.audit(), [])

    def test_interior_point_dropped(self):
        points = list(cube().vertices) + [Point3(Fraction(1, 2), Fraction(1, 2), Fraction(1, 2))]
        P = hull3(points)
        self.assertEqual(P.n, 8)
        self.assertNotIn(8, P.origin)

    def test_edge_midpoint_dropped(self):
        points = list(cube().vertices) + [Point3(Fraction(1, 2), 0, 0)]
        self.assertEqual(hull3(points).n, 8)

    def test_flat_input_rejected(self):
        with self.assertRaises(DegenerateSpan):
            hull3([Point3(0, 0, 0), Point3(1, 0, 0), Point3(0, 1, 0), Point3(1, 1, 0)])

    def test_facets_are_counterclockwise_from_outside(self):
        P = cube()
        inside = P.interior_point()
        for plane in P.facet_planes:
            self.assertLess(plane.value(inside), 0)

    def test_random_hulls_pass_audit_and_are_three_connected(self):
        rng = random.Random(17)
        for _ in range(10):
            P = hull3([random_point(rng, bound=10, den=1) for _ in range(14)])
            self.assertEqual(P.audit(), [])
            self.assertGreaterEqual(nx.node_connectivity(skeleton(P)), 3)


class VolumeTests(SimpleTestCase):
    def test_unit_cube(self):
        self.assertEqual(volume(cube()), 1)

    def test_standard_simplex(self):
        self.assertEqual(volume(tetrahedron()), Fraction(1, 6))

    def test_scaled_cube(self):
        self.assertEqual(volume(cube(side=2)), 8)

    def test_invariant_under_permutation_and_interior_points(self):
        rng = random.Random(4)
        points = [random_point(rng, bound=8, den=2) for _ in range(12)]
        reference = volume(hull3(points))
        shuffled = list(points)
        rng.shuffle(shuffled)
        self.assertEqual(volume(hull3(shuffled)), reference)
        P = hull3(points)
        extra = [P.interior_point(), (P.interior_point() + P.vertices[0]) / 2]
        self.assertEqual(volume(hull3(points + extra)), reference)


TOP = (1, 3, 5, 7)


class BeyondTests(SimpleTestCase):
    def setUp(self):
        self.P = cube()

    def test_point_above_top_facet(self):
        self.assertTrue(is_beyond(self.P, TOP, Point3(Fraction(1, 2), Fraction(1, 2), Fraction(3, 2))))

    def test_interior_point(self):
        self.assertFalse(is_beyond(self.P, TOP, self.P.interior_point()))

    def test_point_violating_two_facets(self):
        self.assertFalse(is_beyond(self.P, TOP, Point3(Fraction(3, 2), Fraction(1, 2), Fraction(3, 2))))

    def test_beyond_an_edge(self):
        x = Point3(Fraction(3, 2), Fraction(1, 2), Fraction(3, 2))
        self.assertTrue(is_beyond(self.P, (5, 7), x))

    def test_unknown_face(self):
        with self.assertRaises(UnknownFace):
            is_beyond(self.P, (1, 7), Point3(0, 0, 2))

    def test_beyond_keeps_other_facets(self):
        x = Point3(Fraction(1, 2), Fraction(1, 3), Fraction(3, 2))
        Q = hull3(list(self.P.vertices) + [x])
        kept = {_key(self.P.vertices[i] for i in f) for f in self.P.facets if set(f) != set(TOP)}
        facets = {_key(Q.vertices[i] for i in f) for f in Q.facets}
        self.assertLessEqual(kept, facets)
        self.assertEqual(len(Q.facets), 9)


def _key(points):
    return tuple(sorted(points, key=tuple))


class AttachTests(SimpleTestCase):
    def test_glued_tetrahedra(self):
        P = hull3(STANDARD)
        Q = hull3(STANDARD[:3] + [Point3(Fraction(1, 4), Fraction(1, 4), -1)])
        self.assertTrue(attach_check(P, Q, (0, 1, 2), (0, 1, 2)))

    def test_overlapping_tetrahedra(self):
        P = hull3(STANDARD)
        Q = hull3(STANDARD[:3] + [Point3(Fraction(1, 4), Fraction(1, 4), Fraction(1, 2))])
        self.assertFalse(attach_check(P, Q, (0, 1, 2), (0, 1, 2)))

    def test_unknown_facet(self):
        with self.assertRaises(UnknownFace):
            attach_check(hull3(STANDARD), hull3(STANDARD), (0, 1), (0, 1, 2))


class GlueBeyondTests(SimpleTestCase):
    def test_roof_over_the_cube_top(self):
        P = cube()
        ridge = [Point3(Fraction(1, 4), Fraction(1, 2), Fraction(9, 8)),
                 Point3(Fraction(3, 4), Fraction(1, 2), Fraction(9, 8))]
        Q = glue_beyond(P, TOP, ridge)
        self.assertEqual(Q.n, 10)
        self.assertEqual(Q.vertices[8:], tuple(ridge))
        self.assertEqual(len(Q.facets), 9)
        self.assertEqual(Q.audit(), [])
        with self.assertRaises(UnknownFace):
            Q.facet_index(TOP)

    def test_point_beneath_the_facet(self):
        with self.assertRaises(ConvexityViolation):
            glue_beyond(cube(), TOP, [Point3(Fraction(1, 2), Fraction(1, 2), Fraction(1, 2))])


class SkeletonTests(SimpleTestCase):
    def test_tetrahedron_is_k4(self):
        self.assertTrue(nx.is_isomorphic(skeleton(tetrahedron()), nx.complete_graph(4)))

    def test_cube_is_cubic(self):
        g = skeleton(cube())
        self.assertEqual(g.number_of_nodes(), 8)
        self.assertTrue(all(d == 3 for _, d in g.degree()))

    def test_octahedron(self):
        self.assertTrue(nx.is_isomorphic(skeleton(octahedron()), nx.complete_multipartite_graph(2, 2, 2)))


class BuilderTests(SimpleTestCase):
    def test_stack_over_a_facet(self):
        P = tetrahedron()
        builder = PolytopeBuilder.from_polytope(P)
        facet = builder.facet((1, 2, 3))
        plane = builder.plane(facet)
        [new] = builder.reserve()
        center = (P.vertices[1] + P.vertices[2] + P.vertices[3]) / 3
        placed = PolyPoint.lift(center) + PolyPoint.lift(plane.a) * EPS
        added = [(u, v, new) for u, v in builder.horizon([facet])]
        eps = builder.commit({new: placed}, removed=[facet], added=added, label="stack")
        Q = builder.to_polytope()
        self.assertEqual(Q.n, 5)
        self.assertEqual(len(Q.facets), 6)
        self.assertEqual(Q.audit(), [])
        self.assertEqual(dyadic_floor(eps), eps)

    def test_cut_through_a_facet_fails(self):
        P = tetrahedron()
        builder = PolytopeBuilder.from_polytope(P)
        facet = builder.facet((1, 2, 3))
        plane = builder.plane(facet)
        [new] = builder.reserve()
        center = (P.vertices[1] + P.vertices[2] + P.vertices[3]) / 3
        placed = PolyPoint.lift(center) - PolyPoint.lift(plane.a) * EPS
        added = [(u, v, new) for u, v in builder.horizon([facet])]
        with self.assertRaises(NonPositiveAtZero):
            builder.commit({new: placed}, removed=[facet], added=added)


def fan(P, apex=0):
    return cone_triangulation(P, apex)


class ValidateTests(SimpleTestCase):
    def test_cube_fan_is_valid(self):
        P = cube()
        T = fan(P)
        self.assertEqual(len(T), 6)
        self.assertTrue(validate(P, T).verdict)

    def test_overlapping_tetra_is_bad_pair(self):
        P = cube()
        T = Triangulation(P, fan(P).tetras | {(1, 2, 4, 7)})
        report = validate(P, T)
        self.assertFalse(report.verdict)
        self.assertIn(BAD_PAIR, report.kinds())

    def test_identical_tetra_are_not_proper(self):
        P = cube()
        self.assertFalse(proper_pair(P.vertices, (0, 1, 3, 7), (0, 1, 3, 7)))

    def test_missing_tetra_is_volume_mismatch(self):
        P = cube()
        tetras = sorted(fan(P).tetras)
        report = validate(P, Triangulation(P, frozenset(tetras[1:])))
        self.assertEqual(report.kinds(), {VOLUME_MISMATCH})

    def test_five_tetra_cube(self):
        P = cube()
        T = Triangulation(P, frozenset([(1, 2, 4, 7), (0, 1, 2, 4), (1, 2, 3, 7), (1, 4, 5, 7), (2, 4, 6, 7)]))
        self.assertTrue(validate(P, T).verdict)

    def test_parallel_workers_agree(self):
        P = cube()
        T = Triangulation(P, fan(P).tetras | {(1, 2, 4, 7)})
        self.assertEqual(validate(P, T).failures, validate(P, T, workers=3).failures)


class ConeTriangulationTests(SimpleTestCase):
    def test_cube_from_a_corner(self):
        P = cube()
        T = cone_triangulation(P, 0)
        self.assertEqual(len(T), 6)
        self.assertLessEqual(len(T), 2 * P.n - 7)

    def test_tetrahedron(self):
        self.assertEqual(len(cone_triangulation(tetrahedron(), 0)), 1)

    def test_triangular_prism(self):
        P = triangular_prism()
        T = cone_triangulation(P, 0)
        self.assertEqual(len(T), 3)
        self.assertTrue(validate(P, T).verdict)

    def test_random_hulls_stay_within_2n_minus_7(self):
        rng = random.Random(23)
        for trial in range(8):
            P = hull3([random_point(rng, bound=10, den=1) for _ in range(12)])
            if P.n < 5:
                continue
            for apex in range(P.n):
                T = cone_triangulation(P, apex)
                self.assertLessEqual(len(T), 2 * P.n - 7)
            if trial < 2:
                self.assertTrue(validate(P, cone_triangulation(P, 0)).verdict)


class SizeBoundTests(SimpleTestCase):
    def test_small_values(self):
        self.assertEqual(size_bounds(4)['lower'], 1)
        self.assertEqual(size_bounds(4)['total_upper'], 1)
        self.assertEqual(size_bounds(8)['lower'], 5)
        self.assertEqual(size_bounds(8)['total_upper'], 15)
        self.assertIsNone(size_bounds(12)['minimal_upper'])
        self.assertEqual(size_bounds(13)['minimal_upper'], 16)


class BruteMinTests(SimpleTestCase):
    def test_tetrahedron(self):
        size, witness = brute_min(tetrahedron())
        self.assertEqual(size, 1)
        self.assertEqual(witness.tetras, frozenset([(0, 1, 2, 3)]))

    def test_octahedron(self):
        P = octahedron()
        size, witness = brute_min(P)
        self.assertEqual(size, 4)
        self.assertTrue(validate(P, witness).verdict)

    def test_cube(self):
        P = cube()
        size, witness = brute_min(P)
        self.assertEqual(size, 5)
        self.assertTrue(validate(P, witness).verdict)

    def test_open_drum_uses_the_chain_tetrahedra(self):
        P = drum()
        size, witness = brute_min(P, required_edges=[(0, 1)])
        self.assertEqual(size, 3)
        self.assertEqual(brute_min(P)[0], 3)
        with self.assertRaises(NoTriangulation):
            brute_min(P, forbidden_edges=[(0, 1)])

    def test_closed_drum_needs_the_interior_edge(self):
        P = drum(closed=True)
        m = 2
        with_edge, witness = brute_min(P, required_edges=[(0, 1)])
        self.assertLessEqual(with_edge, 5)
        self.assertTrue(validate(P, witness).verdict)
        without_edge, witness = brute_min(P, forbidden_edges=[(0, 1)])
        self.assertGreaterEqual(without_edge, P.n + m - 3)
        self.assertTrue(validate(P, witness).verdict)
        self.assertNotIn((0, 1), witness.edges())

    def test_relabeling_keeps_the_size(self):
        P = triangular_prism()
        Q = hull3(list(reversed(P.vertices)))
        self.assertEqual(brute_min(P)[0], brute_min(Q)[0])

    def test_parallel_search_finds_the_same_size(self):
        P = octahedron()
        size, witness = brute_min(P, deterministic=False)
        self.assertEqual(size, 4)
        self.assertTrue(validate(P, witness).verdict)

    def test_size_guard(self):
        with self.assertRaises(TooLarge):
            brute_min(cube(), max_vertices=7)

    def test_bounds_sandwich(self):
        for P in (cube(), octahedron(), triangular_prism(), random_stacked(4, seed=2)):
            size, _ = brute_min(P)
            bounds = size_bounds(P.n)
            self.assertLessEqual(bounds['lower'], size)
            self.assertLessEqual(size, len(cone_triangulation(P, 0)))
            self.assertLessEqual(len(cone_triangulation(P, 0)), bounds['total_upper'])
