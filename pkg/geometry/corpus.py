"""
Small named polytopes used by the management commands and the test suites.
"""
import random
from fractions import Fraction
from itertools import product

from .kernel import Point3
from .polytope import hull3, is_beyond


def tetrahedron():
    return hull3([Point3(0, 0, 0), Point3(1, 0, 0), Point3(0, 1, 0), Point3(0, 0, 1)])


def cube(side=1):
    """Corner (x, y, z) gets index 4x + 2y + z"""
    return hull3([Point3(x * side, y * side, z * side) for x, y, z in product((0, 1), repeat=3)])


def octahedron():
    return hull3([
        Point3(1, 0, 0), Point3(-1, 0, 0),
        Point3(0, 1, 0), Point3(0, -1, 0),
        Point3(0, 0, 1), Point3(0, 0, -1),
    ])


PENTAGON = [(2, 0), (1, 2), (-2, 1), (-2, -1), (1, -2)]


def triangular_prism():
    base = [(0, 0), (2, 0), (0, 2)]
    return hull3([Point3(x, y, z) for z in (0, 1) for x, y in base])


def pentagonal_prism():
    return hull3([Point3(x, y, z) for z in (0, 1) for x, y in PENTAGON])


def drum(closed=False):
    """
    Vertex-edge chain of length 2 between apexes a = 0 and b = 1 over
    q0..q3 = 2..5. With closed=True a seventh vertex sits beyond the edge
    (a, b) and turns it into an interior diagonal.
    """
    points = [
        Point3(0, 1, 2), Point3(0, 1, -2),
        Point3(-3, 0, 0), Point3(-1, -2, 0), Point3(1, -2, 0), Point3(3, 0, 0),
    ]
    if closed:
        points.append(Point3(0, 3, 0))
    return hull3(points)


def random_stacked(stackings, seed=0):
    """Stack points beyond random facets, starting from a tetrahedron"""
    rng = random.Random(seed)
    P = hull3([Point3(0, 0, 0), Point3(8, 0, 0), Point3(0, 8, 0), Point3(0, 0, 8)])
    for _ in range(stackings):
        cycle = rng.choice(P.facets)
        weights = [Fraction(rng.randint(1, 5)) for _ in cycle]
        total = sum(weights)
        inside = Point3(0, 0, 0)
        for w, i in zip(weights, cycle):
            inside = inside + P.vertices[i] * (w / total)
        normal = P.facet_planes[P.facet_index(cycle)].a
        step = Fraction(1)
        candidate = inside + normal * step
        while not is_beyond(P, cycle, candidate):
            step /= 2
            candidate = inside + normal * step
        P = hull3(list(P.vertices) + [candidate])
    return P


SAMPLES = {
    'tetrahedron': tetrahedron,
    'cube': cube,
    'octahedron': octahedron,
    'triangular-prism': triangular_prism,
    'pentagonal-prism': pentagonal_prism,
    'drum': drum,
}


def sample(name):
    try:
        return SAMPLES[name]()
    except KeyError:
        raise KeyError(f"unknown sample polytope '{name}', choose from {sorted(SAMPLES)}") from None
