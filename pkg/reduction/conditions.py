"""
Exact checks of the five conditions a logical polytope has to meet.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from gadgets.cupola import audit_cupola
from geometry.kernel import Point3, Sign, orient4, tetra_open_intersect, tetras_disjoint
from geometry.polytope import face_key, hull3

logger = logging.getLogger(__name__)

CONVEXITY = 'convexity'
VISIBILITY = 'visibility'
BLOCKING = 'blocking'
NON_BLOCKING = 'non_blocking'
SWEEPING = 'sweeping'

CONDITIONS = (CONVEXITY, VISIBILITY, BLOCKING, NON_BLOCKING, SWEEPING)

LEFT = Point3(1, 0, 0)


@dataclass
class ConditionReport:
    failures: dict = field(default_factory=lambda: {name: [] for name in CONDITIONS})

    @property
    def verdict(self):
        return not any(self.failures.values())

    def passed(self, name):
        return not self.failures[name]

    def as_dict(self):
        return {
            'verdict': self.verdict,
            'conditions': {
                name: {'passed': not problems, 'failures': list(problems)}
                for name, problems in self.failures.items()
            },
        }


def _hosts(lp):
    return {face_key(lp.layout.gable(i)) for i in range(1, lp.V + 1)} | {
        face_key(lp.clause_triangle(l)) for l in range(1, lp.C + 1)
    }


def check_convexity(lp):
    P = lp.polytope
    problems = []
    hull = hull3(P.vertices)
    if hull.n != P.n:
        lost = sorted(set(range(P.n)) - set(hull.origin))
        return [f"vertices {lost} are not extreme"]
    found = {face_key(hull.origin[j] for j in cycle) for cycle in hull.facets}
    recorded = {face_key(cycle) for cycle in P.facets}
    if found != recorded:
        problems.append(f"{len(found ^ recorded)} recorded facets differ from the hull")

    hosts = _hosts(lp)
    expected = {face_key(f) for f in lp.layout.facets(5)} - hosts
    for key in sorted(expected - found):
        problems.append(f"missing facet {key}")
    size = lp.layout.size
    for key in sorted(found):
        if all(v < size for v in key) and key not in expected:
            problems.append(f"unexpected facet {key}")
    for kind, records in (('variable', lp.variable_cupolas), ('clause', lp.clause_cupolas)):
        for number, rec in enumerate(records, start=1):
            problems.extend(f"{kind} cupola {number}: {p}" for p in audit_cupola(P, rec))
    return problems


def check_visibility(lp):
    """Only the prescribed base vertices lie in each visibility cone"""
    P = lp.polytope
    base = range(lp.layout.size)
    problems = []
    wanted = [
        (f"variable {i}", lp.variable_cupola(i), {lp.roof(i)['zT'], lp.roof(i)['zF']})
        for i in range(1, lp.V + 1)
    ] + [
        (f"clause {l}", lp.clause_cupola(l), set(lp.clause_literal_vertices(l)))
        for l in range(1, lp.C + 1)
    ]
    for label, rec, expected in wanted:
        seen = {v for v in base if rec.cone.contains(P.vertices[v])}
        if seen != expected:
            problems.append(f"{label}: cone holds {sorted(seen)}, expected {sorted(expected)}")
    return problems


def _skylight_tetra(lp, apex, rec):
    return (lp.polytope.vertices[apex], *(lp.polytope.vertices[b] for b in rec.skylight))


def check_blocking(lp):
    """Skylight tetrahedra of a variable and of the clauses of its literals overlap"""
    problems = []
    for i in range(1, lp.V + 1):
        r, lit = lp.roof(i), lp.literals(i)
        var = lp.variable_cupola(i)
        for slot, anchor in (('x1', 'zF'), ('x2', 'zF'), ('x3bar', 'zT')):
            clause = lp.clause_cupola(lp.literal_clause(i, slot))
            first = _skylight_tetra(lp, r[anchor], var)
            second = _skylight_tetra(lp, lit[slot], clause)
            if not tetra_open_intersect(first, second):
                problems.append(f"variable {i}: {anchor} and {slot} skylight tetrahedra do not overlap")
    return problems


def check_non_blocking(lp):
    """The roof tetrahedron opposite a literal misses that literal's clause tetrahedron"""
    points = lp.polytope.vertices
    problems = []
    for i in range(1, lp.V + 1):
        r, lit = lp.roof(i), lp.literals(i)
        for slot, corner in (('x1', 'zT'), ('x2', 'zT'), ('x3bar', 'zF')):
            roof = tuple(points[r[k]] for k in (corner, 'zL', 'zR', 'zB'))
            triangle = lp.clause_triangle(lp.literal_clause(i, slot))
            clause = (points[lit[slot]], *(points[c] for c in triangle))
            if not tetras_disjoint(roof, clause):
                problems.append(f"variable {i}: roof tetrahedron at {corner} meets the clause tetrahedron of {slot}")
    return problems


def is_left_of(p, q, a, v):
    """v lies strictly on the negative-x side of the plane through p, q and a"""
    reference = orient4(p, q, a, a - LEFT)
    return reference != Sign.ZERO and orient4(p, q, a, v) == reference


def _spine_pairs(lp):
    pairs = []
    for l in range(1, lp.C + 1):
        a, b, c = lp.clause_triangle(l)
        pairs.extend([(a, b), (b, c), (a, c)])
    return pairs


def check_sweeping(lp):
    points = lp.polytope.vertices
    pairs = _spine_pairs(lp)
    problems = []
    for i in range(1, lp.V + 1):
        r, lit = lp.roof(i), lp.literals(i)
        steps = (
            ('a', lit['x1'], r['zF']),
            ('b', lit['x2'], lit['x1']),
            ('c', lit['x3bar'], r['zF']),
            ('d', r['zT'], lit['x2']),
            ('d', r['zT'], lit['x3bar']),
        )
        for label, v, a in steps:
            for p, q in pairs:
                if not is_left_of(points[p], points[q], points[a], points[v]):
                    problems.append(f"variable {i} ({label}): vertex {v} is not left of plane {(p, q, a)}")
    return problems


CHECKS = {
    CONVEXITY: check_convexity,
    VISIBILITY: check_visibility,
    BLOCKING: check_blocking,
    NON_BLOCKING: check_non_blocking,
    SWEEPING: check_sweeping,
}


def check_logical_conditions(lp, workers=None):
    report = ConditionReport()

    def run(name):
        return name, CHECKS[name](lp)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, CONDITIONS))
    else:
        results = [run(name) for name in CONDITIONS]
    for name, problems in results:
        report.failures[name] = problems
        if problems:
            logger.warning("%s failed: %s", name, problems[0])
    logger.info("condition check: %s", "all pass" if report.verdict else "FAILED")
    return report
