"""
The small triangulation of a logical polytope built from a satisfying
assignment.

The sweep runs over the roofs from x = 1 towards x = 0. At every moment the
swept part is bounded by the interface: triangles joining one apex vertex to
the spine segments (two per open clause, one per clause whose cupola has
been triangulated) and the triangle (apex, c_2C, back) on the back side.
"""
import logging
from dataclasses import dataclass, field

from gadgets.cupola import triangulate_cupola
from geometry.conf import setting
from geometry.triangulation import Triangulation, tetra, validate
from reduction.extract import skylight_apex

from .exceptions import InvalidSweep, OpenClauseAtEnd, UnsatisfiedAssignment

logger = logging.getLogger(__name__)

TRUE_ROOF_TRIANGLES = (
    ('zL', 'x3bar', 'zB'),
    ('x3bar', 'zB', 'zA'),
    ('zB', 'zA', 'x2'),
    ('zB', 'x2', 'zR'),
    ('zA', 'x1', 'x2'),
    ('x1', 'zA', 'zF'),
)

FALSE_ROOF_TRIANGLES = (
    ('zT', 'x3bar', 'zA'),
    ('x3bar', 'zA', 'zB'),
    ('x3bar', 'zL', 'zB'),
    ('zB', 'zA', 'x2'),
    ('zB', 'x2', 'zR'),
    ('zA', 'x2', 'x1'),
    ('x2', 'x1', 'zR'),
)


@dataclass
class InterfaceState:
    apex: int
    back: int
    satisfied: set = field(default_factory=set)

    def segments(self, lp):
        result = []
        for l in range(1, lp.C + 1):
            a, b, c = lp.clause_triangle(l)
            result.extend([(a, c)] if l in self.satisfied else [(a, b), (b, c)])
        return result

    def triangles(self, lp):
        top = lp.spine[-1]
        result = [tuple(sorted((self.apex, p, q))) for p, q in self.segments(lp)]
        result.append(tuple(sorted((self.apex, top, self.back))))
        return result


class _Sweep:
    def __init__(self, lp):
        self.lp = lp
        self.tetras = []
        first = lp.roof(1)
        self.state = InterfaceState(apex=first['zF'], back=first['zR'])

    def add(self, *indices):
        self.tetras.append(tetra(*indices))

    def cupola(self, rec, v):
        self.tetras.extend(triangulate_cupola(self.lp.polytope, rec, v))

    def advance(self, v):
        """Move the interface apex to v, one tetrahedron per interface triangle"""
        a = self.state.apex
        for p, q in self.state.segments(self.lp):
            self.add(v, a, p, q)
        self.add(v, a, self.lp.spine[-1], self.state.back)
        self.state.apex = v

    def close(self, clause, v):
        if clause in self.state.satisfied:
            return
        self.cupola(self.lp.clause_cupola(clause), v)
        self.state.satisfied.add(clause)
        logger.debug("clause %d closed from vertex %d", clause, v)

    def true_case(self, i):
        lp = self.lp
        r, lit = lp.roof(i), lp.literals(i)
        names = {**r, **lit}
        c0, top = lp.spine[0], lp.spine[-1]
        self.cupola(lp.variable_cupola(i), r['zT'])
        for triangle in TRUE_ROOF_TRIANGLES:
            self.add(r['zT'], *(names[k] for k in triangle))

        previous = r['zF']
        for slot in ('x1', 'x2'):
            self.advance(lit[slot])
            self.add(lit[slot], r['zT'], c0, previous)
            self.close(lp.literal_clause(i, slot), lit[slot])
            previous = lit[slot]
        self.advance(r['zT'])
        self.add(r['zT'], top, r['zL'], r['zR'])
        self.state.back = r['zL']

    def false_case(self, i):
        lp = self.lp
        r, lit = lp.roof(i), lp.literals(i)
        names = {**r, **lit}
        c0, top = lp.spine[0], lp.spine[-1]
        self.cupola(lp.variable_cupola(i), r['zF'])
        for triangle in FALSE_ROOF_TRIANGLES:
            self.add(r['zF'], *(names[k] for k in triangle))
        self.add(r['zF'], r['zL'], r['zR'], top)
        self.state.back = r['zL']

        self.advance(lit['x3bar'])
        self.add(lit['x3bar'], r['zT'], c0, r['zF'])
        self.close(lp.literal_clause(i, 'x3bar'), lit['x3bar'])
        self.advance(r['zT'])


def sweep_triangulate(lp, assignment, check=True):
    """
    Triangulate the logical polytope by sweeping with a satisfying
    assignment. With ``check`` the result goes through the exact validator.
    """
    if not assignment.satisfies(lp.formula):
        raise UnsatisfiedAssignment(f"{assignment.as_bits()} does not satisfy the formula")

    sweep = _Sweep(lp)
    for i in range(1, lp.V + 1):
        if assignment[i]:
            sweep.true_case(i)
        else:
            sweep.false_case(i)
        logger.debug("variable %d swept (%s), %d tetrahedra so far", i, assignment[i], len(sweep.tetras))

    still_open = sorted(set(range(1, lp.C + 1)) - sweep.state.satisfied)
    if still_open:
        raise OpenClauseAtEnd(f"clauses {still_open} were never closed")

    T = Triangulation(lp.polytope, frozenset(sweep.tetras))
    if len(T) != len(sweep.tetras):
        raise InvalidSweep(f"{len(sweep.tetras) - len(T)} tetrahedra were emitted twice")
    if check:
        report = validate(lp.polytope, T, workers=setting('BRUTE_MIN_WORKERS'))
        if not report.verdict:
            raise InvalidSweep(f"sweep triangulation is invalid: {report.failures[:3]}", report=report)
    logger.info("sweep with %s: %d tetrahedra (K = %d)", assignment.as_bits(), len(T), lp.params.K)
    return T


def size_report(lp, T):
    records = [lp.variable_cupola(i) for i in range(1, lp.V + 1)] + [lp.clause_cupola(l) for l in range(1, lp.C + 1)]
    in_cupolas = sum(len(triangulate_cupola(lp.polytope, rec, skylight_apex(T, rec))) for rec in records)
    return {
        'size': len(T),
        'K': lp.params.K,
        'sweep_bound': lp.params.sweep_bound,
        'within_K': len(T) <= lp.params.K,
        'cupola_tetras': in_cupolas,
        'interface_tetras': len(T) - in_cupolas,
        'ceiling': lp.params.sweep_ceiling,
        'within_ceiling': len(T) <= lp.params.sweep_ceiling,
    }
