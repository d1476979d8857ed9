import logging
from dataclasses import dataclass

from .cnf import Assignment
from .exceptions import ApexOutsideCone, SkylightNotFound

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Extraction:
    """The assignment read off a triangulation and whether it satisfies the formula"""
    assignment: Assignment
    satisfies: bool

    def as_dict(self):
        return {'assignment': self.assignment.as_bits(), 'satisfies': self.satisfies}


def skylight_apex(T, rec):
    """Fourth vertex of the tetrahedron of T sitting on the cupola's skylight"""
    on_skylight = T.containing(rec.skylight)
    if len(on_skylight) != 1:
        raise SkylightNotFound(
            f"skylight {rec.skylight} is a face of {len(on_skylight)} tetrahedra, expected exactly 1"
        )
    (apex,) = set(on_skylight[0]) - set(rec.skylight)
    return apex


def extract_assignment(lp, T):
    """
    Read a truth assignment off a triangulation of the logical polytope: the
    tetrahedron on each variable skylight has its apex at z_T (true) or z_F
    (false). The result also says whether the assignment satisfies the
    formula.
    """
    values = []
    for i in range(1, lp.V + 1):
        apex = skylight_apex(T, lp.variable_cupola(i))
        roof = lp.roof(i)
        if apex == roof['zT']:
            values.append(True)
        elif apex == roof['zF']:
            values.append(False)
        else:
            raise ApexOutsideCone(f"variable {i}: skylight apex {apex} is neither z_T nor z_F")
    assignment = Assignment(tuple(values))
    satisfies = assignment.satisfies(lp.formula)
    logger.info("extracted %s (%s)", assignment.as_bits(), "satisfying" if satisfies else "not satisfying")
    return Extraction(assignment=assignment, satisfies=satisfies)
