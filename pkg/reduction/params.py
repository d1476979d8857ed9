import logging
from dataclasses import asdict, dataclass

from geometry.conf import setting

from .exceptions import ZeroSize

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Params:
    """
    Size parameters of the logical polytope for C clauses and V variables.

    m is the chain length of every cupola and K the triangulation size that
    separates satisfiable from unsatisfiable formulas.
    """
    C: int
    V: int
    p_T: int
    p_n: int
    m: int
    n: int
    K: int
    chain_override: bool = False

    @property
    def sweep_bound(self):
        """Size promised for the sweeping triangulation"""
        return (3 * self.m + 16) * (self.C + self.V) + 7 * self.V + 3 * self.C * self.V + 1

    @property
    def cupola_bound(self):
        """Most tetrahedra a triangulated cupola contributes"""
        return 3 * self.m + 16

    @property
    def sweep_ceiling(self):
        """
        Size the sweep never exceeds: every cupola within cupola_bound, and per
        variable at most three interface advances of 2C + 1 tetrahedra each
        plus nine roof and connector tetrahedra.
        """
        return self.cupola_bound * (self.C + self.V) + self.V * (6 * self.C + 12)

    def as_dict(self):
        return asdict(self)


def default_chain_length(C, V):
    return 8 * C + 10 * V + 3 * C * V + 2


def params(C, V, chain_length=None):
    """
    Parameters for C clauses and V variables. ``chain_length`` (or the
    CHAIN_LENGTH setting) replaces m for desk-scale builds; the counts then
    follow the same formulas in terms of the smaller m.
    """
    if C < 1 or V < 1:
        raise ZeroSize(f"need at least one clause and one variable, got C={C}, V={V}")
    p_T = 16 * C + 23 * V + 3 * C * V + 1
    p_n = 8 * C + 13 * V
    if chain_length is None:
        chain_length = setting('CHAIN_LENGTH')
    override = chain_length is not None
    m = chain_length if override else p_T - p_n + 1
    if m < 0:
        raise ValueError(f"chain length must be non-negative, got {m}")
    n = (3 * m + 6) * (V + C) + 7 * V + 2 + 2 * C + 1
    K = m * (3 * C + 3 * V) + p_T
    if not override and K != n + m - 4:
        raise AssertionError(f"K = {K} differs from n + m - 4 = {n + m - 4}")
    result = Params(C=C, V=V, p_T=p_T, p_n=p_n, m=m, n=n, K=K, chain_override=override)
    logger.debug("params(C=%d, V=%d): m=%d n=%d K=%d", C, V, m, n, K)
    return result
