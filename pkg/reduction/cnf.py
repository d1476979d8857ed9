"""
CNF formulas and their normalization to the restricted pattern the
construction needs: every variable occurs exactly twice unnegated and once
negated.
"""
import logging
from dataclasses import dataclass, field

from .exceptions import EmptyClauseProduced, TriviallySatisfied, Unsupported

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CnfFormula:
    variables: int
    clauses: tuple

    def __post_init__(self):
        clauses = tuple(tuple(int(lit) for lit in clause) for clause in self.clauses)
        for clause in clauses:
            if any(lit == 0 or abs(lit) > self.variables for lit in clause):
                raise ValueError(f"clause {clause} mentions a variable outside 1..{self.variables}")
            if len(set(clause)) != len(clause):
                raise ValueError(f"clause {clause} repeats a literal")
        object.__setattr__(self, 'clauses', clauses)

    @property
    def V(self):
        return self.variables

    @property
    def C(self):
        return len(self.clauses)

    def occurrences(self, var):
        """1-based clause numbers of the positive and of the negative occurrences"""
        positive = [k for k, clause in enumerate(self.clauses, start=1) if var in clause]
        negative = [k for k, clause in enumerate(self.clauses, start=1) if -var in clause]
        return positive, negative

    def is_restricted(self):
        return all(
            tuple(map(len, self.occurrences(var))) == (2, 1) for var in range(1, self.variables + 1)
        )

    def satisfied_by(self, assignment):
        values = assignment.values if isinstance(assignment, Assignment) else tuple(assignment)
        if len(values) != self.variables:
            raise ValueError(f"assignment has {len(values)} values for {self.variables} variables")
        return all(any(values[abs(lit) - 1] == (lit > 0) for lit in clause) for clause in self.clauses)

    def as_dimacs(self):
        lines = [f"p cnf {self.variables} {len(self.clauses)}"]
        lines.extend(" ".join(str(lit) for lit in clause) + " 0" for clause in self.clauses)
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class RestrictedFormula(CnfFormula):
    """
    A formula in the restricted pattern. ``origin`` maps each variable back to
    (original variable, flipped) when the formula came out of ``normalize``.
    """
    origin: tuple = field(default=(), compare=False)

    def __post_init__(self):
        super().__post_init__()
        if self.variables < 1 or not self.clauses:
            raise Unsupported("a restricted formula needs at least one variable and one clause")
        for var in range(1, self.variables + 1):
            positive, negative = self.occurrences(var)
            if len(positive) != 2 or len(negative) != 1:
                raise Unsupported(
                    f"variable {var} occurs {len(positive)} times unnegated and {len(negative)} times negated"
                )

    def literal_clauses(self, var):
        """Clause numbers (l1, l2, l3) of X_var, X_var and not X_var, with l1 < l2"""
        positive, negative = self.occurrences(var)
        return positive[0], positive[1], negative[0]

    def clause_literals(self, clause):
        """(variable, slot) pairs of a clause, slot being 'x1', 'x2' or 'x3bar'"""
        result = []
        for var in range(1, self.variables + 1):
            l1, l2, l3 = self.literal_clauses(var)
            for slot, number in (('x1', l1), ('x2', l2), ('x3bar', l3)):
                if number == clause:
                    result.append((var, slot))
        return result


@dataclass(frozen=True)
class Assignment:
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, 'values', tuple(bool(v) for v in self.values))

    def __getitem__(self, var):
        """Truth value of X_var, 1-based"""
        return self.values[var - 1]

    def __len__(self):
        return len(self.values)

    @classmethod
    def from_bits(cls, bits):
        bits = bits.strip()
        if not bits or set(bits) - {'0', '1'}:
            raise ValueError(f"assignment must be a string of 0s and 1s, got {bits!r}")
        return cls(tuple(b == '1' for b in bits))

    def as_bits(self):
        return "".join('1' if v else '0' for v in self.values)

    def satisfies(self, formula):
        return formula.satisfied_by(self)


def _occurrence_table(clauses):
    table = {}
    for k, clause in enumerate(clauses):
        for lit in clause:
            table.setdefault(abs(lit), ([], []))[0 if lit > 0 else 1].append(k)
    return table


def _is_tautology(clause):
    return any(-lit in clause for lit in clause)


def _simplify_once(clauses, flipped):
    """Apply one simplification; returns the new clause list or None at the fixpoint"""
    table = _occurrence_table(clauses)
    for var in sorted(table):
        positive, negative = table[var]
        if len(negative) > len(positive):
            flipped[var] = not flipped.get(var, False)
            logger.debug("flipping variable %d (%d negated, %d unnegated)", var, len(negative), len(positive))
            return [tuple(-lit if abs(lit) == var else lit for lit in clause) for clause in clauses]
        if not negative:
            drop = set(positive)
            logger.debug("variable %d is pure, discarding %d clauses", var, len(drop))
            return [clause for k, clause in enumerate(clauses) if k not in drop]
        if len(positive) == 1 and len(negative) == 1:
            p, q = positive[0], negative[0]
            merged = [lit for lit in clauses[p] if lit != var] + [lit for lit in clauses[q] if lit != -var]
            resolvent = tuple(dict.fromkeys(merged))
            if not resolvent:
                raise EmptyClauseProduced(f"resolving on variable {var} gives the empty clause")
            logger.debug("resolving clauses %d and %d on variable %d", p + 1, q + 1, var)
            result = []
            for k, clause in enumerate(clauses):
                if k == min(p, q):
                    if not _is_tautology(resolvent):
                        result.append(resolvent)
                elif k != max(p, q):
                    result.append(clause)
            return result
    return None


def normalize(f):
    """
    Bring a CNF formula to the restricted pattern by flipping variables,
    discarding pure variables with their clauses and resolving variables
    that occur once each way, until nothing changes.
    """
    clauses = [tuple(dict.fromkeys(clause)) for clause in f.clauses]
    if any(not clause for clause in clauses):
        raise EmptyClauseProduced("the formula contains an empty clause")
    clauses = [clause for clause in clauses if not _is_tautology(clause)]

    flipped = {}
    while True:
        simplified = _simplify_once(clauses, flipped)
        if simplified is None:
            break
        clauses = simplified

    if not clauses:
        raise TriviallySatisfied("every clause was discarded")

    used = sorted({abs(lit) for clause in clauses for lit in clause})
    renumber = {old: new for new, old in enumerate(used, start=1)}
    restricted = RestrictedFormula(
        variables=len(used),
        clauses=tuple(
            tuple(renumber[abs(lit)] if lit > 0 else -renumber[abs(lit)] for lit in clause) for clause in clauses
        ),
        origin=tuple((old, flipped.get(old, False)) for old in used),
    )
    logger.info("normalized formula: %d variables, %d clauses (from %d and %d)",
                restricted.V, restricted.C, f.V, f.C)
    return restricted
