class ReductionError(Exception):
    """Base class for failures of the SAT to logical-polytope reduction"""


# Normalization
class EmptyClauseProduced(ReductionError):
    pass


class Unsupported(ReductionError):
    """The formula cannot be brought to the two-positive, one-negative occurrence pattern"""


class TriviallySatisfied(ReductionError):
    """Every clause was discarded; the formula is satisfiable and nothing is left to build"""


# Parameters
class ZeroSize(ReductionError):
    pass


# Extraction
class ApexOutsideCone(ReductionError):
    pass


class SkylightNotFound(ReductionError):
    pass
