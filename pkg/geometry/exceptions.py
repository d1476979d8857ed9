class GeometryError(Exception):
    """Base class for every failure raised by the geometry app"""


# Kernel
class NonPositiveAtZero(GeometryError):
    def __init__(self, message="polynomial is not positive at 0", index=None):
        self.index = index
        if index is not None:
            message = f"{message} (requirement #{index})"
        super().__init__(message)


class CollinearPoints(GeometryError):
    pass


class DuplicateParameters(GeometryError):
    pass


class DegenerateTriangle(GeometryError):
    pass


class DegenerateTetrahedron(GeometryError):
    pass


class DegenerateInput(GeometryError):
    pass


class ParallelElements(GeometryError):
    pass


class EpsilonSelectionFailed(GeometryError):
    """The exact audit kept failing after the configured number of halvings"""


# Polytopes
class DegenerateSpan(GeometryError):
    pass


class UnknownFace(GeometryError):
    pass


class ConvexityViolation(GeometryError):
    """A staged construction produced a non-convex or degenerate facet complex"""


# Triangulations
class NoTriangulation(GeometryError):
    pass


class BudgetExceeded(GeometryError):
    pass


class TooLarge(GeometryError):
    pass
