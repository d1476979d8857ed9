class StackedError(Exception):
    """Base class for failures of the stacked-polytope recognizer"""


class Disconnected(StackedError):
    pass


class NonRealizableCut(StackedError):
    """A separating vertex triple does not span a separating triangle of the polytope"""
