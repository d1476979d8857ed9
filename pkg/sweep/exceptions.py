class SweepError(Exception):
    """Base class for failures while sweeping a logical polytope"""


class UnsatisfiedAssignment(SweepError):
    pass


class OpenClauseAtEnd(SweepError):
    """A clause cupola was never triangulated although the assignment satisfies the formula"""


class InvalidSweep(SweepError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
