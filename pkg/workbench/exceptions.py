class FileFormatError(Exception):
    """Base class for malformed DIMACS, polytope, triangulation and role-map files"""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DimacsSyntaxError(FileFormatError):
    pass


class HeaderMismatch(FileFormatError):
    """The clause or variable count differs from the 'p cnf' header"""


class TautologicalClause(FileFormatError):
    pass
