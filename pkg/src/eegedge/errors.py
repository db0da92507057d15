"""Exception hierarchy.

Two families matter to callers: configuration problems (bad values, unknown
keys) and data problems (bad shapes, non-finite values, corrupt files). The
CLI maps them to exit codes 2 and 3.
"""


class EegEdgeError(Exception):
    pass


class ConfigError(EegEdgeError, ValueError):
    pass


class DataError(EegEdgeError, ValueError):
    pass


class ShapeMismatchError(DataError):
    pass


class NonFiniteError(DataError):
    pass


class UnlabeledError(DataError):
    pass


class FormatError(DataError):
    """Raised when a binary or text file does not parse."""

    def __init__(self, message, path=None, offset=None):
        self.path = path
        self.offset = offset
        where = []
        if path is not None:
            where.append(str(path))
        if offset is not None:
            where.append(f"offset {offset}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
