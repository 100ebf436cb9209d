"""Exception types raised across the package."""


class DuforgeError(Exception):
    """Base class for all package errors."""


class DimensionError(DuforgeError, ValueError):
    """Matrix shape incompatible with a bipartite d x d structure."""


class DegenerateInputError(DuforgeError, ValueError):
    pass


class ParameterError(DuforgeError, ValueError):
    pass


class PreconditionError(DuforgeError, ValueError):
    pass


class InsufficientDataError(DuforgeError, ValueError):
    pass


class ExistenceError(DuforgeError, ValueError):
    """No construction is available for the requested dimension."""


class ResourceGuardError(DuforgeError, RuntimeError):
    pass


class MatrixFileError(DuforgeError, ValueError):
    pass
