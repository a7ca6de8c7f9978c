"""Exception hierarchy shared by every module."""


class BHError(Exception):
    """Base class for all errors raised by :mod:`bhconst`."""


class DomainError(BHError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class PrecisionConfigError(BHError, ValueError):
    """Requested working precision is below the supported minimum."""


class BracketError(BHError, ValueError):
    """Root-finding endpoints do not bracket a sign change."""


class ConvergenceError(BHError, ArithmeticError):
    """An iterative method exhausted its budget."""


class DependencyError(BHError, LookupError):
    """A table entry needed by a recursion is missing."""


class CacheError(BHError):
    """Cache file is unreadable, corrupt or inconsistent."""


class StaleCacheError(CacheError):
    """Cache was produced at a lower precision than requested."""
