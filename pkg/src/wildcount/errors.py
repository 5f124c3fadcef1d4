"""Exception hierarchy shared across the package."""


class WildcountError(Exception):
    """Base class for all package errors."""


class ParameterError(WildcountError, ValueError):
    """Arguments violate an operation's preconditions."""


class BranchError(WildcountError):
    """The requested quantity is undefined on this branch of the parameter space."""


class ResourceError(WildcountError):
    """An enumeration would exceed its configured cap."""

    def __init__(self, message, cap=None):
        super().__init__(message)
        self.cap = cap


class ConsistencyError(WildcountError):
    """Input data violates a compatibility relation it was promised to satisfy."""
