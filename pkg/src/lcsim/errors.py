"""Exception types shared across the package."""


class LcsimError(Exception):
    """Base class for all package errors."""


class ValidationError(LcsimError, ValueError):
    """An input violated a documented precondition."""


class ResourceLimitError(LcsimError, RuntimeError):
    """A computation would exceed its declared memory or enumeration budget.

    Distinct from :class:`ValidationError` so callers (and the CLI exit
    codes) can tell "bad input" apart from "input too large".
    """
