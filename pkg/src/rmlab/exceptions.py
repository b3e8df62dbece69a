class RmlabError(Exception):
    """Base class for errors raised by rmlab."""


class InvalidParameter(RmlabError, ValueError):
    """A parameter violates the documented preconditions."""


class UnsupportedConfiguration(RmlabError):
    """The request is well formed but not supported, e.g. geometry in even characteristic."""


class VerificationError(RmlabError, RuntimeError):
    """An internal self-check failed. This indicates a bug, not bad input."""
