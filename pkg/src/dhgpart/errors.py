"""Exception types shared across the package."""


class DhgError(Exception):
    """Base class for all library errors."""


class DhgParseError(DhgError):
    """Malformed hypergraph or partition input."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class InfeasibleError(DhgError):
    """The instance cannot satisfy the requested constraints."""


class OracleSizeError(DhgError):
    """Instance too large for exhaustive enumeration."""


class MatchingInvariantError(DhgError):
    """The pairing forest violated a structural invariant."""
