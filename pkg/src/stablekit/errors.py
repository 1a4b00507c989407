"""Shared exception types."""


class PreconditionError(ValueError):
    """A mathematical precondition on the input was violated."""


class SizeGuardError(PreconditionError):
    """Input exceeds a size guard for exact computation."""
