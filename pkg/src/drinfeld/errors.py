"""Shared exception types."""


class EnvelopeError(ValueError):
    """A request exceeds the declared operating envelope.

    Raised instead of attempting computations whose size or degree falls
    outside the supported range; never silently degraded.
    """


class ContextMismatch(ValueError):
    """Operands belong to different field or ring contexts."""
