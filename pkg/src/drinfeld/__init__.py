"""Drinfeld module Galois-image toolkit over A = F_q[T].

Valuative surjectivity criteria for the (T)-adic representations of rank 2
and rank 3 Drinfeld modules, empirical Frobenius sampling of mod-T and
mod-T^2 images, Newton-polygon inertia bounds, maximal-subgroup order
obstructions, and exact/empirical density experiments.
"""

__version__ = "0.1.0"

from .errors import ContextMismatch, EnvelopeError
from .gf import FieldCtx, extension_field, field_new

__all__ = [
    "ContextMismatch",
    "EnvelopeError",
    "FieldCtx",
    "extension_field",
    "field_new",
    "__version__",
]
