"""Twisted polynomials R{tau} with the commutation law tau*b = b^q*tau.

The coefficient ring is abstract behind a minimal interface (add, mul,
q-power map, zero/one) so the same code serves A = F_q[T], the base field
F_q, and its extensions GF(q^d). Multiplication distributes the rule
(a*tau^i)(b*tau^j) = a*b^(q^i)*tau^(i+j).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import ContextMismatch
from .gf import FieldCtx
from .polyring import Poly


@dataclass(frozen=True)
class FieldRing:
    """Field elements as coefficients; qexp is the twist size q = p^j."""

    ctx: FieldCtx
    qexp: int

    def add(self, a, b):
        return self.ctx.add(a, b)

    def sub(self, a, b):
        return self.ctx.sub(a, b)

    def neg(self, a):
        return self.ctx.neg(a)

    def mul(self, a, b):
        return self.ctx.mul(a, b)

    def qpow(self, a):
        return self.ctx.pow(a, self.qexp)

    def is_zero(self, a) -> bool:
        return a == 0

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1


@dataclass(frozen=True)
class PolyRing:
    """A = F_q[T] as the coefficient ring; the twist is b -> b^q."""

    ctx: FieldCtx

    @property
    def qexp(self) -> int:
        return self.ctx.q

    def add(self, a: Poly, b: Poly) -> Poly:
        return a + b

    def sub(self, a: Poly, b: Poly) -> Poly:
        return a - b

    def neg(self, a: Poly) -> Poly:
        return -a

    def mul(self, a: Poly, b: Poly) -> Poly:
        return a * b

    def qpow(self, a: Poly) -> Poly:
        # (sum c_i T^i)^q = sum c_i^q T^(iq); coefficients of F_q are fixed
        out = [0] * (self.ctx.q * max(0, len(a.coeffs) - 1) + 1)
        for i, c in enumerate(a.coeffs):
            out[i * self.ctx.q] = c
        return Poly(self.ctx, out)

    def is_zero(self, a: Poly) -> bool:
        return a.is_zero()

    @property
    def zero(self) -> Poly:
        return Poly.zero(self.ctx)

    @property
    def one(self) -> Poly:
        return Poly.one(self.ctx)


class TwistedPoly:
    """Element of R{tau}; coeffs[i] multiplies tau^i."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring, coeffs: Iterable):
        cs = list(coeffs)
        while cs and ring.is_zero(cs[-1]):
            cs.pop()
        self.ring = ring
        self.coeffs = tuple(cs)

    @staticmethod
    def zero(ring) -> "TwistedPoly":
        return TwistedPoly(ring, ())

    @staticmethod
    def one(ring) -> "TwistedPoly":
        return TwistedPoly(ring, (ring.one,))

    @staticmethod
    def tau(ring, i: int = 1) -> "TwistedPoly":
        return TwistedPoly(ring, [ring.zero] * i + [ring.one])

    @staticmethod
    def constant(ring, c) -> "TwistedPoly":
        return TwistedPoly(ring, (c,))

    @property
    def deg_tau(self) -> Optional[int]:
        return len(self.coeffs) - 1 if self.coeffs else None

    @property
    def ht_tau(self) -> Optional[int]:
        for i, c in enumerate(self.coeffs):
            if not self.ring.is_zero(c):
                return i
        return None

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.ring.zero

    def _check_ring(self, other: "TwistedPoly") -> None:
        if self.ring != other.ring:
            raise ContextMismatch("twisted polynomials over different rings")

    def __add__(self, other: "TwistedPoly") -> "TwistedPoly":
        self._check_ring(other)
        ring = self.ring
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = ring.add(out[i], c)
        return TwistedPoly(ring, out)

    def __neg__(self) -> "TwistedPoly":
        return TwistedPoly(self.ring, (self.ring.neg(c) for c in self.coeffs))

    def __sub__(self, other: "TwistedPoly") -> "TwistedPoly":
        return self + (-other)

    def __mul__(self, other: "TwistedPoly") -> "TwistedPoly":
        self._check_ring(other)
        ring = self.ring
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return TwistedPoly.zero(ring)
        out = [ring.zero] * (len(a) + len(b) - 1)
        twisted = list(b)  # b_j^(q^i), updated as i advances
        prev_i = 0
        for i, x in enumerate(a):
            if ring.is_zero(x):
                continue
            while prev_i < i:
                twisted = [ring.qpow(c) for c in twisted]
                prev_i += 1
            for j, y in enumerate(twisted):
                if not ring.is_zero(y):
                    out[i + j] = ring.add(out[i + j], ring.mul(x, y))
        return TwistedPoly(ring, out)

    def __pow__(self, e: int) -> "TwistedPoly":
        if e < 0:
            raise ValueError("negative twisted power")
        result = TwistedPoly.one(self.ring)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def scale_left(self, c) -> "TwistedPoly":
        ring = self.ring
        return TwistedPoly(ring, (ring.mul(c, x) for x in self.coeffs))

    def __eq__(self, other) -> bool:
        return (isinstance(other, TwistedPoly) and self.ring == other.ring
                and self.coeffs == other.coeffs)

    def __hash__(self) -> int:
        return hash((id(type(self.ring)), self.coeffs))

    def __repr__(self) -> str:
        if not self.coeffs:
            return "TwistedPoly(0)"
        parts = []
        for i, c in enumerate(self.coeffs):
            if self.ring.is_zero(c):
                continue
            t = "" if i == 0 else ("*tau" if i == 1 else f"*tau^{i}")
            parts.append(f"({c!s}){t}" if i else f"({c!s})")
        return "TwistedPoly(" + " + ".join(parts) + ")"

    def linearized(self) -> list[tuple[int, object]]:
        """Sparse F_q-linear polynomial: pairs (i, c) meaning c*x^(q^i)."""
        return [(i, c) for i, c in enumerate(self.coeffs)
                if not self.ring.is_zero(c)]


def linearized_poly(f: TwistedPoly) -> list[tuple[int, object]]:
    """tau^i -> x^(q^i); evaluation of the result is F_q-linear in x."""
    return f.linearized()


def eval_linearized(ring, pairs: list[tuple[int, object]], x):
    """Evaluate sum c_i x^(q^i) at x in the coefficient ring itself."""
    acc = ring.zero
    power = x
    prev = 0
    for i, c in pairs:
        while prev < i:
            power = ring.qpow(power)
            prev += 1
        acc = ring.add(acc, ring.mul(c, power))
    return acc
