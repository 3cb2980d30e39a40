"""The ring A = F_q[T]: arithmetic, factorization, valuations, primes.

Polynomials are immutable ascending coefficient tuples over a FieldCtx.
The degree of the zero polynomial is the sentinel None, and its valuation
at any prime is the sentinel math.inf; neither is ever conflated with 0.

Factorization is Cantor-Zassenhaus style (squarefree decomposition,
distinct-degree splitting, then equal-degree splitting) driven by a PRNG
seeded from the caller's seed and a canonical hash of the input, so the
sorted output is reproducible bit for bit; internal randomness only
affects the running time.
"""

from __future__ import annotations

import hashlib
import math
import random
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from .errors import ContextMismatch
from .gf import Extension, FieldCtx, same_ctx

INFINITY = math.inf  # valuation of the zero polynomial


class Poly:
    """Element of F_q[T] as an ascending coefficient tuple."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldCtx, coeffs: Iterable[int]):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        for c in cs:
            ctx.check_element(c)
        self.ctx = ctx
        self.coeffs = tuple(cs)

    # -- constructors ----------------------------------------------------

    @staticmethod
    def zero(ctx: FieldCtx) -> "Poly":
        return Poly(ctx, ())

    @staticmethod
    def one(ctx: FieldCtx) -> "Poly":
        return Poly(ctx, (1,))

    @staticmethod
    def const(ctx: FieldCtx, c: int) -> "Poly":
        return Poly(ctx, (c,))

    @staticmethod
    def T(ctx: FieldCtx) -> "Poly":
        return Poly(ctx, (0, 1))

    @staticmethod
    def from_index(ctx: FieldCtx, n: int) -> "Poly":
        """Polynomial whose base-q digits (ascending) are the coefficients."""
        cs = []
        while n:
            cs.append(n % ctx.q)
            n //= ctx.q
        return Poly(ctx, cs)

    def to_index(self) -> int:
        n = 0
        for c in reversed(self.coeffs):
            n = n * self.ctx.q + c
        return n

    # -- basic queries -----------------------------------------------------

    @property
    def degree(self) -> Optional[int]:
        return len(self.coeffs) - 1 if self.coeffs else None

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == (1,)

    @property
    def lc(self) -> int:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    @property
    def norm(self) -> int:
        """|g| = q^deg(g), with |0| = 0."""
        return 0 if self.is_zero() else self.ctx.q ** (len(self.coeffs) - 1)

    def constant_term(self) -> int:
        return self.coeffs[0] if self.coeffs else 0

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            same_ctx(self.ctx, other.ctx)
            return other
        if isinstance(other, int):
            return Poly.const(self.ctx, other % self.ctx.q
                              if other >= 0 else self.ctx.neg((-other) % self.ctx.q))
        return NotImplemented

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        ctx = self.ctx
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = ctx.add(out[i], c)
        return Poly(ctx, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        ctx = self.ctx
        return Poly(ctx, (ctx.neg(c) for c in self.coeffs))

    def __sub__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        ctx = self.ctx
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly.zero(ctx)
        out = [0] * (len(a) + len(b) - 1)
        if ctx.k == 1:
            p = ctx.p
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        out[i + j] += x * y
            return Poly(ctx, (c % p for c in out))
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] = ctx.add(out[i + j], ctx.mul(x, y))
        return Poly(ctx, out)

    __rmul__ = __mul__

    def scale(self, c: int) -> "Poly":
        ctx = self.ctx
        return Poly(ctx, (ctx.mul(c, x) for x in self.coeffs))

    def __divmod__(self, other) -> tuple["Poly", "Poly"]:
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        ctx = self.ctx
        rem = list(self.coeffs)
        db = len(other.coeffs) - 1
        inv_lead = ctx.inv(other.lc)
        quot = [0] * max(0, len(rem) - db)
        if ctx.k == 1:
            p = ctx.p
            bs = other.coeffs
            while len(rem) - 1 >= db and rem:
                if rem[-1] == 0:
                    rem.pop()
                    continue
                c = rem[-1] * inv_lead % p
                off = len(rem) - 1 - db
                quot[off] = c
                for j, mj in enumerate(bs):
                    rem[off + j] = (rem[off + j] - c * mj) % p
                rem.pop()
            return Poly(ctx, quot), Poly(ctx, rem)
        while len(rem) - 1 >= db and rem:
            if rem[-1] == 0:
                rem.pop()
                continue
            c = ctx.mul(rem[-1], inv_lead)
            off = len(rem) - 1 - db
            quot[off] = c
            for j, mj in enumerate(other.coeffs):
                rem[off + j] = ctx.sub(rem[off + j], ctx.mul(c, mj))
            rem.pop()
        return Poly(ctx, quot), Poly(ctx, rem)

    def __floordiv__(self, other) -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "Poly":
        return divmod(self, other)[1]

    def __pow__(self, e: int) -> "Poly":
        if e < 0:
            raise ValueError("negative polynomial power")
        result = Poly.one(self.ctx)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def powmod(self, e: int, mod: "Poly") -> "Poly":
        result = Poly.one(self.ctx) % mod
        base = self % mod
        while e:
            if e & 1:
                result = (result * base) % mod
            base = (base * base) % mod
            e >>= 1
        return result

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(self.ctx.inv(self.lc))

    def derivative(self) -> "Poly":
        ctx = self.ctx
        out = []
        for i, c in enumerate(self.coeffs[1:], start=1):
            out.append(ctx.mul(i % ctx.p, c))
        return Poly(ctx, out)

    def eval(self, x: int) -> int:
        """Horner evaluation at a field element of the same context."""
        ctx = self.ctx
        ctx.check_element(x)
        acc = 0
        for c in reversed(self.coeffs):
            acc = ctx.add(ctx.mul(acc, x), c)
        return acc

    def eval_embedded(self, ext: Extension, x: int) -> int:
        """Evaluate at x in an extension, embedding the coefficients."""
        F = ext.field
        acc = 0
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, x), ext.embed(c))
        return acc

    # -- comparisons / hashing ------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = self._coerce(other)
        return (isinstance(other, Poly) and self.ctx == other.ctx
                and self.coeffs == other.coeffs)

    def __hash__(self) -> int:
        return hash((self.ctx.p, self.ctx.k, self.coeffs))

    def sort_key(self) -> tuple:
        return (len(self.coeffs), self.to_index())

    # -- formatting ----------------------------------------------------------

    def __repr__(self) -> str:
        return f"Poly({self.ctx!r}, {self!s})"

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                t = "T" if i == 1 else f"T^{i}"
                parts.append(t if c == 1 else f"{c}*{t}")
        return "+".join(parts)

    def to_dict(self) -> dict:
        return {"ctx": self.ctx.to_dict(), "coeffs": list(self.coeffs)}


def poly_from_dict(d: dict, ctx: Optional[FieldCtx] = None) -> Poly:
    from .gf import field_new

    if ctx is None:
        ctx = field_new(d["ctx"]["p"], d["ctx"]["k"])
    return Poly(ctx, d["coeffs"])


_TERM_RE = re.compile(
    r"^\s*(?:(?P<coef>\d+)\s*\*?\s*)?(?:(?P<var>T)(?:\^(?P<exp>\d+))?)?\s*$")


def parse_poly(ctx: FieldCtx, text: str) -> Poly:
    """Parse "[1,0,3]" (ascending coefficients) or "1+3*T^2" into a Poly."""
    text = text.strip()
    if text.startswith("["):
        if not text.endswith("]"):
            raise ValueError(f"unbalanced brackets in {text!r}")
        inner = text[1:-1].strip()
        coeffs = [int(t) for t in inner.split(",")] if inner else []
        for c in coeffs:
            if not 0 <= c < ctx.q:
                raise ValueError(f"coefficient {c} out of range for {ctx!r}")
        return Poly(ctx, coeffs)
    acc = Poly.zero(ctx)
    for piece in text.replace("-", "+-").split("+"):
        if not piece.strip():
            continue
        negate = piece.strip().startswith("-")
        piece = piece.strip().lstrip("-")
        m = _TERM_RE.match(piece)
        if not m or (m.group("coef") is None and m.group("var") is None):
            raise ValueError(f"cannot parse polynomial term {piece!r}")
        coef = int(m.group("coef")) if m.group("coef") else 1
        if not 0 <= coef < ctx.q:
            raise ValueError(f"coefficient {coef} out of range for {ctx!r}")
        exp = 0
        if m.group("var"):
            exp = int(m.group("exp")) if m.group("exp") else 1
        if negate:
            coef = ctx.neg(coef)
        term = [0] * exp + [coef]
        acc = acc + Poly(ctx, term)
    return acc


# ---------------------------------------------------------------------------
# gcd / irreducibility
# ---------------------------------------------------------------------------

def gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd; gcd(f, 0) is the monic normalization of f."""
    same_ctx(f.ctx, g.ctx)
    while not g.is_zero():
        f, g = g, f % g
    return f.monic()


def is_irreducible(f: Poly) -> bool:
    """Deterministic irreducibility via gcds with T^(q^i) - T (Ben-Or)."""
    if f.is_zero() or f.degree == 0:
        raise ValueError("irreducibility is defined for degree >= 1")
    n = f.degree
    if n == 1:
        return True
    ctx = f.ctx
    T = Poly.T(ctx)
    h = T
    for _ in range(n // 2):
        h = h.powmod(ctx.q, f)
        if not gcd(f, h - T).is_one():
            return False
    return True


# ---------------------------------------------------------------------------
# prime ideals and factorization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PrimeIdeal:
    """Nonzero prime of A, identified with its monic irreducible generator."""

    gen: Poly

    def __post_init__(self):
        if not self.gen.is_monic():
            raise ValueError("prime generator must be monic")
        if not is_irreducible(self.gen):
            raise ValueError(f"{self.gen!s} is not irreducible")

    @property
    def ctx(self) -> FieldCtx:
        return self.gen.ctx

    @property
    def degree(self) -> int:
        return self.gen.degree

    def divides(self, f: Poly) -> bool:
        return (f % self.gen).is_zero()

    def __str__(self) -> str:
        return str(self.gen)

    def sort_key(self) -> tuple:
        return self.gen.sort_key()


def prime_T(ctx: FieldCtx) -> PrimeIdeal:
    return PrimeIdeal(Poly.T(ctx))


@dataclass(frozen=True)
class Factorization:
    """unit * prod gen_i^mult_i with distinct primes in canonical order."""

    unit: int
    factors: tuple[tuple[PrimeIdeal, int], ...]

    def reassemble(self, ctx: FieldCtx) -> Poly:
        out = Poly.const(ctx, self.unit)
        for prime, mult in self.factors:
            out = out * prime.gen**mult
        return out


def _derived_rng(seed: int, f: Poly) -> random.Random:
    h = hashlib.sha256()
    h.update(str(seed).encode())
    h.update(str((f.ctx.p, f.ctx.k)).encode())
    h.update(str(f.coeffs).encode())
    return random.Random(int.from_bytes(h.digest()[:8], "big"))


def _pth_root(f: Poly) -> Poly:
    """Inverse of the Frobenius on coefficients of f(T^p) -> f."""
    ctx = f.ctx
    out = []
    for i in range(0, len(f.coeffs), ctx.p):
        c = f.coeffs[i]
        out.append(ctx.frobenius(c, ctx.k - 1) if ctx.k > 1 else c)
    return Poly(ctx, out)


def _squarefree_decomposition(f: Poly) -> list[tuple[Poly, int]]:
    """Monic f as a product of pairwise-coprime squarefree parts g^e."""
    ctx = f.ctx
    out: list[tuple[Poly, int]] = []
    e = 1
    while f.degree and f.degree > 0:
        df = f.derivative()
        if df.is_zero():
            f = _pth_root(f)
            e *= ctx.p
            continue
        c = gcd(f, df)
        w = f // c
        i = 1
        while w.degree and w.degree > 0:
            y = gcd(w, c)
            z = w // y
            if z.degree and z.degree > 0:
                out.append((z, i * e))
            w = y
            c = c // y
            i += 1
        f = c
    return out


def _distinct_degree(f: Poly) -> list[tuple[Poly, int]]:
    """Split squarefree monic f into (product of degree-d primes, d) parts."""
    ctx = f.ctx
    T = Poly.T(ctx)
    out = []
    h = T
    d = 0
    rest = f
    while rest.degree and rest.degree > 0:
        d += 1
        if 2 * d > rest.degree:
            out.append((rest, rest.degree))
            break
        h = h.powmod(ctx.q, rest)
        g = gcd(rest, h - T)
        if g.degree and g.degree > 0:
            out.append((g, d))
            rest = rest // g
            h = h % rest
    return out


def _equal_degree_split(f: Poly, d: int, rng: random.Random) -> list[Poly]:
    """Cantor-Zassenhaus split of a product of degree-d primes."""
    ctx = f.ctx
    if f.degree == d:
        return [f]
    n = f.degree
    while True:
        u = Poly(ctx, [rng.randrange(ctx.q) for _ in range(n)] + [1])
        if ctx.p == 2:
            # absolute trace to GF(2): sum of u^(2^i), i < d*k
            t = u % f
            acc = t
            for _ in range(d * ctx.k - 1):
                t = (t * t) % f
                acc = acc + t
            g = gcd(f, acc)
        else:
            e = (ctx.q**d - 1) // 2
            g = gcd(f, u.powmod(e, f) - Poly.one(ctx))
        if g.degree and 0 < g.degree < f.degree:
            return (_equal_degree_split(g, d, rng)
                    + _equal_degree_split(f // g, d, rng))


def factor(f: Poly, seed: int = 0) -> Factorization:
    """Complete factorization over F_q; canonical, seed-independent output."""
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    unit = f.lc
    if f.degree == 0:
        return Factorization(unit, ())
    rng = _derived_rng(seed, f)
    monic_f = f.monic()
    found: list[tuple[Poly, int]] = []
    for part, mult in _squarefree_decomposition(monic_f):
        for block, d in _distinct_degree(part):
            for prime_poly in _equal_degree_split(block, d, rng):
                found.append((prime_poly, mult))
    found.sort(key=lambda pm: pm[0].sort_key())
    factors = tuple((PrimeIdeal(g), m) for g, m in found)
    return Factorization(unit, factors)


def valuation(f: Poly, l: PrimeIdeal):
    """Largest e with gen(l)^e | f; math.inf for the zero polynomial."""
    same_ctx(f.ctx, l.ctx)
    if f.is_zero():
        return INFINITY
    e = 0
    while True:
        q, r = divmod(f, l.gen)
        if not r.is_zero():
            return e
        f = q
        e += 1
        if f.degree is None:
            return e  # cannot happen for nonzero input, defensive


def primes_up_to(ctx: FieldCtx, maxdeg: int,
                 exclude: Iterable[PrimeIdeal] = ()) -> Iterator[PrimeIdeal]:
    """Monic irreducibles by degree then ascending coefficient encoding."""
    if maxdeg < 1:
        raise ValueError("maxdeg must be >= 1")
    skip = {p.gen.coeffs for p in exclude}
    for d in range(1, maxdeg + 1):
        qd = ctx.q**d
        for idx in range(qd):
            f = Poly.from_index(ctx, idx + qd)  # monic of degree exactly d
            if f.coeffs in skip:
                continue
            if is_irreducible(f):
                yield PrimeIdeal(f)


def count_monic_irreducibles(ctx: FieldCtx, d: int) -> int:
    """Gauss/necklace count via Moebius inversion."""

    def moebius(n: int) -> int:
        out, f = 1, 2
        while f * f <= n:
            if n % f == 0:
                n //= f
                if n % f == 0:
                    return 0
                out = -out
            f += 1
        if n > 1:
            out = -out
        return out

    total = 0
    for e in range(1, d + 1):
        if d % e == 0:
            total += moebius(d // e) * ctx.q**e
    return total // d
