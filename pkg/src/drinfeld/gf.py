"""Arithmetic in GF(q) = GF(p^k) with canonically chosen moduli.

Elements are plain integers in [0, q): the base-p digits of an element are
its coordinates with respect to the power basis of the canonical generator.
The modulus of GF(p^k) is the lexicographically smallest monic irreducible
polynomial of degree k over GF(p), coefficients compared from the constant
term upward, so encodings are reproducible across runs.

Contexts are immutable after construction; every operation is a pure
function of its arguments.
"""

from __future__ import annotations

import functools
import random
from dataclasses import dataclass
from typing import Iterator, Optional

from .errors import ContextMismatch, EnvelopeError

MAX_FIELD_SIZE = 2**31  # declared envelope for extension fields
_TABLE_LIMIT = 2**16    # log/exp tables are built up to this field size


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# Low-level polynomial arithmetic over GF(p), used to find canonical moduli.
# Polynomials are tuples of ints (ascending), or bit-packed ints when p = 2.
# ---------------------------------------------------------------------------

def _b2_mod(a: int, mod: int) -> int:
    dm = mod.bit_length() - 1
    while a.bit_length() - 1 >= dm and a:
        a ^= mod << (a.bit_length() - 1 - dm)
    return a


def _b2_mulmod(a: int, b: int, mod: int) -> int:
    r = 0
    while b:
        low = b & -b
        r ^= a << (low.bit_length() - 1)
        b ^= low
    return _b2_mod(r, mod)


def _b2_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, _b2_mod(a, b)
    return a


def _b2_is_irreducible(f: int) -> bool:
    # Ben-Or: reject as soon as a factor of degree i <= n/2 shows up in
    # gcd(x^(2^i) - x, f); cheap on the reducible candidates that dominate
    # the lexicographic modulus scan.
    n = f.bit_length() - 1
    if n == 1:
        return True
    if f & 1 == 0:  # divisible by x
        return False
    h = 2  # the polynomial x
    for _ in range(n // 2):
        h = _b2_mulmod(h, h, f)
        if _b2_gcd(h ^ 2, f) != 1:
            return False
    return True


def _pp_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pp_mulmod(a: list[int], b: list[int], mod: list[int], p: int) -> list[int]:
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    return _pp_mod(prod, mod, p)


def _pp_mod(a: list[int], mod: list[int], p: int) -> list[int]:
    a = list(a)
    dm = len(mod) - 1
    inv_lead = pow(mod[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        if a[-1] == 0:
            a.pop()
            continue
        c = a[-1] * inv_lead % p
        off = len(a) - 1 - dm
        for j, mj in enumerate(mod):
            a[off + j] = (a[off + j] - c * mj) % p
        a.pop()
    return _pp_trim(a)


def _pp_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = list(a), list(b)
    while b:
        a, b = b, _pp_mod(a, b, p)
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [c * inv % p for c in a]
    return a


def _pp_powmod(a: list[int], e: int, mod: list[int], p: int) -> list[int]:
    result = [1]
    base = _pp_mod(a, mod, p)
    while e:
        if e & 1:
            result = _pp_mulmod(result, base, mod, p)
        base = _pp_mulmod(base, base, mod, p)
        e >>= 1
    return result


def _pp_is_irreducible(f: list[int], p: int) -> bool:
    # Ben-Or test, as in the GF(2) case.
    n = len(f) - 1
    if n == 1:
        return True
    if f[0] == 0:
        return False
    h = [0, 1]
    for _ in range(n // 2):
        h = _pp_powmod(h, p, f, p)
        diff = list(h) + [0] * max(0, 2 - len(h))
        diff[1] = (diff[1] - 1) % p
        if _pp_gcd(f, _pp_trim(diff), p) != [1]:
            return False
    return True


def _canonical_modulus(p: int, k: int) -> tuple[int, ...]:
    """Lex-smallest monic irreducible of degree k over GF(p)."""
    if k == 1:
        return (0, 1)
    for c in range(p**k):
        digits = []
        v = c
        for _ in range(k):
            digits.append(v % p)
            v //= p
        f = digits + [1]
        if p == 2:
            packed = sum(bit << i for i, bit in enumerate(f))
            ok = _b2_is_irreducible(packed)
        else:
            ok = _pp_is_irreducible(f, p)
        if ok:
            return tuple(f)
    raise RuntimeError(f"no irreducible of degree {k} over GF({p})")


# ---------------------------------------------------------------------------
# Field contexts
# ---------------------------------------------------------------------------

class FieldCtx:
    """GF(p^k) with the canonical modulus; elements are ints in [0, p^k)."""

    def __init__(self, p: int, k: int, _token: object = None):
        if _token is not _CTX_TOKEN:
            raise TypeError("use field_new(p, k) to construct contexts")
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = _canonical_modulus(p, k)
        self._modbits = (
            sum(bit << i for i, bit in enumerate(self.modulus)) if p == 2 else 0
        )
        self._exp: Optional[list[int]] = None
        self._log: Optional[list[int]] = None
        if 4 <= self.q <= _TABLE_LIMIT and k > 1:
            self._build_tables()

    # -- construction helpers ------------------------------------------------

    def _build_tables(self) -> None:
        g = self._find_multiplicative_generator()
        q = self.q
        exp = [1] * (2 * q)
        log = [0] * q
        x = 1
        for i in range(q - 1):
            exp[i] = x
            log[x] = i
            x = self._mul_raw(x, g)
        for i in range(q - 1, 2 * (q - 1)):
            exp[i] = exp[i - (q - 1)]
        self._exp, self._log = exp, log

    def _find_multiplicative_generator(self) -> int:
        n = self.q - 1
        ells = _prime_factors(n)
        for g in range(2, self.q):
            if all(self._pow_raw(g, n // ell) != 1 for ell in ells):
                return g
        raise RuntimeError("no multiplicative generator found")

    # -- encoding ------------------------------------------------------------

    def coords(self, a: int) -> tuple[int, ...]:
        """Base-p digits: coordinates in the power basis of the generator."""
        out = []
        for _ in range(self.k):
            out.append(a % self.p)
            a //= self.p
        return tuple(out)

    def encode(self, coords) -> int:
        a = 0
        for c in reversed(list(coords)):
            a = a * self.p + c % self.p
        return a

    @property
    def gen(self) -> int:
        """Class of the variable in GF(p)[x]/(modulus); 0 for prime fields."""
        return self.p % self.q

    def elements(self) -> Iterator[int]:
        return iter(range(self.q))

    # -- arithmetic ----------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        ca, cb = self.coords(a), self.coords(b)
        return self.encode((x + y) % self.p for x, y in zip(ca, cb))

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        if self.k == 1:
            return (-a) % self.p
        return self.encode((-x) % self.p for x in self.coords(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def _mul_raw(self, a: int, b: int) -> int:
        """Table-free multiplication straight off the digit encoding."""
        if self.k == 1:
            return a * b % self.p
        if self.p == 2:
            r = 0
            while b:
                low = b & -b
                r ^= a << (low.bit_length() - 1)
                b ^= low
            return _b2_mod(r, self._modbits)
        ca, cb = self.coords(a), self.coords(b)
        prod = [0] * (2 * self.k - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    prod[i + j] += x * y
        prod = [c % self.p for c in prod]
        red = _pp_mod(prod, list(self.modulus), self.p)
        red += [0] * (self.k - len(red))
        return self.encode(red)

    def mul(self, a: int, b: int) -> int:
        if self._exp is not None:
            if a == 0 or b == 0:
                return 0
            return self._exp[self._log[a] + self._log[b]]
        return self._mul_raw(a, b)

    def _pow_raw(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self._mul_raw(r, a)
            a = self._mul_raw(a, a)
            e >>= 1
        return r

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if a == 0:
            return 1 if e == 0 else 0
        n = self.q - 1
        e %= n
        if self._exp is not None:
            return self._exp[self._log[a] * e % n]
        if self.k == 1:
            return pow(a, e, self.p)
        return self._pow_raw(a, e)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inversion of zero field element")
        if self._exp is not None:
            return self._exp[self.q - 1 - self._log[a]]
        if self.k == 1:
            return pow(a, self.p - 2, self.p)
        return self.pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def frobenius(self, a: int, i: int = 1) -> int:
        """The field automorphism x -> x^(p^i); fixes GF(p)."""
        return self.pow(a, pow(self.p, i, self.q - 1) if self.q > 2 else 1)

    def is_square(self, a: int) -> bool:
        if a == 0 or self.p == 2:
            return True
        return self.pow(a, (self.q - 1) // 2) == 1

    # -- misc ----------------------------------------------------------------

    def check_element(self, a: int) -> None:
        if not isinstance(a, int) or not 0 <= a < self.q:
            raise ValueError(f"{a!r} is not an element of {self!r}")

    def to_dict(self) -> dict:
        return {"p": self.p, "k": self.k, "modulus": list(self.modulus)}

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldCtx) and (self.p, self.k) == (other.p, other.k)

    def __hash__(self) -> int:
        return hash((self.p, self.k))

    def __repr__(self) -> str:
        return f"GF({self.q})"


_CTX_TOKEN = object()


@functools.lru_cache(maxsize=None)
def field_new(p: int, k: int) -> FieldCtx:
    """Context for GF(p^k) with the canonical modulus; cached and immutable."""
    if not _is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    if k < 1:
        raise ValueError("k must be >= 1")
    if p**k > MAX_FIELD_SIZE:
        raise EnvelopeError(f"field size {p}^{k} exceeds envelope 2^31")
    return FieldCtx(p, k, _token=_CTX_TOKEN)


def same_ctx(ctx: FieldCtx, other: FieldCtx) -> None:
    if ctx != other:
        raise ContextMismatch(f"context mismatch: {ctx!r} vs {other!r}")


# ---------------------------------------------------------------------------
# Extension fields with explicit embeddings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Extension:
    """GF(q^d) together with an injective homomorphism from GF(q)."""

    base: FieldCtx
    field: FieldCtx
    root: int                      # image in `field` of the base generator
    _powers: tuple[int, ...]       # root^0 .. root^(k-1)

    def embed(self, a: int) -> int:
        f = self.field
        acc = 0
        for digit, rp in zip(self.base.coords(a), self._powers):
            if digit:
                acc = f.add(acc, f.mul(digit % f.p, rp))
        return acc

    @functools.cached_property
    def _section_table(self) -> dict[int, int]:
        return {self.embed(a): a for a in range(self.base.q)}

    def section(self, y: int) -> Optional[int]:
        """Preimage in GF(q) of y, or None if y is outside the image."""
        return self._section_table.get(y)


def _px_mulmod(ctx, a, b, mod):
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = ctx.add(prod[i + j], ctx.mul(x, y))
    return _px_mod(ctx, prod, mod)


def _px_mod(ctx, a, mod):
    a = list(a)
    dm = len(mod) - 1
    inv_lead = ctx.inv(mod[-1])
    while a and a[-1] == 0:
        a.pop()
    while len(a) - 1 >= dm and a:
        c = ctx.mul(a[-1], inv_lead)
        off = len(a) - 1 - dm
        for j, mj in enumerate(mod):
            a[off + j] = ctx.sub(a[off + j], ctx.mul(c, mj))
        while a and a[-1] == 0:
            a.pop()
    return a


def _px_gcd(ctx, a, b):
    a, b = list(a), list(b)
    while b:
        a, b = b, _px_mod(ctx, a, b)
    if a:
        inv = ctx.inv(a[-1])
        a = [ctx.mul(c, inv) for c in a]
    return a


def _px_powmod(ctx, a, e, mod):
    result = [1]
    base = _px_mod(ctx, a, mod)
    while e:
        if e & 1:
            result = _px_mulmod(ctx, result, base, mod)
        base = _px_mulmod(ctx, base, base, mod)
        e >>= 1
    return result


def _px_roots(ctx: FieldCtx, f: list[int]) -> list[int]:
    """All roots in ctx of a nonzero polynomial given over ctx (small degree)."""
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    if len(f) <= 1:
        return []
    # isolate the product of distinct linear factors: gcd(f, x^q - x)
    xq = _px_powmod(ctx, [0, 1], ctx.q, f)
    diff = list(xq) + [0] * max(0, 2 - len(xq))
    diff[1] = ctx.sub(diff[1], 1)
    while diff and diff[-1] == 0:
        diff.pop()
    g = _px_gcd(ctx, f, diff)
    roots: list[int] = []
    stack = [g]
    rng = random.Random(0x5EED ^ ctx.q)  # splitting only affects runtime
    while stack:
        h = stack.pop()
        if len(h) - 1 <= 0:
            continue
        if len(h) - 1 == 1:
            roots.append(ctx.div(ctx.neg(h[0]), h[1]))
            continue
        split = None
        while split is None:
            a = rng.randrange(1, ctx.q)
            if ctx.p == 2:
                # trace splitting: sum of (a*x)^(2^i) over the GF(2)-degree
                n = ctx.k
                term = _px_mod(ctx, [0, a], h)
                acc = list(term)
                for _ in range(n - 1):
                    term = _px_mulmod(ctx, term, term, h)
                    acc = [ctx.add(u, v) for u, v in
                           zip(acc + [0] * len(term), term + [0] * len(acc))]
                    while acc and acc[-1] == 0:
                        acc.pop()
                cand = _px_gcd(ctx, h, acc)
            else:
                e = (ctx.q - 1) // 2
                t = _px_powmod(ctx, [a, 1], e, h)
                t = list(t) + [0] * max(0, 1 - len(t))
                t[0] = ctx.sub(t[0], 1)
                while t and t[-1] == 0:
                    t.pop()
                cand = _px_gcd(ctx, h, t)
            if 0 < len(cand) - 1 < len(h) - 1:
                split = cand
        rest = _px_divide_exact(ctx, h, split)
        stack.append(split)
        stack.append(rest)
    return sorted(roots)


def _px_divide_exact(ctx, a, b):
    a = list(a)
    dm = len(b) - 1
    inv_lead = ctx.inv(b[-1])
    out = [0] * (len(a) - dm)
    while len(a) - 1 >= dm and a:
        if a[-1] == 0:
            a.pop()
            continue
        c = ctx.mul(a[-1], inv_lead)
        off = len(a) - 1 - dm
        out[off] = c
        for j, mj in enumerate(b):
            a[off + j] = ctx.sub(a[off + j], ctx.mul(c, mj))
        while a and a[-1] == 0:
            a.pop()
    return out


def extension_field(base: FieldCtx, d: int) -> Extension:
    """GF(q^d) over GF(q) with an explicit embedding (canonical root choice).

    The extension is realized as GF(p^(k*d)) with its own canonical modulus;
    the embedding sends the base generator to the smallest-encoded root of
    the base modulus. No compatibility across different towers is implied.
    """
    if d < 1:
        raise ValueError("extension degree must be >= 1")
    if base.q**d > MAX_FIELD_SIZE:
        raise EnvelopeError(
            f"extension size {base.q}^{d} exceeds envelope 2^31")
    ext = field_new(base.p, base.k * d)
    if base.k == 1:
        root = base.p % ext.q if base.k > 1 else 0
        powers = (1,)
        return Extension(base, ext, root, powers)
    f_coeffs = [c % base.p for c in base.modulus]
    roots = _px_roots(ext, f_coeffs)
    if not roots:
        raise RuntimeError("base modulus has no root in the extension")
    root = roots[0]
    powers = [1]
    for _ in range(base.k - 1):
        powers.append(ext.mul(powers[-1], root))
    return Extension(base, ext, root, tuple(powers))
