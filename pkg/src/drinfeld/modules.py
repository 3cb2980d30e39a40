"""Drinfeld A-modules phi: a -> phi_a, reductions, heights, Newton polygons.

A module of rank r over A = F_q[T] is determined by the coefficient vector
(g_1, ..., g_r) with g_r != 0 via phi_T = T + g_1 tau + ... + g_r tau^r.
Everything here is exact: valuations are integers (or the infinity
sentinel) and slopes are fractions.Fraction; no floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .gf import Extension, FieldCtx, extension_field
from .gf import _px_roots
from .polyring import Poly, PrimeIdeal, valuation
from .twisted import FieldRing, PolyRing, TwistedPoly, linearized_poly


@dataclass(frozen=True)
class DrinfeldModule:
    """phi_T = T + g_1 tau + ... + g_r tau^r with g_r != 0."""

    ctx: FieldCtx
    rank: int
    g: tuple[Poly, ...]

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be >= 1")
        if len(self.g) != self.rank:
            raise ValueError("need exactly rank coefficients g_1..g_r")
        for gi in self.g:
            if gi.ctx != self.ctx:
                raise ValueError("coefficient context mismatch")
        if self.g[-1].is_zero():
            raise ValueError("g_r must be nonzero")

    @property
    def q(self) -> int:
        return self.ctx.q

    def coefficient(self, i: int) -> Poly:
        """g_i for 1 <= i <= rank."""
        return self.g[i - 1]

    def __str__(self) -> str:
        gs = ", ".join(str(gi) for gi in self.g)
        return f"Drinfeld(rank {self.rank} over {self.ctx!r}; g = ({gs}))"


def drinfeld_module(ctx: FieldCtx, g) -> DrinfeldModule:
    gs = tuple(g)
    return DrinfeldModule(ctx, len(gs), gs)


def phi_T(m: DrinfeldModule) -> TwistedPoly:
    ring = PolyRing(m.ctx)
    return TwistedPoly(ring, (Poly.T(m.ctx),) + m.g)


def phi_a(m: DrinfeldModule, a: Poly) -> TwistedPoly:
    """The image of a under phi, computed as a(phi_T) in A{tau}."""
    ring = PolyRing(m.ctx)
    base = phi_T(m)
    acc = TwistedPoly.zero(ring)
    for c in reversed(a.coeffs):
        acc = acc * base + TwistedPoly.constant(ring, Poly.const(m.ctx, c))
    return acc


def torsion_poly(m: DrinfeldModule, a: Poly) -> list[tuple[int, Poly]]:
    """phi_a(x) as a sparse F_q-linear polynomial: pairs (i, c) = c*x^(q^i)."""
    if a.is_zero():
        raise ValueError("torsion polynomial of a = 0 is not defined")
    return linearized_poly(phi_a(m, a))


# ---------------------------------------------------------------------------
# Reduction analysis
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ReductionReport:
    prime: PrimeIdeal
    stable_rank: int
    good: bool
    height_if_good: Optional[Fraction]
    twist_slope: Fraction

    def to_dict(self) -> dict:
        return {
            "prime": str(self.prime),
            "stableRank": self.stable_rank,
            "good": self.good,
            "heightIfGood": (None if self.height_if_good is None else
                             {"num": self.height_if_good.numerator,
                              "den": self.height_if_good.denominator}),
            "twistSlope": {"num": self.twist_slope.numerator,
                           "den": self.twist_slope.denominator},
        }


def _twist_slopes(m: DrinfeldModule, l: PrimeIdeal):
    """(slope_i)_{i=1..r} with slope_i = v_l(g_i)/(q^i - 1), inf for g_i = 0."""
    q = m.q
    out = []
    for i in range(1, m.rank + 1):
        v = valuation(m.coefficient(i), l)
        out.append(math.inf if math.isinf(v) else Fraction(v, q**i - 1))
    return out


def reduction_at(m: DrinfeldModule, l: PrimeIdeal) -> ReductionReport:
    """Stable rank, good-reduction flag and (at (T), if good) the height.

    The minimizing twist u sends g_i to u^(q^i - 1) g_i; since coefficients
    lie in A all valuations are >= 0, the minimal slope s exists, and the
    stable rank is the largest index attaining it. The reduction height is
    reported at l = (T), where it reads off the coefficients of phi_T as
    the least index i >= 1 whose twisted valuation vanishes; heights at
    other primes are left absent rather than defaulted (computing them
    would need phi_gen, whose coefficient degrees grow like q^(r deg l)).
    """
    slopes = _twist_slopes(m, l)
    s = min(slopes)
    stable_rank = max(i for i, sl in enumerate(slopes, start=1) if sl == s)
    good = stable_rank == m.rank
    height = None
    if good and l.gen == Poly.T(m.ctx):
        q = m.q
        ht = None
        for j in range(1, m.rank + 1):
            v = valuation(m.coefficient(j), l)
            if not math.isinf(v) and Fraction(v) == s * (q**j - 1):
                ht = j
                break
        if ht is None:
            raise RuntimeError("good reduction without a unit coefficient")
        height = Fraction(ht, l.degree)
    return ReductionReport(l, stable_rank, good, height, s)


@dataclass(frozen=True)
class ReducedModule:
    """A good reduction of phi at l, with coefficients in GF(q^deg l).

    For a positive twist slope the reduced coefficient at a critical index
    is the image of the unit part g_i / gen^v; this fixes one model among
    the residue-unit twists, which all share the same Frobenius classes.
    """

    module: DrinfeldModule
    prime: PrimeIdeal
    ext: Extension            # F_q -> L = GF(q^deg l)
    rho: int                  # image of T in L (a root of gen(l))
    coeffs: tuple[int, ...]   # images of g_1..g_r in L
    report: ReductionReport

    @property
    def residue_field(self) -> FieldCtx:
        return self.ext.field

    def phi_T_bar(self) -> TwistedPoly:
        ring = FieldRing(self.ext.field, self.module.q)
        return TwistedPoly(ring, (self.rho,) + self.coeffs)


def reduced_module(m: DrinfeldModule, l: PrimeIdeal) -> ReducedModule:
    report = reduction_at(m, l)
    if not report.good:
        raise ValueError(f"phi has bad reduction at {l!s}")
    ext = extension_field(m.ctx, l.degree)
    L = ext.field
    lifted = [ext.embed(c) for c in l.gen.coeffs]
    roots = _px_roots(L, lifted)
    if not roots:
        raise RuntimeError("prime generator has no root in its residue field")
    rho = roots[0]
    s = report.twist_slope
    q = m.q
    coeffs = []
    for i in range(1, m.rank + 1):
        gi = m.coefficient(i)
        v = valuation(gi, l)
        if math.isinf(v) or Fraction(v) != s * (q**i - 1):
            coeffs.append(0)
            continue
        unit_part = gi // l.gen**v if v else gi
        coeffs.append(unit_part.eval_embedded(ext, rho))
    return ReducedModule(m, l, ext, rho, tuple(coeffs), report)


# ---------------------------------------------------------------------------
# Newton polygons
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NewtonPolygon:
    """Lower polygon of phi_a(x)/x at a prime; slopes negate root valuations."""

    points: tuple[tuple[int, Fraction], ...]
    segments: tuple[tuple[Fraction, int], ...]

    def to_dict(self) -> dict:
        return {
            "points": [{"x": x, "y": {"num": y.numerator, "den": y.denominator}}
                       for x, y in self.points],
            "segments": [{"slope": {"num": s.numerator, "den": s.denominator},
                          "length": n} for s, n in self.segments],
        }


def _lower_hull(points: list[tuple[int, Fraction]]) -> list[tuple[int, Fraction]]:
    hull: list[tuple[int, Fraction]] = []
    for pt in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            x3, y3 = pt
            # drop middle point unless it makes a strict right turn below
            if (x2 - x1) * (y3 - y1) - (y2 - y1) * (x3 - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def newton_polygon(m: DrinfeldModule, a: Poly, l: PrimeIdeal) -> NewtonPolygon:
    """Polygon with points (q^i - 1, v_l(c_i)) for the coefficients of phi_a."""
    if a.is_zero():
        raise ValueError("Newton polygon of phi_0 is not defined")
    q = m.q
    coeffs = phi_a(m, a).coeffs
    pts = []
    for i, c in enumerate(coeffs):
        v = valuation(c, l)
        if math.isinf(v):
            continue
        pts.append((q**i - 1, Fraction(v)))
    hull = _lower_hull(pts)
    segments = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        segments.append((Fraction(y2 - y1, x2 - x1), x2 - x1))
    return NewtonPolygon(tuple(pts), tuple(segments))


def ramification_denominator(np: NewtonPolygon) -> list[int]:
    """Per segment: the reduced denominator of the slope, a lower bound on
    the local ramification contributed by roots of that valuation."""
    if not np.points:
        raise ValueError("empty Newton polygon")
    return [abs(slope).denominator for slope, _ in np.segments]
