"""Exact and empirical densities of the criterion sets inside W^r.

W^r(N) is the set of coefficient vectors (g_1, ..., g_r) with g_r != 0 and
all degrees < N, of size q^((r-1)N) (q^N - 1). The first-stage set S^r_1
asks for unit constant terms; the full set S^r additionally needs a witness
prime: l != (T) with v_l(g_{r-1}) = 0 and p not dividing v_l(g_r). Counts
come in three grades: closed form, exhaustive enumeration (sharded,
bit-identical), and seeded Monte Carlo.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import EnvelopeError
from .gf import FieldCtx
from .polyring import Poly, factor, prime_T, valuation

EXHAUSTIVE_CAP = 2**26


@dataclass(frozen=True)
class DensityReport:
    q: int
    r: int
    N: int
    w_count: int
    s1_count: int
    s_count: Optional[int]                   # exhaustive, or None
    s_estimate: Optional[tuple] = None       # (estimate, stderr, samples)
    s1_estimate: Optional[tuple] = None
    mode: str = "closed-form"

    @property
    def ratio_s1(self) -> Fraction:
        return Fraction(self.s1_count, self.w_count)

    @property
    def limit(self) -> Fraction:
        return Fraction(self.q - 1, self.q) ** self.r

    def to_dict(self) -> dict:
        out = {
            "q": self.q, "r": self.r, "N": self.N, "mode": self.mode,
            "wCount": self.w_count, "s1Count": self.s1_count,
            "ratioS1": {"num": self.ratio_s1.numerator,
                        "den": self.ratio_s1.denominator},
            "limit": {"num": self.limit.numerator,
                      "den": self.limit.denominator},
        }
        if self.s_count is not None:
            out["sCount"] = self.s_count
            out["ratioS"] = {
                "num": Fraction(self.s_count, self.w_count).numerator,
                "den": Fraction(self.s_count, self.w_count).denominator}
        if self.s_estimate is not None:
            est, err, n = self.s_estimate
            out["sEstimate"] = {"value": est, "stderr": err, "samples": n}
        if self.s1_estimate is not None:
            est, err, n = self.s1_estimate
            out["s1Estimate"] = {"value": est, "stderr": err, "samples": n}
        return out

    def csv_row(self) -> str:
        s = "" if self.s_count is None else str(self.s_count)
        est = "" if self.s_estimate is None else repr(self.s_estimate[0])
        return (f"{self.q},{self.r},{self.N},{self.mode},{self.w_count},"
                f"{self.s1_count},{s},{est},"
                f"{self.ratio_s1.numerator}/{self.ratio_s1.denominator},"
                f"{self.limit.numerator}/{self.limit.denominator}")

    CSV_HEADER = ("q,r,N,mode,wCount,s1Count,sCount,sEstimate,"
                  "ratioS1,limit")


def exact_counts(ctx: FieldCtx, r: int, N: int) -> DensityReport:
    """Closed-form |W^r(N)| and |S^r_1(N)|; no enumeration."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if r < 2:
        raise ValueError("r must be >= 2")
    q = ctx.q
    w = q ** ((r - 1) * N) * (q**N - 1)
    s1 = (q**N - q ** (N - 1)) ** r
    return DensityReport(q, r, N, w, s1, None, mode="closed-form")


# ---------------------------------------------------------------------------
# Exhaustive enumeration
# ---------------------------------------------------------------------------

def _unit_flags(ctx: FieldCtx, N: int) -> np.ndarray:
    """flags[i] = 1 iff the polynomial with index i has unit constant term."""
    q = ctx.q
    idx = np.arange(q**N, dtype=np.int64)
    return (idx % q != 0).astype(np.uint8)


def _witness_pair_table(ctx: FieldCtx, N: int, seed: int = 0) -> np.ndarray:
    """pair[a, b] = 1 iff (g_{r-1}, g_r) = (poly a, poly b) admits a witness
    prime: l != (T), v_l(g_r) prime to p, l not dividing g_{r-1}."""
    q = ctx.q
    p = ctx.p
    t = prime_T(ctx)
    size = q**N
    table = np.zeros((size, size), dtype=np.uint8)
    polys = [Poly.from_index(ctx, i) for i in range(size)]
    for b in range(1, size):
        gb = polys[b]
        witnesses = [pr for pr, mult in factor(gb, seed=seed).factors
                     if pr != t and mult % p != 0]
        if not witnesses:
            continue
        for a in range(size):
            ga = polys[a]
            if any(not pr.divides(ga) for pr in witnesses):
                table[a, b] = 1
    return table


def exhaustive_density(ctx: FieldCtx, r: int, N: int,
                       shards: int = 1) -> DensityReport:
    """Enumerate all of W^r(N) (row-major tuple index order, sharded by
    index range); counts merge by addition and are identical for any shard
    count."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if r < 2:
        raise ValueError("r must be >= 2")
    q = ctx.q
    total = q ** (r * N)
    if total > EXHAUSTIVE_CAP:
        raise EnvelopeError(
            f"q^(rN) = {total} exceeds the exhaustive envelope 2^26")
    units = _unit_flags(ctx, N)
    pair = _witness_pair_table(ctx, N)
    size = q**N
    w_count = s1_count = s_count = 0
    if shards < 1:
        raise ValueError("shards must be >= 1")
    bounds = [total * i // shards for i in range(shards + 1)]
    for lo, hi in zip(bounds, bounds[1:]):
        if lo == hi:
            continue
        for start in range(lo, hi, 2**22):
            stop = min(start + 2**22, hi)
            idx = np.arange(start, stop, dtype=np.int64)
            # row-major: g_r varies fastest
            comps = []
            rest = idx
            for _ in range(r):
                comps.append(rest % size)
                rest = rest // size
            comps.reverse()  # comps[0] = g_1, ..., comps[-1] = g_r
            in_w = comps[-1] != 0
            w_count += int(in_w.sum())
            in_s1 = in_w.copy()
            for c in comps:
                in_s1 &= units[c] != 0
            s1_count += int(in_s1.sum())
            in_s = in_s1 & (pair[comps[-2], comps[-1]] != 0)
            s_count += int(in_s.sum())
    report = DensityReport(q, r, N, w_count, s1_count, s_count,
                           mode="exhaustive")
    expected = exact_counts(ctx, r, N)
    if w_count != expected.w_count or s1_count != expected.s1_count:
        raise RuntimeError("enumeration disagrees with the closed form")
    return report


# ---------------------------------------------------------------------------
# Monte Carlo
# ---------------------------------------------------------------------------

def _is_member(ctx: FieldCtx, gs: list[Poly]) -> tuple[bool, bool]:
    """(in S^r_1, in S^r) for a vector already inside W^r."""
    p = ctx.p
    t = prime_T(ctx)
    s1 = all(g.constant_term() != 0 for g in gs)
    witness = False
    for pr, mult in factor(gs[-1]).factors:
        if pr == t or mult % p == 0:
            continue
        if valuation(gs[-2], pr) == 0:
            witness = True
            break
    return s1, s1 and witness


def monte_carlo_density(ctx: FieldCtx, r: int, N: int, samples: int,
                        seed: int) -> DensityReport:
    """Uniform sampling of W^r(N) by rejection (g_r != 0); deterministic
    for a fixed seed. The stderr is the binomial normal approximation and
    is reported, never used as a pass criterion."""
    if samples < 10**3:
        raise ValueError("use at least 10^3 samples")
    if r < 2 or N < 1:
        raise ValueError("r must be >= 2 and N >= 1")
    q = ctx.q
    size = q**N
    rng = random.Random(seed)
    s1_hits = s_hits = 0
    for _ in range(samples):
        while True:
            idxs = [rng.randrange(size) for _ in range(r)]
            if idxs[-1] != 0:
                break
        gs = [Poly.from_index(ctx, i) for i in idxs]
        s1, s = _is_member(ctx, gs)
        s1_hits += s1
        s_hits += s
    def binom(hits):
        est = hits / samples
        err = math.sqrt(max(est * (1 - est), 1e-12) / samples)
        return est, err, samples

    exact = exact_counts(ctx, r, N)
    return DensityReport(
        q, r, N, exact.w_count,
        s1_count=exact.s1_count,
        s_count=None,
        s_estimate=binom(s_hits),
        s1_estimate=binom(s1_hits),
        mode="monte-carlo",
    )
