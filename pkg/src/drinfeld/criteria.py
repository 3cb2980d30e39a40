"""Valuative surjectivity criteria and inertia-order bounds.

The membership test for the rank-r criterion set asks for unit constant
terms (v_T(g_i) = 0 for all i) plus a witness prime l != (T) with
v_l(g_{r-1}) = 0 and p not dividing v_l(g_r). Witnesses are found by
factoring g_r completely, which also certifies non-membership.

Failure codes are stable strings, e.g. "NU_T_G2_NONZERO" when v_T(g_2)
is nonzero (or undefined because g_2 = 0) and "NO_WITNESS_PRIME".
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .modules import DrinfeldModule
from .polyring import Poly, PrimeIdeal, factor, prime_T, valuation


@dataclass(frozen=True)
class CriterionReport:
    member: bool
    failures: tuple[str, ...]
    witnesses: tuple[PrimeIdeal, ...]
    theorem_applicable: bool

    def to_dict(self) -> dict:
        return {
            "member": self.member,
            "theoremApplicable": self.theorem_applicable,
            "witnesses": [str(w) for w in self.witnesses],
            "failures": list(self.failures),
        }


def theorem_gate(rank: int, q: int) -> bool:
    """Whether the surjectivity theorem for this rank covers this q."""
    if rank == 2:
        return q >= 4
    if rank == 3:
        return q > 9 and q % 2 == 1
    return False


def s_r_membership(m: DrinfeldModule, seed: int = 0) -> CriterionReport:
    """Membership in the rank-r criterion set, with all witness primes."""
    if m.rank < 2:
        raise ValueError("membership is defined for rank >= 2")
    p = m.ctx.p
    t = prime_T(m.ctx)
    failures = []
    for i in range(1, m.rank + 1):
        if valuation(m.coefficient(i), t) != 0:
            failures.append(f"NU_T_G{i}_NONZERO")
    witnesses = []
    g_top = m.coefficient(m.rank)
    g_next = m.coefficient(m.rank - 1)
    for prime, mult in factor(g_top, seed=seed).factors:
        if prime == t:
            continue
        if mult % p == 0:
            continue
        if valuation(g_next, prime) != 0:
            continue
        witnesses.append(prime)
    if not witnesses:
        failures.append("NO_WITNESS_PRIME")
    return CriterionReport(
        member=not failures,
        failures=tuple(failures),
        witnesses=tuple(witnesses),
        theorem_applicable=theorem_gate(m.rank, m.ctx.q),
    )


def ray_criterion(m: DrinfeldModule) -> CriterionReport:
    """Rank-2 criterion driven by a triple (a1, a2, eta).

    Searches all a1 != a2 in F_q^x and non-squares eta for:
    v_T(g1) = 0, v_(T-a1)(g1) >= 1, v_(T-a2)(g1) = 0, v_T(g2) = 0,
    g2 = -a1 eta^(-1) mod (T-a1), and v_(T-a2)(g2) = 1. The search space
    has at most (q-1)(q-2)(q-1)/2 triples, so it is scanned exhaustively.
    """
    if m.rank != 2:
        raise ValueError("this criterion applies to rank 2 only")
    ctx = m.ctx
    q = ctx.q
    g1, g2 = m.coefficient(1), m.coefficient(2)
    t = prime_T(ctx)
    failures = []
    if valuation(g1, t) != 0:
        failures.append("NU_T_G1_NONZERO")
    if valuation(g2, t) != 0:
        failures.append("NU_T_G2_NONZERO")
    applicable = q >= 5 and q % 2 == 1
    nonsquares = [e for e in range(1, q) if not ctx.is_square(e)]
    witnesses: tuple[PrimeIdeal, ...] = ()
    found = False
    if not failures:
        for a1 in range(1, q):
            la1 = PrimeIdeal(Poly(ctx, [ctx.neg(a1), 1]))
            if valuation(g1, la1) < 1:
                continue
            for a2 in range(1, q):
                if a2 == a1:
                    continue
                la2 = PrimeIdeal(Poly(ctx, [ctx.neg(a2), 1]))
                if valuation(g1, la2) != 0 or valuation(g2, la2) != 1:
                    continue
                for eta in nonsquares:
                    target = ctx.neg(ctx.mul(a1, ctx.inv(eta)))
                    if g2.eval(a1) == target:
                        witnesses = (la1, la2)
                        found = True
                        break
                if found:
                    break
            if found:
                break
        if not found:
            failures.append("NO_ADMISSIBLE_TRIPLE")
    return CriterionReport(
        member=not failures,
        failures=tuple(failures),
        witnesses=witnesses,
        theorem_applicable=applicable,
    )


def inertia_order_rank2(vg1: int, vg2: int, q: int) -> int:
    """Order in Q/Z of ((q+1) vg1 - vg2)/((q-1)q): a lower bound for the
    inertia image at a prime where g_1, g_2 have these valuations."""
    if vg1 < 0 or vg2 < 0:
        raise ValueError("valuations must be >= 0")
    return Fraction((q + 1) * vg1 - vg2, (q - 1) * q).denominator


def inertia_bound_rank3(vg2: int, vg3: int, q: int) -> tuple[int, bool]:
    """Reduced denominator of vg3/(q^2 (q-1)) and whether q^2 divides it.

    vg2 records the hypothesis context (the bound needs v_l(g_2) = 0 to be
    meaningful as a ramification bound); it does not enter the arithmetic.
    """
    if vg2 < 0 or vg3 < 0:
        raise ValueError("valuations must be >= 0")
    bound = Fraction(vg3, q * q * (q - 1)).denominator
    return bound, bound % (q * q) == 0
