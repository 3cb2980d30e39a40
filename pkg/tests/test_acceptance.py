"""Acceptance suite: one test per criterion, stated tolerances pinned.

Run with `pytest tests/test_acceptance.py -s` to see one PASS/FAIL line per
criterion. Criterion 2 is implemented exactly as stated and marked as a
strict expected failure: the module it names has a rational torsion point
(phi_T(1) = T + 1 + (T+1) = 0 in characteristic 2), so its mod-(T) image is
a 12-element point stabilizer and can never reach |GL_2(F_4)| = 180; see
the companion test, which shows the same pipeline passing every clause on a
sibling member without the defect.
"""

import random
import time
from fractions import Fraction

import pytest

from drinfeld import field_new
from drinfeld.criteria import (
    inertia_bound_rank3,
    inertia_order_rank2,
    s_r_membership,
)
from drinfeld.density import exhaustive_density
from drinfeld.errors import EnvelopeError
from drinfeld.galois import (
    accumulate_image,
    accumulate_image_mod_T2,
    frobenius_matrix_mod_T,
    good_primes,
)
from drinfeld.matgroup import aschbacher_obstructions, gl_order, identity
from drinfeld.matgroup import mt2_is_scalar, mt2_reduce
from drinfeld.modules import drinfeld_module, newton_polygon, phi_a
from drinfeld.polyring import (
    Poly,
    PrimeIdeal,
    factor,
    parse_poly,
    prime_T,
    valuation,
)
from drinfeld.twisted import FieldRing, PolyRing, TwistedPoly


def announce(n, status, detail):
    print(f"\nACCEPTANCE {n}: {status} - {detail}")


# -- criterion 1: density formulas -------------------------------------------

def test_criterion_1_density_formulas():
    cases = [(q, r, N)
             for q in (2, 3, 4) for r in (2, 3) for N in (1, 2, 3, 4)
             if q ** (r * N) <= 2**26]
    worst = 0.0
    for q, r, N in cases:
        ctx = field_new(2, 2) if q == 4 else field_new(q, 1)
        t0 = time.time()
        rep = exhaustive_density(ctx, r, N)
        elapsed = time.time() - t0
        worst = max(worst, elapsed)
        assert elapsed < 120, f"(q,r,N)=({q},{r},{N}) took {elapsed:.1f}s"
        assert rep.s1_count == (q**N - q ** (N - 1)) ** r  # zero tolerance
        assert rep.ratio_s1 == (Fraction(q - 1, q) ** r
                                / (1 - Fraction(1, q**N)))
    announce(1, "PASS", f"{len(cases)} (q,r,N) cases exact; "
                        f"slowest case {worst:.1f}s < 120s")


# -- criterion 2: rank-2 verdict pipeline -------------------------------------

CRITERION_2_DEFECT = (
    "the stated module g=(1, T+1) over GF(4) has the rational torsion point "
    "x=1 (phi_T(1) = T + 1 + (T+1) = 0 in char 2), so its mod-(T) image is "
    "contained in a point stabilizer of order 12 and cannot reach 180; "
    "verified by two independent sampling routes and a from-scratch brute "
    "force; see the decisions ledger and test_galois.py"
)


@pytest.mark.xfail(strict=True, reason=CRITERION_2_DEFECT)
def test_criterion_2_rank2_pipeline_as_stated():
    gf4 = field_new(2, 2)
    m = drinfeld_module(gf4, [Poly.one(gf4), parse_poly(gf4, "T+1")])
    t0 = time.time()
    rep = accumulate_image(m, max_primes=200, max_deg=3)
    rep2 = accumulate_image_mod_T2(m, max_primes=200, max_deg=3)
    elapsed = time.time() - t0
    announce(2, "FAILED (documented defect)",
             f"order={rep.evidence.order} (stated 180), "
             f"irreducible={rep.evidence.irreducible}; " + CRITERION_2_DEFECT)
    assert elapsed < 300
    assert rep.evidence.order == 180
    assert rep.evidence.det_image_order == gf4.q - 1
    assert rep.evidence.irreducible
    assert rep2.witness is not None


def test_criterion_2_pipeline_on_defect_free_member():
    # the same checklist passes on a member without a rational torsion
    # point, demonstrating the pipeline meets every stated clause
    gf4 = field_new(2, 2)
    m = drinfeld_module(gf4, [Poly.one(gf4), parse_poly(gf4, "T^2+T+2")])
    assert s_r_membership(m).member
    # no rational torsion: the coefficient sum T + 1 + g2 is nonzero
    total = Poly.T(gf4) + Poly.one(gf4) + parse_poly(gf4, "T^2+T+2")
    assert not total.is_zero()
    t0 = time.time()
    rep = accumulate_image(m, max_primes=200, max_deg=3)
    rep2 = accumulate_image_mod_T2(m, max_primes=200, max_deg=3)
    elapsed = time.time() - t0
    assert elapsed < 300
    assert rep.evidence.order == 180
    assert rep.evidence.det_image_order == 3  # index 1 in F_4^x
    assert rep.evidence.irreducible
    assert rep.primes_used <= 200
    w = rep2.witness
    assert w is not None and mt2_reduce(w) == identity(2)
    assert not mt2_is_scalar(w)
    announce("2*", "PASS",
             f"sibling member (1, T^2+T+2): order 180, det index 1, "
             f"irreducible, witness at {rep2.stopping_prime}; {elapsed:.1f}s")


# -- criterion 3: rank-3 verdict pipeline -------------------------------------

def test_criterion_3_rank3_pipeline():
    gf11 = field_new(11, 1)
    m = drinfeld_module(
        gf11, [Poly.one(gf11), Poly.one(gf11), parse_poly(gf11, "T+1")])
    t0 = time.time()
    rep = accumulate_image(m, max_primes=200, max_deg=3)
    elapsed = time.time() - t0
    assert elapsed < 1800, f"{elapsed:.0f}s exceeds the 30 min budget"
    assert rep.evidence.order == 2_124_276_000 == gl_order(3, 11)
    assert rep.full
    # the mod-T^2 leg is out of envelope for q = 11: explicitly skipped
    with pytest.raises(EnvelopeError):
        accumulate_image_mod_T2(
            drinfeld_module(gf11, [Poly.one(gf11), parse_poly(gf11, "T+1")]),
            max_primes=1, max_deg=1)
    from drinfeld.cli import RunConfig, run
    code, payload = run(RunConfig(
        command="galois-image", p=11, k=1, rank=3, g="1,1,T+1",
        max_primes=5, max_deg=1))
    assert payload["result"]["modT2"]["status"] == "skipped"
    announce(3, "PASS",
             f"order {rep.evidence.order} reached at {rep.stopping_prime} "
             f"using {rep.primes_used} primes in {elapsed:.0f}s; "
             "mod-T^2 reported skipped for q=11")


# -- criterion 4: inertia bounds ----------------------------------------------

def test_criterion_4_inertia_bounds_exhaustive():
    checked = 0
    for q, p in [(4, 2), (5, 5), (8, 2), (9, 3), (11, 11), (13, 13)]:
        for v in range(201):
            if v % p == 0:
                continue
            assert inertia_order_rank2(0, v, q) >= q, (q, v)
            bound, q2_divides = inertia_bound_rank3(0, v, q)
            assert q2_divides, (q, v, bound)
            checked += 2
    announce(4, "PASS", f"{checked} exhaustive inertia checks, zero failures")


# -- criterion 5: Newton polygon slope reproduction ----------------------------

def test_criterion_5_newton_polygon_witness_slopes():
    gf11 = field_new(11, 1)
    q = 11
    denom = q * q * (q - 1)
    rng = random.Random(501)
    t = prime_T(gf11)
    done = 0
    while done < 1000:
        gs = []
        for _ in range(3):
            coeffs = [rng.randrange(1, 11)] + [rng.randrange(11)
                                               for _ in range(4)]
            gs.append(Poly(gf11, coeffs))
        if gs[-1].is_zero():
            continue
        m = drinfeld_module(gf11, gs)
        rep = s_r_membership(m)
        if not rep.member:
            continue
        l = rep.witnesses[0]
        v3 = valuation(gs[2], l)
        np_ = newton_polygon(m, Poly.T(gf11), l)
        rising = np_.segments[-1]
        assert rising[0] == Fraction(v3, denom), (gs, l)  # zero tolerance
        assert rising[1] == denom
        done += 1
    announce(5, "PASS", f"{done} random members: rising slope exactly "
                        f"v(g3)/{denom} with length {denom}")


# -- criterion 6: maximal-subgroup order obstructions --------------------------

def _odd_prime_powers(lo, hi):
    out = []
    for q in range(lo, hi + 1, 2):
        n = q
        p = 2
        while p * p <= n:
            if n % p == 0:
                break
            p += 1
        else:
            p = n
        while n % p == 0:
            n //= p
        if n == 1:
            out.append(q)
    return out


def test_criterion_6_aschbacher_arithmetic():
    qs = _odd_prime_powers(11, 97)
    assert {11, 25, 27, 49, 81, 97} <= set(qs)
    t0 = time.time()
    for q in qs:
        rep = aschbacher_obstructions(q)
        assert rep.all_obstructed, q
        for check in rep.checks:
            assert check.status in ("obstructed", "structural",
                                    "not_applicable")
            for order in check.orders:
                assert order % (q * q) != 0, (q, check.name)
    elapsed = time.time() - t0
    assert elapsed < 1.0
    announce(6, "PASS", f"{len(qs)} odd prime powers in (9, 97], every "
                        f"listed order fails q^2-divisibility; {elapsed:.2f}s")


# -- criterion 7: algebra kernel property suites --------------------------------

def test_criterion_7_algebra_kernels():
    rng = random.Random(7001)
    # twisted-ring associativity: >= 10^3 random triples
    ext = field_new(2, 4)
    ringF = FieldRing(ext, 4)
    gf3 = field_new(3, 1)
    ringA = PolyRing(gf3)
    cases = 0
    for _ in range(600):
        f, g, h = (TwistedPoly(ringF, [rng.randrange(16) for _ in range(4)])
                   for _ in range(3))
        assert (f * g) * h == f * (g * h)
        cases += 1
    for _ in range(450):
        f, g, h = (TwistedPoly(
            ringA, [Poly(gf3, [rng.randrange(3) for _ in range(2)])
                    for _ in range(3)]) for _ in range(3))
        assert (f * g) * h == f * (g * h)
        cases += 1
    assert cases >= 1000
    # commutativity of phi: phi_a phi_b = phi_b phi_a = phi_ab
    gf4 = field_new(2, 2)
    comm = 0
    m_const = drinfeld_module(gf4, [Poly.const(gf4, 2), Poly.const(gf4, 3)])
    while comm < 900:
        a = Poly(gf4, [rng.randrange(4) for _ in range(5)])
        b = Poly(gf4, [rng.randrange(4) for _ in range(5)])
        fa, fb = phi_a(m_const, a), phi_a(m_const, b)
        assert fa * fb == fb * fa == phi_a(m_const, a * b)
        comm += 1
    m_poly = drinfeld_module(gf4, [parse_poly(gf4, "T+1"),
                                   parse_poly(gf4, "T")])
    while comm < 1000:
        a = Poly(gf4, [rng.randrange(4) for _ in range(3)])
        b = Poly(gf4, [rng.randrange(4) for _ in range(3)])
        fa, fb = phi_a(m_poly, a), phi_a(m_poly, b)
        assert fa * fb == fb * fa
        comm += 1
    # factorization round-trip: >= 10^3 random polynomials
    rt = 0
    for (p, k) in [(2, 1), (3, 1), (2, 2), (5, 1), (11, 1)]:
        ctx = field_new(p, k)
        for _ in range(200):
            f = Poly(ctx, [rng.randrange(ctx.q)
                           for _ in range(rng.randrange(1, 31))])
            if f.is_zero():
                continue
            assert factor(f).reassemble(ctx) == f
            rt += 1
    assert rt >= 1000 - 25  # a few zero draws are tolerated by resampling
    while rt < 1000:
        f = Poly(field_new(2, 1), [1] + [rng.randrange(2) for _ in range(20)])
        assert factor(f).reassemble(field_new(2, 1)) == f
        rt += 1
    # valuation additivity: >= 10^3 random pairs
    gf5 = field_new(5, 1)
    l5 = PrimeIdeal(parse_poly(gf5, "T+2"))
    va = 0
    while va < 1000:
        a = Poly(gf5, [rng.randrange(5) for _ in range(8)])
        b = Poly(gf5, [rng.randrange(5) for _ in range(8)])
        if a.is_zero() or b.is_zero():
            continue
        assert valuation(a * b, l5) == valuation(a, l5) + valuation(b, l5)
        va += 1
    # Frobenius-matrix root-action oracle: every root of every root-route
    # sample is checked inside the sampler; count the verified roots
    oracle_cases = 0
    plans = [
        (field_new(2, 1), ["1", "1"], 6, 4),
        (field_new(2, 1), ["T+1", "T^2+T+1"], 5, 4),
        (field_new(3, 1), ["1", "T+1"], 3, 9),
        (field_new(2, 2), ["1", "T^2+T+2"], 2, 16),
        (field_new(2, 2), ["T", "T+2"], 2, 16),
    ]
    for ctx, texts, maxdeg, nroots in plans:
        m = drinfeld_module(ctx, [parse_poly(ctx, t) for t in texts])
        for l in good_primes(m, maxdeg):
            try:
                s = frobenius_matrix_mod_T(m, l, force_route="roots")
            except EnvelopeError:
                continue
            assert s.route == "roots"
            oracle_cases += nroots
    assert oracle_cases >= 1000
    announce(7, "PASS",
             f"associativity {cases}, phi-commutativity {comm}, "
             f"factor round-trips {rt}, valuation additivity {va}, "
             f"root-action oracle checks {oracle_cases}; zero failures")


# -- criterion 8: negative controls ---------------------------------------------

def test_criterion_8_negative_controls():
    gf4 = field_new(2, 2)
    m = drinfeld_module(gf4, [Poly.zero(gf4), Poly.one(gf4)])
    rep = s_r_membership(m)
    assert not rep.member
    assert "NU_T_G1_NONZERO" in rep.failures  # v_T(g_1) undefined at g_1 = 0
    image = accumulate_image(m, max_primes=200, max_deg=3)
    assert not image.full
    assert image.verdict is False
    assert "not full within budget" in image.verdict_reasons
    announce(8, "PASS",
             f"degenerate (0,1)/GF(4): failure code {rep.failures}, "
             f"sampled order {image.evidence.order} of 180, verdict "
             "'not full within budget'")
