"""Density counts: closed forms, exhaustive enumeration, Monte Carlo."""

from fractions import Fraction

import pytest

from drinfeld import field_new
from drinfeld.density import (
    _is_member,
    exact_counts,
    exhaustive_density,
    monte_carlo_density,
)
from drinfeld.errors import EnvelopeError
from drinfeld.polyring import Poly


def test_closed_form_example_q4():
    gf4 = field_new(2, 2)
    rep = exact_counts(gf4, 2, 1)
    assert (rep.w_count, rep.s1_count) == (12, 9)
    assert rep.ratio_s1 == Fraction(3, 4)
    assert rep.limit == Fraction(9, 16)


def test_limits():
    assert exact_counts(field_new(11, 1), 3, 1).limit == Fraction(1000, 1331)
    assert exact_counts(field_new(2, 2), 2, 5).limit == Fraction(9, 16)


def test_closed_form_formulas_general():
    for (p, k, r, N) in [(2, 1, 2, 3), (3, 1, 3, 2), (2, 2, 2, 4), (5, 1, 2, 2)]:
        ctx = field_new(p, k)
        q = ctx.q
        rep = exact_counts(ctx, r, N)
        assert rep.w_count == q ** ((r - 1) * N) * (q**N - 1)
        assert rep.s1_count == (q**N - q ** (N - 1)) ** r
        # ratioS1 = (1 - 1/q)^r / (1 - q^-N)
        assert rep.ratio_s1 == (Fraction(q - 1, q) ** r
                                / (1 - Fraction(1, q**N)))


def test_exhaustive_small_case():
    gf2 = field_new(2, 1)
    rep = exhaustive_density(gf2, 2, 2)
    assert rep.s1_count == (4 - 2) ** 2 == 4
    assert rep.s_count == 1  # only (1, T+1)
    assert rep.s_count <= rep.s1_count


def test_exhaustive_matches_direct_membership_oracle():
    # per-tuple oracle over the full space at q=4, r=2, N=2
    gf4 = field_new(2, 2)
    size = 4**2
    w = s1 = s = 0
    for a in range(size):
        for b in range(1, size):
            w += 1
            m1, mfull = _is_member(
                gf4, [Poly.from_index(gf4, a), Poly.from_index(gf4, b)])
            s1 += m1
            s += mfull
    rep = exhaustive_density(gf4, 2, 2)
    assert (rep.w_count, rep.s1_count, rep.s_count) == (w, s1, s)


def test_exhaustive_frozen_goldens():
    gf4 = field_new(2, 2)
    rep = exhaustive_density(gf4, 2, 3)
    assert (rep.w_count, rep.s1_count, rep.s_count) == (4032, 2304, 1539)
    gf3 = field_new(3, 1)
    rep3 = exhaustive_density(gf3, 3, 2)
    assert rep3.s1_count == (9 - 3) ** 3


def test_exhaustive_shard_independence():
    gf2 = field_new(2, 1)
    base = exhaustive_density(gf2, 2, 4, shards=1)
    for shards in (2, 3, 8):
        rep = exhaustive_density(gf2, 2, 4, shards=shards)
        assert (rep.w_count, rep.s1_count, rep.s_count) == \
            (base.w_count, base.s1_count, base.s_count)


def test_exhaustive_envelope():
    with pytest.raises(EnvelopeError):
        exhaustive_density(field_new(2, 2), 3, 8)


def test_s_subset_s1_across_cases():
    for (p, k, r, N) in [(2, 1, 2, 3), (2, 1, 3, 2), (3, 1, 2, 3), (2, 2, 2, 2)]:
        rep = exhaustive_density(field_new(p, k), r, N)
        assert rep.s_count <= rep.s1_count


def test_s_fraction_nondecreasing_in_N():
    # golden regression: more room for a witness prime as degrees grow
    gf2 = field_new(2, 1)
    fracs = []
    for N in (1, 2, 3, 4, 5):
        rep = exhaustive_density(gf2, 2, N)
        fracs.append(Fraction(rep.s_count, rep.w_count))
    assert fracs == sorted(fracs)
    gf3 = field_new(3, 1)
    fracs3 = [Fraction(r.s_count, r.w_count)
              for r in (exhaustive_density(gf3, 2, N) for N in (1, 2, 3, 4))]
    assert fracs3 == sorted(fracs3)


def test_monte_carlo_seed_stability():
    gf4 = field_new(2, 2)
    a = monte_carlo_density(gf4, 2, 6, 1500, seed=99)
    b = monte_carlo_density(gf4, 2, 6, 1500, seed=99)
    assert a.s_estimate == b.s_estimate
    assert a.s1_estimate == b.s1_estimate
    c = monte_carlo_density(gf4, 2, 6, 1500, seed=100)
    assert c.s_estimate != a.s_estimate  # different stream


def test_monte_carlo_s1_within_3_sigma():
    # statistical oracle against the exact closed form
    gf4 = field_new(2, 2)
    rep = monte_carlo_density(gf4, 2, 8, 4000, seed=2024)
    est, err, n = rep.s1_estimate
    exact = float(rep.ratio_s1)
    assert abs(est - exact) <= 3 * max(err, 1e-9)


def test_monte_carlo_estimates_approach_limit():
    # golden run: the gap to (1-1/q)^r shrinks as N grows
    gf4 = field_new(2, 2)
    limit = float(Fraction(9, 16))
    gaps = []
    for N in (2, 4, 8):
        rep = monte_carlo_density(gf4, 2, N, 4000, seed=31337)
        gaps.append(abs(rep.s_estimate[0] - limit))
    assert gaps[0] >= gaps[1] >= gaps[2]


def test_monte_carlo_validation():
    gf4 = field_new(2, 2)
    with pytest.raises(ValueError):
        monte_carlo_density(gf4, 2, 3, 10, seed=0)


def test_report_serialization():
    gf4 = field_new(2, 2)
    d = exhaustive_density(gf4, 2, 2).to_dict()
    assert d["wCount"] == 240 and "ratioS1" in d and "sCount" in d
    row = exhaustive_density(gf4, 2, 2).csv_row()
    assert row.startswith("4,2,2,exhaustive,240,")
