"""Twisted polynomial ring: multiplication law, heights, linearization."""

import random

import pytest

from drinfeld import extension_field, field_new
from drinfeld.errors import ContextMismatch
from drinfeld.polyring import Poly
from drinfeld.twisted import (
    FieldRing,
    PolyRing,
    TwistedPoly,
    eval_linearized,
    linearized_poly,
)


def test_single_term_law():
    # tau * (g tau) = g^q tau^2 over A, q = 2
    gf2 = field_new(2, 1)
    ring = PolyRing(gf2)
    g = Poly(gf2, [1, 1])  # T+1
    lhs = TwistedPoly.tau(ring) * TwistedPoly(ring, [Poly.zero(gf2), g])
    gq = ring.qpow(g)
    assert lhs == TwistedPoly(ring, [Poly.zero(gf2), Poly.zero(gf2), gq])
    assert gq == Poly(gf2, [1, 0, 1])  # (T+1)^2 = T^2+1


def test_square_of_T_plus_tau():
    # over A with q=2: (T + tau)^2 = T^2 + (T + T^2) tau + tau^2
    gf2 = field_new(2, 1)
    ring = PolyRing(gf2)
    T = Poly.T(gf2)
    f = TwistedPoly(ring, [T, Poly.one(gf2)])
    sq = f * f
    assert sq.coeffs == (
        Poly(gf2, [0, 0, 1]),       # T^2
        Poly(gf2, [0, 1, 1]),       # T + T^2
        Poly.one(gf2),
    )


def test_identity_neutral():
    gf4 = field_new(2, 2)
    ring = FieldRing(gf4, 4)
    rng = random.Random(5)
    for _ in range(25):
        f = TwistedPoly(ring, [rng.randrange(4) for _ in range(5)])
        assert f * TwistedPoly.one(ring) == f
        assert TwistedPoly.one(ring) * f == f


def test_ring_mismatch():
    r1 = FieldRing(field_new(2, 2), 4)
    r2 = FieldRing(field_new(2, 2), 2)
    with pytest.raises(ContextMismatch):
        TwistedPoly.one(r1) * TwistedPoly.one(r2)


def _random_twisted(rng, ring, deg, coeff_sampler):
    return TwistedPoly(ring, [coeff_sampler(rng) for _ in range(deg + 1)])


def test_associativity_and_distributivity():
    rng = random.Random(99)
    gf3 = field_new(3, 1)
    cases = []
    # over A = GF(3)[T]
    ringA = PolyRing(gf3)
    cases.append((ringA, lambda r: Poly(gf3, [r.randrange(3) for _ in range(3)])))
    # over GF(q^d)
    ext = extension_field(field_new(2, 2), 2)
    ringF = FieldRing(ext.field, 4)
    cases.append((ringF, lambda r: r.randrange(16)))
    for ring, sampler in cases:
        for _ in range(40):
            f = _random_twisted(rng, ring, rng.randrange(4), sampler)
            g = _random_twisted(rng, ring, rng.randrange(4), sampler)
            h = _random_twisted(rng, ring, rng.randrange(4), sampler)
            assert (f * g) * h == f * (g * h)
            assert f * (g + h) == f * g + f * h
            assert (f + g) * h == f * h + g * h


def test_degree_and_height_laws():
    rng = random.Random(123)
    gf5 = field_new(5, 1)
    ring = PolyRing(gf5)

    def sampler(r):
        return Poly(gf5, [r.randrange(5) for _ in range(2)])

    for _ in range(60):
        f = _random_twisted(rng, ring, rng.randrange(4), sampler)
        g = _random_twisted(rng, ring, rng.randrange(4), sampler)
        if f.is_zero() or g.is_zero():
            continue
        assert (f * g).deg_tau == f.deg_tau + g.deg_tau
        assert (f * g).ht_tau == f.ht_tau + g.ht_tau


def test_linearized_poly_examples():
    # T + tau + tau^2 with q=2 -> Tx + x^2 + x^4
    gf2 = field_new(2, 1)
    ring = PolyRing(gf2)
    f = TwistedPoly(ring, [Poly.T(gf2), Poly.one(gf2), Poly.one(gf2)])
    pairs = linearized_poly(f)
    assert pairs == [(0, Poly.T(gf2)), (1, Poly.one(gf2)), (2, Poly.one(gf2))]
    assert linearized_poly(TwistedPoly.zero(ring)) == []


def test_linearized_evaluation_is_additive():
    rng = random.Random(31)
    ext = extension_field(field_new(2, 2), 3)
    ring = FieldRing(ext.field, 4)
    F = ext.field
    for _ in range(30):
        f = _random_twisted(rng, ring, rng.randrange(3), lambda r: r.randrange(F.q))
        pairs = f.linearized()
        x, y = rng.randrange(F.q), rng.randrange(F.q)
        lhs = eval_linearized(ring, pairs, F.add(x, y))
        rhs = F.add(eval_linearized(ring, pairs, x), eval_linearized(ring, pairs, y))
        assert lhs == rhs


def test_linearized_composition_law():
    # evaluation of f*g equals the composite evaluation g then f
    rng = random.Random(44)
    ext = extension_field(field_new(3, 1), 2)
    ring = FieldRing(ext.field, 3)
    for _ in range(40):
        f = _random_twisted(rng, ring, rng.randrange(3), lambda r: r.randrange(9))
        g = _random_twisted(rng, ring, rng.randrange(3), lambda r: r.randrange(9))
        x = rng.randrange(9)
        via_product = eval_linearized(ring, (f * g).linearized(), x)
        composed = eval_linearized(ring, f.linearized(),
                                   eval_linearized(ring, g.linearized(), x))
        assert via_product == composed


def test_ht_deg_of_zero_are_sentinels():
    ring = FieldRing(field_new(2, 1), 2)
    z = TwistedPoly.zero(ring)
    assert z.deg_tau is None and z.ht_tau is None
