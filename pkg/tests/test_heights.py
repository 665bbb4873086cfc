"""Archimedean epsilon data, canonical heights, and the X-coordinate
enumeration/lifting toolkit."""

from fractions import Fraction

import pytest
from mpmath import mp

from lucassq.curves import CURVE_BY_ID, CurvePoint, add_points, scalar_mul
from lucassq.fields import K1, K2
from lucassq.heights import (CandidateShape, candidate_shapes,
                             canonical_height, enumerate_candidates,
                             epsilon_nonarchimedean, field_sqrt,
                             halving_candidates, height_diff_bound,
                             lift_x_to_point, naive_height, roots_in_field,
                             shape_ranges)

E1 = CURVE_BY_ID["E1"]
E9 = CURVE_BY_ID["E9"]
E10 = CURVE_BY_ID["E10"]


def test_epsilon_nonarchimedean():
    # K1 curves contribute nothing at the finite place
    eps, exact = epsilon_nonarchimedean(E1)
    assert eps == 1 and exact
    eps, exact = epsilon_nonarchimedean(E10)
    assert exact and float(eps) > 1


def test_height_diff_bound_positive_and_cached():
    c1, eps1 = height_diff_bound("E1")
    c2, _ = height_diff_bound("E1")
    assert c1 == c2                      # lru cache: literally the same
    assert float(c1) > 0
    assert all(float(e) > 1 for e in eps1)


def test_naive_height_rational_x():
    # x in Q: h = (1/4) log max(|num|, den)^4 = log max(|num|, den)
    x = K1.element(Fraction(7, 2))
    got = naive_height(x)
    assert abs(float(got) - float(mp.log(7))) < 1e-12
    assert abs(float(naive_height(K1.element(2)))
               - float(mp.log(2))) < 1e-12


def test_canonical_height_torsion_is_zero():
    T = CurvePoint(E1.field.zero(), E1.field.zero())
    assert float(canonical_height(E1, T, tol=1e-3)) == 0.0


def test_canonical_height_quadratic():
    """hhat(2G) = 4 hhat(G), the defining property."""
    G = E1.gens[0]
    h1 = canonical_height(E1, G, tol=1e-4)
    h2 = canonical_height(E1, scalar_mul(E1, 2, G), tol=1e-4)
    assert abs(float(h2) - 4 * float(h1)) < 1e-3


def test_height_difference_one_sided():
    """h(P) - 2 hhat(P) <= C for several points, within tolerance."""
    C, _ = height_diff_bound("E1")
    for m in (1, 2):
        P = scalar_mul(E1, m, E1.gens[0])
        h = naive_height(P.x)
        hh = canonical_height(E1, P, tol=1e-4)
        assert float(h) - 2 * float(hh) <= float(C) + 1e-3, m


def test_roots_in_field_recovers_minimal_polynomial_roots():
    """Feed the exact minimal polynomial of a known field element back in."""
    x = E9.gens[0].x                      # (1, 1/2, 0, 1/4) in K2
    from lucassq.heights import _charpoly_fractions
    cp = _charpoly_fractions(x)
    roots = roots_in_field(K2, cp)
    assert any(r == x for r in roots)


def test_roots_in_field_reducible_polys():
    # X^4 - 8 X^2 = X^2 (X^2 - 8) has the root 2 + phi^2 = 2*sqrt(2) in K2
    poly = [Fraction(0), Fraction(0), Fraction(-8), Fraction(0), Fraction(1)]
    roots = roots_in_field(K2, poly)
    assert K2.element(2, 0, 1, 0) in roots
    assert K2.zero() in roots


def test_field_sqrt():
    x = K2.element(2, 0, 1, 0)            # 2 + phi^2
    s = field_sqrt(K2, x * x)
    assert s is not None and s * s == x * x
    assert field_sqrt(K2, K2.element(3)) is None


def test_lift_x_to_point():
    G = E1.gens[0]
    pt = lift_x_to_point(E1, G.x)
    assert pt is not None and pt.x == G.x
    assert pt == G or pt == -G
    assert lift_x_to_point(E1, K1.element(Fraction(1, 7))) is None


def test_halving_candidates():
    """2G9 halves back to G9 (mod 2-torsion), while G9 itself does not
    halve: the generator is not 2-divisible."""
    G = E9.gens[0]
    halves = halving_candidates(E9, scalar_mul(E9, 2, G))
    assert halves, "2G must be halvable"
    assert any(h.x == G.x or add_points(E9, h, G).x is not None
               for h in halves)
    assert halving_candidates(E9, G) == []


def test_candidate_shapes_and_ranges():
    shapes = candidate_shapes(E1)
    assert any(s.denominator == 4 for s in shapes)       # K1 half-integral
    shapes9 = candidate_shapes(E9)
    assert all(s.denominator == 1 for s in shapes9)      # K2: integral only
    for s in shapes:
        rng = shape_ranges(s, 10.0)
        assert len(rng) == len(s.multipliers)
        assert all(r >= 0 for r in rng)


def test_enumerate_candidates_small_box():
    cands = list(enumerate_candidates(E9, 2.0))
    assert cands, "a nonempty box must produce candidates"
    # every candidate is monic over Q
    for tag, coeffs, poly in cands:
        assert poly[-1] == 1              # monic lead (low-to-high layout)
