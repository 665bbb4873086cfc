"""Exact integer/rational square roots and the sparse Poly layer."""

from fractions import Fraction

from hypothesis import given, strategies as st

from lucassq.exact import (Poly, fraction_square_root, is_perfect_square,
                           perfect_square_root, resultant,
                           sylvester_resultant_univariate)


def test_perfect_square_root_small():
    assert perfect_square_root(0) == 0
    assert perfect_square_root(1) == 1
    assert perfect_square_root(441) == 21
    assert perfect_square_root(384400) == 620
    assert perfect_square_root(2) is None
    assert perfect_square_root(-4) is None


@given(st.integers(min_value=0, max_value=10 ** 30))
def test_perfect_square_root_of_square(n):
    assert perfect_square_root(n * n) == n


@given(st.integers(min_value=2, max_value=10 ** 15))
def test_near_squares_are_not_squares(n):
    assert not is_perfect_square(n * n - 1)
    assert not is_perfect_square(n * n + 1)


@given(st.fractions(min_value=-100, max_value=100, max_denominator=10 ** 4))
def test_fraction_square_root_round_trip(q):
    r = fraction_square_root(q * q)
    assert r is not None and r * r == q * q


def test_fraction_square_root_rejects():
    assert fraction_square_root(Fraction(2)) is None
    assert fraction_square_root(Fraction(1, 3)) is None
    assert fraction_square_root(Fraction(-1, 4)) is None


# --- Poly -------------------------------------------------------------------

def _poly_from_coeffs(cs):
    """Univariate helper, low-to-high."""
    return Poly(1, {(i,): c for i, c in enumerate(cs)})


@given(st.lists(st.integers(-50, 50), min_size=1, max_size=5),
       st.lists(st.integers(-50, 50), min_size=1, max_size=5),
       st.integers(-10, 10))
def test_poly_mul_matches_evaluation(a, b, x):
    pa, pb = _poly_from_coeffs(a), _poly_from_coeffs(b)
    assert (pa * pb).evaluate([x]) == pa.evaluate([x]) * pb.evaluate([x])


@given(st.lists(st.integers(-50, 50), min_size=1, max_size=4),
       st.lists(st.integers(-50, 50), min_size=1, max_size=4))
def test_poly_add_commutes(a, b):
    pa, pb = _poly_from_coeffs(a), _poly_from_coeffs(b)
    assert pa + pb == pb + pa
    assert pa - pa == Poly(1)


def test_sylvester_resultant_common_root():
    # (x-2)(x-3) and (x-2)(x+1) share the root 2
    f = [Fraction(6), Fraction(-5), Fraction(1)]
    g = [Fraction(-2), Fraction(-1), Fraction(1)]
    assert sylvester_resultant_univariate(f, g) == 0


def test_sylvester_resultant_coprime():
    f = [Fraction(1), Fraction(0), Fraction(1)]     # x^2 + 1
    g = [Fraction(-1), Fraction(1)]                  # x - 1
    assert sylvester_resultant_univariate(g, f) != 0


def test_bivariate_resultant_eliminates():
    # res_x(2x^2, x^2 + xy + 2y^2) = 16 y^4, the paper-style elimination
    f = Poly(2, {(2, 0): Fraction(2)})
    g = Poly(2, {(2, 0): Fraction(1), (1, 1): Fraction(1),
                 (0, 2): Fraction(2)})
    h = resultant(f, g, eliminate=0)
    assert h.terms == {(4,): Fraction(16)}
