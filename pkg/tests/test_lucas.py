"""Lucas sequences, degeneracy classes, and square-term scans."""

from hypothesis import given, strategies as st

from lucassq.lucas import (Degeneracy, LucasParams, classify_degenerate,
                           is_degenerate, lucas_u, lucas_u_iter, lucas_v,
                           scaled_pair, square_term_indices)

FIB = LucasParams(1, -1)

import math

coprime_pairs = st.tuples(
    st.integers(-80, 80).filter(bool),
    st.integers(-80, 80).filter(bool),
).filter(lambda t: math.gcd(*t) == 1)


def test_fibonacci_values():
    # U(1,-1) is the Fibonacci sequence
    want = [0, 1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144]
    assert [lucas_u(FIB, n) for n in range(13)] == want


def test_theorem_pair_values():
    assert lucas_u(LucasParams(1, -4), 8) == 441
    assert lucas_u(LucasParams(4, -17), 8) == 384400


@given(coprime_pairs, st.integers(2, 30))
def test_recurrence(pq, n):
    p, q = pq
    params = LucasParams(p, q)
    assert lucas_u(params, n) == p * lucas_u(params, n - 1) - q * lucas_u(params, n - 2)
    assert lucas_v(params, n) == p * lucas_v(params, n - 1) - q * lucas_v(params, n - 2)


@given(coprime_pairs, st.integers(1, 20))
def test_double_index_identity(pq, n):
    p, q = pq
    # U_{2n} = U_n V_n
    params = LucasParams(p, q)
    assert lucas_u(params, 2 * n) == lucas_u(params, n) * lucas_v(params, n)


@given(coprime_pairs)
def test_iter_agrees_with_direct(pq):
    p, q = pq
    params = LucasParams(p, q)
    for n, u in lucas_u_iter(params, 12):
        assert u == lucas_u(params, n)


def test_degeneracy_classes():
    assert classify_degenerate(LucasParams(1, 1)) is Degeneracy.PERIOD_THREE
    assert classify_degenerate(LucasParams(-1, 1)) is Degeneracy.PERIOD_THREE
    assert classify_degenerate(LucasParams(2, 1)) is Degeneracy.SQUARE_INDEX
    assert classify_degenerate(LucasParams(-2, 1)) is Degeneracy.ODD_SQUARE_INDEX
    assert classify_degenerate(LucasParams(1, -1)) is Degeneracy.NONE
    assert not is_degenerate(LucasParams(3, 2))


def test_square_term_indices_fibonacci():
    hits = square_term_indices(FIB, 50)
    assert (12, 12) in hits            # F_12 = 144
    assert all(n in (2, 12) for n, _ in hits)


def test_square_term_indices_theorem_pairs():
    assert (8, 21) in square_term_indices(LucasParams(1, -4), 8)
    assert (8, 620) in square_term_indices(LucasParams(4, -17), 8)


@given(coprime_pairs, st.integers(1, 8))
def test_scaled_pair_consistency(pq, k):
    p, q = pq
    # the (P,Q) -> (P U_k-ish) rescaling keeps U_n relations intact
    params = LucasParams(p, q)
    a, b = scaled_pair(params, k)
    assert isinstance(a, int) and isinstance(b, int)
