"""The descent-curve catalog: stored data integrity, group law, and the
maps back to Lucas parameter pairs."""

import random
from fractions import Fraction

import pytest

from lucassq.curves import (CURVES, CURVE_BY_ID, INFINITY, CurvePoint,
                            RANK0_STUBS, ab_to_pq, add_points, catalog,
                            condition_value, on_curve, recover_ab,
                            scalar_mul)
from lucassq.jsonio import decode_point, encode_point
from lucassq.lucas import LucasParams

PROP1_AB = {"E1": (1, 3), "E2": (1, 1), "E3": (1, 1), "E4": (1, 1),
            "E5": (1, 5), "E7": (1, 2), "E8": (1, 0)}


def _random_points(curve, rng, count):
    """Random small combinations of the stored generators and 2-torsion."""
    pts = []
    T = CurvePoint(curve.field.zero(), curve.field.zero())
    for _ in range(count):
        p = INFINITY
        for g in curve.gens:
            p = add_points(curve, p, scalar_mul(curve, rng.randint(-3, 3), g))
        if rng.random() < 0.5:
            p = add_points(curve, p, T)
        pts.append(p)
    return pts


def test_generators_on_curve():
    for c in CURVES + RANK0_STUBS:
        for g in c.gens:
            assert on_curve(c, g), c.id
        assert on_curve(c, CurvePoint(c.field.zero(), c.field.zero()))


def test_two_torsion():
    for c in CURVES:
        T = CurvePoint(c.field.zero(), c.field.zero())
        assert add_points(c, T, T) is INFINITY or add_points(c, T, T) == INFINITY


@pytest.mark.parametrize("curve", CURVES, ids=lambda c: c.id)
def test_group_law_associativity(curve):
    rng = random.Random(hash(curve.id) & 0xFFFF)
    pts = _random_points(curve, rng, 12)
    for i in range(0, 12, 3):
        p, q, r = pts[i], pts[i + 1], pts[i + 2]
        lhs = add_points(curve, add_points(curve, p, q), r)
        rhs = add_points(curve, p, add_points(curve, q, r))
        assert lhs == rhs


@pytest.mark.parametrize("curve", CURVES, ids=lambda c: c.id)
def test_scalar_mul_matches_repeated_addition(curve):
    for g in curve.gens:
        acc = INFINITY
        for k in range(5):
            assert scalar_mul(curve, k, g) == acc
            acc = add_points(curve, acc, g)
        assert scalar_mul(curve, -3, g) == -scalar_mul(curve, 3, g)


def test_recover_ab_proposition_values():
    """The stored generators (scaled to the right multiple) reproduce the
    known descent pairs (a, b)."""
    multiples = {"E1": 1, "E2": 1, "E3": 1, "E4": 1, "E5": 2, "E7": 2,
                 "E8": 2}
    for cid, (a, b) in PROP1_AB.items():
        curve = CURVE_BY_ID[cid]
        pt = scalar_mul(curve, multiples[cid], curve.gens[0])
        sol = recover_ab(curve, pt)
        assert sol is not None, cid
        assert (sol.a, abs(sol.b)) == (a, b), (cid, sol.a, sol.b)


def test_ab_to_pq_acceptances():
    params, reason = ab_to_pq("eq1", 1, 3)
    assert reason is None and (params.p, params.q) == (1, -4)
    params, reason = ab_to_pq("eq3", 1, 5)
    assert reason is None and (params.p, params.q) == (4, -17)


def test_ab_to_pq_rejections():
    assert ab_to_pq("eq1", 1, 2)[0] is None        # parity
    assert ab_to_pq("eq3", 1, 0)[0] is None        # b = 0
    assert ab_to_pq("eq3", 1, 2)[0] is None        # gcd(4, 4)
    with pytest.raises(ValueError):
        ab_to_pq("eq1", 0, 1)
    with pytest.raises(ValueError):
        ab_to_pq("eq9", 1, 1)


def test_condition_value_rationality():
    """condition_value is a rational exactly when the descent condition
    holds; it holds at the stored E1 generator."""
    E1 = CURVE_BY_ID["E1"]
    v = condition_value(E1, E1.gens[0])
    assert v is not None and isinstance(v, Fraction)


def test_catalog_and_point_round_trip():
    cat = catalog()
    assert len(cat) == len(CURVES) + len(RANK0_STUBS)
    assert {c["rank"] for c in cat} == {0, 1, 2}
    E10 = CURVE_BY_ID["E10"]
    for pt in E10.gens:
        again = decode_point(encode_point(pt))
        assert again == pt
