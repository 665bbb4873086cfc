"""Exact arithmetic in the two quartic fields underlying the descent.

K1 = Q(theta) with theta^4 + 2 theta^2 - 1 = 0  (theta ~ 0.6435942529)
K2 = Q(phi)   with phi^4 + 4 phi^2 - 4 = 0      (phi   ~ 0.9101797211)

Elements are stored over the power basis (1, alpha, alpha^2, alpha^3) with
rational coordinates.  Maximal-order membership is a predicate against the
stored integral basis, never a change of representation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import mpmath

from .exact import sylvester_resultant_univariate


def _frac_rows(rows) -> tuple:
    return tuple(tuple(Fraction(c) for c in row) for row in rows)


@dataclass(frozen=True)
class FieldDescriptor:
    """Immutable description of one of the two quartic fields."""

    id: str
    defining_poly: tuple  # coefficients low..high, monic degree 4
    order_basis: tuple    # rows: integral-basis vectors over the power basis
    real_root_approx: float

    def __post_init__(self):
        # alpha^4 = -(c0 + c1 a + c2 a^2 + c3 a^3), and the reductions of
        # alpha^5, alpha^6 derived from it; precomputed once.
        c = [Fraction(x) for x in self.defining_poly[:4]]
        r4 = tuple(-x for x in c)
        r5 = _shift_reduce(r4, r4)
        r6 = _shift_reduce(r5, r4)
        object.__setattr__(self, "_reductions", (r4, r5, r6))
        object.__setattr__(self, "_order_inv", _invert4(self.order_basis))

    def element(self, c0=0, c1=0, c2=0, c3=0) -> "FieldElement":
        return FieldElement(self, (Fraction(c0), Fraction(c1),
                                   Fraction(c2), Fraction(c3)))

    def zero(self) -> "FieldElement":
        return self.element()

    def one(self) -> "FieldElement":
        return self.element(1)

    def roots(self, digits: int = 30) -> list:
        """The four roots of the defining polynomial, ordered to match the
        place labels: real root, its negative, then the conjugate imaginary
        pair."""
        with mpmath.workdps(digits):
            if self.id == "K1":
                t = mpmath.sqrt(mpmath.sqrt(2) - 1)
                return [t, -t, 1j / t, -1j / t]
            t = mpmath.sqrt(2 * mpmath.sqrt(2) - 2)
            return [t, -t, 2j / t, -2j / t]

    def __repr__(self):
        return f"FieldDescriptor({self.id})"


def _shift_reduce(row: tuple, r4: tuple) -> tuple:
    """Given alpha^k = row over the power basis, return alpha^(k+1)."""
    shifted = (Fraction(0),) + row[:3]
    top = row[3]
    return tuple(s + top * r for s, r in zip(shifted, r4))


def _invert4(rows) -> tuple:
    """Exact inverse of a 4x4 rational matrix (rows of Fractions)."""
    n = 4
    m = [list(r) + [Fraction(int(i == j)) for j in range(n)]
         for i, r in enumerate(rows)]
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r][col])
        m[col], m[piv] = m[piv], m[col]
        d = m[col][col]
        m[col] = [x / d for x in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return tuple(tuple(row[n:]) for row in m)


class FieldElement:
    """c0 + c1*alpha + c2*alpha^2 + c3*alpha^3 with rational coordinates."""

    __slots__ = ("field", "coords")

    def __init__(self, fld: FieldDescriptor, coords: Sequence[Fraction]):
        self.field = fld
        self.coords = tuple(coords)

    # -- ring structure ----------------------------------------------------

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise ValueError("field mismatch")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.element(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self.field,
                            tuple(a + b for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        a, b = self.coords, o.coords
        prod = [Fraction(0)] * 7
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        prod[i + j] += ai * bj
        out = list(prod[:4])
        reductions = self.field._reductions
        for k in (4, 5, 6):
            if prod[k]:
                red = reductions[k - 4]
                for i in range(4):
                    out[i] += prod[k] * red[i]
        return FieldElement(self.field, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field,
                                tuple(a / Fraction(other) for a in self.coords))
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other):
        return self.inv() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        out = self.field.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def inv(self) -> "FieldElement":
        """Multiplicative inverse, by solving x*z = 1 as a 4x4 system."""
        if not self:
            raise ZeroDivisionError("inverse of zero field element")
        # columns of the multiplication-by-x matrix
        cols = [(self * self.field.element(*[int(i == j) for i in range(4)])).coords
                for j in range(4)]
        mat = [[cols[j][i] for j in range(4)] for i in range(4)]
        inv = _invert4(mat)
        return FieldElement(self.field, tuple(row[0] for row in inv))

    # -- predicates / comparisons -------------------------------------------

    def __bool__(self):
        return any(self.coords)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.element(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.field is other.field and self.coords == other.coords

    def __hash__(self):
        return hash((self.field.id, self.coords))

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def rational_value(self) -> Optional[Fraction]:
        return self.coords[0] if self.is_rational() else None

    # -- invariants ----------------------------------------------------------

    def norm(self) -> Fraction:
        """Product of the four conjugates: resultant of the defining
        polynomial (monic) with the coordinate polynomial."""
        g = list(self.coords)
        if not any(g):
            return Fraction(0)
        return sylvester_resultant_univariate(list(self.field.defining_poly), g)

    def trace(self) -> Fraction:
        """Trace of the multiplication-by-x matrix."""
        cols = [(self * self.field.element(*[int(i == j) for i in range(4)])).coords
                for j in range(4)]
        return sum(cols[j][j] for j in range(4))

    def embeddings(self, digits: int = 30) -> list:
        """Values of the element at the four roots of the defining
        polynomial (mpmath complex numbers)."""
        with mpmath.workdps(digits):
            out = []
            for r in self.field.roots(digits):
                v = mpmath.mpc(0)
                for c in reversed(self.coords):
                    v = v * r + Fraction(c)
                out.append(v)
            return out

    def in_maximal_order(self) -> bool:
        inv = self.field._order_inv
        for i in range(4):
            s = sum(inv[j][i] * self.coords[j] for j in range(4))
            if s.denominator != 1:
                return False
        return True

    def order_coordinates(self) -> Optional[tuple]:
        """Coordinates over the integral basis, or None."""
        inv = self.field._order_inv
        out = []
        for i in range(4):
            s = sum(inv[j][i] * self.coords[j] for j in range(4))
            if s.denominator != 1:
                return None
            out.append(s.numerator)
        return tuple(out)

    def __repr__(self):
        sym = "theta" if self.field.id == "K1" else "phi"
        parts = []
        for k, c in enumerate(self.coords):
            if c:
                parts.append(f"{c}" + ("" if k == 0 else f"*{sym}^{k}"))
        return " + ".join(parts) if parts else "0"


K1 = FieldDescriptor(
    id="K1",
    defining_poly=(Fraction(-1), Fraction(0), Fraction(2), Fraction(0), Fraction(1)),
    order_basis=_frac_rows([[1, 0, 0, 0], [0, 1, 0, 0],
                            [0, 0, 1, 0], [0, 0, 0, 1]]),
    real_root_approx=0.6435942529055826,
)

K2 = FieldDescriptor(
    id="K2",
    defining_poly=(Fraction(-4), Fraction(0), Fraction(4), Fraction(0), Fraction(1)),
    order_basis=_frac_rows([[1, 0, 0, 0], [0, 1, 0, 0],
                            [0, 0, Fraction(1, 2), 0],
                            [0, Fraction(1, 2), 0, Fraction(1, 4)]]),
    real_root_approx=0.9101797211244548,
)

# distinguished elements
ETA1 = K1.element(0, 1)                                 # theta
ETA2 = K1.element(2, -3, 1, -1)
ONE_PLUS_THETA = K1.element(1, 1)
EPS1 = K2.element(0, Fraction(1, 2), 0, Fraction(1, 4))
EPS2 = K2.element(2, 2, Fraction(1, 2), Fraction(1, 2))
PI = K2.element(1, Fraction(3, 2), 0, Fraction(1, 4))

UNITS = {"K1": {"eta1": ETA1, "eta2": ETA2},
         "K2": {"eps1": EPS1, "eps2": EPS2}}


def two_factorization_holds(fld: FieldDescriptor) -> bool:
    """Verify the stored factorization of 2 in the given field."""
    if fld.id == "K1":
        return ETA1 ** (-4) * ETA2 ** 2 * ONE_PLUS_THETA ** 4 == 2
    return EPS2 ** (-2) * PI ** 4 == 2


def pi_valuation(x: FieldElement, cap: int = 24) -> int:
    """Valuation of a nonzero element of the K2 maximal order at the prime
    pi above 2.  Computed by repeated exact division; capped."""
    if x.field is not K2:
        raise ValueError("pi-adic valuation lives in K2")
    if not x:
        raise ValueError("valuation of zero")
    pi_inv = PI.inv()
    v = 0
    cur = x
    while v < cap:
        nxt = cur * pi_inv
        if not nxt.in_maximal_order():
            return v
        cur = nxt
        v += 1
    return v


def three_adic_valuation(x: FieldElement) -> Optional[int]:
    """v_3 of a nonzero element (3 is inert in both fields): the minimum
    over coordinates of ord_3(numerator) - ord_3(denominator).  None for 0."""
    if not x:
        return None
    best = None
    for c in x.coords:
        if not c:
            continue
        v = _ord3(c.numerator) - _ord3(c.denominator)
        best = v if best is None else min(best, v)
    return best


def _ord3(n: int) -> int:
    n = abs(n)
    v = 0
    while n % 3 == 0:
        n //= 3
        v += 1
    return v
