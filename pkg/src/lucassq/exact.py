"""Exact arithmetic substrate: perfect-square tests, sparse polynomials, resultants.

Everything in this module works over exact coefficient rings (Python ints,
Fractions, or any object supporting +, -, *, bool).  No floats enter here.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional, Sequence


def perfect_square_root(n) -> Optional[int]:
    """Return the nonnegative integer square root of n if n is a perfect
    square, else None.  Accepts ints and integral Fractions."""
    if isinstance(n, Fraction):
        if n.denominator != 1:
            return None
        n = n.numerator
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


def is_perfect_square(n) -> bool:
    return perfect_square_root(n) is not None


def fraction_square_root(q: Fraction) -> Optional[Fraction]:
    """Square root of a rational if it is an exact square, else None."""
    if q < 0:
        return None
    rn = perfect_square_root(q.numerator)
    rd = perfect_square_root(q.denominator)
    if rn is None or rd is None:
        return None
    return Fraction(rn, rd)


class Poly:
    """Sparse multivariate polynomial with a fixed number of variables.

    Terms are stored as a dict mapping exponent tuples to coefficients.
    Coefficients may be ints, Fractions, or any commutative-ring object
    that supports +, -, * and truth-testing (zero is falsy).
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Optional[dict] = None):
        self.nvars = nvars
        self.terms = {}
        if terms:
            for e, c in terms.items():
                if c:
                    self.terms[tuple(e)] = c

    @classmethod
    def constant(cls, nvars: int, c) -> "Poly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, i: int, nvars: int) -> "Poly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        return Poly.constant(self.nvars, other)

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Poly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) + (-self)

    def __mul__(self, other) -> "Poly":
        other = self._coerce(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return Poly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power")
        result = Poly.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def truncate_total_degree(self, d: int) -> "Poly":
        return Poly(self.nvars, {e: c for e, c in self.terms.items() if sum(e) <= d})

    def mul_truncated(self, other: "Poly", d: int) -> "Poly":
        """Product with all terms of total degree > d dropped."""
        other = self._coerce(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            d1 = sum(e1)
            if d1 > d:
                continue
            for e2, c2 in other.terms.items():
                if d1 + sum(e2) > d:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return Poly(self.nvars, out)

    def map_coeffs(self, f) -> "Poly":
        return Poly(self.nvars, {e: f(c) for e, c in self.terms.items()})

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, i: int) -> int:
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def coefficient(self, exponents: Sequence[int]):
        return self.terms.get(tuple(exponents), 0)

    def evaluate(self, values: Sequence):
        """Evaluate at a point; values may live in any ring containing the
        coefficients."""
        total = None
        for e, c in self.terms.items():
            term = c
            for v, k in zip(values, e):
                for _ in range(k):
                    term = term * v
            total = term if total is None else total + term
        if total is None:
            return 0
        return total

    def as_univariate_coeffs(self, i: int) -> list:
        """Dense coefficient list of this poly viewed in variable i, with
        coefficients Polys in the remaining variables (same nvars, var i
        unused)."""
        d = self.degree_in(i)
        coeffs = [Poly(self.nvars) for _ in range(d + 1)]
        for e, c in self.terms.items():
            rest = list(e)
            k = rest[i]
            rest[i] = 0
            coeffs[k] = coeffs[k] + Poly(self.nvars, {tuple(rest): c})
        return coeffs

    def __repr__(self):
        if not self.terms:
            return "Poly(0)"
        parts = []
        for e in sorted(self.terms, key=lambda e: (sum(e), e)):
            c = self.terms[e]
            mono = "*".join(f"x{i}^{k}" for i, k in enumerate(e) if k)
            parts.append(f"{c}" + (f"*{mono}" if mono else ""))
        return "Poly(" + " + ".join(parts) + ")"


def _det_fractions(m: list) -> Fraction:
    """Determinant of a square matrix of Fractions by fraction-free-ish
    Gaussian elimination (exact)."""
    n = len(m)
    m = [row[:] for row in m]
    det = Fraction(1)
    for col in range(n):
        piv = None
        for r in range(col, n):
            if m[r][col]:
                piv = r
                break
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = Fraction(1) / m[col][col]
        for r in range(col + 1, n):
            if m[r][col]:
                f = m[r][col] * inv
                for c in range(col, n):
                    m[r][c] -= f * m[col][c]
    return det


def _lagrange_interpolate(points: list) -> list:
    """Given [(x_i, y_i)] with distinct rational x_i, return dense
    coefficient list (low to high) of the unique interpolating polynomial."""
    n = len(points)
    coeffs = [Fraction(0)] * n
    for i, (xi, yi) in enumerate(points):
        # numerator polynomial prod_{j != i} (x - x_j), built densely
        num = [Fraction(1)]
        denom = Fraction(1)
        for j, (xj, _) in enumerate(points):
            if j == i:
                continue
            num = [Fraction(0)] + num
            for k in range(len(num) - 1):
                num[k] -= xj * num[k + 1]
            denom *= xi - xj
        scale = yi / denom
        for k in range(len(num)):
            coeffs[k] += scale * num[k]
    while len(coeffs) > 1 and not coeffs[-1]:
        coeffs.pop()
    return coeffs


def sylvester_resultant_univariate(f: list, g: list) -> Fraction:
    """Resultant of two univariate polynomials given as dense coefficient
    lists (low to high) of Fractions/ints."""
    f = [Fraction(c) for c in f]
    g = [Fraction(c) for c in g]
    while f and not f[-1]:
        f.pop()
    while g and not g[-1]:
        g.pop()
    if not f or not g:
        raise ValueError("resultant of zero polynomial")
    m, n = len(f) - 1, len(g) - 1
    if m == 0:
        return f[0] ** n
    if n == 0:
        return g[0] ** m
    size = m + n
    mat = [[Fraction(0)] * size for _ in range(size)]
    for i in range(n):
        for j, c in enumerate(reversed(f)):
            mat[i][i + j] = c
    for i in range(m):
        for j, c in enumerate(reversed(g)):
            mat[n + i][i + j] = c
    return _det_fractions(mat)


def resultant(p: Poly, q: Poly, eliminate: int) -> Poly:
    """Resultant of two bivariate polynomials with respect to variable
    `eliminate`, returned as a univariate Poly (nvars=1) in the other
    variable.  Coefficients must be rational.

    Uses evaluation at rational points plus Lagrange interpolation, which
    sidesteps Gaussian elimination over a polynomial entry ring.
    """
    if p.nvars != 2 or q.nvars != 2:
        raise ValueError("resultant() expects bivariate polynomials")
    if p.is_zero() or q.is_zero():
        raise ValueError("resultant of zero polynomial")
    other = 1 - eliminate
    dp, dq = p.degree_in(eliminate), q.degree_in(eliminate)
    # Degree bound of the resultant in the surviving variable.
    bound = dp * q.degree_in(other) + dq * p.degree_in(other)
    if dp == 0 or dq == 0:
        # Degenerate: one input is constant in the eliminated variable.
        const, power = (p, dq) if dp == 0 else (q, dp)
        out = Poly.constant(2, Fraction(1))
        base = const
        k = power
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        proj = {}
        for e, c in out.terms.items():
            proj[(e[other],)] = c
        return Poly(1, proj)
    samples = []
    t = 0
    while len(samples) < bound + 1:
        point = Fraction(t)
        sub = [None, None]
        sub[other] = point
        fc = _specialize(p, other, point, eliminate)
        gc = _specialize(q, other, point, eliminate)
        # Leading-coefficient vanishing at the sample point would change the
        # Sylvester matrix dimensions; skip such points.
        if len(fc) - 1 != dp or len(gc) - 1 != dq or not fc[-1] or not gc[-1]:
            t = -t if t > 0 else -t + 1
            continue
        samples.append((point, sylvester_resultant_univariate(fc, gc)))
        t = -t if t > 0 else -t + 1
    coeffs = _lagrange_interpolate(samples)
    return Poly(1, {(k,): c for k, c in enumerate(coeffs) if c})


def _specialize(p: Poly, var: int, value: Fraction, keep: int) -> list:
    """Substitute value for variable `var`; return dense coefficient list
    in variable `keep`."""
    d = p.degree_in(keep)
    out = [Fraction(0)] * (d + 1)
    for e, c in p.terms.items():
        out[e[keep]] += Fraction(c) * value ** e[var]
    return out
