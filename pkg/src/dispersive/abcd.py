"""Classification of the high-frequency behaviour of abcd Boussinesq phases.

For parameters with ``b, d >= 0``, ``a, c <= 0`` the phase
``g(y) = y sqrt(U(y^2) / V(y^2))`` satisfies ``g'(y) - ell ~ G y^(alpha+1)``
and ``g''(y) ~ (alpha+1) G y^alpha`` at infinity.  The pair
``(alpha, ell)`` depends only on which of ten algebraic regimes the
parameters fall into; :func:`classify` decides the regime with exact
rational predicates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

from .errors import ParameterError
from .phases import abcd_constraint_violation
from .polynomials import RealPolynomial, poly_gcd, real_roots, to_fraction

TOL = 1e-12

ROW_LABELS = {
    1: "b=d=0, a<0, c<0",
    2: "b=d=0, ac=0, a+c<0",
    3: "bd=0, b+d>0, ac!=0",
    4: "bd=0, b+d>0, ac=0, a+c<0",
    5: "bd=0, b+d>0, a=c=0",
    6: "bd!=0, a=c=0",
    7: "bd!=0, ac=0, a+c<0, b(a+c)+bd+(a+c)d!=0",
    8: "bd!=0, ac=0, a+c<0, b(a+c)+bd+(a+c)d=0",
    9: "abcd!=0, abc+abd+acd+bcd!=0",
    10: "abcd!=0, abc+abd+acd+bcd=0",
}

ROW_ALPHA = {1: 1, 2: 0, 3: 0, 4: -3, 5: -4, 6: -3, 7: -4, 8: -6, 9: -3, 10: -5}

# one exact representative per regime
CANONICAL = {
    1: (-1, 0, -1, 0),
    2: (-1, 0, 0, 0),
    3: (-1, 0, -1, 1),
    4: (-1, 0, 0, 2),
    5: (0, 0, 0, 1),
    6: (0, 1, 0, 1),
    7: (-1, 1, 0, 1),
    8: (-1, 2, 0, 2),
    9: (-1, 1, -2, 1),
    10: (-1, Fraction(2, 3), -1, 2),
}


@dataclass(frozen=True)
class AbcdClassification:
    """Regime of an abcd phase at high frequency.

    Attributes
    ----------
    a, b, c, d : Fraction
    P, U, V, R : RealPolynomial
        Polynomials in ``z = y^2`` with ``g' = P / sqrt(U V^3)`` and
        ``g'' = y R / (U^(3/2) V^(5/2))``.
    m : int
        Largest multiplicity of a positive root of ``R`` (0 if none).
    alpha : int
        Exponent of ``g''`` at infinity.
    ell : float
        Limit of ``g'`` at infinity.
    row : int
        Regime index 1..10 (see :data:`ROW_LABELS`).
    near_boundary : tuple of str
        Predicates that were decided within ten times the tolerance.
    """

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction
    P: RealPolynomial
    U: RealPolynomial
    V: RealPolynomial
    R: RealPolynomial
    m: int
    alpha: int
    ell: float
    row: int
    near_boundary: Tuple[str, ...] = ()

    @property
    def label(self):
        return ROW_LABELS[self.row]

    @property
    def sum_zero(self):
        return abs(float(self.a + self.b + self.c + self.d)) <= TOL

    def l_1d(self):
        """Decay exponent denominator for the one-dimensional global estimate."""
        return max(self.m + 2, 5 if self.sum_zero else 3)

    def l_2d(self):
        """Decay exponent denominator for the two-dimensional global estimate."""
        pos = real_roots(self.P)
        if not pos:
            u = Fraction(2 * self.m + 4, self.m + 4)
        elif real_roots(poly_gcd(self.P, self.P.deriv())):
            u = Fraction(3)
        else:
            u = Fraction(2)
        k = Fraction(5, 4) if self.sum_zero else Fraction(1)
        return max(u, k)

    def to_record(self):
        return {
            "a": float(self.a), "b": float(self.b), "c": float(self.c), "d": float(self.d),
            "P": [float(x) for x in self.P.coeffs],
            "U": [float(x) for x in self.U.coeffs],
            "V": [float(x) for x in self.V.coeffs],
            "R": [float(x) for x in self.R.coeffs],
            "m": self.m, "alpha": self.alpha, "ell": self.ell,
            "branch_row": self.row, "branch": self.label,
            "near_boundary": list(self.near_boundary),
        }


def _check(a, b, c, d):
    try:
        vals = tuple(to_fraction(v) for v in (a, b, c, d))
    except (TypeError, ValueError) as exc:
        raise ParameterError(f"abcd parameters must be finite reals: {exc}") from exc
    bad = abcd_constraint_violation(*vals)
    if bad is not None:
        raise ParameterError(f"abcd parameters violate {bad}")
    return vals


def compute_puvr(a, b, c, d):
    """Exact polynomials ``P, U, V, R`` in ``z = y^2``.

    ``P = U V + z (U' V - U V')`` and
    ``R = 2 P' U V - P U' V - 3 P U V'``.
    """
    a, b, c, d = _check(a, b, c, d)
    z = RealPolynomial([0, 1])
    U = RealPolynomial([1, -a]) * RealPolynomial([1, -c])
    V = RealPolynomial([1, b]) * RealPolynomial([1, d])
    P = U * V + z * (U.deriv() * V - U * V.deriv())
    R = 2 * P.deriv() * U * V - P * U.deriv() * V - 3 * P * U * V.deriv()
    return P, U, V, R


class _Predicates:
    """Tolerance-aware zero tests that remember close calls."""

    def __init__(self, tol):
        self.tol = tol
        self.close = []

    def zero(self, name, value, scale=1):
        v = abs(float(value))
        s = max(1.0, float(scale))
        if 0 < v <= 10 * self.tol * s:
            self.close.append(name)
        return v <= self.tol * s

    def negative(self, name, value):
        return not self.zero(name, value) and value < 0

    def positive(self, name, value):
        return not self.zero(name, value) and value > 0


def _row(a, b, c, d, pred):
    b0 = pred.zero("b", b)
    d0 = pred.zero("d", d)
    a0 = pred.zero("a", a)
    c0 = pred.zero("c", c)
    bd0 = b0 or d0
    ac0 = a0 or c0
    if b0 and d0:
        if not ac0:
            return 1
        if pred.negative("a+c", a + c):
            return 2
        raise AssertionError("a=b=c=d=0 passed the parameter check")
    if bd0:
        if not ac0:
            return 3
        if a0 and c0:
            return 5
        return 4
    if a0 and c0:
        return 6
    if ac0:
        s = a + c
        q = b * s + b * d + s * d
        scale = abs(b * s) + abs(b * d) + abs(s * d)
        return 8 if pred.zero("b(a+c)+bd+(a+c)d", q, scale) else 7
    q = a * b * c + a * b * d + a * c * d + b * c * d
    scale = abs(a * b * c) + abs(a * b * d) + abs(a * c * d) + abs(b * c * d)
    return 10 if pred.zero("abc+abd+acd+bcd", q, scale) else 9


def _ell(row, a, b, c, d):
    if row == 4:
        return math.sqrt(float(-(a + c) / (b + d)))
    if row in (9, 10):
        return math.sqrt(float((a * c) / (b * d)))
    return 0.0


def max_positive_multiplicity(poly):
    roots = real_roots(poly)
    return max((mult for _, mult in roots), default=0)


def classify(a, b, c, d, tol=TOL):
    """Assign ``(a, b, c, d)`` to its high-frequency regime.

    Raises
    ------
    ParameterError
        If the sign or non-degeneracy conditions fail.
    """
    a, b, c, d = _check(a, b, c, d)
    P, U, V, R = compute_puvr(a, b, c, d)
    pred = _Predicates(tol)
    row = _row(a, b, c, d, pred)
    return AbcdClassification(
        a, b, c, d, P, U, V, R,
        m=max_positive_multiplicity(R),
        alpha=ROW_ALPHA[row],
        ell=_ell(row, a, b, c, d),
        row=row,
        near_boundary=tuple(pred.close),
    )


def verify_p_nondegeneracy(a, b, c, d):
    """True when ``P``, ``P'`` and ``P''`` share no positive root."""
    P, _, _, _ = compute_puvr(a, b, c, d)
    G = poly_gcd(poly_gcd(P, P.deriv()), P.deriv(2))
    if G.degree <= 0:
        return True
    return not real_roots(G)
