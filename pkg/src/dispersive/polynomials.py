"""Exact univariate polynomials over the rationals and real-root isolation.

Coefficients are stored as :class:`fractions.Fraction` in ascending
degree order.  Floating inputs are converted exactly (every binary double
is a rational number), so identities such as ``b(a+c) + bd + (a+c)d = 0``
are detected without rounding noise when the user supplies exact values.

Real roots are isolated with a Sturm sequence on each square-free factor
of Yun's decomposition, then refined by bisection in floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

import numpy as np


def to_fraction(v):
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    f = float(v)
    if not math.isfinite(f):
        raise ValueError("polynomial coefficients must be finite")
    return Fraction(f)


def _trim(coeffs):
    c = list(coeffs)
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    if not c:
        c = [Fraction(0)]
    return tuple(c)


@dataclass(frozen=True)
class RealPolynomial:
    """Polynomial with exact rational coefficients, ascending degree."""

    coeffs: Tuple[Fraction, ...]

    def __init__(self, coeffs: Sequence = (0,)):
        object.__setattr__(self, "coeffs", _trim(to_fraction(c) for c in coeffs))

    # basic properties ---------------------------------------------------
    @property
    def degree(self):
        if len(self.coeffs) == 1 and self.coeffs[0] == 0:
            return -1
        return len(self.coeffs) - 1

    @property
    def is_zero(self):
        return self.degree < 0

    @property
    def leading(self):
        return self.coeffs[-1]

    def float_coeffs(self):
        return np.array([float(c) for c in self.coeffs])

    def __repr__(self):
        return f"RealPolynomial({[str(c) for c in self.coeffs]})"

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        other = as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return RealPolynomial([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return RealPolynomial([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-as_poly(other))

    def __rsub__(self, other):
        return as_poly(other) - self

    def __mul__(self, other):
        other = as_poly(other)
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RealPolynomial(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        try:
            other = as_poly(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def deriv(self, m=1):
        c = list(self.coeffs)
        for _ in range(m):
            c = [i * c[i] for i in range(1, len(c))] or [Fraction(0)]
        return RealPolynomial(c)

    def divmod(self, other):
        other = as_poly(other)
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lead = other.leading
        if self.degree < dq:
            return RealPolynomial([0]), self
        quot = [Fraction(0)] * (self.degree - dq + 1)
        for i in range(self.degree - dq, -1, -1):
            coef = rem[i + dq] / lead
            quot[i] = coef
            if coef != 0:
                for j, b in enumerate(other.coeffs):
                    rem[i + j] -= coef * b
        return RealPolynomial(quot), RealPolynomial(rem[:dq] if dq > 0 else [0])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self):
        if self.is_zero:
            return self
        lead = self.leading
        return RealPolynomial([c / lead for c in self.coeffs])

    # evaluation ---------------------------------------------------------
    def __call__(self, z):
        """Evaluate with Horner's scheme (float or array input)."""
        z = np.asarray(z, dtype=float)
        acc = np.zeros_like(z)
        for c in reversed(self.float_coeffs()):
            acc = acc * z + c
        if acc.ndim == 0:
            return float(acc)
        return acc

    def exact(self, z):
        z = to_fraction(z)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc


def as_poly(v):
    if isinstance(v, RealPolynomial):
        return v
    if isinstance(v, (list, tuple)):
        return RealPolynomial(v)
    return RealPolynomial([v])


def poly_gcd(a, b):
    """Monic greatest common divisor (exact Euclid)."""
    a, b = as_poly(a), as_poly(b)
    while not b.is_zero:
        a, b = b, a % b
    return a.monic() if not a.is_zero else a


def squarefree_decomposition(p):
    """Yun's algorithm: list of ``(factor, multiplicity)`` with square-free factors."""
    p = as_poly(p)
    if p.degree <= 0:
        return []
    out = []
    dp = p.deriv()
    a = poly_gcd(p, dp)
    b = p // a
    c = dp // a
    d = c - b.deriv()
    i = 1
    while b.degree > 0:
        a = poly_gcd(b, d)
        if a.degree > 0:
            out.append((a, i))
        b = b // a
        c = d // a
        d = c - b.deriv()
        i += 1
    return out


def _sturm_chain(p):
    chain = [p, p.deriv()]
    while not chain[-1].is_zero and chain[-1].degree > 0:
        r = chain[-2] % chain[-1]
        if r.is_zero:
            break
        chain.append(-r)
    return chain


def _sign_changes_at(chain, z):
    signs = []
    for q in chain:
        v = q.exact(z)
        if v != 0:
            signs.append(v > 0)
    return sum(1 for s0, s1 in zip(signs, signs[1:]) if s0 != s1)


def _sign_changes_at_inf(chain, positive=True):
    signs = []
    for q in chain:
        if q.is_zero:
            continue
        lead = q.leading
        s = lead > 0
        if not positive and q.degree % 2 == 1:
            s = not s
        signs.append(s)
    return sum(1 for s0, s1 in zip(signs, signs[1:]) if s0 != s1)


def _root_bound(p):
    """Cauchy bound on the modulus of the roots."""
    lead = abs(p.leading)
    return 1 + max(abs(c) / lead for c in p.coeffs[:-1]) if p.degree > 0 else Fraction(1)


def _count(chain, lo, hi):
    """Number of distinct roots in (lo, hi] of a square-free polynomial."""
    v_lo = _sign_changes_at(chain, lo)
    v_hi = _sign_changes_at(chain, hi)
    return v_lo - v_hi


def _isolate(p, lo, hi):
    """Disjoint half-open intervals (a, b] each holding one root of square-free ``p``."""
    chain = _sturm_chain(p)
    out = []
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        n = _count(chain, a, b)
        if n == 0:
            continue
        if n == 1:
            out.append((a, b))
            continue
        m = (a + b) / 2
        stack.append((m, b))
        stack.append((a, m))
    out.sort()
    return out


def _refine(p, a, b, rel_tol=1e-12):
    """Bisection for the single root of ``p`` in (a, b]."""
    if p.exact(b) == 0:
        return float(b)
    fa = p.exact(a)
    # work in floats once the bracket is tight in relative terms
    a_f, b_f = float(a), float(b)
    sa = np.sign(float(fa)) if fa != 0 else 0.0
    for _ in range(200):
        m = 0.5 * (a_f + b_f)
        if b_f - a_f <= rel_tol * max(abs(m), 1e-300) or m in (a_f, b_f):
            break
        fm = p.exact(Fraction(m))
        if fm == 0:
            return m
        if (fm > 0) == (sa > 0):
            a_f = m
        else:
            b_f = m
    return 0.5 * (a_f + b_f)


def real_roots(p, lo=0.0, hi=math.inf, open_lo=True):
    """Real roots of ``p`` inside ``(lo, hi)`` with their multiplicities.

    Parameters
    ----------
    p : RealPolynomial or sequence
        Polynomial (ascending coefficients).
    lo, hi : float
        Interval endpoints; ``hi`` may be infinite.
    open_lo : bool
        Exclude ``lo`` itself (default, matching "positive roots").

    Returns
    -------
    list of (float, int)
        Sorted roots with multiplicity.
    """
    p = as_poly(p)
    if p.degree <= 0:
        return []
    roots: List[Tuple[float, int]] = []
    for factor, mult in squarefree_decomposition(p):
        bound = _root_bound(factor)
        a = to_fraction(lo) if math.isfinite(lo) else -bound
        b = to_fraction(hi) if math.isfinite(hi) else bound
        a = max(a, -bound - 1)
        b = min(b, bound + 1)
        if a >= b:
            continue
        for ia, ib in _isolate(factor, a, b):
            r = _refine(factor, ia, ib)
            if math.isfinite(hi) and r >= hi:
                continue
            if open_lo and r <= lo:
                continue
            if not open_lo and r < lo:
                continue
            roots.append((r, mult))
        # a root exactly at lo is counted when the interval is closed there
        if not open_lo and math.isfinite(lo) and factor.exact(lo) == 0:
            roots.append((float(lo), mult))
    roots.sort()
    return roots
