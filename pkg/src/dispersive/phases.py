"""Catalog of dispersion phases ``g`` with closed-form derivatives.

Every model evaluates ``g`` and its first four derivatives on (0, inf)
through hand-written formulas.  Where a closed form suffers from
cancellation near the origin (water waves, ILW) a Taylor series with
exactly computed rational coefficients is used below a configurable
threshold.

Models
------
``water_wave``
    ``g(y) = sqrt(y tanh y)``, ``delta = sqrt(mu)``.
``abcd``
    ``g(y) = y sqrt((1 - a y^2)(1 - c y^2) / ((1 + b y^2)(1 + d y^2)))``.
``bbm_kdv``
    ``g(y) = y (1 - (p + 1/6) y^2) / (1 - p y^2)`` with ``p <= 0``.
``ostrovsky``
    ``g(y) = 1/y - b y^3`` with ``b != 0``.
``reduced_ostrovsky``
    ``g(y) = 1/y``.
``ilw``
    ``g(y) = y (y coth y - 1)``, ``delta = rho``.
``power``
    ``g(y) = y^(alpha + 2)``; test oracle (Schrodinger, Airy, ...).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Optional, Tuple

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import DomainError, FitError, ParameterError
from .polynomials import RealPolynomial, to_fraction

KINDS = ("water_wave", "abcd", "bbm_kdv", "ostrovsky", "reduced_ostrovsky", "ilw", "power")
MAX_ORDER = 4


# ---------------------------------------------------------------------------
# exact series coefficients
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def bernoulli_numbers(n_max):
    """Bernoulli numbers ``B_0 .. B_n_max`` as fractions (``B_1 = -1/2``)."""
    B = [Fraction(0)] * (n_max + 1)
    B[0] = Fraction(1)
    for m in range(1, n_max + 1):
        acc = Fraction(0)
        for k in range(m):
            acc += math.comb(m + 1, k) * B[k]
        B[m] = -acc / (m + 1)
    return tuple(B)


@lru_cache(maxsize=None)
def water_wave_series(n_terms=18):
    """Odd Taylor coefficients of ``sqrt(y tanh y)`` as a dense float array."""
    B = bernoulli_numbers(2 * n_terms + 2)
    # tanh(y)/y = sum_n t_n y^{2n}
    t = []
    for n in range(n_terms):
        m = 2 * n + 2
        t.append(Fraction(2 ** m * (2 ** m - 1)) * B[m] / math.factorial(m))
    # square root of the series in w = y^2
    c = [Fraction(1)]
    for n in range(1, n_terms):
        acc = t[n] - sum(c[k] * c[n - k] for k in range(1, n))
        c.append(acc / 2)
    dense = np.zeros(2 * n_terms)
    for n, cn in enumerate(c):
        dense[2 * n + 1] = float(cn)
    return dense


@lru_cache(maxsize=None)
def ilw_series(n_terms=18):
    """Odd Taylor coefficients of ``y (y coth y - 1)``."""
    B = bernoulli_numbers(2 * n_terms + 2)
    dense = np.zeros(2 * n_terms + 2)
    for n in range(1, n_terms + 1):
        dense[2 * n + 1] = float(Fraction(2 ** (2 * n)) * B[2 * n] / math.factorial(2 * n))
    return dense


def _series_eval(coeffs, y, p):
    c = coeffs
    if p:
        c = npoly.polyder(c, p)
    return npoly.polyval(y, c)


# ---------------------------------------------------------------------------
# descriptors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AsymptoticDescriptor:
    """Leading behaviour ``g^(p)(y) - ell ~ Gamma y^alpha`` at one end.

    For ``p >= 2`` the constant ``ell`` is zero.  For ``p = 1`` it is the
    finite limit of ``g'`` at that end (0 if ``g'`` diverges or vanishes).
    """

    end: str
    deriv_order: int
    alpha: float
    gamma: Optional[float]
    ell: float = 0.0
    window: Optional[Tuple[float, float]] = None
    stderr: Optional[float] = None


# ---------------------------------------------------------------------------
# per-model implementations (vectorised, no domain checks)
# ---------------------------------------------------------------------------

class _WaterWave:
    def __init__(self, threshold):
        self.threshold = threshold
        self.series = water_wave_series()

    def __call__(self, y, p):
        y = np.asarray(y, dtype=float)
        out = np.empty_like(y)
        small = y < self.threshold
        if np.any(small):
            out[small] = _series_eval(self.series, y[small], p)
        big = ~small
        if np.any(big):
            out[big] = self._closed(y[big], p)
        return out

    @staticmethod
    def _closed(y, p):
        T = np.tanh(y)
        with np.errstate(over="ignore"):
            T1 = 1.0 / np.cosh(y) ** 2
        h = y * T
        g = np.sqrt(h)
        if p == 0:
            return g
        T2 = -2.0 * T * T1
        T3 = -2.0 * T1 * T1 + 4.0 * T * T * T1
        T4 = -4.0 * T1 * T2 + 8.0 * T * T1 * T1 + 4.0 * T * T * T2
        h1 = T + y * T1
        h2 = 2.0 * T1 + y * T2
        h3 = 3.0 * T2 + y * T3
        h4 = 4.0 * T3 + y * T4
        # derivatives of sqrt at h
        f1 = 0.5 / g
        f2 = -0.25 / g ** 3
        f3 = 0.375 / g ** 5
        f4 = -0.9375 / g ** 7
        if p == 1:
            return f1 * h1
        if p == 2:
            return f2 * h1 ** 2 + f1 * h2
        if p == 3:
            return f3 * h1 ** 3 + 3.0 * f2 * h1 * h2 + f1 * h3
        return (f4 * h1 ** 4 + 6.0 * f3 * h1 ** 2 * h2
                + f2 * (3.0 * h2 ** 2 + 4.0 * h1 * h3) + f1 * h4)


class _Ilw:
    def __init__(self, threshold):
        self.threshold = threshold
        self.series = ilw_series()

    def __call__(self, y, p):
        y = np.asarray(y, dtype=float)
        out = np.empty_like(y)
        small = y < self.threshold
        if np.any(small):
            out[small] = _series_eval(self.series, y[small], p)
        big = ~small
        if np.any(big):
            out[big] = self._closed(y[big], p)
        return out

    @staticmethod
    def _closed(y, p):
        C = 1.0 / np.tanh(y)
        with np.errstate(over="ignore"):
            C1 = -1.0 / np.sinh(y) ** 2  # = 1 - coth^2 without cancellation
        if p == 0:
            return y * y * C - y
        if p == 1:
            return 2.0 * y * C + y * y * C1 - 1.0
        C2 = -2.0 * C * C1
        if p == 2:
            return 2.0 * C + 4.0 * y * C1 + y * y * C2
        C3 = -2.0 * (C1 * C1 + C * C2)
        if p == 3:
            return 6.0 * C1 + 6.0 * y * C2 + y * y * C3
        C4 = -2.0 * (3.0 * C1 * C2 + C * C3)
        return 12.0 * C2 + 8.0 * y * C3 + y * y * C4


class _Rational:
    """``g = N / D`` with polynomial N, D; Leibniz recursion for derivatives."""

    def __init__(self, num, den):
        self.num = np.asarray(num, dtype=float)
        self.den = np.asarray(den, dtype=float)

    def __call__(self, y, p):
        y = np.asarray(y, dtype=float)
        D = [npoly.polyval(y, npoly.polyder(self.den, j)) if j else npoly.polyval(y, self.den)
             for j in range(p + 1)]
        N = [npoly.polyval(y, npoly.polyder(self.num, j)) if j else npoly.polyval(y, self.num)
             for j in range(p + 1)]
        vals = []
        for n in range(p + 1):
            acc = N[n]
            for j in range(1, n + 1):
                acc = acc - math.comb(n, j) * vals[n - j] * D[j]
            vals.append(acc / D[0])
        return vals[p]


class _Abcd:
    """Closed forms through the polynomials P, U, V, R and two further ones."""

    def __init__(self, a, b, c, d):
        z = RealPolynomial([0, 1])
        U = RealPolynomial([1, -to_fraction(a)]) * RealPolynomial([1, -to_fraction(c)])
        V = RealPolynomial([1, to_fraction(b)]) * RealPolynomial([1, to_fraction(d)])
        P = U * V + z * (U.deriv() * V - U * V.deriv())
        R = 2 * P.deriv() * U * V - P * U.deriv() * V - 3 * P * U * V.deriv()
        half = Fraction(1, 2)
        S = R.deriv() * U * V - 3 * half * R * U.deriv() * V - 5 * half * R * U * V.deriv()
        T = S.deriv() * U * V - 5 * half * S * U.deriv() * V - 7 * half * S * U * V.deriv()
        # third and fourth derivatives over a common denominator, so that the
        # leading terms cancel exactly here instead of in floating point
        N3 = R * U * V + 2 * z * S
        N4 = 6 * S * U * V + 4 * z * T
        self.P, self.U, self.V, self.R, self.N3, self.N4 = P, U, V, R, N3, N4

    def __call__(self, y, p):
        y = np.asarray(y, dtype=float)
        z = y * y
        U = self.U(z)
        V = self.V(z)
        if p == 0:
            return y * np.sqrt(U / V)
        if p == 1:
            return self.P(z) / np.sqrt(U * V ** 3)
        if p == 2:
            return y * self.R(z) / (U ** 1.5 * V ** 2.5)
        if p == 3:
            return self.N3(z) / (U ** 2.5 * V ** 3.5)
        return y * self.N4(z) / (U ** 3.5 * V ** 4.5)


class _Ostrovsky:
    def __init__(self, b):
        self.b = b

    def __call__(self, y, p):
        y = np.asarray(y, dtype=float)
        inv = (-1.0) ** p * math.factorial(p) / y ** (p + 1)
        cubic = [y ** 3, 3 * y ** 2, 6 * y, 6.0 + 0 * y, 0.0 * y][p]
        return inv - self.b * cubic


class _Power:
    def __init__(self, m):
        self.m = m

    def __call__(self, y, p):
        y = np.asarray(y, dtype=float)
        coef = 1.0
        for i in range(p):
            coef *= self.m - i
        if coef == 0.0:
            return np.zeros_like(y)
        return coef * y ** (self.m - p)


# ---------------------------------------------------------------------------
# the model value type
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PhaseModel:
    """Immutable phase ``g`` together with its scaling parameter ``delta``.

    Attributes
    ----------
    kind : str
        Model tag, one of :data:`KINDS`.
    params : tuple of (name, value)
        Named real parameters.
    delta : float
        Positive scaling parameter in ``(t / delta) g(delta |xi|)``.
    domain : (float, float)
        Open interval of validity.
    zero_regular : bool
        True when ``g`` extends as a C^1 function to 0.
    g0 : float
        Limit ``g(0+)`` when ``zero_regular``.
    """

    kind: str
    params: Tuple[Tuple[str, object], ...]
    delta: float
    domain: Tuple[float, float]
    zero_regular: bool
    g0: float = 0.0
    descriptors: Tuple[AsymptoticDescriptor, ...] = ()
    _impl: object = field(default=None, compare=False, repr=False)

    def param(self, name, default=None):
        for k, v in self.params:
            if k == name:
                return v
        return default

    @property
    def id(self):
        return self.kind

    @property
    def has_closed_forms(self):
        return True

    def g(self, y):
        """Unchecked vectorised evaluation of ``g``."""
        return self._impl(y, 0)

    def deriv(self, y, p):
        """Unchecked vectorised evaluation of ``g^(p)``, ``0 <= p <= 4``."""
        if not 0 <= p <= MAX_ORDER:
            raise ParameterError(f"derivative order must be in 0..{MAX_ORDER}")
        return self._impl(y, p)

    def stored(self, end, p):
        for d in self.descriptors:
            if d.end == end and d.deriv_order == p:
                return d
        return None

    def with_delta(self, delta):
        if not delta > 0:
            raise ParameterError("delta must be positive")
        return PhaseModel(self.kind, self.params, float(delta), self.domain,
                          self.zero_regular, self.g0, self.descriptors, self._impl)

    def describe(self):
        out = {"kind": self.kind, "delta": self.delta}
        for k, v in self.params:
            out[k] = float(v) if isinstance(v, Fraction) else v
        return out


def _check_domain(model, y):
    y_arr = np.asarray(y, dtype=float)
    lo, hi = model.domain
    if np.any(~np.isfinite(y_arr)) or np.any(y_arr <= lo) or np.any(y_arr >= hi):
        bad = y_arr[(~np.isfinite(y_arr)) | (y_arr <= lo) | (y_arr >= hi)]
        raise DomainError(
            f"{model.kind}: y={float(np.ravel(bad)[0])!r} outside the open domain ({lo}, {hi})"
        )
    return y_arr


def eval_phase(model, y):
    """Value ``g(y)`` for ``y`` in the model's open domain."""
    y_arr = _check_domain(model, y)
    out = model.g(y_arr)
    return float(out) if np.ndim(y) == 0 else out


def eval_derivative(model, y, p):
    """Analytic ``g^(p)(y)`` for ``1 <= p <= 4``."""
    if not 1 <= int(p) <= MAX_ORDER:
        raise ParameterError(f"derivative order must be in 1..{MAX_ORDER}")
    y_arr = _check_domain(model, y)
    out = model.deriv(y_arr, int(p))
    return float(out) if np.ndim(y) == 0 else out


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------

def _delta_from(params, key="mu"):
    if "delta" in params:
        delta = float(params["delta"])
    elif key in params:
        val = float(params[key])
        if not val > 0:
            raise ParameterError(f"{key} must be positive")
        delta = math.sqrt(val) if key == "mu" else val
    else:
        delta = 1.0
    if not delta > 0:
        raise ParameterError("delta must be positive")
    return delta


def abcd_constraint_violation(a, b, c, d):
    """Name of the first violated well-posedness condition, or ``None``."""
    a, b, c, d = (to_fraction(v) for v in (a, b, c, d))
    if not b >= 0:
        return "b >= 0"
    if not d >= 0:
        return "d >= 0"
    if not a <= 0:
        return "a <= 0"
    if not c <= 0:
        return "c <= 0"
    if ((a + b) * (a + d) * (c + b) * (c + d)) ** 2 + (a + b + c + d) ** 2 <= 0:
        return "((a+b)(a+d)(c+b)(c+d))^2 + (a+b+c+d)^2 > 0"
    return None


def make_model(kind, **params):
    """Build a :class:`PhaseModel` from a kind tag and named parameters.

    Common parameters: ``mu`` (``delta = sqrt(mu)``) or ``delta``
    directly; ``rho`` for ILW.  Model parameters: ``a, b, c, d`` (abcd),
    ``p`` (BBM-KdV), ``b`` (Ostrovsky), ``alpha`` (power).

    Raises
    ------
    ParameterError
        Unknown kind or violated model constraint.
    """
    if kind not in KINDS:
        raise ParameterError(f"unknown model kind {kind!r}; expected one of {KINDS}")
    inf = math.inf
    if kind == "water_wave":
        thr = float(params.get("series_threshold", 0.25))
        delta = _delta_from(params)
        desc = (
            AsymptoticDescriptor("zero", 1, 2.0, -0.5, ell=1.0),
            AsymptoticDescriptor("infinity", 1, -0.5, 0.5),
            AsymptoticDescriptor("zero", 2, 1.0, -1.0),
            AsymptoticDescriptor("infinity", 2, -1.5, -0.25),
            AsymptoticDescriptor("infinity", 3, -2.5, 0.375),
        )
        return PhaseModel(kind, (("series_threshold", thr),), delta, (0.0, inf), True, 0.0,
                          desc, _WaterWave(thr))
    if kind == "abcd":
        try:
            a, b, c, d = (to_fraction(params.get(k, 0)) for k in "abcd")
        except (TypeError, ValueError) as exc:
            raise ParameterError(f"abcd parameters must be real numbers: {exc}") from exc
        bad = abcd_constraint_violation(a, b, c, d)
        if bad is not None:
            raise ParameterError(f"abcd parameters violate {bad}")
        delta = _delta_from(params)
        impl = _Abcd(a, b, c, d)
        z = np.linspace(0.0, 1e6, 64)
        assert np.all(impl.U(z) * impl.V(z) > 0), "U V must stay positive under the sign conditions"
        return PhaseModel(kind, tuple(zip("abcd", (a, b, c, d))), delta, (0.0, inf), True, 0.0,
                          (), impl)
    if kind == "bbm_kdv":
        p = float(params.get("p", -1.0))
        if not p <= 0:
            raise ParameterError("bbm_kdv parameter violates p <= 0")
        q = p + 1.0 / 6.0
        delta = _delta_from(params)
        impl = _Rational([0.0, 1.0, 0.0, -q], [1.0, 0.0, -p])
        desc = [AsymptoticDescriptor("zero", 2, 1.0, -1.0)]
        if p < 0:
            desc += [
                AsymptoticDescriptor("infinity", 1, -2.0, -1.0 / (6 * p * p), ell=(6 * p + 1) / (6 * p)),
                AsymptoticDescriptor("infinity", 2, -3.0, 1.0 / (3 * p * p)),
            ]
        return PhaseModel(kind, (("p", p),), delta, (0.0, inf), True, 0.0, tuple(desc), impl)
    if kind == "ostrovsky":
        b = float(params.get("b", -1.0))
        if b == 0:
            raise ParameterError("ostrovsky parameter violates b != 0 (use reduced_ostrovsky)")
        desc = (
            AsymptoticDescriptor("zero", 2, -3.0, 2.0),
            AsymptoticDescriptor("infinity", 2, 1.0, -6.0 * b),
        )
        return PhaseModel(kind, (("b", b),), 1.0, (0.0, inf), False, 0.0, desc, _Ostrovsky(b))
    if kind == "reduced_ostrovsky":
        desc = (
            AsymptoticDescriptor("zero", 1, -2.0, -1.0),
            AsymptoticDescriptor("infinity", 1, -2.0, -1.0),
            AsymptoticDescriptor("zero", 2, -3.0, 2.0),
            AsymptoticDescriptor("infinity", 2, -3.0, 2.0),
        )
        return PhaseModel(kind, (), 1.0, (0.0, inf), False, 0.0, desc, _Ostrovsky(0.0))
    if kind == "ilw":
        thr = float(params.get("series_threshold", 0.5))
        delta = _delta_from(params, key="rho")
        desc = (
            AsymptoticDescriptor("zero", 1, 2.0, 1.0),
            AsymptoticDescriptor("infinity", 1, 1.0, 2.0),
            AsymptoticDescriptor("zero", 2, 1.0, 2.0),
            AsymptoticDescriptor("infinity", 2, 0.0, 2.0),
        )
        return PhaseModel(kind, (("series_threshold", thr),), delta, (0.0, inf), True, 0.0,
                          desc, _Ilw(thr))
    # power
    alpha = float(params.get("alpha", 0.0))
    m = alpha + 2.0
    if m == 0:
        raise ParameterError("power phase needs alpha != -2 (g would be constant)")
    sign_split = bool(params.get("sign_split", False))
    delta = _delta_from(params)
    desc = []
    for p in range(1, MAX_ORDER + 1):
        coef = 1.0
        for i in range(p):
            coef *= m - i
        if coef != 0:
            desc.append(AsymptoticDescriptor("zero", p, m - p, coef))
            desc.append(AsymptoticDescriptor("infinity", p, m - p, coef))
    return PhaseModel(kind, (("alpha", alpha), ("sign_split", sign_split)), delta, (0.0, inf),
                      m >= 1, 0.0, tuple(desc), _Power(m))


# ---------------------------------------------------------------------------
# asymptotic fitting
# ---------------------------------------------------------------------------

DEFAULT_WINDOWS = {"zero": (1e-3, 1e-2), "infinity": (1e2, 1e3)}


def count_sign_changes(values):
    v = np.asarray(values, dtype=float)
    s = np.sign(v[v != 0])
    return int(np.count_nonzero(s[1:] != s[:-1]))


def _limit_estimate(model, end, window):
    """Aitken extrapolation of ``g'`` toward the requested end."""
    lo, hi = window
    q = math.sqrt(hi / lo)
    if end == "infinity":
        ys = np.array([hi / q ** 2, hi / q, hi])
    else:
        ys = np.array([lo * q ** 2, lo * q, lo])
    f = model.deriv(ys, 1)
    d1, d2 = f[1] - f[0], f[2] - f[1]
    if d1 == 0 or d2 == 0:
        return float(f[2])
    if np.sign(d1) != np.sign(d2) or abs(d2) >= abs(d1):
        return 0.0
    ell = f[2] - d2 * d2 / (d2 - d1)
    if abs(ell) <= 1e-3 * abs(f[2]):
        return 0.0
    return float(ell)


def fit_asymptotic(model, end, deriv_order, window=None, n_samples=64):
    """Fit ``g^(p) - ell ~ Gamma y^alpha`` over one decade near an end.

    Parameters
    ----------
    model : PhaseModel
    end : {"zero", "infinity"}
    deriv_order : int
        ``p`` between 1 and 4.
    window : (float, float), optional
        Fitting interval; defaults to [1e-3, 1e-2] or [1e2, 1e3].
    n_samples : int
        Log-spaced sample count.

    Returns
    -------
    AsymptoticDescriptor
    """
    if end not in ("zero", "infinity"):
        raise ParameterError("end must be 'zero' or 'infinity'")
    p = int(deriv_order)
    if not 1 <= p <= MAX_ORDER:
        raise ParameterError(f"derivative order must be in 1..{MAX_ORDER}")
    window = tuple(window or DEFAULT_WINDOWS[end])
    lo, hi = window
    if not (0 < lo < hi):
        raise FitError("fit window must satisfy 0 < lo < hi")
    if n_samples < 8:
        raise FitError("at least 8 samples are needed")
    y = np.geomspace(lo, hi, n_samples)
    vals = model.deriv(y, p)
    ell = _limit_estimate(model, end, window) if p == 1 else 0.0
    resid = vals - ell
    if not np.all(np.isfinite(resid)):
        raise FitError("non-finite derivative values in the fit window")
    if np.any(resid == 0):
        raise FitError("derivative vanishes inside the fit window")
    if count_sign_changes(resid) > 0:
        raise FitError("derivative changes sign inside the fit window")
    X = np.log(y)
    Y = np.log(np.abs(resid))
    A = np.vstack([X, np.ones_like(X)]).T
    coef, res, _, _ = np.linalg.lstsq(A, Y, rcond=None)
    slope, intercept = coef
    dof = max(len(X) - 2, 1)
    rss = float(np.sum((A @ coef - Y) ** 2))
    stderr = math.sqrt(rss / dof / float(np.sum((X - X.mean()) ** 2)))
    gamma = float(np.sign(resid[0]) * math.exp(intercept))
    return AsymptoticDescriptor(end, p, float(slope), gamma, ell=ell, window=window, stderr=stderr)
