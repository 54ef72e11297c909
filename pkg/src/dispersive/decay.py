"""Decay predictions from phase descriptors and empirical decay experiments.

Each decay lemma is encoded as a function that inspects the phase on the
band (signs, lower bounds ``|g^(p)| >= lambda y^alpha``, zero counts) and,
when its hypotheses verify numerically, returns the triple

* ``sigma``: time-decay exponent, ``sup_x |I| <~ |t|^-sigma``;
* ``beta``: exponent of ``delta``;
* ``gamma``: exponent of ``2^k`` for single dyadic blocks (when defined).

:func:`predict` either evaluates one lemma or, in ``auto`` mode, every
lemma and keeps the one with the largest ``sigma``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import List, Optional, Tuple

import numpy as np

from .errors import FitError, ParameterError, PredictionError, QuadratureError
from .parallel import parallel_map
from .oscillatory import SearchSpec, integration_limits, sup_over_x
from .phases import count_sign_changes, fit_asymptotic

N_HYP = 64          # samples for lower-bound hypotheses
N_ZEROS = 512       # samples for sign-change counting
TREND = 0.1         # log-slope toward an open end beyond which a bound degenerates
TWO_SIDED = 1e3     # max/min ratio allowed for two-sided bounds
DECADES = 6.0       # sampled extent of unbounded or zero-reaching intervals
EPS = 1e-9

LEMMAS_1D = ("vdc2_critical", "vdc_window", "dyadic_pderiv", "dyadic_interp", "vdc2_sum",
             "multideriv")
LEMMAS_2D = ("vdc2d_critical", "theta0_hf_critical", "ww_lowfreq", "paley_inv_t",
             "paley_interp", "vdc2d_sum", "theta0_hf_sum", "lowfreq_gprime", "lowfreq_no_gprime",
             "wave_2deriv_low", "wave_2deriv_mid", "wave_2deriv_high", "wave_2deriv_high_theta0",
             "wave_multideriv_low", "wave_multideriv_mid")

LEMMA_DESCRIPTIONS = {
    "vdc_window": "Van der Corput on a window: sum_{p=2}^l |g^(p)| >= lambda, s = 0",
    "dyadic_pderiv": "dyadic block, |g^(p)| >= lambda y^alpha",
    "dyadic_interp": "dyadic block, interpolated exponent l with |g''| >= lambda y^alpha",
    "vdc2_sum": "dyadic sum, |g''| >= lambda y^alpha, (s+1)(s-alpha/2) < 0",
    "vdc2_critical": "dyadic sum at s = alpha/2 with |g' - ell| ~ y^(alpha+1)",
    "multideriv": "bounded dyadic range, sum_{p=2}^l |g^(p)| >= lambda",
    "lowfreq_gprime": "2d bounded window, |g'| >= lambda and sum_{p=2}^l |g^(p)| >= lambda",
    "lowfreq_no_gprime": "2d bounded window, sum_{p=2}^l |g^(p)| >= lambda only",
    "ww_lowfreq": "2d low-pass, g regular at 0 with |g'| >= lambda, |g''| >= lambda y^alpha, alpha >= 1",
    "paley_inv_t": "2d dyadic block, |g'| >= lambda y^beta', |g''| >= lambda y^alpha",
    "paley_interp": "2d dyadic block, interpolated exponent with beta' = alpha + 1",
    "vdc2d_sum": "2d dyadic sum, |g'| >= lambda y^(alpha+1), |g''| >= lambda y^alpha, (s+2)(s-alpha) < 0",
    "vdc2d_critical": "2d dyadic sum at s = alpha, two-sided bounds on g', g'', g'''",
    "theta0_hf_sum": "2d high frequencies, |g'| >= lambda, |g''| >= lambda y^alpha, alpha < -1",
    "theta0_hf_critical": "2d high frequencies at s = (alpha-1)/2 with ell != 0",
    "wave_2deriv_low": "2d wave-type low dyadic block, |g'| >= lambda",
    "wave_2deriv_mid": "2d wave-type bounded range, |g'| + |g''| >= lambda",
    "wave_2deriv_high": "2d wave-type high frequencies at s = alpha/2 - 1",
    "wave_2deriv_high_theta0": "2d wave-type high frequencies at s = (alpha-5)/4",
    "wave_multideriv_low": "2d wave-type low dyadic block, exponent 1/l",
    "wave_multideriv_mid": "2d wave-type bounded range, sum_{p=1}^l |g^(p)| >= lambda",
}


@dataclass(frozen=True)
class DecayPrediction:
    """Exponents predicted by one decay lemma for a (model, band, s, n)."""

    sigma: float
    beta: float
    gamma: Optional[float]
    s: float
    lemma: str
    band: str
    n: int
    alpha: Optional[float] = None
    l: Optional[float] = None
    lam: Optional[float] = None
    g2_sign_changes: Optional[int] = None
    notes: Tuple[str, ...] = ()

    def __post_init__(self):
        if not self.sigma > 0:
            raise ParameterError("a decay prediction needs sigma > 0")

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class SlopeFit:
    """Ordinary least squares fit of ``log y`` against ``log x``."""

    slope: float
    stderr: float
    x_range: Tuple[float, float]
    residual: float
    n: int
    intercept: float = 0.0

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class DecaySample:
    t: float
    sup: float
    argmax: float
    abs_error: float
    boundary: bool


class _Fail(Exception):
    pass


# ---------------------------------------------------------------------------
# facts about g on a band
# ---------------------------------------------------------------------------

def snap(value, step=0.25, tol=0.02):
    """Round a fitted exponent to the nearest multiple of ``step`` when close."""
    r = round(value / step) * step
    return r if abs(r - value) <= tol else value


@lru_cache(maxsize=256)
def end_exponent(model, end, p):
    """Exponent of ``g^(p) - ell`` at an end: stored, classified or fitted."""
    stored = model.stored(end, p)
    if stored is not None:
        return stored.alpha, stored.ell
    if model.kind == "abcd" and end == "infinity":
        from .abcd import classify

        cls = classify(*(model.param(k) for k in "abcd"))
        if p == 2:
            return float(cls.alpha), 0.0
        if p == 1:
            return float(cls.alpha + 1), cls.ell
    d = fit_asymptotic(model, end, p)
    return snap(d.alpha), d.ell


class BandFacts:
    """Sampled information about ``g`` on the interval ``J`` carried by a band."""

    def __init__(self, model, band, alpha=None):
        self.model = model
        self.band = band
        lo, hi = integration_limits(model, band)
        self.lo, self.hi = lo, hi
        if band.reaches_zero:
            self.region = "low"
            self.J = (hi * 10 ** -DECADES, hi)
        elif band.kind == "halfline_high":
            self.region = "high"
            self.J = (lo, lo * 10 ** DECADES)
        else:
            self.region = "bounded"
            self.J = (lo, hi)
        self.y = np.geomspace(self.J[0], self.J[1], N_HYP)
        self.yz = np.geomspace(self.J[0], self.J[1], N_ZEROS)
        self._d = {p: model.deriv(self.y, p) for p in range(1, 5)}
        self.g2_sign_changes = count_sign_changes(model.deriv(self.yz, 2))
        self.alpha_override = alpha
        self.notes = []
        if band.truncated:
            self.notes.append(f"unbounded band truncated at y={band.cap:g}")

    def d(self, p):
        return self._d[p]

    def exponent(self, p):
        """Exponent ``alpha_p`` with ``|g^(p)| ~ y^alpha_p`` on J."""
        if p == 2 and self.alpha_override is not None:
            return float(self.alpha_override)
        if self.region != "bounded":
            try:
                a, ell = end_exponent(self.model, "zero" if self.region == "low" else "infinity", p)
            except FitError as exc:
                raise _Fail(f"no asymptotic exponent for g^({p}): {exc}") from exc
            # g' tends to a non-zero constant: |g'| ~ y^0
            return 0.0 if (p == 1 and abs(ell) > EPS) else a
        v = self.d(p)
        if count_sign_changes(v) or np.any(v == 0):
            raise _Fail(f"g^({p}) vanishes on the band; no power-law exponent")
        return float(np.polyfit(np.log(self.y), np.log(np.abs(v)), 1)[0])

    def ell(self):
        if self.region == "low":
            return end_exponent(self.model, "zero", 1)[1]
        if self.region == "high":
            return end_exponent(self.model, "infinity", 1)[1]
        return 0.0

    # hypothesis checks ----------------------------------------------------
    def _end_trend(self, v):
        """Log-slope of ``v`` over the two decades next to an open end of J."""
        if self.region == "bounded":
            return 0.0
        ly = np.log10(self.y)
        sel = ly <= ly[0] + 2 if self.region == "low" else ly >= ly[-1] - 2
        slope = np.polyfit(ly[sel], np.log10(v[sel]), 1)[0]
        return float(slope)

    def lower(self, vals, expo=0.0, name="g"):
        """Check ``|vals| >= lambda y^expo`` on J and return ``lambda``.

        Besides a positive sampled minimum, the ratio must not tend to 0
        toward an open end of J (0 for low-pass bands, infinity for
        high-pass ones).
        """
        v = np.abs(vals) * self.y ** (-expo)
        if not np.all(np.isfinite(v)):
            raise _Fail(f"{name}: non-finite values on the band")
        if count_sign_changes(vals) or not float(v.min()) > 0:
            raise _Fail(f"{name} vanishes on the band")
        trend = self._end_trend(v)
        if (self.region == "low" and trend > TREND) or (self.region == "high" and trend < -TREND):
            raise _Fail(f"{name} * y^{-expo:g} tends to 0 at the open end of the band")
        return 0.5 * float(v.min())

    def two_sided(self, vals, expo, name):
        v = np.abs(vals) * self.y ** (-expo)
        if not np.all(np.isfinite(v)) or not v.min() > 0 or v.max() > TWO_SIDED * v.min():
            raise _Fail(f"{name} is not comparable to y^{expo:g} on the band")
        if abs(self._end_trend(v)) > TREND:
            raise _Fail(f"{name} is not comparable to y^{expo:g} at the open end of the band")
        return 0.5 * float(v.min())

    def upper(self, vals, expo, name, lam):
        v = np.abs(vals) * self.y ** (-expo)
        if not np.all(np.isfinite(v)) or v.max() > TWO_SIDED * max(lam, 1e-300):
            raise _Fail(f"{name} is not bounded by a multiple of y^{expo:g}")

    def smallest_l(self, p_from, l_max=4):
        acc = np.zeros_like(self.y)
        for l in range(p_from, l_max + 1):
            acc = acc + np.abs(self.d(l))
            if l < 2:
                continue
            try:
                lam = self.lower(acc, 0.0, f"sum |g^(p)|, p={p_from}..{l}")
                return l, lam
            except _Fail:
                continue
        raise _Fail(f"sum_{{p={p_from}}}^{l_max} |g^(p)| is not bounded below on the band")

    def single_block(self):
        return self.band.kind == "dyadic"

    def finite(self):
        return self.region == "bounded"


def _eq(a, b):
    return abs(a - b) <= EPS


def _require(cond, msg):
    if not cond:
        raise _Fail(msg)


# ---------------------------------------------------------------------------
# one-dimensional lemmas
# ---------------------------------------------------------------------------

def _sum_ok(F, gamma):
    """Summability of a dyadic family with weight 2^(gamma k) over J."""
    if F.finite():
        return True
    if F.region == "low":
        return gamma > EPS
    return gamma < -EPS


def _l_vdc_window(F, s, l_opt):
    _require(_eq(s, 0.0) or F.finite(), "needs s = 0 unless the band is bounded away from 0")
    if F.region == "high":
        a1 = F.exponent(1)
        _require(a1 > 0, "unbounded band needs |g'| -> infinity")
    l, lam = F.smallest_l(2)
    return [dict(sigma=1.0 / l, beta=(1 - s * l - l) / l, gamma=None, l=l, lam=lam)]


def _l_dyadic_pderiv(F, s, l_opt):
    orders = (2, 3, 4)
    if l_opt is not None:
        _require(float(l_opt) in (2.0, 3.0, 4.0), "derivative order l must be 2, 3 or 4")
        orders = (int(l_opt),)
    out = []
    for p in orders:
        try:
            ap = F.exponent(p)
            lam = F.lower(F.d(p), ap, f"g^({p})")
        except _Fail:
            continue
        gamma = s - ap / p
        if not F.single_block() and not _sum_ok(F, gamma):
            continue
        out.append(dict(sigma=1.0 / p, beta=(1 - s * p - p) / p, gamma=gamma, l=p, lam=lam,
                        alpha=ap))
    _require(out, "no derivative order p in 2..4 with |g^(p)| >= lambda y^alpha and a summable family")
    return out[:1]


def _l_dyadic_interp(F, s, l_opt):
    _require(l_opt is not None and l_opt >= 2, "needs an explicit l >= 2")
    a = F.exponent(2)
    lam = F.lower(F.d(2), a, "g''")
    l = float(l_opt)
    gamma = s + (l - 2 - a) / l
    _require(F.single_block() or _sum_ok(F, gamma), "dyadic family is not summable")
    return [dict(sigma=1.0 / l, beta=(1 - s * l - l) / l, gamma=gamma, l=l, lam=lam, alpha=a)]


def _l_vdc2_sum(F, s, l_opt):
    a = F.exponent(2)
    _require(not _eq(a, -2.0), "alpha = -2 excluded")
    _require((a / 2 > s > -1) or (a / 2 < s < -1), "needs alpha/2 > s > -1 or alpha/2 < s < -1")
    lam = F.lower(F.d(2), a, "g''")
    return [dict(sigma=(s + 1) / (2 + a), beta=-(1 + a) * (s + 1) / (2 + a), gamma=None,
                 lam=lam, alpha=a)]


def _l_vdc2_critical(F, s, l_opt):
    a = F.exponent(2)
    _require(not _eq(a, -2.0) and not _eq(a, -1.0), "alpha in {-2, -1} excluded")
    _require(_eq(s, a / 2), f"needs s = alpha/2 = {a / 2:g}")
    lam = F.lower(F.d(2), a, "g''")
    F.two_sided(F.d(1) - F.ell(), a + 1, "|g' - ell|")
    return [dict(sigma=0.5, beta=-(1 + a) / 2, gamma=None, lam=lam, alpha=a)]


def _l_multideriv(F, s, l_opt):
    _require(F.region == "bounded", "needs a bounded band away from 0")
    l, lam = F.smallest_l(2)
    return [dict(sigma=1.0 / l, beta=-(s + 1 - 1.0 / l), gamma=None, l=l, lam=lam)]


# ---------------------------------------------------------------------------
# two-dimensional lemmas
# ---------------------------------------------------------------------------

def _l_lowfreq_gprime(F, s, l_opt):
    _require(F.region != "high", "needs a bounded window")
    _require(_eq(s, 0.0), "stated for s = 0")
    F.lower(F.d(1), 0.0, "g'")
    l, lam = F.smallest_l(2)
    return [dict(sigma=0.5 + 1.0 / l, beta=(2 - 3 * l) / (2 * l), gamma=None, l=l, lam=lam)]


def _l_lowfreq_no_gprime(F, s, l_opt):
    _require(F.region != "high", "needs a bounded window")
    _require(_eq(s, 0.0), "stated for s = 0")
    l, lam = F.smallest_l(2)
    return [dict(sigma=1.0 / l, beta=(1 - 2 * l) / l, gamma=None, l=l, lam=lam)]


def _l_ww_lowfreq(F, s, l_opt):
    _require(F.region == "low", "needs a low-pass band reaching 0")
    _require(F.model.zero_regular, "needs g regular at 0")
    _require(_eq(s, 0.0), "stated for s = 0")
    a = F.exponent(2)
    _require(a >= 1 - EPS, "needs alpha >= 1")
    F.lower(F.d(1), 0.0, "g'")
    lam = F.lower(F.d(2), a, "g''")
    if _eq(a, 1.0):
        F.two_sided(F.d(1) - F.ell(), a + 1, "|g' - g'(0)|")
    return [dict(sigma=(5 + a) / (2 * (2 + a)), beta=-1.5 * (1 + a) / (2 + a), gamma=None,
                 lam=lam, alpha=a)]


def _l_paley_inv_t(F, s, l_opt):
    _require(F.region == "bounded", "needs dyadic blocks away from 0 and infinity")
    a = F.exponent(2)
    b = F.exponent(1)
    F.lower(F.d(1), b, "g'")
    lam = F.lower(F.d(2), a, "g''")
    gamma = max(s + (1 - a - b) / 2, s + 1 - b)
    return [dict(sigma=1.0, beta=-(s + 1), gamma=gamma, lam=lam, alpha=a)]


def _l_paley_interp(F, s, l_opt):
    _require(l_opt is not None and l_opt >= 1, "needs an explicit l >= 1")
    _require(F.region == "bounded", "needs dyadic blocks away from 0 and infinity")
    a = F.exponent(2)
    F.lower(F.d(1), a + 1, "g'")
    lam = F.lower(F.d(2), a, "g''")
    l = float(l_opt)
    return [dict(sigma=1.0 / l, beta=-(s + 2 - 1.0 / l), gamma=s + (2 * l - 2 - a) / l,
                 l=l, lam=lam, alpha=a)]


def _l_vdc2d_sum(F, s, l_opt):
    a = F.exponent(2)
    _require(not _eq(a, -2.0), "alpha = -2 excluded")
    _require((a > s > -2) or (a < s < -2), "needs alpha > s > -2 or alpha < s < -2")
    F.lower(F.d(1), a + 1, "g'")
    lam = F.lower(F.d(2), a, "g''")
    return [dict(sigma=(s + 2) / (2 + a), beta=-(a + 1) * (s + 2) / (2 + a), gamma=None,
                 lam=lam, alpha=a)]


def _l_vdc2d_critical(F, s, l_opt):
    a = F.exponent(2)
    _require(not _eq(a, -2.0) and not _eq(a, -1.0), "alpha in {-2, -1} excluded")
    _require(_eq(s, a), f"needs s = alpha = {a:g}")
    lam1 = F.two_sided(F.d(1), a + 1, "g'")
    lam = F.two_sided(F.d(2), a, "g''")
    F.upper(F.d(3), a - 1, "g'''", min(lam, lam1))
    return [dict(sigma=1.0, beta=-(a + 1), gamma=None, lam=lam, alpha=a)]


def _l_theta0_hf_sum(F, s, l_opt):
    _require(F.region == "high", "needs a high-frequency band")
    a = F.exponent(2)
    _require(a < -1 and not _eq(a, -3.0), "needs alpha < -1, alpha != -3")
    m = (a - 1) / 2
    _require((m < s < -2) or (m > s > -2), "needs (alpha-1)/2 < s < -2 or (alpha-1)/2 > s > -2")
    F.lower(F.d(1), 0.0, "g'")
    lam = F.lower(F.d(2), a, "g''")
    return [dict(sigma=2 * (s + 2) / (a + 3), beta=-(a + 1) * (s + 2) / (a + 3), gamma=None,
                 lam=lam, alpha=a)]


def _l_theta0_hf_critical(F, s, l_opt):
    _require(F.region == "high", "needs a high-frequency band")
    a = F.exponent(2)
    _require(a < -1 and not _eq(a, -2.0), "needs alpha < -1, alpha != -2")
    _require(_eq(s, (a - 1) / 2), f"needs s = (alpha-1)/2 = {(a - 1) / 2:g}")
    ell = F.ell()
    _require(abs(ell) > EPS, "needs ell != 0")
    F.lower(F.d(1), 0.0, "g'")
    lam = F.lower(F.d(2), a, "g''")
    F.two_sided(F.d(1) - ell, a + 1, "|g' - ell|")
    return [dict(sigma=1.0, beta=-(a + 1) / 2, gamma=None, lam=lam, alpha=a)]


def _low_block_facts(F):
    """Hypotheses on (0, y0] for a low dyadic block."""
    _require(F.single_block() or F.band.kind == "dyadic_sum", "needs dyadic blocks")
    hi = F.hi
    y = np.geomspace(hi * 10 ** -DECADES, hi, N_HYP)
    g1 = F.model.deriv(y, 1)
    v = np.abs(g1)
    trend = np.polyfit(np.log10(y[:22]), np.log10(v[:22]), 1)[0]
    _require(v.min() > 0 and trend <= TREND and not count_sign_changes(g1),
             "|g'| is not bounded below on (0, y0]")
    zeros = count_sign_changes(F.model.deriv(np.geomspace(hi * 10 ** -DECADES, hi, N_ZEROS), 2))
    return 0.5 * float(v.min()), zeros


def _l_wave_2deriv_low(F, s, l_opt):
    lam, _ = _low_block_facts(F)
    return [dict(sigma=0.5, beta=-(s + 1.5), gamma=s + 1.5, lam=lam)]


def _l_wave_2deriv_mid(F, s, l_opt):
    _require(F.region == "bounded", "needs a bounded band away from 0")
    lam = F.lower(np.abs(F.d(1)) + np.abs(F.d(2)), 0.0, "|g'| + |g''|")
    return [dict(sigma=0.5, beta=-(s + 1.5), gamma=None, lam=lam)]


def _l_wave_2deriv_high(F, s, l_opt):
    _require(F.region == "high", "needs a high-frequency band")
    a = F.exponent(2)
    _require(not _eq(a, -2.0), "alpha = -2 excluded")
    _require(_eq(s, a / 2 - 1), f"needs s = alpha/2 - 1 = {a / 2 - 1:g}")
    F.lower(F.d(1), a + 1, "g'")
    lam = F.lower(F.d(2), a, "g''")
    return [dict(sigma=0.5, beta=-(a + 1) / 2, gamma=None, lam=lam, alpha=a)]


def _l_wave_2deriv_high_theta0(F, s, l_opt):
    _require(F.region == "high", "needs a high-frequency band")
    a = F.exponent(2)
    _require(a < -1 and not _eq(a, -3.0), "needs alpha < -1, alpha != -3")
    _require(_eq(s, (a - 5) / 4), f"needs s = (alpha-5)/4 = {(a - 5) / 4:g}")
    F.lower(F.d(1), 0.0, "g'")
    lam = F.lower(F.d(2), a, "g''")
    return [dict(sigma=0.5, beta=-(a + 1) / 2, gamma=None, lam=lam, alpha=a)]


def _l_wave_multideriv_low(F, s, l_opt):
    lam, _ = _low_block_facts(F)
    l = float(l_opt) if l_opt is not None else 2.0
    _require(l >= 2, "needs l >= 2")
    return [dict(sigma=1.0 / l, beta=-(s + 2 - 1.0 / l), gamma=s + 2 - 1.0 / l, l=l, lam=lam)]


def _l_wave_multideriv_mid(F, s, l_opt):
    _require(F.region == "bounded", "needs a bounded band away from 0")
    l, lam = F.smallest_l(1)
    return [dict(sigma=1.0 / l, beta=-(s + 2 - 1.0 / l), gamma=None, l=l, lam=lam)]


_IMPL = {
    "vdc_window": _l_vdc_window, "dyadic_pderiv": _l_dyadic_pderiv,
    "dyadic_interp": _l_dyadic_interp, "vdc2_sum": _l_vdc2_sum,
    "vdc2_critical": _l_vdc2_critical, "multideriv": _l_multideriv,
    "lowfreq_gprime": _l_lowfreq_gprime, "lowfreq_no_gprime": _l_lowfreq_no_gprime,
    "ww_lowfreq": _l_ww_lowfreq, "paley_inv_t": _l_paley_inv_t,
    "paley_interp": _l_paley_interp, "vdc2d_sum": _l_vdc2d_sum,
    "vdc2d_critical": _l_vdc2d_critical, "theta0_hf_sum": _l_theta0_hf_sum,
    "theta0_hf_critical": _l_theta0_hf_critical, "wave_2deriv_low": _l_wave_2deriv_low,
    "wave_2deriv_mid": _l_wave_2deriv_mid, "wave_2deriv_high": _l_wave_2deriv_high,
    "wave_2deriv_high_theta0": _l_wave_2deriv_high_theta0,
    "wave_multideriv_low": _l_wave_multideriv_low,
    "wave_multideriv_mid": _l_wave_multideriv_mid,
}


def _excluded(F, s, n):
    try:
        a = F.exponent(2)
    except _Fail:
        return None
    if _eq(a, -2.0):
        return "alpha = -2 is excluded"
    if n == 1 and _eq(a, -1.0) and _eq(s, -0.5):
        return "(alpha, s) = (-1, -1/2) is excluded in dimension 1"
    if n == 2 and _eq(a, -1.0) and _eq(s, -1.0):
        return "(alpha, s) = (-1, -1) is excluded in dimension 2"
    return None


def all_predictions(model, band, s=0.0, n=1, l=None, alpha=None):
    """Every lemma whose hypotheses verify, plus the list of failures."""
    if n not in (1, 2):
        raise ParameterError("dimension n must be 1 or 2")
    s = float(s)
    F = BandFacts(model, band, alpha=alpha)
    excl = _excluded(F, s, n)
    if excl is not None:
        return [], [excl]
    preds, failed = [], []
    for tag in (LEMMAS_1D if n == 1 else LEMMAS_2D):
        try:
            for res in _IMPL[tag](F, s, l):
                preds.append(DecayPrediction(
                    sigma=float(res["sigma"]), beta=float(res["beta"]),
                    gamma=None if res.get("gamma") is None else float(res["gamma"]),
                    s=s, lemma=tag, band=band.tag, n=n,
                    alpha=res.get("alpha"), l=res.get("l"), lam=res.get("lam"),
                    g2_sign_changes=F.g2_sign_changes, notes=tuple(F.notes),
                ))
        except _Fail as exc:
            failed.append(f"{tag}: {exc}")
    return preds, failed


def predict(model, band, s=0.0, n=1, lemma="auto", l=None, alpha=None):
    """Decay exponents for ``sup_x |I|`` from the applicable lemma.

    Parameters
    ----------
    lemma : str
        ``"auto"`` picks the largest ``sigma`` among verified lemmas;
        otherwise one of :data:`LEMMA_DESCRIPTIONS`.
    l : float, optional
        Interpolation exponent for the lemmas that take one.
    alpha : float, optional
        Override for the exponent of ``g''`` on the band.

    Raises
    ------
    PredictionError
        No lemma applies; ``failed`` lists the predicates that did not hold.
    """
    if lemma != "auto" and lemma not in _IMPL:
        raise ParameterError(f"unknown lemma {lemma!r}")
    if lemma != "auto":
        dims = LEMMAS_1D if n == 1 else LEMMAS_2D
        if lemma not in dims:
            raise ParameterError(f"lemma {lemma!r} is not available in dimension {n}")
    preds, failed = all_predictions(model, band, s, n, l=l, alpha=alpha)
    if lemma != "auto":
        preds = [p for p in preds if p.lemma == lemma]
        failed = [f for f in failed if f.startswith(lemma + ":") or ":" not in f]
    if not preds:
        raise PredictionError("no prediction: no lemma hypotheses verify", failed)
    best = preds[0]
    for p in preds[1:]:
        if p.sigma > best.sigma + EPS:
            best = p
    return best


# ---------------------------------------------------------------------------
# experiments
# ---------------------------------------------------------------------------

def _check_grid(values, n_min, decades, name):
    v = np.asarray(values, dtype=float)
    if v.size < n_min or np.any(v <= 0):
        raise ParameterError(f"{name} needs at least {n_min} positive points")
    if math.log10(v.max() / v.min()) < decades - 1e-9:
        raise ParameterError(f"{name} must span at least {decades:g} decades")
    return v


def run_decay_experiment(model, band, s=0.0, n=1, t_grid=None, search=SearchSpec(),
                         threads=None):
    """``sup_x |I(t, x)|`` over a log-spaced time grid.

    Returns
    -------
    list of DecaySample
        One entry per time, in grid order.
    """
    if t_grid is None:
        t_grid = np.geomspace(10.0, 1e3, 16)
    ts = _check_grid(t_grid, 8, 2.0, "t_grid")

    def one(t):
        try:
            r = sup_over_x(model, float(t), band, s=s, n=n, spec=search)
        except QuadratureError as exc:
            raise QuadratureError(f"decay experiment failed at t={t!r}: {exc}",
                                  value=exc.value, abs_error=exc.abs_error) from exc
        return DecaySample(float(t), r.value, r.argmax, r.abs_error, r.boundary)

    return parallel_map(one, list(ts), threads)


def fit_slope(x, y=None):
    """OLS slope of ``log y`` against ``log x``.

    Accepts either two arrays or a list of :class:`DecaySample`.
    """
    if y is None:
        samples = list(x)
        x = [smp.t for smp in samples]
        y = [smp.sup for smp in samples]
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size != y.size:
        raise FitError("x and y must have the same length")
    if x.size < 8:
        raise FitError("at least 8 samples are needed for a slope fit")
    if np.any(x <= 0) or np.any(y <= 0) or not np.all(np.isfinite(y)):
        raise FitError("slope fits need positive finite samples")
    X, Y = np.log(x), np.log(y)
    A = np.vstack([X, np.ones_like(X)]).T
    coef, _, _, _ = np.linalg.lstsq(A, Y, rcond=None)
    res = A @ coef - Y
    rss = float(res @ res)
    sxx = float(np.sum((X - X.mean()) ** 2))
    stderr = math.sqrt(rss / (x.size - 2) / sxx) if sxx > 0 else math.inf
    return SlopeFit(float(coef[0]), stderr, (float(x.min()), float(x.max())),
                    math.sqrt(rss), int(x.size), float(coef[1]))


def delta_scaling_experiment(model, band, s=0.0, n=1, t=10.0, deltas=None, search=SearchSpec(),
                             threads=None):
    """Fit the exponent of ``delta`` in ``sup_x |I|`` at fixed ``t``.

    Returns
    -------
    (list of (delta, sup), SlopeFit)
    """
    if deltas is None:
        deltas = np.geomspace(1e-2, 1.0, 8)
    ds = np.asarray(deltas, dtype=float)
    if ds.size < 5 or np.any(ds <= 0):
        raise ParameterError("delta grid needs at least 5 positive points")
    if math.log10(ds.max() / ds.min()) < 1.5 - 1e-9:
        raise ParameterError("delta grid must span at least 1.5 decades")

    def one(d):
        r = sup_over_x(model.with_delta(float(d)), float(t), band, s=s, n=n, spec=search)
        return float(d), r.value

    rows = parallel_map(one, list(ds), threads)
    fit = fit_slope([r[0] for r in rows], [r[1] for r in rows]) if len(rows) >= 8 else \
        _fit_small([r[0] for r in rows], [r[1] for r in rows])
    return rows, fit


def _fit_small(x, y):
    X, Y = np.log(np.asarray(x)), np.log(np.asarray(y))
    if np.any(~np.isfinite(Y)):
        raise FitError("slope fits need positive samples")
    A = np.vstack([X, np.ones_like(X)]).T
    coef, _, _, _ = np.linalg.lstsq(A, Y, rcond=None)
    res = A @ coef - Y
    rss = float(res @ res)
    sxx = float(np.sum((X - X.mean()) ** 2))
    stderr = math.sqrt(rss / max(len(X) - 2, 1) / sxx)
    return SlopeFit(float(coef[0]), stderr, (float(min(x)), float(max(x))), math.sqrt(rss),
                    len(X), float(coef[1]))


def ratio_spread(samples, sigma, beta=0.0, delta=1.0):
    """max/min of ``sup |I| t^sigma delta^-beta`` over a decay experiment."""
    r = np.array([smp.sup * smp.t ** sigma * delta ** (-beta) for smp in samples])
    return float(r.max() / r.min())


def verdict(prediction, fit, tol=0.05, saturate=True):
    """Compare a fitted time slope with ``-sigma``.

    With ``saturate`` the slope must lie within ``tol`` of ``-sigma``;
    otherwise it only has to decay at least as fast, up to ``tol``.
    """
    target = -prediction.sigma
    if saturate:
        ok = abs(fit.slope - target) <= tol
    else:
        ok = fit.slope <= target + tol
    return {"predicted": {"sigma": prediction.sigma, "beta": prediction.beta,
                          "gamma": prediction.gamma, "lemma": prediction.lemma},
            "fitted": {"slope": fit.slope, "stderr": fit.stderr},
            "tolerance": tol, "verdict": "pass" if ok else "fail"}
