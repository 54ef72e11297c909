"""Sharp admissibility arithmetic and empirical Strichartz quotients.

A pair ``(q, r)`` is sharp ``sigma``-admissible when
``1/q + sigma/r = sigma/2`` with ``q, r`` in ``[2, inf]`` and
``(q, r, sigma) != (2, inf, 1)``.  The check is done in exact rational
arithmetic.

For a decay prediction ``sup_x |I| <~ t^-sigma delta^beta (2^(gamma k))``
the quotient

    ||exp(i (t/delta) g(delta|D|)) B u0||_{L^q_t L^r_x}
    / ( (delta^beta 2^(gamma k))^theta || |D|^(-s theta) B u0 ||_2 ),

with ``theta = 1/2 - 1/r`` and ``B = B(delta |D|)`` the band window, should
stay bounded across data, dyadic indices and ``delta``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from .errors import ParameterError
from .grid import GridFunction, band_limited_random, gaussian, propagate_grid, spectral_bump
from .parallel import parallel_map

INF = math.inf
MIN_TIME_NODES = 32


def _exponent(v, name):
    """Exact representation: ``Fraction`` or ``math.inf``."""
    if isinstance(v, str):
        v = v.strip().lower()
        if v in ("inf", "infinity", "oo"):
            return INF
        try:
            return Fraction(v)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParameterError(f"{name}: cannot parse {v!r}") from exc
    if isinstance(v, float):
        if math.isinf(v) and v > 0:
            return INF
        if not math.isfinite(v):
            raise ParameterError(f"{name} must be finite or +inf")
        return Fraction(v)
    if isinstance(v, (int, Fraction)):
        return Fraction(v)
    raise ParameterError(f"{name}: unsupported type {type(v).__name__}")


def _inv(v):
    return Fraction(0) if v == INF else 1 / v


def _check_range(q, r, sigma):
    for name, v in (("q", q), ("r", r)):
        if v != INF and not v >= 2:
            raise ParameterError(f"{name} must lie in [2, inf], got {v}")
    if sigma == INF or not 0 < sigma <= 1:
        raise ParameterError(f"sigma must lie in (0, 1], got {sigma}")


def is_sharp_admissible(q, r, sigma):
    """Exact test of ``1/q + sigma/r = sigma/2`` minus the forbidden endpoint."""
    q, r, sigma = _exponent(q, "q"), _exponent(r, "r"), _exponent(sigma, "sigma")
    _check_range(q, r, sigma)
    if q == 2 and r == INF and sigma == 1:
        return False
    return _inv(q) + sigma * _inv(r) == sigma / 2


def is_almost_admissible(q, r, sigma):
    """``1/q + sigma/r < sigma/2`` (pairs reachable from a smaller sigma)."""
    q, r, sigma = _exponent(q, "q"), _exponent(r, "r"), _exponent(sigma, "sigma")
    _check_range(q, r, sigma)
    return _inv(q) + sigma * _inv(r) < sigma / 2


@dataclass(frozen=True)
class AdmissiblePair:
    """Sharp admissible exponents (exact)."""

    q: object
    r: object
    sigma: Fraction

    def __post_init__(self):
        q, r, s = _exponent(self.q, "q"), _exponent(self.r, "r"), _exponent(self.sigma, "sigma")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "sigma", s)
        if not is_sharp_admissible(q, r, s):
            raise ParameterError(
                f"(q, r) = ({q}, {r}) is not sharp admissible for sigma = {s}: "
                "1/q + sigma/r must equal sigma/2")

    @property
    def theta(self):
        """``1/2 - 1/r``."""
        return Fraction(1, 2) - _inv(self.r)

    @property
    def q_prime(self):
        return Fraction(1) if self.q == INF else self.q / (self.q - 1)

    def as_floats(self):
        return (float(self.q), float(self.r), float(self.sigma))

    def to_dict(self):
        f = lambda v: "inf" if v == INF else str(v)
        return {"q": f(self.q), "r": f(self.r), "sigma": str(self.sigma)}


def pairs_for_sigma(sigma, count=5):
    """``count`` sharp pairs with ``1/r`` sweeping ``1/2 -> 0`` linearly."""
    s = _exponent(sigma, "sigma")
    _check_range(Fraction(2), Fraction(2), s)
    if count < 1:
        raise ParameterError("count must be positive")
    out = []
    for i in range(count):
        inv_r = Fraction(1, 2) * (1 - Fraction(i, max(count - 1, 1))) if count > 1 else Fraction(1, 2)
        inv_q = s * (Fraction(1, 2) - inv_r)
        q = INF if inv_q == 0 else 1 / inv_q
        r = INF if inv_r == 0 else 1 / inv_r
        if q == 2 and r == INF and s == 1:
            continue
        out.append(AdmissiblePair(q, r, s))
    return out


def sigma_fraction(sigma, max_den=1000):
    """Exact rational form of a predicted decay exponent."""
    return Fraction(sigma).limit_denominator(max_den)


def time_nodes(t_window, n_t=MIN_TIME_NODES):
    if np.ndim(t_window) == 0:
        t0, t1 = 0.0, float(t_window)
    else:
        t0, t1 = (float(v) for v in t_window)
    if not t1 > t0:
        raise ParameterError("time window must have positive length")
    if n_t < MIN_TIME_NODES:
        raise ParameterError(f"time window needs at least {MIN_TIME_NODES} nodes")
    return np.linspace(t0, t1, int(n_t))


def trapezoid(values, nodes):
    v = np.asarray(values, dtype=float)
    x = np.asarray(nodes, dtype=float)
    return float(np.sum(0.5 * (v[1:] + v[:-1]) * np.diff(x)))


def spacetime_norm(model, u0, q, r, t_window, n_t=MIN_TIME_NODES, sign=1, form="exp_ig",
                   zero_mean=False, threads=None):
    """``||exp(i sign (t/delta) g) u0||_{L^q_t L^r_x}`` on a finite window."""
    q, r = _exponent(q, "q"), _exponent(r, "r")
    ts = time_nodes(t_window, n_t)
    rf = float(r)

    def one(t):
        return propagate_grid(model, u0, t, sign=sign, form=form, zero_mean=zero_mean).lr_norm(rf)

    norms = np.array(parallel_map(one, ts, threads))
    if q == INF:
        return float(norms.max())
    qf = float(q)
    m = float(norms.max())
    if m == 0.0:
        return 0.0
    return m * trapezoid((norms / m) ** qf, ts) ** (1.0 / qf)


def band_multiplier(model, band):
    """``B(delta |xi|)`` as a callable on ``|xi|``."""
    return lambda absxi: np.asarray(band(model.delta * absxi), dtype=float)


def weighted_l2(model, u0, band, s, theta):
    """``|| |D|^(-s theta) B(delta|D|) u0 ||_2``."""
    expo = -float(s) * float(theta)
    B = band_multiplier(model, band)

    def mult(absxi):
        w = B(absxi)
        pos = absxi > 0
        out = np.zeros_like(w)
        out[pos] = w[pos] * absxi[pos] ** expo
        if np.any(~pos):
            if expo < 0 and np.any(w[~pos] != 0):
                raise ParameterError("weight |D|^(-s theta) is singular at xi=0 on the band")
            out[~pos] = w[~pos] * (1.0 if expo == 0 else 0.0)
        return out

    return u0.apply_multiplier(mult).l2_norm()


@dataclass(frozen=True)
class QuotientCase:
    """One data point of a quotient family."""

    label: str
    model: object
    band: object
    u0: GridFunction
    k: Optional[int] = None


@dataclass(frozen=True)
class QuotientResult:
    pair: AdmissiblePair
    sigma: float
    beta: float
    gamma: Optional[float]
    s: float
    weight_exponent: float
    quotients: Tuple[Tuple[str, float], ...]
    t_window: Tuple[float, float]
    max_quotient: float = field(init=False)
    spread: float = field(init=False)

    def __post_init__(self):
        vals = [v for _, v in self.quotients]
        object.__setattr__(self, "max_quotient", max(vals))
        object.__setattr__(self, "spread", max(vals) / min(vals) if min(vals) > 0 else INF)

    def to_dict(self):
        return {
            "pair": self.pair.to_dict(), "sigma": self.sigma, "beta": self.beta,
            "gamma": self.gamma, "s": self.s, "weight_exponent": self.weight_exponent,
            "t_window": list(self.t_window),
            "quotients": [{"label": k, "quotient": v} for k, v in self.quotients],
            "max_quotient": self.max_quotient, "spread": self.spread,
        }


def strichartz_quotient(cases, pair, prediction, t_window, n_t=MIN_TIME_NODES, sign=1,
                        allow_almost=False, threads=None):
    """Quotients of the space-time norm by the predicted right-hand side.

    Parameters
    ----------
    cases : list of QuotientCase
    pair : AdmissiblePair or (q, r)
    prediction : DecayPrediction
        Supplies ``sigma``, ``beta``, ``gamma`` and the kernel weight ``s``.
    allow_almost : bool
        Accept ``1/q + sigma/r < sigma/2`` as well.

    Raises
    ------
    ParameterError
        The pair is not admissible for the predicted ``sigma``.
    """
    sig = sigma_fraction(prediction.sigma)
    if not isinstance(pair, AdmissiblePair):
        q, r = pair
        if is_sharp_admissible(q, r, sig):
            pair = AdmissiblePair(q, r, sig)
        elif allow_almost and is_almost_admissible(q, r, sig):
            pair = _AlmostPair(_exponent(q, "q"), _exponent(r, "r"), sig)
        else:
            raise ParameterError(
                f"(q, r) = ({q}, {r}) is not admissible for sigma = {sig}: "
                "1/q + sigma/r must equal sigma/2")
    elif pair.sigma != sig:
        raise ParameterError(f"pair built for sigma = {pair.sigma}, prediction has {sig}")
    theta = float(pair.theta)
    s = float(prediction.s)
    ts = time_nodes(t_window, n_t)
    out = []
    for case in cases:
        m = case.model
        Bf = band_multiplier(m, case.band)
        v0 = case.u0.apply_multiplier(Bf)
        lhs = spacetime_norm(m, v0, pair.q, pair.r, (ts[0], ts[-1]), len(ts), sign=sign,
                             zero_mean=not m.zero_regular, threads=threads)
        scale = m.delta ** prediction.beta
        if case.k is not None and prediction.gamma is not None:
            scale *= 2.0 ** (prediction.gamma * case.k)
        rhs = scale ** theta * weighted_l2(m, case.u0, case.band, s, theta)
        if rhs <= 0:
            raise ParameterError(f"case {case.label}: data vanishes on the band")
        out.append((case.label, lhs / rhs))
    return QuotientResult(pair, float(prediction.sigma), float(prediction.beta),
                          prediction.gamma, s, -s * theta, tuple(out),
                          (float(ts[0]), float(ts[-1])))


@dataclass(frozen=True)
class _AlmostPair:
    q: object
    r: object
    sigma: Fraction

    theta = AdmissiblePair.theta
    to_dict = AdmissiblePair.to_dict


def default_family(n, N, L, xi_lo, xi_hi, widths=5, seeds=(0, 1, 2)):
    """Gaussians at ``widths`` scales, seeded random fields and a spectral bump.

    Frequencies ``xi_lo <= |xi| <= xi_hi`` describe the band in physical
    variables; every member carries energy there.
    """
    fam = []
    for c in np.geomspace(0.5, 4.0, widths):
        w = (c / xi_hi) ** 2
        fam.append((f"gaussian:{c:.3g}", gaussian(n, N, L, width=w)))
    for sd in seeds:
        fam.append((f"random:{sd}", band_limited_random(n, N, L, 1.25 * xi_hi, seed=sd,
                                                       envelope=L / 16)))
    centre = 0.5 * (xi_lo + xi_hi) if xi_lo > 0 else 0.5 * xi_hi
    width = 0.5 * (xi_hi - xi_lo) if xi_lo > 0 else 0.5 * xi_hi
    fam.append(("bump", spectral_bump(n, N, L, centre, width)))
    return fam


def auto_grid(model, band, T, delta_min=None, oversample=4.5):
    """Grid ``(N, L)`` resolving the band and holding the data until time ``T``."""
    lo, hi = band.support()
    d = model.delta if delta_min is None else delta_min
    xi_hi = hi / d
    ys = np.linspace(max(lo, hi * 1e-6), hi, 2048)
    speed = float(np.max(np.abs(model.deriv(ys, 1))))
    L = 2.0 * speed * T + 64.0 / xi_hi
    dx = math.pi / (oversample * xi_hi)
    N = 1 << max(6, int(math.ceil(math.log2(2 * L / dx))))
    return N, L


def strichartz_experiment(model, band, s=0.0, n=1, pair=None, lemma="auto", l=None,
                          deltas=None, ks=None, T=20.0, n_t=64, N=None, L=None,
                          widths=5, seeds=(0, 1, 2), threads=None):
    """Quotient family over data, ``delta`` values and dyadic indices.

    ``pair`` defaults to the sharp pair with ``r = 4``.  With ``ks`` the
    band is replaced by the single blocks ``dyadic:k``.
    """
    from .decay import predict
    from .littlewood_paley import FrequencyBand

    deltas = [model.delta] if not deltas else [float(d) for d in deltas]
    bands = [(None, band)] if ks is None else [(int(k), FrequencyBand.dyadic(int(k))) for k in ks]
    preds = {}
    for k, b in bands:
        preds[k] = predict(model.with_delta(deltas[0]), b, s, n, lemma=lemma, l=l)
    sigmas = {sigma_fraction(p.sigma) for p in preds.values()}
    if len(sigmas) != 1:
        raise ParameterError("the dyadic family predicts different sigma values")
    sig = sigmas.pop()
    if pair is None:
        inv_q = sig * Fraction(1, 4)
        pair = AdmissiblePair(1 / inv_q, 4, sig)
    ref = next(iter(preds.values()))
    cases = []
    for d in deltas:
        m = model.with_delta(d)
        for k, b in bands:
            if N is None or L is None:
                Nk, Lk = auto_grid(m, b, T)
            else:
                Nk, Lk = int(N), float(L)
            lo, hi = b.support()
            for label, u0 in default_family(n, Nk, Lk, lo / d, hi / d, widths, seeds):
                tag = f"delta={d:g}" + ("" if k is None else f",k={k}") + f",{label}"
                cases.append((QuotientCase(tag, m, b, u0, k), preds[k]))
    results = []
    for case, pred in cases:
        results.append(strichartz_quotient([case], pair, pred, T, n_t, threads=threads))
    merged = tuple(q for r in results for q in r.quotients)
    return QuotientResult(results[0].pair, ref.sigma, ref.beta, ref.gamma, float(s),
                          results[0].weight_exponent, merged, results[0].t_window)
