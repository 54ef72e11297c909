"""Oscillatory frequency integrals of a dispersive propagator.

With the scaled frequency ``y = delta * xi`` the one-dimensional band
integral is ::

    I(t, x) = delta^-(s+1) * int_0^inf exp(i (x y + t g(y)) / delta) W(y) y^s dy

and the two-dimensional radial one, after the angular integration, is ::

    I(t, r) = delta^-(s+2) * int_0^inf exp(i t g(y) / delta) J0(r y / delta) W(y) y^(1+s) dy

where ``W`` is the band window and ``J0`` is the ``2 pi``-normalised
Bessel function of :mod:`dispersive.bessel`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .bessel import bessel_j0
from .errors import ParameterError, QuadratureError
from .quadrature import adaptive_gk21, composite_gauss, phase_breakpoints

REL_TOL = 1e-10


@dataclass(frozen=True)
class OscIntegralSample:
    """One evaluated band integral with its quadrature error estimate."""

    t: float
    x: float
    band: str
    s: float
    value: complex
    abs_error: float
    n: int
    n_panels: int = 0

    def to_row(self):
        return (self.t, self.x, self.band, self.s, self.value.real, self.value.imag, self.abs_error)


ROW_HEADER = ("t", "x", "k", "s", "re", "im", "abs_error")


# ---------------------------------------------------------------------------
# integrand pieces
# ---------------------------------------------------------------------------

def integration_limits(model, band):
    """Limits ``(lo, hi)`` of the scaled-frequency integral for a band."""
    lo, hi = band.support()
    if band.reaches_zero:
        if not model.zero_regular:
            raise ParameterError(
                f"band {band.tag} reaches y=0 where the {model.kind} phase is singular"
            )
        lo = 0.0
    return float(lo), float(hi)


def _amplitude(band, s, n):
    power = s + (n - 1)

    def amp(y):
        return band(y) * y ** power

    return amp


def _max_abs_gprime(model, lo, hi, n=2048):
    y = np.linspace(lo, hi, n)
    if lo == 0.0:
        y = np.union1d(y[1:], np.geomspace(hi * 1e-9, hi, 256))
    return float(np.max(np.abs(model.deriv(y, 1))))


def _prefactor(model, s, n):
    return model.delta ** (-(s + n))


def _check_inputs(t, n):
    if n not in (1, 2):
        raise ParameterError("dimension n must be 1 or 2")
    if not math.isfinite(t):
        raise ParameterError("t must be finite")


def _integrand(model, t, x, band, s, n):
    delta = model.delta
    amp = _amplitude(band, s, n)
    tt = t / delta
    if n == 1:
        xx = x / delta

        def f(y):
            return amp(y) * np.exp(1j * (xx * y + tt * model.g(y)))
    else:
        rr = abs(x) / delta

        def f(y):
            return amp(y) * np.exp(1j * tt * model.g(y)) * bessel_j0(rr * y)

    return f


def _rate(model, t, x, n):
    delta = model.delta
    if n == 1:
        return lambda y: np.abs(x + t * model.deriv(y, 1)) / delta
    return lambda y: (abs(x) + np.abs(t * model.deriv(y, 1))) / delta


def band_integral(model, t, x, band, s=0.0, n=1, rel_tol=REL_TOL, max_panels=4_000_000):
    """Band integral in dimension ``n`` at time ``t`` and point/radius ``x``.

    Returns
    -------
    OscIntegralSample

    Raises
    ------
    QuadratureError
        If adaptive refinement does not converge (partial value attached).
    ParameterError
        Invalid dimension or a band reaching a singularity of the phase.
    """
    _check_inputs(t, n)
    s = float(s)
    lo, hi = integration_limits(model, band)
    if lo == 0.0 and s + n <= 0:
        raise ParameterError("y^(s+n-1) is not integrable at 0; use s > -n for low-frequency bands")
    pref = _prefactor(model, s, n)
    f = _integrand(model, t, x, band, s, n)
    extra = [p for tr in band.transitions() for p in tr]
    bp = phase_breakpoints(_rate(model, t, x, n), lo, hi, extra=extra, to_zero=(lo == 0.0))
    abs_tol = rel_tol / pref
    try:
        value, err, npan = adaptive_gk21(f, bp, abs_tol=abs_tol, rel_tol=rel_tol,
                                         max_panels=max_panels)
    except QuadratureError as exc:
        raise QuadratureError(
            f"{exc} at t={t!r}, x={x!r}",
            value=None if exc.value is None else pref * exc.value,
            abs_error=None if exc.abs_error is None else pref * exc.abs_error,
        ) from exc
    return OscIntegralSample(float(t), float(x), band.tag, s, complex(pref * value),
                             float(pref * err), n, int(npan))


def integral_1d(model, t, x, band, s=0.0, **kw):
    """One-dimensional band integral ``I^s`` at ``(t, x)``."""
    return band_integral(model, t, x, band, s=s, n=1, **kw)


def integral_2d_radial(model, t, radius, band, s=0.0, **kw):
    """Two-dimensional radial band integral at ``(t, |x|)`` via ``J0``."""
    if radius < 0:
        raise ParameterError("radius must be non-negative")
    return band_integral(model, t, radius, band, s=s, n=2, **kw)


# ---------------------------------------------------------------------------
# supremum over x
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SearchSpec:
    """Parameters of the sup-over-x search.

    ``x_max`` overrides the automatic range ``range_factor * max|g'| * t``.
    """

    x_max: Optional[float] = None
    n_coarse: int = 256
    n_candidates: int = 3
    zoom_points: int = 17
    golden_iters: int = 20
    range_factor: float = 2.0
    rad_per_panel: float = 4.0
    nodes_per_panel: int = 16


@dataclass(frozen=True)
class SupResult:
    """Largest ``|I|`` found and where it was found."""

    t: float
    value: float
    argmax: float
    abs_error: float
    boundary: bool
    n: int
    x_max: float
    sample: Optional[OscIntegralSample] = field(default=None, compare=False)


class _DirectEvaluator:
    """Fixed composite Gauss rule reused for many ``x`` at one ``t``."""

    def __init__(self, model, t, band, s, n, x_max, spec):
        self.n = n
        self.delta = model.delta
        lo, hi = integration_limits(model, band)
        rate = _rate(model, t, x_max, n) if n == 2 else (
            lambda y: (x_max + np.abs(t * model.deriv(y, 1))) / model.delta)
        extra = [p for tr in band.transitions() for p in tr]
        bp = phase_breakpoints(rate, lo, hi, rad_per_panel=spec.rad_per_panel, extra=extra,
                               to_zero=(lo == 0.0))
        y, w = composite_gauss(bp, spec.nodes_per_panel)
        amp = _amplitude(band, s, n)(y)
        self.y = y
        self.c = w * amp * np.exp(1j * (t / model.delta) * model.g(y))
        self.pref = _prefactor(model, s, n)

    def __call__(self, xs, chunk_elems=4_000_000):
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        out = np.empty(xs.size, dtype=complex)
        rows = max(1, chunk_elems // max(self.y.size, 1))
        for i in range(0, xs.size, rows):
            xc = xs[i:i + rows]
            arg = np.outer(xc, self.y) / self.delta
            if self.n == 1:
                kern = np.exp(1j * arg)
            else:
                kern = bessel_j0(np.abs(arg))
            out[i:i + rows] = kern @ self.c
        return self.pref * out


def _coarse_fft_1d(model, t, band, s, x_max, n_min, max_n=1 << 22):
    """``I(t, x)`` on a dense uniform x-grid from a single FFT (trapezoid in y)."""
    lo, hi = integration_limits(model, band)
    delta = model.delta
    gmax = _max_abs_gprime(model, lo, hi)
    omega = (x_max + abs(t) * gmax) / delta
    h = min(2 * math.pi / (1.5 * omega + 1e-300), (hi - lo) / 4096)
    M = int(math.ceil((hi - lo) / h))
    h = (hi - lo) / M
    if h * x_max / delta > math.pi:
        return None
    N = 1 << max(12, int(math.ceil(math.log2(4 * (M + 1)))))
    N = max(N, 1 << int(math.ceil(math.log2(max(n_min * math.pi * delta / (h * x_max), 1)))))
    if N > max_n:
        return None
    y = lo + h * np.arange(M + 1)
    yy = np.where(y > 0, y, 1.0)
    amp = band(y) * np.where(y > 0, yy ** s, 1.0 if s == 0 else 0.0)
    gv = np.where(y > 0, model.g(yy), model.g0)
    F = amp * np.exp(1j * (t / delta) * gv)
    F[0] *= 0.5
    F[-1] *= 0.5
    buf = np.zeros(N, dtype=complex)
    buf[:M + 1] = F
    G = np.fft.ifft(buf) * N
    m = np.fft.fftfreq(N, 1.0 / N)
    dx = 2 * math.pi * delta / (N * h)
    x = m * dx
    vals = _prefactor(model, s, 1) * h * np.exp(1j * x * lo / delta) * G
    order = np.argsort(x)
    x, vals = x[order], vals[order]
    keep = np.abs(x) <= x_max
    return x[keep], vals[keep]


def _local_maxima(xs, mags, k):
    """Indices of up to ``k`` largest local maxima (including ends)."""
    if xs.size <= 2:
        return list(np.argsort(mags)[::-1][:k])
    left = np.concatenate([[-np.inf], mags[:-1]])
    right = np.concatenate([mags[1:], [-np.inf]])
    peaks = np.nonzero((mags >= left) & (mags >= right))[0]
    peaks = peaks[np.argsort(mags[peaks])[::-1]]
    return list(peaks[:k])


def _golden_max(fun, a, b, iters):
    """Maximise a unimodal-in-bracket function by golden-section search."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fun(c), fun(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fun(d)
    return (c, fc) if fc >= fd else (d, fd)


def sup_over_x(model, t, band, s=0.0, n=1, spec: SearchSpec = SearchSpec(), rel_tol=REL_TOL):
    """Approximate ``sup_x |I(t, x)|`` and its location.

    A coarse scan over ``|x| <= x_max`` (radius in ``[0, x_max]`` when
    ``n = 2``) is followed by a local zoom and golden-section refinement
    around the best candidates.  The returned value is recomputed with the
    adaptive rule at the final point.  ``boundary`` is set when the maximiser
    sits within one coarse step of the search edge.
    """
    _check_inputs(t, n)
    lo, hi = integration_limits(model, band)
    x_max = spec.x_max
    if x_max is None:
        x_max = spec.range_factor * _max_abs_gprime(model, lo, hi) * abs(t)
    x_max = float(x_max)
    if x_max <= 0.0:
        smp = band_integral(model, t, 0.0, band, s=s, n=n, rel_tol=rel_tol)
        return SupResult(float(t), abs(smp.value), 0.0, smp.abs_error, False, n, 0.0, smp)

    direct = _DirectEvaluator(model, t, band, s, n, x_max, spec)
    xs = vals = None
    if n == 1:
        coarse = _coarse_fft_1d(model, t, band, s, x_max, spec.n_coarse)
        if coarse is not None:
            xs, vals = coarse
    if xs is None or xs.size < spec.n_coarse:
        lo_x = -x_max if n == 1 else 0.0
        xs = np.linspace(lo_x, x_max, max(spec.n_coarse, 2))
        vals = direct(xs)
    mags = np.abs(vals)
    step = float(xs[1] - xs[0])
    lo_x, hi_x = (-x_max, x_max) if n == 1 else (0.0, x_max)

    best_x, best_v = None, -1.0
    for idx in _local_maxima(xs, mags, spec.n_candidates):
        xc = float(xs[idx])
        zx = np.linspace(max(lo_x, xc - step), min(hi_x, xc + step), spec.zoom_points)
        zv = np.abs(direct(zx))
        j = int(np.argmax(zv))
        zstep = float(zx[1] - zx[0]) if zx.size > 1 else 0.0
        a, b = max(lo_x, zx[j] - zstep), min(hi_x, zx[j] + zstep)
        if b > a:
            xg, vg = _golden_max(lambda v: float(abs(direct(v)[0])), a, b, spec.golden_iters)
        else:
            xg, vg = float(zx[j]), float(zv[j])
        if vg < zv[j]:
            xg, vg = float(zx[j]), float(zv[j])
        if vg > best_v:
            best_x, best_v = xg, vg

    smp = band_integral(model, t, best_x, band, s=s, n=n, rel_tol=rel_tol)
    boundary = (abs(best_x) >= x_max - step) if n == 1 else (best_x >= x_max - step)
    return SupResult(float(t), abs(smp.value), float(best_x), smp.abs_error, bool(boundary), n,
                     x_max, smp)
