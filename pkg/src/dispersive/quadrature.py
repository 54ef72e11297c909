"""Panel quadrature for smooth, possibly highly oscillatory integrands.

Two rules are provided:

* :func:`adaptive_gk21`, a vectorised globally adaptive Gauss-Kronrod
  (10/21 point) integrator whose error estimate is ``|K21 - G10|`` summed
  over panels;
* :func:`composite_gauss`, a fixed composite Gauss-Legendre rule used when
  the same integrand has to be integrated against many parameters.

Initial panels follow the oscillation of the integrand: breakpoints are
placed at equal increments of the accumulated phase ``int |Phi'|``.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .errors import QuadratureError

# Kronrod 21-point abscissae (non-negative half, descending) and weights.
XGK = np.array([
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0,
])
WGK = np.array([
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208643482221, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
])
# 10-point Gauss weights for XGK[1], XGK[3], ..., XGK[9]
WG = np.array([
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
])


def _full_rule():
    x = np.concatenate([-XGK[:-1], XGK[::-1]])
    wk = np.concatenate([WGK[:-1], WGK[::-1]])
    wg = np.zeros(21)
    # Gauss nodes sit at odd positions of the descending half-rule
    for i, w in enumerate(WG):
        j = 2 * i + 1
        wg[j] = w
        wg[20 - j] = w
    return x, wk, wg


X21, WK21, WG21 = _full_rule()


@lru_cache(maxsize=None)
def gauss_legendre(n):
    """Nodes and weights of the ``n``-point Gauss-Legendre rule on [-1, 1]."""
    return np.polynomial.legendre.leggauss(n)


def _eval_chunked(f, nodes, chunk=2_000_000):
    flat = nodes.ravel()
    if flat.size <= chunk:
        return np.asarray(f(flat)).reshape(nodes.shape)
    out = np.empty(flat.size, dtype=complex)
    for i in range(0, flat.size, chunk):
        out[i:i + chunk] = f(flat[i:i + chunk])
    return out.reshape(nodes.shape)


def _gk_panels(f, a, b):
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    nodes = c[:, None] + h[:, None] * X21[None, :]
    vals = _eval_chunked(f, nodes)
    K = h * (vals @ WK21)
    G = h * (vals @ WG21)
    return K, np.abs(K - G)


def adaptive_gk21(f, breakpoints, abs_tol=1e-12, rel_tol=1e-10, max_panels=4_000_000,
                  max_rounds=60):
    """Integrate ``f`` over ``[breakpoints[0], breakpoints[-1]]``.

    Parameters
    ----------
    f : callable
        Vectorised integrand, real or complex valued.
    breakpoints : array_like
        Increasing panel boundaries used as the initial partition.
    abs_tol, rel_tol : float
        Stop once the summed error estimate is below
        ``max(abs_tol, rel_tol * |value|)``.

    Returns
    -------
    value, abs_error, n_panels

    Raises
    ------
    QuadratureError
        When the panel budget is exhausted; carries the partial estimate.
    """
    bp = np.unique(np.asarray(breakpoints, dtype=float))
    if bp.size < 2:
        return 0.0, 0.0, 0
    a, b = bp[:-1], bp[1:]
    K, E = _gk_panels(f, a, b)
    width = b[-1] - a[0]
    for _ in range(max_rounds):
        value = K.sum()
        err = E.sum()
        tol = max(abs_tol, rel_tol * abs(value))
        if err <= tol:
            return value, float(err), a.size
        w = b - a
        split = E > 0.5 * tol * w / width
        split &= w > 1e-15 * max(abs(a[0]), abs(b[-1]), 1e-300)
        if not np.any(split):
            break
        if a.size + split.sum() > max_panels:
            raise QuadratureError(
                f"panel budget {max_panels} exhausted (error {err:.3g} > {tol:.3g})",
                value=value, abs_error=float(err),
            )
        m = 0.5 * (a[split] + b[split])
        na = np.concatenate([a[split], m])
        nb = np.concatenate([m, b[split]])
        nK, nE = _gk_panels(f, na, nb)
        keep = ~split
        a = np.concatenate([a[keep], na])
        b = np.concatenate([b[keep], nb])
        K = np.concatenate([K[keep], nK])
        E = np.concatenate([E[keep], nE])
        order = np.argsort(a)
        a, b, K, E = a[order], b[order], K[order], E[order]
    value = K.sum()
    err = float(E.sum())
    raise QuadratureError(
        f"adaptive quadrature did not reach tolerance (error {err:.3g})",
        value=value, abs_error=err,
    )


def composite_gauss(breakpoints, n=16):
    """Nodes and weights of an ``n``-point Gauss rule on every panel."""
    bp = np.unique(np.asarray(breakpoints, dtype=float))
    x, w = gauss_legendre(n)
    c = 0.5 * (bp[:-1] + bp[1:])
    h = 0.5 * (bp[1:] - bp[:-1])
    nodes = (c[:, None] + h[:, None] * x[None, :]).ravel()
    weights = (h[:, None] * w[None, :]).ravel()
    return nodes, weights


def phase_breakpoints(rate, lo, hi, rad_per_panel=2 * math.pi, extra=(), to_zero=False,
                      n_sample=4097, max_panels=2_000_000, min_panels=8):
    """Breakpoints with roughly ``rad_per_panel`` of accumulated phase per panel.

    Parameters
    ----------
    rate : callable
        Vectorised bound on the local oscillation rate ``|Phi'(y)|``.
    lo, hi : float
        Integration limits (``lo >= 0``).
    extra : iterable of float
        Additional breakpoints (window transition edges, etc.).
    to_zero : bool
        Add geometrically graded panels toward ``lo = 0``.
    """
    lo, hi = float(lo), float(hi)
    if not hi > lo:
        return np.array([lo, hi])
    grid = np.linspace(lo, hi, n_sample)
    if to_zero and lo == 0.0:
        grid = np.union1d(grid, np.geomspace(hi * 1e-12, hi, 400))
        grid = np.union1d(grid, [0.0])
    r = np.abs(np.asarray(rate(np.maximum(grid, 1e-300)), dtype=float))
    r = np.where(np.isfinite(r), r, 0.0)
    cum = np.concatenate([[0.0], np.cumsum(0.5 * (r[1:] + r[:-1]) * np.diff(grid))])
    total = cum[-1]
    n = int(min(max(math.ceil(total / rad_per_panel), min_panels), max_panels))
    levels = np.linspace(0.0, total, n + 1) if total > 0 else None
    if levels is not None:
        bp = np.interp(levels, cum, grid)
    else:
        bp = np.linspace(lo, hi, n + 1)
    bp = np.union1d(bp, np.linspace(lo, hi, min_panels + 1))
    pts = [p for p in extra if lo < p < hi]
    if pts:
        bp = np.union1d(bp, pts)
    if to_zero and lo == 0.0:
        first = bp[1] if bp.size > 1 else hi
        bp = np.union1d(bp, first * 2.0 ** -np.arange(1, 48))
    bp[0], bp[-1] = lo, hi
    return bp
