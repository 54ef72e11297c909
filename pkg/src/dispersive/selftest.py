"""Fast invariant suite behind ``dispersive selftest``.

Every check returns a measured value and a threshold; the report contains no
timings so repeated runs are byte-identical.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .abcd import CANONICAL, ROW_ALPHA, classify, verify_p_nondegeneracy
from .bessel import bessel_j0_standard
from .decay import fit_slope, run_decay_experiment
from .grid import gaussian, propagate_grid
from .littlewood_paley import FrequencyBand, lp_sum
from .phases import KINDS, make_model
from .quadrature import adaptive_gk21
from .strichartz import is_sharp_admissible, pairs_for_sigma, spacetime_norm

SEED = 20240611

DEFAULT_MODELS = (
    ("water_wave", {"mu": 1.0}), ("abcd", {"a": -1, "b": 1, "c": -2, "d": 1}),
    ("bbm_kdv", {"p": -1.0}), ("ostrovsky", {"b": -1.0}), ("ostrovsky", {"b": 1.0}),
    ("reduced_ostrovsky", {}), ("ilw", {"rho": 1.0}), ("power", {"alpha": 1.0}),
)


def five_point_derivative(f, y, h):
    return (8 * (f(y + h) - f(y - h)) - (f(y + 2 * h) - f(y - 2 * h))) / (12 * h)


def fd_relative_error(model, p, ys):
    """Worst relative error of ``g^(p)`` against a 5-point difference of ``g^(p-1)``.

    The error is scaled by the local magnitude ``max |g^(p)|`` over
    ``{y/1.1, y, 1.1 y}`` so isolated zeros of ``g^(p)`` do not dominate.
    """
    lower = (lambda v: model.g(v)) if p == 1 else (lambda v: model.deriv(v, p - 1))
    h = 1e-4 * np.maximum(1.0, ys)
    fd = five_point_derivative(lower, ys, h)
    exact = model.deriv(ys, p)
    scale = np.maximum.reduce([np.abs(exact), np.abs(model.deriv(ys * 1.1, p)),
                               np.abs(model.deriv(ys / 1.1, p))])
    diff = np.abs(fd - exact)
    rel = np.where(scale > 0, diff / np.where(scale > 0, scale, 1.0), diff)
    return float(np.max(rel))


def _check(name, value, threshold, ok):
    return {"name": name, "value": value, "threshold": threshold, "pass": bool(ok)}


def run_selftest(quick=True):
    """Run the invariant suite; returns ``(all_passed, report_dict)``."""
    checks = []

    y = np.geomspace(1e-6, 1e6, 1000)
    s1, s2 = lp_sum(y), lp_sum(y, power=2)
    e1 = float(np.max(np.abs(s1 - 1)))
    checks.append(_check("littlewood_paley_partition", e1, 1e-12, e1 < 1e-12))
    ok2 = bool(np.all((s2 >= 0.5 - 1e-15) & (s2 <= 1 + 1e-15)))
    checks.append(_check("littlewood_paley_square_sum", [float(s2.min()), float(s2.max())],
                         [0.5, 1.0], ok2))

    ys = np.geomspace(1e-2, 10.0, 100)
    worst = 0.0
    for kind, params in DEFAULT_MODELS:
        m = make_model(kind, **params)
        for p in range(1, 5):
            worst = max(worst, fd_relative_error(m, p, ys))
    checks.append(_check("derivative_consistency", worst, 1e-6, worst < 1e-6))

    bad = []
    for row, abcd in CANONICAL.items():
        c = classify(*abcd)
        if c.row != row or c.alpha != ROW_ALPHA[row]:
            bad.append(row)
    r5 = classify(0, 0, 0, Fraction(3))
    checks.append(_check("abcd_canonical_rows", bad, [], not bad))
    r_coeffs = [str(c) for c in r5.R.coeffs]
    checks.append(_check("abcd_R_for_d_only", r_coeffs, ["-9"], r_coeffs == ["-9"]))

    rng = np.random.default_rng(SEED)
    n_tuples = 50 if quick else 500
    fails = 0
    for _ in range(n_tuples):
        a, c = -rng.uniform(0, 2, 2)
        b, d = rng.uniform(0, 2, 2)
        if not verify_p_nondegeneracy(a, b, c, d):
            fails += 1
    checks.append(_check("p_nondegeneracy", fails, 0, fails == 0))

    xs = np.linspace(0.0, 60.0, 601)
    ref = _j0_quadrature(xs)
    err = float(np.max(np.abs(bessel_j0_standard(xs) - ref)))
    checks.append(_check("bessel_j0_vs_integral", err, 1e-12, err < 1e-12))

    val, est, _ = adaptive_gk21(lambda v: np.exp(1j * v * v), np.linspace(0.0, 30.0, 61))
    fres = complex(math.sqrt(math.pi / 8), math.sqrt(math.pi / 8))
    tail = _fresnel_tail(30.0)
    gk_err = float(abs(val + tail - fres))
    checks.append(_check("gk21_fresnel", gk_err, 1e-9, gk_err < 1e-9))

    sch = make_model("power", alpha=0.0)
    u0 = gaussian(1, 512, 30.0, width=1.0)
    u1 = propagate_grid(sch, u0, 1.3)
    unit = abs(u1.l2_norm() / u0.l2_norm() - 1)
    checks.append(_check("propagator_unitarity", unit, 1e-12, unit < 1e-12))
    ua = propagate_grid(sch, propagate_grid(sch, u0, 0.4), 0.9)
    grp = float(np.linalg.norm(ua.samples - u1.samples) / np.linalg.norm(u1.samples))
    checks.append(_check("propagator_group", grp, 1e-10, grp < 1e-10))
    x = u0.axis()
    z = 1.0 - 2j * 1.3
    exact = np.sqrt(1.0 / z) * np.exp(-x ** 2 / (2 * z))
    inner = np.abs(x) < 15
    gerr = float(np.max(np.abs(u1.samples - exact)[inner]))
    checks.append(_check("schrodinger_gaussian", gerr, 1e-8, gerr < 1e-8))

    sweep_ok = all(is_sharp_admissible(pr.q, pr.r, pr.sigma)
                   for sig in (Fraction(1, 5), Fraction(1, 3), Fraction(1, 2), Fraction(1))
                   for pr in pairs_for_sigma(sig, 9))
    checks.append(_check("admissible_sweep", sweep_ok, True, sweep_ok))
    st = spacetime_norm(sch, u0, "inf", 2, 5.0, 32)
    q_err = abs(st / u0.l2_norm() - 1)
    checks.append(_check("strichartz_trivial_pair", q_err, 1e-10, q_err < 1e-10))

    cubic = make_model("power", alpha=1.0)
    band = FrequencyBand.halfline_low(1.0)
    smp = run_decay_experiment(cubic, band, 0.0, 1, np.geomspace(10, 1e3, 8), threads=1)
    slope = fit_slope(smp).slope
    checks.append(_check("cubic_low_pass_slope", slope, [-1 / 3, 0.05],
                         abs(slope + 1 / 3) <= 0.05))

    all_ok = all(c["pass"] for c in checks)
    return all_ok, {"selftest": checks, "passed": all_ok, "seed": SEED,
                    "models": [k for k, _ in DEFAULT_MODELS], "kinds": list(KINDS)}


def _j0_quadrature(xs, n=64):
    """``J0(x) = (1/pi) int_0^pi cos(x sin th) dth`` with the trapezoid rule.

    The integrand is periodic and smooth, so the rule converges
    geometrically once ``n`` exceeds ``x``.
    """
    out = np.empty_like(xs)
    for i, xv in enumerate(xs):
        m = max(n, int(2 * xv) + 64)
        th = np.pi * np.arange(m) / m
        out[i] = float(np.mean(np.cos(xv * np.sin(th))))
    return out


def _fresnel_tail(a, n_terms=12):
    """``int_a^inf exp(i y^2) dy`` from its asymptotic series (valid for large a)."""
    z = 1j * a * a
    s, term = 0.0, 1.0
    for k in range(n_terms):
        s += term
        term *= (2 * k + 1) / (2 * z)
    return -np.exp(z) / (2j * a) * s
