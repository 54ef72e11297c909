"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v``; each criterion prints its
line even when output capture is on.  The experiment criteria run the INI
files under ``configs/`` exactly as the CLI would.
"""

import json
import math
import random
import subprocess
import sys
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

import numpy as np
import pytest

from dispersive.abcd import CANONICAL, classify, verify_p_nondegeneracy
from dispersive.decay import predict
from dispersive.errors import ParameterError
from dispersive.experiments import run_config
from dispersive.grid import band_limited_random, gaussian, propagate_grid
from dispersive.littlewood_paley import lp_sum, parse_band
from dispersive.phases import fit_asymptotic, make_model
from dispersive.strichartz import INF, is_sharp_admissible, spacetime_norm

CONFIGS = Path(__file__).resolve().parent.parent / "configs"

# (alpha, ell) for the ten high-frequency regimes of the abcd family
ABCD_TABLE = {
    1: (1, 0.0), 2: (0, 0.0), 3: (0, 0.0), 4: (-3, math.sqrt(1 / 2)), 5: (-4, 0.0),
    6: (-3, 0.0), 7: (-4, 0.0), 8: (-6, 0.0), 9: (-3, math.sqrt(2.0)),
    10: (-5, math.sqrt(3 / 4)),
}

SLOPE_TOL = 0.05


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number:2d}: {detail}")
        assert ok, detail
    return emit


@lru_cache(maxsize=None)
def outcome(name):
    return run_config(str(CONFIGS / f"{name}.ini"))


def slope_check(name, tol=SLOPE_TOL):
    s = outcome(name).summary
    sigma, slope = s["predicted"]["sigma"], s["fitted"]["slope"]
    ok = abs(slope + sigma) <= tol
    return ok, f"{name}: sigma={sigma:.4g} slope={slope:.4f}"


def five_point(f, y, h):
    return (8 * (f(y + h) - f(y - h)) - (f(y + 2 * h) - f(y - 2 * h))) / (12 * h)


def test_criterion_01_littlewood_paley(report):
    y = np.geomspace(1e-6, 1e6, 1000)
    err = float(np.max(np.abs(lp_sum(y) - 1.0)))
    sq = lp_sum(y, power=2)
    ok = err < 1e-12 and bool(np.all(sq >= 0.5)) and bool(np.all(sq <= 1.0))
    report(1, ok, f"max|sum Q_j - 1| = {err:.2e}, sum Q_j^2 in [{sq.min():.4f}, {sq.max():.4f}]")


PHASES = [
    ("water_wave", {}), ("ilw", {}), ("bbm_kdv", {"p": -1.0}), ("bbm_kdv", {"p": -3.0}),
    ("ostrovsky", {"b": -1.0}), ("ostrovsky", {"b": 1.0}), ("reduced_ostrovsky", {}),
    ("power", {"alpha": 1.0}), ("power", {"alpha": 0.0}), ("power", {"alpha": -0.5}),
] + [("abcd", dict(zip("abcd", CANONICAL[row]))) for row in sorted(CANONICAL)]


def test_criterion_02_derivative_consistency(report):
    worst, bad = 0.0, []
    ys = np.geomspace(1e-2, 1e2, 100)
    h = 1e-4 * np.maximum(1.0, ys)
    for kind, params in PHASES:
        m = make_model(kind, **params)
        for p in range(1, 5):
            lower = (lambda v, q=p, mm=m: mm.deriv(v, q - 1))
            fd = five_point(lower, ys, h)
            exact = m.deriv(ys, p)
            # error relative to the local size of g^(p); where g^(p) is below the
            # rounding level of the difference quotient the floor applies instead
            scale = np.maximum.reduce([np.abs(exact), np.abs(m.deriv(1.1 * ys, p)),
                                       np.abs(m.deriv(ys / 1.1, p))])
            floor = 100 * np.finfo(float).eps * np.abs(lower(ys)) / h
            # identically vanishing derivatives must be reproduced exactly
            denom = np.maximum(np.maximum(scale, floor / 1e-6), np.finfo(float).tiny)
            rel = np.abs(fd - exact) / denom
            worst = max(worst, float(rel.max()))
            if rel.max() >= 1e-6:
                bad.append(f"{kind}{params} p={p}")
    report(2, not bad, f"{len(PHASES)} phases x p=1..4 x 100 points, worst relative error "
                       f"{worst:.2e}" + (f"; failing {bad}" if bad else ""))


def test_criterion_03_abcd_classifier(report):
    problems = []
    for row, tup in sorted(CANONICAL.items()):
        c = classify(*tup)
        alpha, ell = ABCD_TABLE[row]
        if c.row != row or c.alpha != alpha or abs(c.ell - ell) > 1e-14:
            problems.append(f"row {row}: got ({c.row}, {c.alpha}, {c.ell})")
        fit = fit_asymptotic(make_model("abcd", **dict(zip("abcd", tup))), "infinity", 2,
                             window=(1e3, 1e4))
        if abs(fit.alpha - alpha) > 0.05:
            problems.append(f"row {row}: fitted g'' exponent {fit.alpha:.3f}")
    for d in (Fraction(1, 3), 1, Fraction(5, 2)):
        if classify(0, 0, 0, d).R.coeffs != (-3 * Fraction(d),):
            problems.append(f"R for d={d}")
    report(3, not problems, "10 canonical rows exact, g'' exponents within 0.05, R = -3d"
           if not problems else "; ".join(problems))


def test_criterion_04_p_nondegeneracy(report):
    rng = random.Random(2024)
    count = 0
    failures = []
    while count < 500:
        a, c = (Fraction(-rng.randint(0, 24), 8) for _ in range(2))
        b, d = (Fraction(rng.randint(0, 24), 8) for _ in range(2))
        try:
            ok = verify_p_nondegeneracy(a, b, c, d)
        except ParameterError:
            continue
        count += 1
        if not ok:
            failures.append((a, b, c, d))
    report(4, not failures, f"{count} random valid tuples, {len(failures)} failures")


def saturation(number, names, report):
    results = [slope_check(name) for name in names]
    report(number, all(ok for ok, _ in results), "; ".join(d for _, d in results))


def test_criterion_05_saturation_1d(report):
    saturation(5, ["decay_power_cubic", "decay_reduced_ostrovsky", "decay_bbm_kdv",
                   "decay_ilw", "decay_water_wave_1d"], report)


def test_criterion_06_saturation_2d(report):
    saturation(6, ["decay2d_water_wave_low", "decay2d_water_wave_high",
                   "decay2d_water_wave_uniform", "decay2d_abcd"], report)


def test_criterion_07_delta_scaling(report):
    # the p = 3 derivative bound on dyadic blocks predicts beta = -2/3 uniformly in k;
    # it is attained on the union of the low blocks
    beta_p3 = predict(make_model("power", alpha=1.0), parse_band("dyadic:0"),
                      lemma="dyadic_pderiv", l=3).beta
    power = outcome("delta_power").summary["fitted"]["slope"]
    ww = outcome("delta_water_wave_2d").summary
    ok = abs(power - beta_p3) <= 0.05 and abs(ww["fitted"]["slope"] - ww["predicted"]["beta"]) <= 0.1
    report(7, ok, f"power: beta={beta_p3:.4f} fitted {power:.4f}; water-wave 2d: "
                  f"beta={ww['predicted']['beta']:.1f} fitted {ww['fitted']['slope']:.4f}")


def test_criterion_08_propagator(report):
    m = make_model("water_wave", mu=0.5)
    u0 = band_limited_random(1, 1024, 50.0, 6.0, seed=3)
    a = propagate_grid(m, u0, 1.3)
    unit = abs(a.l2_norm() / u0.l2_norm() - 1.0)
    group = float(np.max(np.abs(propagate_grid(m, a, 2.1).samples
                                - propagate_grid(m, u0, 3.4).samples)))
    schr = make_model("power", alpha=0.0)
    g0 = gaussian(1, 2048, 40.0, width=1.0)
    t = 2.0
    z = 1.0 - 2j * t
    exact = np.sqrt(1.0 / z) * np.exp(-g0.axis() ** 2 / (2 * z))
    interior = np.abs(g0.axis()) <= 20.0
    closed = float(np.max(np.abs(propagate_grid(schr, g0, t).samples - exact)[interior]))
    ok = unit < 1e-12 and group < 1e-10 and closed < 1e-8
    report(8, ok, f"unitarity {unit:.1e}, group {group:.1e}, Gaussian closed form {closed:.1e}")


STRICHARTZ = ["strichartz_schrodinger", "strichartz_reduced_ostrovsky", "strichartz_bbm_kdv",
              "strichartz_ilw", "strichartz_water_wave", "strichartz_abcd"]


def test_criterion_09_strichartz(report):
    rng = random.Random(99)
    sweep, wrong = 0, 0
    for _ in range(2000):
        sigma = Fraction(rng.randint(1, 60), 60)
        inv_r = Fraction(rng.randint(0, 30), 60)
        inv_q = sigma * (Fraction(1, 2) - inv_r)
        q = INF if inv_q == 0 else 1 / inv_q
        r = INF if inv_r == 0 else 1 / inv_r
        if q < 2 or (q == 2 and r == INF and sigma == 1):
            continue
        sweep += 1
        wrong += not is_sharp_admissible(q, r, sigma)
        # moving q off the scaling line must break admissibility
        if q != INF:
            wrong += is_sharp_admissible(q + Fraction(1, 7), r, sigma)
    u0 = band_limited_random(1, 1024, 60.0, 4.0, seed=2)
    energy = abs(spacetime_norm(make_model("water_wave"), u0, INF, 2, 10.0) / u0.l2_norm() - 1)
    spreads = {name: outcome(name).summary["spread"] for name in STRICHARTZ}
    ok = sweep > 0 and wrong == 0 and energy < 1e-10 and all(v < 10 for v in spreads.values())
    worst = max(spreads, key=spreads.get)
    report(9, ok, f"{sweep} rational pairs, {wrong} misjudged, (inf,2) quotient - 1 = {energy:.1e}, "
                  f"max spread {spreads[worst]:.3f} ({worst}) over {len(spreads)} models")


def test_criterion_10_smoothing(report):
    kato = outcome("smoothing_kato_scaling").summary
    window = outcome("smoothing_ilw_window").summary
    local = outcome("smoothing_local_energy").summary
    ok = (kato["spread"] < 3 and window["relative_change"] < 0.2
          and all(r < 0.1 for r in local["decay_ratios"])
          and local["deltas"] == [1.0, 0.25, 0.0625] and local["window"][1] == 200.0)
    report(10, ok, f"sqrt(a) spread {kato['spread']:.3f}, window-doubling change "
                   f"{window['relative_change']:.3f}, local-energy ratios "
                   f"{max(local['decay_ratios']):.1e} for delta in {local['deltas']}")


def test_criterion_11_determinism(report):
    cmd = [sys.executable, "-m", "dispersive.cli", "selftest"]
    first = subprocess.run(cmd, capture_output=True)
    second = subprocess.run(cmd, capture_output=True)
    ok = first.returncode == second.returncode == 0 and first.stdout == second.stdout
    passed = json.loads(first.stdout)["passed"] if first.stdout else False
    report(11, ok and passed, f"selftest exit codes {first.returncode}/{second.returncode}, "
                              f"{len(first.stdout)} bytes, identical={first.stdout == second.stdout}")
