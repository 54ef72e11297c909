import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from dispersive.bessel import SWITCH, bessel_j0, bessel_j0_standard
from dispersive.errors import QuadratureError
from dispersive.quadrature import (WG21, WK21, X21, adaptive_gk21, composite_gauss,
                                   gauss_legendre, phase_breakpoints)


def test_kronrod_rule_exact_to_degree_31():
    for deg in range(0, 32):
        exact = 0.0 if deg % 2 else 2.0 / (deg + 1)
        assert np.dot(WK21, X21 ** deg) == pytest.approx(exact, abs=1e-15)
    assert abs(np.dot(WK21, X21 ** 32) - 2 / 33) > 1e-13


def test_embedded_gauss_rule_exact_to_degree_19():
    for deg in range(0, 20):
        exact = 0.0 if deg % 2 else 2.0 / (deg + 1)
        assert np.dot(WG21, X21 ** deg) == pytest.approx(exact, abs=1e-15)
    x10, w10 = gauss_legendre(10)
    nodes = X21[WG21 > 0]
    assert np.allclose(np.sort(nodes), np.sort(x10), atol=1e-15)


def test_adaptive_gk21_smooth_and_oscillatory():
    val, err, _ = adaptive_gk21(np.exp, [0.0, 1.0])
    assert val == pytest.approx(math.e - 1, rel=1e-14)
    assert err < 1e-12
    w = 200.0
    val, err, _ = adaptive_gk21(lambda y: np.exp(1j * w * y), np.linspace(0, 1, 5))
    assert abs(val - (np.exp(1j * w) - 1) / (1j * w)) < 1e-12


def test_adaptive_gk21_fresnel_with_asymptotic_tail():
    a = 30.0
    val, _, _ = adaptive_gk21(lambda v: np.exp(1j * v * v), np.linspace(0.0, a, 61))
    # tail int_a^inf exp(i y^2) dy, asymptotic series
    z = 1j * a * a
    s, term = 0.0, 1.0
    for k in range(12):
        s += term
        term *= (2 * k + 1) / (2 * z)
    tail = -np.exp(z) / (2j * a) * s
    exact = math.sqrt(math.pi / 8) * (1 + 1j)
    assert abs(val + tail - exact) < 1e-10


def test_error_estimate_is_honest_on_random_oscillators():
    rng = np.random.default_rng(5)
    for _ in range(30):
        w, p = rng.uniform(1, 300), rng.uniform(0.5, 3)
        f = lambda y: np.exp(1j * w * y ** p) * np.cos(3 * y)
        v1, e1, _ = adaptive_gk21(f, np.linspace(0, 2, 9), rel_tol=1e-8, abs_tol=1e-10)
        v2, _, _ = adaptive_gk21(f, np.linspace(0, 2, 9), rel_tol=1e-12, abs_tol=1e-14)
        assert abs(v1 - v2) <= max(e1, 1e-12)


def test_panel_budget_raises_with_partial_estimate():
    with pytest.raises(QuadratureError) as info:
        adaptive_gk21(lambda y: np.sin(1e6 * y ** 2), [0.0, 10.0], max_panels=50)
    assert info.value.value is not None and info.value.abs_error > 0


def test_composite_gauss_integrates_polynomial_exactly():
    nodes, w = composite_gauss([0.0, 0.3, 1.0, 2.5], n=8)
    assert np.dot(w, nodes ** 7) == pytest.approx(2.5 ** 8 / 8, rel=1e-14)


def test_phase_breakpoints_cover_interval_and_limit_phase():
    rate = lambda y: 100.0 * y
    bp = phase_breakpoints(rate, 0.0, 3.0, rad_per_panel=2.0, extra=[1.234])
    assert bp[0] == 0.0 and bp[-1] == 3.0 and 1.234 in bp
    acc = 50.0 * (bp[1:] ** 2 - bp[:-1] ** 2)
    assert np.max(acc) <= 2.0 * 1.01


def test_j0_normalisation_and_first_zero():
    assert bessel_j0(0.0) == pytest.approx(2 * math.pi, rel=1e-15)
    from scipy.optimize import brentq
    z = brentq(lambda s: float(bessel_j0(s)), 2.0, 3.0, xtol=1e-14)
    assert z == pytest.approx(2.404825557695773, abs=1e-10)


@pytest.mark.parametrize("lo,hi", [(0.0, SWITCH), (SWITCH, 200.0), (200.0, 1e4), (1e4, 1e7)])
def test_j0_against_scipy(lo, hi):
    s = np.linspace(lo, hi, 2001)
    assert np.max(np.abs(bessel_j0_standard(s) - special.j0(s))) < 1e-12


def test_j0_against_defining_integral():
    from scipy.integrate import quad
    for s in (0.5, 3.7, 11.9, 12.1, 40.0):
        re, _ = quad(lambda th: math.cos(s * math.sin(th)), 0, 2 * math.pi, limit=400)
        assert float(bessel_j0(s)) == pytest.approx(re, abs=2 * math.pi * 1e-12)


def test_j0_branches_agree_at_switch():
    from dispersive.bessel import _asymptotic, _series
    s = np.array([SWITCH])
    assert abs(_series(s)[0] - _asymptotic(s)[0]) < 1e-12


def test_j0_decay_bound():
    s = np.linspace(0, 1e4, 200001)
    env = np.abs(bessel_j0(s)) * np.sqrt(1 + s)
    assert np.max(env) < 8.0
    # no growth: the envelope far out stays below its value near the origin
    assert np.max(env[s > 1e3]) <= np.max(env[s <= 1e3])


@settings(max_examples=100, deadline=None)
@given(s=st.floats(-1e5, 1e5))
def test_j0_even_and_bounded(s):
    v = float(bessel_j0_standard(s))
    assert v == float(bessel_j0_standard(-s))
    assert abs(v) <= 1.0 + 1e-15
