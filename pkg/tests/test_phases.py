import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dispersive.errors import DomainError, FitError, ParameterError
from dispersive.phases import (KINDS, eval_derivative, eval_phase, fit_asymptotic, make_model)

mp.mp.dps = 40

# Independent high-precision definitions of each phase, used as oracles.
ORACLES = {
    ("water_wave", ()): lambda y: mp.sqrt(y * mp.tanh(y)),
    ("ilw", ()): lambda y: y * y * mp.coth(y) - y,
    ("bbm_kdv", (("p", -1.0),)): lambda y: y * (1 - (-1 + mp.mpf(1) / 6) * y ** 2) / (1 + y ** 2),
    ("ostrovsky", (("b", -1.0),)): lambda y: 1 / y + y ** 3,
    ("ostrovsky", (("b", 2.0),)): lambda y: 1 / y - 2 * y ** 3,
    ("reduced_ostrovsky", ()): lambda y: 1 / y,
    ("abcd", (("a", -1), ("b", 1), ("c", -2), ("d", 3))):
        lambda y: y * mp.sqrt((1 + y ** 2) * (1 + 2 * y ** 2) / ((1 + y ** 2) * (1 + 3 * y ** 2))),
    ("abcd", (("a", 0), ("b", 0), ("c", 0), ("d", 1))): lambda y: y / mp.sqrt(1 + y ** 2),
    ("power", (("alpha", 1.0),)): lambda y: y ** 3,
    ("power", (("alpha", -0.5),)): lambda y: y ** mp.mpf(1.5),
}

Y_POINTS = [0.01, 0.1, 0.3, 0.49, 0.51, 1.0, 2.5, 7.0, 20.0]


@pytest.mark.parametrize("key", list(ORACLES), ids=lambda k: k[0] + str(dict(k[1])))
@pytest.mark.parametrize("p", [0, 1, 2, 3, 4])
def test_closed_forms_match_high_precision_oracle(key, p):
    kind, params = key
    m = make_model(kind, **dict(params))
    f = ORACLES[key]
    for y in Y_POINTS:
        ref = float(mp.diff(f, mp.mpf(y), p))
        got = float(m.deriv(np.array([y]), p)[0])
        assert got == pytest.approx(ref, rel=1e-9, abs=1e-12 * max(1.0, abs(ref)))


def five_point(f, y, h):
    return (8 * (f(y + h) - f(y - h)) - (f(y + 2 * h) - f(y - 2 * h))) / (12 * h)


CATALOG = [
    ("water_wave", {}), ("ilw", {}), ("bbm_kdv", {"p": -1.0}), ("bbm_kdv", {"p": -3.0}),
    ("ostrovsky", {"b": -1.0}), ("reduced_ostrovsky", {}), ("power", {"alpha": 1.0}),
    ("abcd", {"a": -1, "b": 0, "c": -1, "d": 0}), ("abcd", {"a": 0, "b": 1, "c": 0, "d": 1}),
]


@pytest.mark.parametrize("kind,params", CATALOG)
def test_finite_difference_consistency_at_100_points(kind, params):
    m = make_model(kind, **params)
    ys = np.geomspace(1e-2, 1e2, 100)
    for p in range(1, 5):
        lower = (lambda v, q=p: m.deriv(v, q - 1))
        h = 1e-4 * np.maximum(1.0, ys)
        fd = five_point(lower, ys, h)
        exact = m.deriv(ys, p)
        # relative to the local magnitude, so isolated zeros of g^(p) are harmless;
        # ``floor`` is the rounding error of the difference quotient itself
        floor = 100 * np.finfo(float).eps * np.abs(lower(ys)) / h
        scale = np.maximum.reduce([np.abs(exact), np.abs(m.deriv(1.1 * ys, p)),
                                   np.abs(m.deriv(ys / 1.1, p))])
        assert np.all(np.abs(fd - exact) <= np.maximum(1e-6 * scale, floor))


@settings(max_examples=60, deadline=None)
@given(y=st.floats(1e-3, 50.0), p=st.integers(1, 4),
       idx=st.integers(0, len(CATALOG) - 1))
def test_finite_difference_property(y, p, idx):
    kind, params = CATALOG[idx]
    m = make_model(kind, **params)
    h = 1e-4 * max(1.0, y)
    if y - 2 * h <= 0:
        return
    fd = five_point(lambda v: m.deriv(np.asarray(v), p - 1), np.array([y]), h)[0]
    ex = m.deriv(np.array([y]), p)[0]
    scale = max(abs(ex), abs(m.deriv(np.array([1.1 * y]), p)[0]),
                abs(m.deriv(np.array([y / 1.1]), p)[0]))
    floor = 100 * np.finfo(float).eps * abs(m.deriv(np.array([y]), p - 1)[0]) / h
    assert abs(fd - ex) <= max(1e-6 * scale, floor)


def test_water_wave_values():
    m = make_model("water_wave", mu=1.0)
    assert eval_phase(m, 1.0) == pytest.approx(0.8726936208978297, abs=1e-12)
    assert eval_phase(m, 1e-6) / 1e-6 == pytest.approx(1.0, abs=1e-10)
    y = 1e-3
    assert (eval_derivative(m, y, 1) - 1) / y ** 2 == pytest.approx(-0.5, rel=1e-4)


def test_water_wave_monotonicity_and_concavity():
    m = make_model("water_wave")
    ys = np.geomspace(1e-4, 1e4, 500)
    assert np.all(m.deriv(ys, 1) > 0)
    assert np.all(m.deriv(ys, 2) < 0)


def test_ilw_convexity_and_growth():
    m = make_model("ilw", rho=1.0)
    ys = np.geomspace(1e-4, 1e3, 500)
    assert np.all(m.deriv(ys, 2) > 0)
    assert eval_derivative(m, 1e3, 1) / 2e3 == pytest.approx(1.0, abs=1e-3)


def test_bbm_values():
    m = make_model("bbm_kdv", p=-1.0 / 6.0)
    assert eval_phase(m, 1.0) == pytest.approx(6.0 / 7.0, rel=1e-14)
    m3 = make_model("bbm_kdv", p=-3.0)
    assert eval_derivative(m3, 1.0, 2) == pytest.approx(0.0, abs=1e-14)


@pytest.mark.parametrize("row", range(1, 11))
def test_abcd_derivatives_keep_relative_accuracy_at_large_y(row):
    # g''' and g'''' decay much faster than the individual terms of their
    # closed forms; the relative error must stay small out to y = 1e3
    from fractions import Fraction
    from dispersive.abcd import CANONICAL
    tup = CANONICAL[row]
    a, b, c, d = (mp.mpf(Fraction(v).numerator) / Fraction(v).denominator for v in tup)
    f = lambda y: y * mp.sqrt((1 - a * y ** 2) * (1 - c * y ** 2) / ((1 + b * y ** 2) * (1 + d * y ** 2)))
    m = make_model("abcd", **dict(zip("abcd", tup)))
    for y in (0.01, 1.0, 37.0, 100.0, 1000.0):
        for p in range(5):
            ref = float(mp.diff(f, mp.mpf(y), p))
            got = float(m.deriv(np.array([y]), p)[0])
            assert got == pytest.approx(ref, rel=1e-10, abs=1e-300)


def test_abcd_construction():
    m = make_model("abcd", a=0, b=0, c=0, d=1)
    assert eval_phase(m, 2.0) == pytest.approx(2.0 / math.sqrt(5.0), rel=1e-14)
    with pytest.raises(ParameterError, match="a <= 0"):
        make_model("abcd", a=1, b=0, c=0, d=0)
    with pytest.raises(ParameterError):
        make_model("abcd", a=0, b=0, c=0, d=0)


def test_power_and_unknown_kind():
    m = make_model("power", alpha=0.0)
    assert eval_phase(m, 3.0) == pytest.approx(9.0)
    with pytest.raises(ParameterError):
        make_model("nonsense")
    with pytest.raises(ParameterError):
        make_model("power", alpha=-2.0)


@pytest.mark.parametrize("y", [0.0, -1.0, math.inf, math.nan])
def test_domain_errors(y):
    m = make_model("ilw")
    with pytest.raises(DomainError):
        eval_phase(m, y)
    with pytest.raises(DomainError):
        eval_derivative(m, y, 2)


def test_mu_sets_delta():
    assert make_model("water_wave", mu=0.25).delta == pytest.approx(0.5)
    assert make_model("ilw", rho=3.0).delta == pytest.approx(3.0)
    with pytest.raises(ParameterError):
        make_model("water_wave").with_delta(0.0)


def test_model_is_immutable():
    m = make_model("water_wave")
    with pytest.raises(Exception):
        m.delta = 2.0


@pytest.mark.parametrize("kind,params,end,p,alpha,tol", [
    ("water_wave", {}, "infinity", 2, -1.5, 0.05),
    ("power", {"alpha": 1.0}, "infinity", 2, 1.0, 0.01),
    ("ilw", {}, "zero", 2, 1.0, 0.05),
    ("water_wave", {}, "zero", 2, 1.0, 0.05),
    ("bbm_kdv", {"p": -1.0}, "infinity", 2, -3.0, 0.05),
    ("reduced_ostrovsky", {}, "zero", 2, -3.0, 0.05),
    ("ilw", {}, "infinity", 1, 1.0, 0.05),
])
def test_fit_asymptotic_reproduces_known_exponents(kind, params, end, p, alpha, tol):
    d = fit_asymptotic(make_model(kind, **params), end, p)
    assert d.alpha == pytest.approx(alpha, abs=tol)


@pytest.mark.parametrize("kind", KINDS)
def test_stored_descriptors_agree_with_fits(kind):
    params = {"abcd": {"a": -1, "b": 0, "c": -1, "d": 0}, "bbm_kdv": {"p": -1.0}}.get(kind, {})
    m = make_model(kind, **params)
    for d in m.descriptors:
        fit = fit_asymptotic(m, d.end, d.deriv_order)
        assert fit.alpha == pytest.approx(d.alpha, abs=0.05), (d.end, d.deriv_order)
        if d.deriv_order == 1:
            assert fit.ell == pytest.approx(d.ell, abs=0.05 * max(1.0, abs(d.ell)))


def test_fit_asymptotic_errors():
    m = make_model("power", alpha=1.0)
    with pytest.raises(FitError):
        fit_asymptotic(m, "infinity", 4)  # g'''' vanishes identically
    with pytest.raises(FitError):
        fit_asymptotic(make_model("bbm_kdv", p=-3.0), "zero", 2, window=(0.5, 2.0))
    with pytest.raises(ParameterError):
        fit_asymptotic(m, "middle", 2)
    with pytest.raises(FitError):
        fit_asymptotic(m, "zero", 2, n_samples=4)
