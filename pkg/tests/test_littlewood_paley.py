import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from dispersive.errors import ParameterError
from dispersive.littlewood_paley import (DyadicRange, FrequencyBand, band_indices,
                                         dyadic_sum_window, lp_sum, parse_band, phi0, q_j)


def test_phi0_values():
    assert phi0(0.0) == 1.0
    assert phi0(0.6) == 1.0
    assert phi0(0.8) == 0.0
    assert phi0(0.9) == 0.0
    assert 0.0 < phi0(0.7) < 1.0
    assert phi0(-0.7) == phi0(0.7)
    # symmetric transition: the glue is centred on the midpoint
    assert phi0(0.7) == pytest.approx(0.5, abs=1e-15)


def test_phi0_monotone_and_derivative_integral():
    ys = np.linspace(0, 1, 20001)
    v = phi0(ys)
    assert np.all(np.diff(v) <= 0)
    # phi0(0.6) - phi0(0.8) equals minus the integral of phi0' over the glue
    h = 1e-6
    dphi = lambda y: (phi0(y + h) - phi0(y - h)) / (2 * h)
    total, _ = quad(dphi, 0.6, 0.8, limit=200)
    assert -total == pytest.approx(1.0, abs=1e-7)


def test_partition_of_unity_1000_points():
    y = np.geomspace(1e-6, 1e6, 1000)
    assert np.max(np.abs(lp_sum(y) - 1.0)) < 1e-12
    s2 = lp_sum(y, power=2)
    assert np.all(s2 >= 0.5 - 1e-12) and np.all(s2 <= 1.0 + 1e-12)


def test_explicit_sum_at_137():
    total = sum(q_j(j, 1.37) for j in range(-40, 41))
    assert total == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=300, deadline=None)
@given(j=st.integers(-30, 30), y=st.floats(1e-12, 1e12))
def test_q_j_support_is_exact(j, y):
    if y < math.ldexp(1.0, j - 1) or y > math.ldexp(1.0, j + 1):
        assert q_j(j, y) == 0.0
    assert 0.0 <= q_j(j, y) <= 1.0


def test_q0_outside_support():
    assert q_j(0, 2.5) == 0.0


def test_band_indices_examples():
    assert list(band_indices(1, 8)) == [1, 2]
    r = band_indices(0, 1)
    assert r.lo is None and r.hi == -1
    assert -100 in r and 0 not in r
    assert band_indices(3, 3.5).empty
    assert list(band_indices(1, 8, closed_lo=False)) == [2]
    assert list(band_indices(1, 8, closed_hi=False)) == [1]
    with pytest.raises(ParameterError):
        list(band_indices(1, math.inf))


@settings(max_examples=100, deadline=None)
@given(lo=st.floats(0.01, 100), ratio=st.floats(2.0, 1e4))
def test_band_indices_brute_force(lo, ratio):
    hi = lo * ratio
    got = set(band_indices(lo, hi).bounded(-40, 40))
    want = {k for k in range(-40, 41)
            if math.ldexp(1.0, k - 1) >= lo and math.ldexp(1.0, k + 1) <= hi}
    assert got == want


@pytest.mark.parametrize("y0,y1", [(1.0, 100.0), (0.01, 3.0), (2.0, 1000.0)])
def test_index_set_sum_is_one_on_the_inner_interval(y0, y1):
    assert y0 <= 3 / 32 * y1
    rng = band_indices(y0, y1, closed_lo=False, closed_hi=False)
    ys = np.linspace(16 / 5 * y0, 3 / 10 * y1, 400)[1:-1]
    total = sum(q_j(k, ys) for k in rng)
    assert np.max(np.abs(total - 1.0)) < 1e-12


def test_dyadic_sum_window_telescopes():
    ys = np.geomspace(0.01, 100, 300)
    direct = sum(q_j(k, ys) for k in range(-2, 4))
    assert np.max(np.abs(dyadic_sum_window(ys, -2, 3) - direct)) < 1e-14


@pytest.mark.parametrize("spec,tag", [
    ("dyadic:0", "dyadic:0"), ("dyadic_sum:-2:3", "dyadic_sum:-2:3"),
    ("window:0.5:4", "window:0.5:4"), ("halfline_low:1", "halfline_low:1"),
    ("halfline_high:2", "halfline_high:2:16"), ("halfline_high:2:10", "halfline_high:2:10"),
])
def test_parse_band_round_trip(spec, tag):
    b = parse_band(spec)
    assert b.tag == tag
    assert parse_band(b.tag) == b


@pytest.mark.parametrize("spec", ["dyadic", "dyadic:x", "window:2:1", "halfline_high:2:1",
                                  "bogus:1", "halfline_low:-1"])
def test_parse_band_rejects(spec):
    with pytest.raises(ParameterError):
        parse_band(spec)


@pytest.mark.parametrize("spec", ["dyadic:0", "dyadic_sum:-1:2", "window:0.5:4",
                                  "halfline_low:1", "halfline_high:2:10"])
def test_windows_vanish_outside_support_and_are_bounded(spec):
    b = parse_band(spec)
    lo, hi = b.support()
    ys = np.concatenate([np.linspace(0, lo, 50)[:-1] if lo > 0 else [],
                         np.linspace(hi, 3 * hi, 50)[1:]])
    assert np.all(b(ys) == 0.0)
    inner = np.linspace(lo, hi, 500)
    v = b(inner)
    assert np.all((v >= 0) & (v <= 1))


def test_band_plateaus():
    assert np.all(parse_band("window:1:4")(np.linspace(1, 4, 50)) == 1.0)
    assert np.all(parse_band("halfline_low:2")(np.linspace(0, 2, 50)) == 1.0)
    b = parse_band("halfline_high:1:8")
    assert np.all(b(np.linspace(1, 8, 50)) == 1.0)
    assert b.truncated and b.describe()["truncated_at"] == 8.0


def test_dyadic_range_requires_bounds():
    with pytest.raises(ParameterError):
        DyadicRange(None, 3).bounded()
    assert list(DyadicRange(None, 3).bounded(lo=1)) == [1, 2, 3]


def test_from_interval():
    b = FrequencyBand.from_interval(1, 8)
    assert (b.k_lo, b.k_hi) == (1, 2)
    with pytest.raises(ParameterError):
        FrequencyBand.from_interval(0, 1)
    assert FrequencyBand.from_interval(0, 1, k_floor=-5).k_lo == -5
