import math
import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from dispersive.abcd import (CANONICAL, classify, compute_puvr, max_positive_multiplicity,
                             verify_p_nondegeneracy)
from dispersive.errors import FitError, ParameterError
from dispersive.phases import fit_asymptotic, make_model
from dispersive.polynomials import RealPolynomial, real_roots

Z, Y = sp.symbols("z y", positive=True)

# (alpha, ell) per regime, frozen from the published table of high-frequency behaviour
EXPECTED = {
    1: (1, 0.0), 2: (0, 0.0), 3: (0, 0.0), 4: (-3, math.sqrt(1 / 2)), 5: (-4, 0.0),
    6: (-3, 0.0), 7: (-4, 0.0), 8: (-6, 0.0), 9: (-3, math.sqrt(2.0)),
    10: (-5, math.sqrt(3 / 4)),
}


def symbolic_puvr(a, b, c, d):
    """P, U, V, R from differentiating g(y) = y sqrt(U(y^2)/V(y^2)) symbolically."""
    a, b, c, d = (sp.Rational(str(v)) for v in (a, b, c, d))
    U = sp.expand((1 - a * Z) * (1 - c * Z))
    V = sp.expand((1 + b * Z) * (1 + d * Z))
    Uy, Vy = U.subs(Z, Y ** 2), V.subs(Z, Y ** 2)
    g = Y * sp.sqrt(Uy / Vy)
    g1 = sp.diff(g, Y)
    g2 = sp.diff(g, Y, 2)
    P = sp.simplify(g1 * sp.sqrt(Uy * Vy ** 3))
    R = sp.simplify(g2 * Uy ** sp.Rational(3, 2) * Vy ** sp.Rational(5, 2) / Y)
    to_z = lambda e: sp.Poly(sp.expand(e).subs(Y, sp.sqrt(Z)), Z)
    return to_z(P), sp.Poly(U, Z), sp.Poly(V, Z), to_z(R)


def as_fractions(poly):
    coeffs = [Fraction(str(c)) for c in reversed(poly.all_coeffs())]
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


@pytest.mark.parametrize("tup", [(0, 0, 0, 1), (-1, 0, -1, 0), (-1, 1, -2, 1),
                                 (Fraction(-1, 3), Fraction(1, 2), -2, Fraction(5, 4)),
                                 (-1, Fraction(2, 3), -1, 2), (0, 1, -3, 0)])
def test_puvr_matches_symbolic_differentiation(tup):
    P, U, V, R = compute_puvr(*tup)
    sP, sU, sV, sR = symbolic_puvr(*tup)
    assert tuple(P.coeffs) == as_fractions(sP)
    assert tuple(U.coeffs) == as_fractions(sU)
    assert tuple(V.coeffs) == as_fractions(sV)
    assert tuple(R.coeffs) == as_fractions(sR)


def test_puvr_small_cases():
    P, U, V, R = compute_puvr(0, 0, 0, 1)
    assert P.coeffs == (1,) and U.coeffs == (1,) and V.coeffs == (1, 1) and R.coeffs == (-3,)
    P, U, V, _ = compute_puvr(-1, 0, -1, 0)
    assert P.coeffs == (1, 4, 3) and U.coeffs == (1, 2, 1) and V.coeffs == (1,)
    assert real_roots(P) == []
    with pytest.raises(ParameterError):
        compute_puvr(0, 0, 0, 0)


@pytest.mark.parametrize("d", [Fraction(1, 3), 1, 2, Fraction(7, 2)])
def test_r_is_minus_three_d(d):
    assert classify(0, 0, 0, d).R.coeffs == (Fraction(-3) * d,)


def test_real_roots_examples():
    assert real_roots(RealPolynomial([-1, 0, 1])) == [(pytest.approx(1.0, rel=1e-12), 1)]
    cube = RealPolynomial([-8, 12, -6, 1])
    assert real_roots(cube) == [(pytest.approx(2.0, rel=1e-12), 3)]
    assert real_roots(RealPolynomial([2, 1])) == []


@pytest.mark.parametrize("row", sorted(CANONICAL))
def test_canonical_rows(row):
    c = classify(*CANONICAL[row])
    alpha, ell = EXPECTED[row]
    assert c.row == row
    assert c.alpha == alpha
    assert c.ell == pytest.approx(ell, rel=1e-14, abs=0.0)


@pytest.mark.parametrize("row", sorted(CANONICAL))
def test_fitted_second_derivative_exponent_matches_alpha(row):
    m = make_model("abcd", **dict(zip("abcd", CANONICAL[row])))
    fit = fit_asymptotic(m, "infinity", 2, window=(1e3, 1e4))
    assert fit.alpha == pytest.approx(EXPECTED[row][0], abs=0.05)


def test_table_examples():
    c = classify(-1, 0, -1, 0)
    assert (c.ell, c.alpha) == (0.0, 1)
    c = classify(0, 1, 0, 1)
    assert (c.ell, c.alpha) == (0.0, -3)
    # the all-ones-magnitude tuple sits on the excluded set: a + b = 0 and a+b+c+d = 0
    with pytest.raises(ParameterError):
        classify(-1, 1, -1, 1)


def test_near_boundary_is_flagged():
    c = classify(-1, 0, -1e-12 * 5, 1)
    assert "c" in c.near_boundary


def random_valid_tuple(rng, denom=4, top=8):
    while True:
        a, c = (Fraction(-rng.randint(0, top), denom) for _ in range(2))
        b, d = (Fraction(rng.randint(0, top), denom) for _ in range(2))
        try:
            classify(a, b, c, d)
        except ParameterError:
            continue
        return a, b, c, d


def brute_force_m(R):
    """Largest multiplicity of a positive root via sympy's exact factorisation."""
    poly = sp.Poly([sp.Rational(str(x)) for x in reversed(R.coeffs)], sp.Symbol("w"))
    if poly.degree() <= 0:
        return 0
    counts = {}
    for r in poly.real_roots():
        if r > 0:
            counts[r] = counts.get(r, 0) + 1
    return max(counts.values(), default=0)


def test_m_against_exact_factorisation():
    rng = random.Random(7)
    seen = set()
    for _ in range(200):
        tup = random_valid_tuple(rng)
        res = classify(*tup)
        m = brute_force_m(res.R)
        assert res.m == m, tup
        seen.add(m)
    assert seen >= {0, 1}


def test_m_detects_multiple_roots_directly():
    x1, x3 = RealPolynomial([Fraction(-1), 1]), RealPolynomial([Fraction(-3), 1])
    p = x1 * x1 * x3 * x3 * x3
    assert max_positive_multiplicity(p) == 3


def test_p_nondegeneracy_on_500_random_tuples():
    rng = random.Random(11)
    for _ in range(500):
        assert verify_p_nondegeneracy(*random_valid_tuple(rng, denom=8, top=24))


@settings(max_examples=200, deadline=None)
@given(a=st.fractions(-4, 0, max_denominator=16), b=st.fractions(0, 4, max_denominator=16),
       c=st.fractions(-4, 0, max_denominator=16), d=st.fractions(0, 4, max_denominator=16))
def test_every_valid_tuple_lands_in_exactly_one_row(a, b, c, d):
    try:
        res = classify(a, b, c, d)
    except ParameterError:
        # only the excluded set is rejected
        prod = (a + b) * (a + d) * (c + b) * (c + d)
        assert prod == 0 and a + b + c + d == 0
        return
    assert 1 <= res.row <= 10
    assert res.alpha == EXPECTED[res.row][0]
    assert verify_p_nondegeneracy(a, b, c, d)


def test_degree_bounds_on_r():
    rng = random.Random(3)
    for _ in range(100):
        a, b, c, d = random_valid_tuple(rng)
        R = classify(a, b, c, d).R
        bound = 6
        if b * d == 0:
            bound = 5
        if a * c == 0:
            bound = min(bound, 4)
        assert R.degree <= bound


def test_fit_rejects_vanishing_derivative():
    with pytest.raises(FitError):
        fit_asymptotic(make_model("power", alpha=0.0), "infinity", 3)
