from __future__ import annotations

from fractions import Fraction

import mpmath
import numpy as np
import pytest

from ffperiods.matgroup import opposite
from ffperiods.periods import (INVOLUTIONS, SUITES, PeriodError, ell_period, float_crosscheck,
                               float_lambda, lambda_period, mu_period, predicted_lambda,
                               reconstruct, run_suite)
from ffperiods.report import VerificationReport

# λ_ι(B_π) on GL_2(F_4), frozen from an exhaustive run (π index -> (λ, dim π))
LAMBDA_F4 = {
    "sigma": {9: (Fraction(5, 6), 4), 10: (Fraction(5, 6), 4), 11: (Fraction(5, 6), 4),
              12: (Fraction(1, 3), 5), 13: (Fraction(1, 3), 5), 14: (Fraction(1, 3), 5)},
    "tau": {11: (Fraction(5, 6), 4), 14: (Fraction(1, 3), 5)},
}


def test_order_constant(wb4):
    assert wb4.order_ratio == Fraction(5, 3)


@pytest.mark.parametrize("iota", INVOLUTIONS)
def test_frozen_lambda_values(wb4, iota):
    dist = wb4.distinguished(iota)
    got = {i: (lambda_period(wb4, iota, B), B.degree)
           for i, B in wb4.bessels(opposite(iota)).items() if dist[i]}
    assert got == LAMBDA_F4[iota]


@pytest.mark.parametrize("iota", INVOLUTIONS)
def test_lambda_against_complex_average(wb4, iota):
    """λ_ι(B) = |G_ι|^-1 Σ_{h ∈ G_ι} B(h), summed in complex floating point."""
    idx = wb4.ctx.G_iota(iota)
    for i, B in wb4.bessels(opposite(iota)).items():
        direct = (B.K.to_complex(B.on_group[idx]) / B.denom).mean()
        assert abs(direct - float(lambda_period(wb4, iota, B))) < 1e-12


@pytest.mark.parametrize("iota", INVOLUTIONS)
def test_lambda_equals_mu_and_vanishing(wb4, iota):
    kappa = opposite(iota)
    dist = wb4.distinguished(iota)
    for i, B in wb4.bessels(kappa).items():
        lam = lambda_period(wb4, iota, B)
        assert lam == mu_period(wb4, kappa, B)
        assert (lam != 0) == bool(dist[i])


def test_predicted_lambda_is_positive_integer_multiple(wb4):
    for i, (lam, dim) in LAMBDA_F4["sigma"].items():
        rho = lam * dim / wb4.order_ratio
        assert rho.denominator == 1 and rho > 0
        assert predicted_lambda(wb4, int(rho), dim) == lam


def test_mode_mismatch_rejected(wb9):
    # odd p: the trace character is nontrivial on N(F), so it cannot pair with G_σ
    B = next(iter(wb9.bessels("sigma").values()))
    with pytest.raises(PeriodError):
        lambda_period(wb9, "sigma", B)


def test_ell_period_bounded_by_mirabolic_mass(wb4):
    # |ℓ(B)| ≤ |P(F)|/|GL_2(F)| since |B| ≤ 1
    bound = Fraction(len(wb4.ctx.P_F), len(wb4.ctx.G_sigma))
    for B in wb4.bessels("tau").values():
        assert abs(ell_period(wb4, B)) <= bound


@pytest.mark.parametrize("suite", SUITES)
def test_suites_pass_on_f4(wb4, suite):
    report = run_suite(wb4, suite)
    assert report.rows or suite == "scalar"
    assert report.passed, [r for r in report.failures]


def test_float_mode(wb4):
    report = float_crosscheck(wb4, precision=53, tol=1e-9)
    assert report.rows and report.passed
    B = wb4.bessels("tau")[11]
    lo = float_lambda(wb4, "sigma", B, precision=20)
    assert abs(lo - mpmath.mpf(5) / 6) < 1e-5
    assert reconstruct(float_lambda(wb4, "sigma", B), 6) == Fraction(5, 6)


def test_report_csv_is_reproducible(wb4):
    a = run_suite(wb4, "reg").to_csv(timings=False)
    b = run_suite(wb4, "reg").to_csv(timings=False)
    assert a == b and a.startswith("suite,anchor,params,lhs,rhs,pass,micros")
    r = VerificationReport({})
    r.add("x", "a", {}, 1, 2)
    assert not r.passed and len(r.failures) == 1
    r2 = VerificationReport({})
    r2.add("x", "a", {}, 1, 2, exploratory=True)
    assert r2.passed
