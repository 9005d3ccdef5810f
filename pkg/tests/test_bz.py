from __future__ import annotations

import numpy as np
import pytest

from ffperiods.bz import (BZError, ExplicitFunctors, MirabolicTower, PnRep, _bz_context,
                          cuspidal_mask, gl1_characters, hom_dimension, kable_multiplicity,
                          leibniz_check, verify_explicit_n2, verify_filtration, verify_leibniz,
                          verify_relations)
from ffperiods.field_tower import FieldTower
from ffperiods.report import VerificationReport


@pytest.fixture(scope="module")
def t4(wb4):
    return _bz_context(wb4)


def test_mirabolic_irreducibles(t4):
    # Irr(P_2(F_Q)): Q - 1 characters through GL_1 and one of degree Q - 1
    dims = sorted(t4.irr("P", 2).dims.tolist())
    assert dims == [1, 1, 1, 3]
    assert t4.group("P", 2).order == 12 and t4.group("G", 1).order == 3


def test_first_derivative_is_jacquet_dimension(t4):
    G = t4.irr("G", 2)
    table = t4.table("G", 2)
    cusp = cuspidal_mask(t4.group("G", 2), t4.K, table.values)
    for i, deg in enumerate(G.dims.tolist()):
        prof = t4.derivatives(G, i)
        d1, d2 = prof.dims
        if deg == 1:
            assert (d1, d2) == (1, 0)
        elif cusp[i]:
            assert (d1, d2) == (0, 1) and deg == 3
        elif deg == 4:            # Steinberg twists: q
            assert (d1, d2) == (1, 1)
        else:                     # principal series: q + 1
            assert (deg, d1, d2) == (5, 2, 1)
        assert prof.filtration_dimension() == deg
        assert (t4.filtration(G[i]) == t4.res(G[i]))


def test_relation_battery_n2(t4):
    report = VerificationReport({})
    verify_relations(t4, report)
    verify_explicit_n2(t4, report)
    assert report.rows and report.passed, report.failures


def test_filtration_and_leibniz_n2(t4, wb4):
    report = VerificationReport({})
    verify_filtration(t4, wb4.generic, report)
    verify_leibniz(t4, report)
    assert report.passed, report.failures
    G1 = t4.group("G", 1)
    chars = gl1_characters(G1, t4.K)
    results = leibniz_check(t4, [(G1, chars[1]), (G1, chars[2])])
    # χ_1 × χ_2: one way to remove one block, one way to remove both
    assert results == [(1, 2, True), (2, 1, True)]


def test_kable(t4):
    report = VerificationReport({})
    kable_multiplicity(t4, 2, report)
    assert report.rows and report.passed


def test_explicit_functors_match_characters(t4):
    ex = ExplicitFunctors(t4)
    for j in range(3):
        V = ex.gl1_module(j)
        W = ex.phi_plus(ex.trivial_P1())
        assert W.is_homomorphism()
        assert ex.psi_plus(V).is_homomorphism()
        # Φ⁻Φ⁺ = 1 and Ψ⁻Ψ⁺ = 1 on modules
        assert ex.phi_minus(W).dim == 1
        assert hom_dimension(ex.psi_minus(ex.psi_plus(V)), V) == 1


def test_errors(t4):
    G = t4.irr("G", 2)
    with pytest.raises(BZError):
        t4.derivative(G[0], 3)
    bad = PnRep("G", 2, -G[0].values)
    with pytest.raises(BZError):
        t4.decompose(bad)
    with pytest.raises(BZError):
        MirabolicTower(FieldTower(2, 1), 0)
    with pytest.raises(BZError):
        MirabolicTower(FieldTower(2, 1), 2).table("G", 2)
