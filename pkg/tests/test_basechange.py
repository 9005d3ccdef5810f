from __future__ import annotations

import pytest

from ffperiods.basechange import (BaseChangeError, base_change_table, check_model_character,
                                  check_twisted_model, gow_distinction_equivalences,
                                  infer_dim_rho)
from ffperiods.matgroup import opposite


def test_shintani_counts(wb4, wb9):
    # κ = σ: stable irreducibles of GL_2(F_{q²}) are as many as Irr(GL_2(F_q))
    assert int(wb4.stable("sigma").sum()) == 3
    assert int(wb9.stable("sigma").sum()) == 8
    assert len(base_change_table(wb4, "sigma")) == 2  # the generic ones: q² - q
    assert len(base_change_table(wb9, "sigma")) == 6


@pytest.mark.parametrize("kappa", ["sigma", "tau"])
def test_matched_degree_agrees_with_periods(wb9, kappa):
    iota = opposite(kappa)
    for pair in base_change_table(wb9, kappa):
        assert pair.status == "unique"
        B = wb9.bessels(kappa)[pair.pi]
        assert infer_dim_rho(wb9, B, iota) == pair.dim_rho


def test_unitary_side_needs_odd_characteristic(wb4):
    with pytest.raises(BaseChangeError):
        base_change_table(wb4, "tau")
    pairs = base_change_table(wb4, "tau", exploratory=True)
    assert pairs


def test_gow_equivalences(wb4, wb9):
    for wb in (wb4, wb9):
        assert gow_distinction_equivalences(wb).passed


def test_twisted_intertwiner_in_an_explicit_model(wb4):
    kappa = "sigma"
    B = wb4.bessels(kappa)[base_change_table(wb4, kappa)[0].pi]
    flags = check_twisted_model(B, wb4.ctx.perm(kappa), samples=6)
    assert flags == {"square": True, "fixes_bessel": True, "intertwines": True, "trace_formula": True}
    assert check_model_character(B)
