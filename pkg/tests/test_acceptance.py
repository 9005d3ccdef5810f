"""Acceptance criteria 1-10, each checked at its stated tolerance.

A pass/fail line per criterion is printed in the terminal summary.
"""

from __future__ import annotations

import math
import time
from fractions import Fraction

import pytest

from ffperiods.bz import MirabolicTower, counterexample_pairs, kable_multiplicity, verify_bz
from ffperiods.field_tower import FieldTower
from ffperiods.matgroup import opposite, permutation_length
from ffperiods.periods import (INVOLUTIONS, SplitBench, Workbench, float_crosscheck,
                               lambda_period, relevant_weyl, involutive_for, run_suite,
                               split_norm, verify_dim_enumerated, verify_engines,
                               verify_main_theorem, verify_split_identity)
from ffperiods.report import VerificationReport

ENVELOPE = 300.0  # seconds, criteria 1-2 including the character tables


def record(acceptance, number, ok, note=""):
    acceptance[number] = (bool(ok), note)
    print(f"criterion {number}: {'PASS' if ok else 'FAIL'} {note}")


def _main_side(iota, acceptance, number):
    t0 = time.perf_counter()
    wb = Workbench.build(2, 3, 1)  # fresh: the timing includes every table
    kappa = opposite(iota)
    report = verify_main_theorem(wb, iota)
    float_rows = [r for r in float_crosscheck(wb, 53, 1e-9).rows if f"'iota': '{iota}'" in r.params]
    elapsed = time.perf_counter() - t0
    rows = [r for r in report.rows if "= dim ρ" in r.anchor]
    dist = wb.distinguished(iota)
    expected = sum(1 for i in wb.bessels(kappa) if dist[i] == 1)
    rho_group = wb.ctx.subgroup(wb.sub_name(kappa))
    degrees = set(wb.sub_table(kappa).degrees.tolist())
    ok = (report.passed and len(rows) == expected > 0 and len(float_rows) == expected
          and all(r.passed for r in float_rows) and elapsed < ENVELOPE)
    for r in rows:
        value = Fraction(r.lhs)
        ok &= value.denominator == 1 and value > 0 and int(value) in degrees and "unique" in r.params
    record(acceptance, number, ok,
           f"{len(rows)} generic G_{iota}-distinguished π, ρ on a group of order {rho_group.order}, "
           f"{elapsed:.1f}s")
    assert ok, report.failures


def test_criterion_1_test_vector_formula_sigma(acceptance):
    _main_side("sigma", acceptance, 1)


def test_criterion_2_test_vector_formula_tau(acceptance):
    _main_side("tau", acceptance, 2)


def test_criterion_3_scalar_identity(wb9, acceptance):
    report = run_suite(wb9, "scalar")
    rows = {r.anchor: r for r in report.rows}
    ell_rows = [r for r in report.rows if r.anchor.startswith("ℓ(B_π)")]
    lam_rows = [r for r in report.rows if r.anchor.startswith("λ = ratio")]
    ok = (report.passed and rows["|G/N(E)| / |U/N(F)| closed form"].lhs == "20"
          and rows["relatively cuspidal set = predicted set"].passed
          and ell_rows and all(r.lhs == "1/16" for r in ell_rows) and len(lam_rows) == len(ell_rows))
    record(acceptance, 3, ok, f"{len(lam_rows)} relatively cuspidal π, ratio 20, ℓ = 1/16")
    assert ok, report.failures


def _stabilizer_rows(wb, base):
    ctx = wb.ctx
    out = []
    for kappa in INVOLUTIONS:
        for perm in relevant_weyl(ctx.n):
            if involutive_for(ctx, perm, kappa):
                e = math.comb(ctx.n, 2) - permutation_length(perm)
                out.append((ctx.stabilizer_counts(perm, kappa), (base(ctx) ** e,) * 2))
    return out


def test_criterion_4_period_comparison(wb4, wb9, acceptance):
    ok = True
    literal = True
    for wb in (wb4, wb9):
        ok &= run_suite(wb, "orbits").passed  # λ = μ, supports, counts as powers of |F|
        literal &= all(got == want for got, want in _stabilizer_rows(wb, lambda c: c.Q))
    record(acceptance, 4, ok and literal,
           "λ = μ and supports exact; enumerated stabilizers are powers of |F|, "
           "so the |E|-power form fails at w = 1" if not literal else "all clauses exact")
    assert ok


@pytest.mark.xfail(strict=True, reason="stabilizers have |F|^(C(n,2)-ℓ(w)) elements, not |E|^(...)")
def test_criterion_4_stabilizers_as_powers_of_E(wb4, wb9):
    for wb in (wb4, wb9):
        for got, want in _stabilizer_rows(wb, lambda c: c.Q):
            assert got == want


def test_criterion_5_reg_sum(wb4, wb9, acceptance):
    totals = []
    for wb in (wb4, wb9):
        totals.append(sum((B.degree * lambda_period(wb, "sigma", B)
                           for B in wb.bessels("tau").values()), Fraction(0)))
    ok = totals == [15, 40]
    record(acceptance, 5, ok, f"sums {totals[0]} and {totals[1]}")
    assert ok


def test_criterion_6_split_identity(acceptance):
    t0 = time.perf_counter()
    ok = True
    for n, p, k in [(2, 2, 1), (2, 3, 1), (2, 2, 2), (3, 2, 1)]:
        sb = SplitBench(n, p, k)
        ok &= verify_split_identity(sb).passed
        if (n, p, k) == (2, 2, 1):
            ok &= sorted(split_norm(B) for B in sb.setup.all_bessel()) == [Fraction(1, 2), 1]
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 60
    record(acceptance, 6, ok, f"GL_2(F_2), GL_2(F_3), GL_2(F_4), GL_3(F_2) in {elapsed:.1f}s")
    assert ok


def test_criterion_7_counterexample(wb9, acceptance):
    pairs = counterexample_pairs(wb9)
    ok = bool(pairs) and all(d["p_dim"] == 3 and d["g_dim"] == 1 and d["irreducible"]
                             for d in pairs)
    record(acceptance, 7, ok, f"{len(pairs)} pairs (χ_1, χ_2), P(F)-invariants 3, GL_2(F)-invariants 1")
    assert ok


@pytest.fixture(scope="module")
def wb4_3():
    return Workbench.build(3, 2, 1)


def test_criterion_8_bz_battery(wb4, wb9, wb4_3, acceptance):
    report = VerificationReport({})
    verify_bz(wb4, report, relations_up_to=2)
    verify_bz(wb4_3, report, relations_up_to=3)  # relations at m = 2, 3 over F_4
    verify_bz(wb9, report, relations_up_to=3)    # relations at m = 2, 3 over F_9
    anchors = {r.anchor for r in report.rows}
    sums = [r for r in report.rows if r.anchor == "P(F)-invariants = Σ_k m_k"]
    ok = (report.passed and "Res_P π = Σ_k (Φ⁺)^{k-1}Ψ⁺(π^{(k)})" in anchors
          and sum("P(F)-invariants of Φ⁺τ" in r.anchor for r in report.rows) >= 4
          and sums and all(r.lhs == "3" for r in sums))
    record(acceptance, 8, ok, f"{len(report.rows)} exact checks")
    assert ok, report.failures


def test_criterion_9_engines(wb4, wb9, acceptance):
    report = VerificationReport({})
    for wb in (wb4, wb9):
        verify_engines(wb, report)
        for mode in INVOLUTIONS:
            verify_dim_enumerated(wb.setup(mode), report)
    for n, p, k in [(2, 2, 1), (2, 3, 1), (3, 2, 1)]:
        sb = SplitBench(n, p, k)
        verify_engines(sb.setup, report)
        verify_dim_enumerated(sb.setup, report)
    ok = report.passed and len(report.rows) > 0
    record(acceptance, 9, ok, f"{len(report.rows)} exact checks")
    assert ok, report.failures


def test_criterion_10_psi_independence(wb4, wb9, acceptance):
    rows = run_suite(wb4, "psi").rows + run_suite(wb9, "psi").rows
    ok = bool(rows) and all(r.passed for r in rows)
    record(acceptance, 10, ok, f"{len(rows)} admissible ψ sweeps")
    assert ok
