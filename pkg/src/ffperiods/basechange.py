"""Base change (Shintani for κ = σ, Kawanaka for κ = τ) identified through twisted traces.

ρ ∈ Irr(G_κ) base changes to π when Tr[π(g)T_κ] = χ_ρ(g g^κ); we test this on
every g with g g^κ ∈ G_κ.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .chartable import genericity_multiplicity
from .field_tower import AdditiveCharacter
from .gelfand_graev import BesselTable, _cyc_matmul, matrix_trace, twisted_trace_fast, whittaker_model
from .matgroup import opposite, psi_exponents
from .periods import Workbench, lambda_period
from .report import VerificationReport


class BaseChangeError(ValueError):
    pass


@dataclass
class BaseChangePair:
    pi: int
    kappa: str
    rho: int            # index in Irr(G_κ), -1 if none
    dim_rho: int
    candidates: tuple[int, ...]
    samples: int
    status: str         # unique | ambiguous | failed


def infer_dim_rho(wb: Workbench, B: BesselTable, iota: str) -> Fraction:
    """λ_ι(B_π)·dim π·|G_σ||G_τ|/|G|: the degree the test-vector formula forces on ρ."""
    return lambda_period(wb, iota, B) * B.degree / wb.order_ratio


def sample_set(wb: Workbench, kappa: str) -> np.ndarray:
    """S = {g : g g^κ ∈ G_κ}."""
    cache = wb.cache.setdefault("samples", {})
    key = kappa
    if key not in cache:
        G = wb.G
        prods = G.mul(np.arange(G.order), wb.ctx.perm(kappa))
        fixed = np.zeros(G.order, dtype=bool)
        fixed[wb.ctx.G_iota(kappa)] = True
        cache[key] = np.flatnonzero(fixed[prods])
    return cache[key]


def twisted_character_data(wb: Workbench, kappa: str):
    """(S, class of g g^κ in G_κ) for the sample set."""
    G = wb.G
    S = sample_set(wb, kappa)
    H = wb.ctx.subgroup(wb.sub_name(kappa))
    prods = G.mul(S, wb.ctx.perm(kappa)[S])
    return S, H.class_of[H.index(G.mats[prods])]


def match_by_twisted_trace(wb: Workbench, B: BesselTable, kappa: str) -> BaseChangePair:
    """The ρ ∈ Irr(G_κ) with χ_ρ(g g^κ) = Tr[π(g)T_κ] on all of S."""
    cache = wb.cache.setdefault("pairs", {})
    key = (B.char_index, kappa, B.setup.psi.mode, tuple(B.setup.scalings))
    if key in cache:
        return cache[key]
    if B.setup.psi.mode != kappa and wb.ctx.tower.p != 2:
        raise BaseChangeError("T_κ needs ψ = ψ^κ")
    if not wb.stable(kappa)[B.char_index]:
        raise BaseChangeError(f"π{B.char_index} is not isomorphic to its κ-twist")
    S, cls = twisted_character_data(wb, kappa)
    num, den = twisted_trace_fast(B, wb.ctx.perm(kappa), wb.twisted_labels(kappa))
    num, den = num[S], den[S]
    rho_vals = wb.sub_table(kappa).values[:, cls]  # (ρ, |S|, φ)
    ok = (rho_vals.astype(object) * den[None, :, None] == num[None].astype(object)).all(axis=(1, 2))
    cands = tuple(int(i) for i in np.flatnonzero(ok))
    degs = wb.sub_table(kappa).degrees
    if len(cands) == 1:
        status, rho = "unique", cands[0]
    elif cands:
        status, rho = "ambiguous", max(cands, key=lambda c: (int(degs[c]), -c))
    else:
        status, rho = "failed", -1
    pair = BaseChangePair(B.char_index, kappa, rho, int(degs[rho]) if rho >= 0 else 0, cands,
                          len(S), status)
    cache[key] = pair
    return pair


def check_twisted_model(B: BesselTable, kappa_perm, samples: int = 10, seed: int = 0) -> dict:
    """Explicit Whittaker-model checks of T_κ on random elements.

    Returns flags for T² = 1, T B = B, π(g)T = Tπ(g^κ) and agreement of the
    model trace with the fast twisted-trace formula.
    """
    W = whittaker_model(B, seed)
    G = B.setup.G
    K = B.K
    T = W.intertwiner(kappa_perm)
    d = W.dim
    sq = _cyc_matmul(T, T)
    flags = {"square": all(sq[i][j] == (1 if i == j else 0) for i in range(d) for j in range(d))}
    b = W.bessel_coordinates()
    Tb = [sum((T[i][j] * b[j] for j in range(1, d)), T[i][0] * b[0]) for i in range(d)]
    flags["fixes_bessel"] = all(x == y for x, y in zip(Tb, b))
    num, den = twisted_trace_fast(B, kappa_perm)
    rng = np.random.default_rng(seed)
    inter = trace = True
    for g in rng.choice(G.order, samples, replace=False):
        A = W.action(int(g))
        Ak = W.action(int(kappa_perm[g]))
        if _cyc_matmul(A, T) != _cyc_matmul(T, Ak):
            inter = False
        if matrix_trace(_cyc_matmul(A, T)) != K.scalar(num[g], den[g]):
            trace = False
    flags["intertwines"] = inter
    flags["trace_formula"] = trace
    return flags


def check_model_character(B: BesselTable, seed: int = 0) -> bool:
    """Traces of the action matrices reproduce χ_π on class representatives."""
    W = whittaker_model(B, seed)
    G = B.setup.G
    K = B.K
    chi = B.setup.table.values[B.char_index]
    for c, rep in enumerate(G.classes.reps):
        if matrix_trace(W.action(int(rep))) != K.scalar(chi[c]):
            return False
    return True


def gow_distinction_equivalences(wb: Workbench, report: VerificationReport | None = None
                                 ) -> VerificationReport:
    """G_σ-distinguished ⇔ χ∘τ = χ and G_τ-distinguished ⇔ χ∘σ = χ, multiplicities ≤ 1."""
    report = report or VerificationReport(wb.descriptor)
    for iota in ("sigma", "tau"):
        kappa = opposite(iota)
        dist = wb.distinguished(iota)
        stable = wb.stable(kappa)
        report.add("gow", "multiplicity of the trivial character of G_ι is at most one",
                   dict(iota=iota), int(dist.max()), 1, bool(dist.max() <= 1))
        report.add("gow", "π is G_ι-distinguished iff π ≅ π∘κ", dict(iota=iota),
                   int((dist == 1).sum()), int(stable.sum()), bool(((dist == 1) == stable).all()))
    return report


def base_change_table(wb: Workbench, kappa: str, exploratory: bool = False) -> list[BaseChangePair]:
    """Matched pairs for every κ-stable generic π."""
    if kappa == "tau" and wb.ctx.tower.p == 2 and not exploratory:
        raise BaseChangeError("the τ-side correspondence is asserted only for odd p "
                              "(pass exploratory=True to evaluate it anyway)")
    stable = wb.stable(kappa)
    return [match_by_twisted_trace(wb, B, kappa)
            for i, B in wb.bessels(kappa).items() if stable[i]]


def verify_base_change(wb: Workbench, kappa: str, exploratory: bool = False,
                       report: VerificationReport | None = None) -> VerificationReport:
    report = report or VerificationReport(wb.descriptor)
    flagged = kappa == "tau" and wb.ctx.tower.p == 2
    if flagged and not exploratory:
        return report
    pairs = base_change_table(wb, kappa, exploratory=True)
    rho_generic = _generic_flags(wb, kappa)
    for pair in pairs:
        report.add("basechange", "unique ρ with χ_ρ(gg^κ) = Tr[π(g)T_κ] on S",
                   dict(kappa=kappa, pi=pair.pi, samples=pair.samples), pair.status, "unique",
                   exploratory=flagged)
        if pair.rho >= 0:
            report.add("basechange", "the matched ρ is generic", dict(kappa=kappa, pi=pair.pi,
                       rho=pair.rho), bool(rho_generic[pair.rho]), True, exploratory=flagged)
    rhos = [p.rho for p in pairs if p.rho >= 0]
    report.add("basechange", "base change is injective on generic representations",
               dict(kappa=kappa), len(set(rhos)), len(rhos), exploratory=flagged)
    return report


def _generic_flags(wb: Workbench, kappa: str) -> np.ndarray:
    """Genericity of Irr(G_κ): multiplicity in Ind_{N_κ}^{G_κ} θ for a non-degenerate θ.

    θ(n) = ψ(c·Σ n_{i,i+1}) restricted to N_κ = N ∩ G_κ, with c the first scale
    in E^× whose Gelfand-Graev module is multiplicity free (degenerate
    characters never are).
    """
    ctx = wb.ctx
    G = wb.G
    H = ctx.subgroup(wb.sub_name(kappa))
    table = wb.sub_table(kappa)
    Nk = ctx.N_iota(kappa)
    pos = H.index(G.mats[Nk])
    i = np.arange(ctx.n - 1)
    slots = G.mats[Nk][:, i, i + 1]
    for c in ctx.E.nonzero():
        psi = AdditiveCharacter(ctx.E, int(c))
        exps = psi_exponents(psi, slots)
        if not exps.any():
            continue
        mult = genericity_multiplicity(table.K, H, table.values, pos, exps, ctx.tower.p)
        if mult.max() <= 1:
            return mult == 1
    raise BaseChangeError(f"no non-degenerate character of N ∩ G_{kappa} found")
