from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from ffperiods.gelfand_graev import (NotGeneric, bessel_via_hecke, dim_from_bessel,
                                     dim_from_bessel_cellwise, relevant_cells, whittaker_model)
from ffperiods.periods import SplitBench


@pytest.mark.parametrize("n,q,count", [(2, 2, 2), (2, 4, 12), (3, 4, 48), (3, 2, 4)])
def test_relevant_cell_counts(n, q, count):
    assert len(relevant_cells(n, q)) == count


def test_gl2_f2_bessel_values(gl2f2):
    # sign: 1 on the identity cell, -1 on antidiag(1, 1); Steinberg: 1 and 1/2
    got = {}
    for B in gl2f2.setup.all_bessel():
        got[B.degree] = [(comp, torus, v.to_fraction()) for comp, torus, v in B.rows()]
    assert got == {1: [((2,), (1,), 1), ((1, 1), (1, 1), -1)],
                   2: [((2,), (1,), 1), ((1, 1), (1, 1), Fraction(1, 2))]}


@pytest.fixture(scope="module", params=[(2, 3, 1), (2, 2, 2), (3, 2, 1)], ids=str)
def bench(request):
    return SplitBench(*request.param)


def test_generic_count(bench):
    q = bench.field.order
    gen = bench.setup.generic_indices
    assert len(gen) == len(bench.setup.cells)
    if bench.n == 2:
        assert len(gen) == q * q - q


def test_bessel_matches_direct_character_sum(bench):
    """B(g) = |N|^-1 Σ_n ψ(n)^-1 χ(gn), evaluated with complex numbers at every g."""
    setup = bench.setup
    G = setup.G
    chi = setup.table.to_complex()
    psiN = np.exp(-2j * np.pi * setup.psi_on_N / setup.p)
    NM = G.mats[setup.N]
    rng = np.random.default_rng(3)
    pts = rng.choice(G.order, min(G.order, 60), replace=False)
    for B in setup.all_bessel():
        direct = np.array([(chi[B.char_index][G.class_of[G.index(G.matmul(G.mats[g], NM))]] * psiN).sum()
                           for g in pts]) / len(setup.N)
        fast = B.K.to_complex(B.on_group[pts]) / B.denom
        assert np.allclose(direct, fast)


def test_bessel_biequivariance(bench):
    setup = bench.setup
    G = setup.G
    rng = np.random.default_rng(0)
    B = setup.all_bessel()[-1]
    vals = B.K.to_complex(B.on_group) / B.denom
    zeta = np.exp(2j * np.pi / setup.p)
    for _ in range(30):
        g = rng.integers(G.order)
        a, b = rng.choice(len(setup.N), 2)
        n1, n2 = setup.N[a], setup.N[b]
        h = G.mul(G.mul(n1, g), n2)
        assert np.isclose(vals[h], zeta ** (setup.psi_on_N[a] + setup.psi_on_N[b]) * vals[g])


def test_engines_and_dimension(bench):
    setup = bench.setup
    direct = {B.char_index: B.values for B in setup.all_bessel()}
    hecke = bessel_via_hecke(setup)
    assert {B.char_index for B in hecke} == set(direct)
    for B in hecke:
        assert (B.values == direct[B.char_index]).all()
        assert dim_from_bessel_cellwise(B) == B.degree
    assert all(dim_from_bessel(B) == B.degree for B in setup.all_bessel())


def test_non_generic_rejected(gl2f2):
    setup = gl2f2.setup
    trivial = int(np.flatnonzero(~setup.generic_mask)[0])
    with pytest.raises(NotGeneric):
        setup.bessel_via_character(trivial)


def test_whittaker_model_is_a_representation():
    sb = SplitBench(2, 3, 1)
    G = sb.G
    B = max(sb.setup.all_bessel(), key=lambda b: b.degree)
    W = whittaker_model(B)
    rng = np.random.default_rng(1)
    g, h = (int(x) for x in rng.choice(G.order, 2))
    A, Bm, C = W.action(g), W.action(h), W.action(int(G.mul(g, h)))
    d = W.dim
    prod = [[sum((A[i][k] * Bm[k][j] for k in range(1, d)), A[i][0] * Bm[0][j]) for j in range(d)]
            for i in range(d)]
    assert prod == C
    trace = sum((W.action(g)[i][i] for i in range(1, d)), W.action(g)[0][0])
    chi = sb.setup.table.values[B.char_index, G.class_of[g]]
    assert trace == B.K.scalar(chi)
