from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ffperiods import kernels
from ffperiods.field_tower import FiniteField

python = kernels.backend_module("python")
try:
    cython = kernels.backend_module("cython")
except ImportError:  # extension not built
    cython = None

needs_ext = pytest.mark.skipif(cython is None, reason="compiled kernels not built")
F = FiniteField(3, 2)


@needs_ext
@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 4))
def test_backends_agree(seed, n):
    rng = np.random.default_rng(seed)
    A = rng.integers(0, F.order, (17, n, n))
    B = rng.integers(0, F.order, (17, n, n))
    args = (F.add_table, F.mul_table)
    assert (python.matmul(A, B, *args) == cython.matmul(A, B, *args)).all()
    codes = python.encode(A, F.order)
    assert (codes == cython.encode(A, F.order)).all()
    assert (python.decode(codes, F.order, n) == A).all()
    assert (cython.decode(codes, F.order, n) == A).all()
    a, b = rng.integers(0, 5, 40), rng.integers(0, 5, 40)
    assert (python.pair_histogram(a, b, 5) == cython.pair_histogram(a, b, 5)).all()


@needs_ext
def test_bruhat_backends_agree():
    from ffperiods.matgroup import linear_group

    G = linear_group(F, 2)
    bits = (F.add_table, F.mul_table, F.neg_table, F.inv_table)
    m1, s1 = python.bruhat(G.mats, *bits)
    m2, s2 = cython.bruhat(G.mats, *bits)
    assert (m1 == m2).all() and (s1 == s2).all()


def test_matmul_matches_integer_product_mod_p():
    P = FiniteField(5, 1)
    rng = np.random.default_rng(0)
    A = rng.integers(0, 5, (10, 3, 3))
    B = rng.integers(0, 5, (10, 3, 3))
    assert (kernels.matmul(P, A, B) == (A @ B) % 5).all()


def test_backend_selection(monkeypatch):
    import importlib

    monkeypatch.setenv("FFPERIODS_PURE_PYTHON", "1")
    mod = importlib.reload(kernels)
    try:
        assert mod.BACKEND == "python"
    finally:
        monkeypatch.delenv("FFPERIODS_PURE_PYTHON")
        importlib.reload(kernels)
