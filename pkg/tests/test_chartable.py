from __future__ import annotations

from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ffperiods.cache import CacheCorrupted, DiskCache, use_disk_cache
from ffperiods.chartable import character_table, dixon, induce, restrict
from ffperiods.cyclotomic import cyclotomic_field
from ffperiods.field_tower import FiniteField
from ffperiods.matgroup import linear_group, mirabolic_group

coeff = st.lists(st.integers(-6, 6), min_size=8, max_size=8)


@settings(max_examples=50, deadline=None)
@given(coeff, coeff, st.sampled_from([15, 24, 30]))
def test_cyclotomic_product_matches_complex(a, b, m):
    K = cyclotomic_field(m)
    A = np.array((a * 3)[: K.phi])
    B = np.array((b * 3)[: K.phi])
    assert np.isclose(K.to_complex(K.mul(A, B)), K.to_complex(A) * K.to_complex(B))
    assert np.isclose(K.to_complex(K.conj(A)), np.conj(K.to_complex(A)))
    assert np.isclose(K.to_complex(K.mul_zeta(A, 7)), K.to_complex(A) * np.exp(2j * np.pi * 7 / m))


def test_reduce_paths_agree():
    K = cyclotomic_field(30)
    rng = np.random.default_rng(0)
    small = rng.integers(-50, 50, (20, 30))
    assert (K.reduce(small) == small @ K.R).all()
    huge = rng.integers(-2**40, 2**40, (5, 30))
    assert (K.reduce(huge) == huge.astype(object).dot(K.R.astype(object))).all()


def test_cyc_scalars():
    K = cyclotomic_field(12)
    z = K.zeta()
    w = z * z * z * z  # primitive cube root
    assert w * w + w + 1 == K.rational(0)
    half = K.rational(Fraction(1, 2))
    assert (half * 2).is_rational() and (half * 2).to_fraction() == 1
    assert not (z + z.conj()).is_rational()  # ζ + ζ̄ = √3
    assert abs(complex(z + z.conj()) - 3 ** 0.5) < 1e-12
    assert (z * z.inverse()) == K.rational(1)


def _gl2_degrees(q):
    out = Counter()
    for degree, count in [(1, q - 1), (q, q - 1), (q + 1, (q - 1) * (q - 2) // 2), (q - 1, q * (q - 1) // 2)]:
        out[degree] += count
    return +out


@pytest.mark.parametrize("p,k", [(2, 1), (3, 1), (2, 2), (5, 1)])
def test_gl2_tables(p, k):
    q = p**k
    G = linear_group(FiniteField(p, k), 2)
    T = character_table(G)
    T.verify()
    assert Counter(T.degrees.tolist()) == _gl2_degrees(q)
    assert G.num_classes == q * q - 1


def test_gl2_f2_is_s3():
    G = linear_group(FiniteField(2, 1), 2)
    T = character_table(G)
    # classes: identity, then by least member; compare as a set of rows of rationals
    vals = {tuple(int(v[0]) for v in row) for row in T.values}
    sizes = T.sizes.tolist()
    rows = set()
    for row in vals:
        rows.add(tuple(sorted(zip(sizes, row))))
    expected = {((1, 1), (2, 1), (3, 1)), ((1, 1), (2, 1), (3, -1)), ((1, 2), (2, -1), (3, 0))}
    assert rows == expected


def test_gl3_f2_degrees():
    G = linear_group(FiniteField(2, 1), 3)
    T = character_table(G)
    assert sorted(T.degrees.tolist()) == [1, 3, 3, 6, 7, 8]


def test_frobenius_reciprocity():
    F = FiniteField(3, 1)
    G = linear_group(F, 2)
    P = mirabolic_group(F, 2)
    TG = character_table(G)
    TP = character_table(P, TG.K)
    fusion = G.class_fusion(P)
    ind = induce(G, P, TP.values)
    res = restrict(TG.values, fusion)
    lhs = TG.inner_products(ind)          # ⟨Ind θ, χ⟩_G
    rhs = TP.inner_products(TP.values, res)  # ⟨θ, Res χ⟩_P
    assert (lhs == rhs).all()


def test_dixon_is_seed_independent_up_to_order():
    G = linear_group(FiniteField(2, 2), 2)
    a = dixon(G, seed=0)
    b = dixon(G, seed=5)
    assert sorted(map(bytes, a.values)) == sorted(map(bytes, b.values))


def test_disk_cache_round_trip(tmp_path):
    G = linear_group(FiniteField(3, 1), 2)
    disk = DiskCache(tmp_path)
    fresh = dixon(G)
    disk.save_table(fresh)
    loaded = disk.load_table(G, 0)
    assert (loaded.values == fresh.values).all() and loaded.K == fresh.K
    assert disk.hits == 1
    # corrupt the payload
    npz = next(tmp_path.glob("table-*.npz"))
    data = bytearray(npz.read_bytes())
    data[-10] ^= 0xFF
    npz.write_bytes(bytes(data))
    with pytest.raises(CacheCorrupted):
        disk.load_table(G, 0)


def test_character_table_uses_disk_cache(tmp_path):
    disk = DiskCache(tmp_path)
    use_disk_cache(disk)
    try:
        G = linear_group(FiniteField(2, 1), 3)
        character_table(G)
        G2 = linear_group(FiniteField(2, 1), 3)
        T2 = character_table(G2)
        assert disk.misses == 1 and disk.hits == 1
        T2.verify()
    finally:
        use_disk_cache(None)
