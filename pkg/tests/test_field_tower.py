from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_add, gf_irreducible_p, gf_mul, gf_rem

from ffperiods.field_tower import FieldError, FieldTower, FiniteField

FIELDS = [(2, 1), (2, 2), (3, 1), (3, 2), (2, 4), (5, 2)]


def _poly(field, x):
    """Big-endian coefficient list of the polynomial encoded by x."""
    return [int(c) for c in field.digits[x][::-1]]


def _code(field, poly):
    poly = [0] * (field.k - len(poly)) + list(poly)
    return sum(int(c) * field.p**i for i, c in enumerate(reversed(poly)))


@pytest.fixture(scope="module", params=FIELDS, ids=lambda pk: f"F{pk[0]}^{pk[1]}")
def field(request):
    return FiniteField(*request.param)


def test_modulus_is_irreducible_and_primitive(field):
    mod = [int(c) for c in reversed(field.modulus)]
    assert gf_irreducible_p(mod, field.p, ZZ)
    assert sorted(field.exp_table.tolist()) == list(range(1, field.order))
    if field.k > 1:  # the class of x generates the multiplicative group
        assert field.multiplicative_order(field.p) == field.order - 1


def test_arithmetic_matches_polynomial_oracle(field):
    mod = [int(c) for c in reversed(field.modulus)]
    xs = field.elements()
    for a in xs[:: max(1, len(xs) // 7)]:
        for b in xs:
            prod = gf_rem(gf_mul(_poly(field, a), _poly(field, b), field.p, ZZ), mod, field.p, ZZ)
            assert int(field.mul(a, b)) == _code(field, prod)
            assert int(field.add(a, b)) == _code(field, gf_add(_poly(field, a), _poly(field, b),
                                                               field.p, ZZ))


def test_inverses(field):
    nz = field.nonzero()
    assert (field.mul(nz, field.inv(nz)) == 1).all()
    assert (field.add(field.elements(), field.neg(field.elements())) == 0).all()


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 80), st.integers(0, 80), st.integers(0, 80))
def test_distributive_f81(a, b, c):
    F = FiniteField(3, 4)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))


def test_rejects_bad_input():
    with pytest.raises(FieldError):
        FiniteField(4, 1)
    with pytest.raises(FieldError):
        FiniteField(2, 2, modulus=(1, 0, 1))  # x^2 + 1 = (x + 1)^2 over F_2


@pytest.fixture(scope="module", params=[(2, 1), (3, 1), (2, 2)], ids=lambda pk: f"q={pk[0]**pk[1]}")
def tower(request):
    return FieldTower(*request.param)


def test_subfield_and_frobenius(tower):
    E = tower.E
    assert len(tower.subfield) == tower.q
    x = E.elements()
    assert (tower.frobenius(tower.frobenius(x)) == x).all()
    emb = tower.embedding
    F = tower.F
    a, b = np.meshgrid(F.elements(), F.elements())
    assert (emb[F.mul(a, b)] == E.mul(emb[a], emb[b])).all()
    assert (emb[F.add(a, b)] == E.add(emb[a], emb[b])).all()


def test_trace_and_norm_land_in_F_and_are_surjective(tower):
    x = tower.E.elements()
    tr, nm = tower.trace_E_F(x), tower.norm_E_F(x[1:])
    assert tower.in_subfield(tr).all() and tower.in_subfield(nm).all()
    assert set(tr.tolist()) == set(tower.subfield.tolist())
    assert set(nm.tolist()) == set(tower.subfield[tower.subfield != 0].tolist())
    # each nonzero norm has q + 1 preimages
    assert (np.bincount(nm)[tower.subfield[tower.subfield != 0]] == tower.q + 1).all()


def test_additive_characters(tower):
    E = tower.E
    delta = tower.trace_zero_delta()
    assert delta != 0 and tower.trace_E_F(delta) == 0
    for mode in ("sigma", "tau"):
        psi = tower.additive_character(mode)
        assert psi.exponent(E.elements()).any()  # nontrivial
        a, b = np.meshgrid(E.elements(), E.elements())
        assert ((psi.exponent(E.add(a, b)) - psi.exponent(a) - psi.exponent(b)) % E.p == 0).all()
    # the τ-mode character kills F
    assert (tower.additive_character("tau").exponent(tower.subfield) == 0).all()
