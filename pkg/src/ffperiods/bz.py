"""Bernstein-Zelevinsky calculus on the mirabolic tower P_1 ⊂ P_2 ⊂ ... ⊂ P_n of GL_n(E).

Representations are handled through their characters.  Each functor becomes a
linear map between class-function spaces, stored as an integer tensor
T[out class, in class, t] (t the exponent of ζ_p carried by θ_n) together with
an exact per-class normalisation.

    Ψ⁺ : R(G_{m-1}) → R(P_m)    inflation through P_m → G_{m-1}
    Ψ⁻ : R(P_m) → R(G_{m-1})    U_m-invariants
    Φ⁺ : R(P_{m-1}) → R(P_m)    Ind_{P_{m-1}U_m}^{P_m}(V ⊗ θ_m)
    Φ⁻ : R(P_m) → R(P_{m-1})    (U_m, θ_m)-eigenspace

with θ_m(u) = ψ(u_{m-1,m}).  ψ is taken trivial on F so the statements about
P_n(F)-invariant forms apply.  G_0 and P_1 are the trivial group.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from math import gcd

import numpy as np

from .chartable import (CharacterTable, character_table, induce_from_elements, multiplicity_in_subset,
                        genericity_multiplicity, psi_values)
from .cyclotomic import CyclotomicField, cyclotomic_field
from .field_tower import AdditiveCharacter, FieldTower
from .matgroup import MatrixGroup, general_linear, identity, linear_group, mirabolic_matrices
from .report import VerificationReport


class BZError(ValueError):
    """Size mismatch or a bookkeeping failure (negative multiplicity, inexact division)."""


# -- class-function data ---------------------------------------------------------------------

@dataclass
class PnRep:
    """A character of G_m (kind "G") or P_m (kind "P"): values (A, classes, φ), A characters."""

    kind: str
    level: int
    values: np.ndarray

    @property
    def dims(self) -> np.ndarray:
        return self.values[:, 0, 0].copy()

    def __len__(self):
        return self.values.shape[0]

    def __getitem__(self, i) -> "PnRep":
        v = self.values[i]
        return PnRep(self.kind, self.level, v[None] if v.ndim == 2 else v)

    def __add__(self, other: "PnRep") -> "PnRep":
        _same_space(self, other)
        return PnRep(self.kind, self.level, self.values + other.values)

    def __eq__(self, other) -> bool:
        return (isinstance(other, PnRep) and (self.kind, self.level) == (other.kind, other.level)
                and self.values.shape == other.values.shape and bool((self.values == other.values).all()))

    def is_zero(self) -> np.ndarray:
        return ~self.values.reshape(len(self), -1).any(axis=1)


def _same_space(a: PnRep, b: PnRep) -> None:
    if (a.kind, a.level) != (b.kind, b.level):
        raise BZError(f"{a.kind}_{a.level} and {b.kind}_{b.level} are different groups")


@dataclass
class ClassMap:
    """Y[out] = (num[out]/den[out])·Σ_{in,t} T[out,in,t] ζ_p^t X[in]."""

    source: tuple[str, int]
    target: tuple[str, int]
    T: np.ndarray
    num: np.ndarray
    den: np.ndarray

    def __call__(self, K: CyclotomicField, p: int, X: PnRep) -> PnRep:
        if (X.kind, X.level) != self.source:
            raise BZError(f"functor expects {self.source[0]}_{self.source[1]}, "
                          f"got {X.kind}_{X.level}")
        vals = X.values
        acc = np.zeros((len(X), self.T.shape[0], K.phi), dtype=np.int64)
        step = K.m // p
        for t in range(self.T.shape[2]):
            Tt = self.T[:, :, t]
            if not Tt.any():
                continue
            part = np.einsum("oi,aif->aof", Tt, vals)
            acc += part if t == 0 else K.mul_zeta(part, t * step)
        acc *= self.num[None, :, None]
        den = self.den[None, :, None]
        if (acc % den).any():
            raise BZError("functor values are not integral (bookkeeping error)")
        return PnRep(self.target[0], self.target[1], acc // den)


def _normalise(num, den) -> tuple[np.ndarray, np.ndarray]:
    num = np.asarray(num, dtype=np.int64)
    den = np.asarray(den, dtype=np.int64)
    g = np.gcd(num, den)
    return num // g, den // g


def _vectors(Q: int, length: int) -> np.ndarray:
    """All column vectors of E^length (codes), shape (Q^length, length)."""
    return (np.arange(Q ** length)[:, None] // Q ** np.arange(length)) % Q


def _embed(A: np.ndarray, cols: np.ndarray) -> np.ndarray:
    """[[A_i, c_j], [0, 1]] for every A_i and column c_j: shape (|A|·|cols|, m, m)."""
    m = A.shape[-1] + 1
    M = np.zeros((len(A), len(cols), m, m), dtype=np.int64)
    M[:, :, : m - 1, : m - 1] = A[:, None]
    M[:, :, : m - 1, m - 1] = cols[None]
    M[:, :, m - 1, m - 1] = 1
    return M.reshape(-1, m, m)


def _trivial_group(E, name: str) -> MatrixGroup:
    return MatrixGroup(E, identity(1)[None], name)


# -- the tower -----------------------------------------------------------------------------------

class MirabolicTower:
    """Groups, character tables and functor maps for levels 1..n over E.

    ``top`` optionally supplies (GL_n(E), its character table) so a workbench
    table is reused instead of rebuilt; ``with_top`` builds GL_n(E) itself.
    Without either, only P_1..P_n and G_0..G_{n-1} are available.
    """

    def __init__(self, tower: FieldTower, n: int, top: tuple[MatrixGroup, CharacterTable] | None = None,
                 seed: int = 0, with_top: bool = False):
        if n < 1:
            raise BZError("the tower needs n >= 1")
        self.tower = tower
        self.E = tower.E
        self.Q = self.E.order
        self.p = tower.p
        self.n = n
        self.seed = seed
        self.psi: AdditiveCharacter = tower.additive_character("tau")
        self._groups: dict[tuple[str, int], MatrixGroup] = {}
        self._tables: dict[tuple[str, int], CharacterTable] = {}
        self._maps: dict[tuple[str, int], ClassMap] = {}
        self.with_top = with_top or top is not None
        if top is not None:
            G, table = top
            if G.n != n:
                raise BZError("top group has the wrong size")
            self._groups[("G", n)] = G
            self._tables[("G", n)] = table

    def __repr__(self):
        return f"MirabolicTower(n={self.n}, E=F_{self.Q})"

    # -- groups and tables ---------------------------------------------------------------
    def group(self, kind: str, level: int) -> MatrixGroup:
        key = (kind, level)
        if key not in self._groups:
            if kind == "G" and level == 0:
                grp = _trivial_group(self.E, "GL_0")
            elif kind == "P":
                grp = MatrixGroup(self.E, mirabolic_matrices(self.E, level), f"P_{level}(F_{self.Q})",
                                  self.seed)
            elif kind == "G":
                grp = linear_group(self.E, level)
            else:
                raise BZError(f"unknown kind {kind!r}")
            self._groups[key] = grp
        return self._groups[key]

    @cached_property
    def K(self) -> CyclotomicField:
        """Common field for P_1..P_n, G_0..G_{n-1} and, when supplied, G_n."""
        keys = [("P", lvl) for lvl in range(1, self.n + 1)] + [("G", lvl) for lvl in range(self.n)]
        if self.with_top:
            keys.append(("G", self.n))
        m = self.p
        for key in keys:
            mk = self._raw_table(*key).K.m
            m = m * mk // gcd(m, mk)
        return cyclotomic_field(m)

    def _raw_table(self, kind: str, level: int) -> CharacterTable:
        key = (kind, level)
        if key not in self._tables:
            self._tables[key] = character_table(self.group(kind, level), seed=self.seed)
        return self._tables[key]

    def table(self, kind: str, level: int) -> CharacterTable:
        if (kind, level) == ("G", self.n) and not self.with_top:
            raise BZError(f"GL_{self.n} is not part of this tower (pass top= or with_top=True)")
        return self._raw_table(kind, level).lift(self.K)

    def irr(self, kind: str, level: int) -> PnRep:
        return PnRep(kind, level, self.table(kind, level).values)

    def trivial(self, kind: str, level: int) -> PnRep:
        r = self.group(kind, level).num_classes
        vals = np.zeros((1, r, self.K.phi), dtype=np.int64)
        vals[..., 0] = 1
        return PnRep(kind, level, vals)

    def contragredient(self, X: PnRep) -> PnRep:
        return PnRep(X.kind, X.level, X.values[:, self.group(X.kind, X.level).inverse_class])

    def decompose(self, X: PnRep) -> np.ndarray:
        """Multiplicities in Irr; negative or fractional entries are a hard failure."""
        m = self.table(X.kind, X.level).decompose(X.values)
        if (m < 0).any():
            raise BZError(f"negative multiplicity in a character of {X.kind}_{X.level}")
        return m

    def inner(self, X: PnRep, Y: PnRep) -> np.ndarray:
        _same_space(X, Y)
        return self.table(X.kind, X.level).inner_products(X.values, Y.values)

    def theta_exponent(self, cols: np.ndarray) -> np.ndarray:
        """θ_m on U_m written through its column: ψ(last coordinate)."""
        if cols.shape[1] == 0:
            return np.zeros(len(cols), dtype=np.int64)
        return self.psi.exponent(cols[:, -1]).astype(np.int64)

    # -- functor maps ------------------------------------------------------------------------
    def _map(self, name: str, level: int) -> ClassMap:
        key = (name, level)
        if key not in self._maps:
            self._maps[key] = getattr(self, f"_build_{name}")(level)
        return self._maps[key]

    def _check_level(self, level: int, low: int = 1) -> None:
        if not low <= level <= self.n:
            raise BZError(f"level {level} is outside the tower")

    def _build_res(self, m: int) -> ClassMap:
        G, P = self.group("G", m), self.group("P", m)
        r = P.num_classes
        T = np.zeros((r, G.num_classes, 1), dtype=np.int64)
        T[np.arange(r), G.class_of[G.index(P.mats[P.classes.reps])], 0] = 1
        return ClassMap(("G", m), ("P", m), T, np.ones(r, np.int64), np.ones(r, np.int64))

    def _build_psi_plus(self, m: int) -> ClassMap:
        P, G = self.group("P", m), self.group("G", m - 1)
        r = P.num_classes
        T = np.zeros((r, G.num_classes, 1), dtype=np.int64)
        if m == 1:
            T[0, 0, 0] = 1
        else:
            blocks = P.mats[P.classes.reps][:, : m - 1, : m - 1]
            T[np.arange(r), G.class_of[G.index(blocks)], 0] = 1
        return ClassMap(("G", m - 1), ("P", m), T, np.ones(r, np.int64), np.ones(r, np.int64))

    def _average_over_U(self, m: int, target: tuple[str, int], twisted: bool) -> ClassMap:
        """(1/|U_m|)Σ_u θ(u)^{-1}X(g u) on class representatives g of the target group."""
        P, H = self.group("P", m), self.group(*target)
        reps = H.mats[H.classes.reps]
        if m == 1:
            T = np.ones((1, 1, 1), dtype=np.int64)
            return ClassMap(("P", 1), target, T, np.ones(1, np.int64), np.ones(1, np.int64))
        cols = _vectors(self.Q, m - 1)
        # g·u(x) = [[g, g x], [0, 1]]; P_{m-1} representatives are already (m-1)-square
        mul = self.group("G", m - 1).matmul
        elems = np.zeros((len(reps), len(cols), m, m), dtype=np.int64)
        for a, g in enumerate(reps):
            gs = np.ascontiguousarray(np.broadcast_to(g, (len(cols),) + g.shape))
            gcols = mul(gs, np.ascontiguousarray(cols[:, :, None]))[:, :, 0]
            elems[a] = _embed(g[None], gcols)
        cls = P.class_of[P.index(elems.reshape(-1, m, m))].reshape(len(reps), len(cols))
        t = (-self.theta_exponent(cols)) % self.p if twisted else np.zeros(len(cols), np.int64)
        T = np.zeros((len(reps), P.num_classes, self.p), dtype=np.int64)
        np.add.at(T, (np.repeat(np.arange(len(reps)), len(cols)), cls.ravel(), np.tile(t, len(reps))), 1)
        num, den = _normalise(np.ones(len(reps)), np.full(len(reps), len(cols)))
        return ClassMap(("P", m), target, T, num, den)

    def _build_psi_minus(self, m: int) -> ClassMap:
        return self._average_over_U(m, ("G", m - 1), twisted=False)

    def _build_phi_minus(self, m: int) -> ClassMap:
        if m < 2:
            raise BZError("Φ⁻ needs level >= 2")
        return self._average_over_U(m, ("P", m - 1), twisted=True)

    def _build_phi_plus(self, m: int) -> ClassMap:
        if m < 2:
            raise BZError("Φ⁺ needs level >= 2")
        P, Pm = self.group("P", m), self.group("P", m - 1)
        cols = _vectors(self.Q, m - 1)
        elems = _embed(Pm.mats, cols)
        out_cls = P.class_of[P.index(elems)]
        in_cls = np.repeat(Pm.class_of, len(cols))
        t = np.tile(self.theta_exponent(cols), Pm.order)
        T = np.zeros((P.num_classes, Pm.num_classes, self.p), dtype=np.int64)
        np.add.at(T, (out_cls, in_cls, t), 1)
        # Ind(g_k) = |P| / (|H| |C_k|) Σ_{h ∈ H ∩ C_k} (τ ⊗ θ)(h)
        num, den = _normalise(np.full(P.num_classes, P.order),
                              len(elems) * P.classes.sizes.astype(np.int64))
        return ClassMap(("P", m - 1), ("P", m), T, num, den)

    # -- functors ------------------------------------------------------------------------------
    def _apply(self, name: str, level: int, X: PnRep) -> PnRep:
        self._check_level(level)
        return self._map(name, level)(self.K, self.p, X)

    def res(self, X: PnRep) -> PnRep:
        """Restriction G_m → P_m."""
        return self._apply("res", X.level, X)

    def psi_plus(self, X: PnRep) -> PnRep:
        return self._apply("psi_plus", X.level + 1, X)

    def psi_minus(self, X: PnRep) -> PnRep:
        return self._apply("psi_minus", X.level, X)

    def phi_plus(self, X: PnRep) -> PnRep:
        return self._apply("phi_plus", X.level + 1, X)

    def phi_minus(self, X: PnRep) -> PnRep:
        return self._apply("phi_minus", X.level, X)

    def decompose_Pn(self, X: PnRep) -> tuple[PnRep, PnRep]:
        """(Ψ⁺Ψ⁻X, Φ⁺Φ⁻X); the second is zero at level 1."""
        psi_part = self.psi_plus(self.psi_minus(X))
        if X.level == 1:
            return psi_part, PnRep("P", 1, np.zeros_like(X.values))
        return psi_part, self.phi_plus(self.phi_minus(X))

    # -- derivatives -----------------------------------------------------------------------------
    def derivative(self, X: PnRep, k: int) -> PnRep:
        """τ^{(k)} = Ψ⁻(Φ⁻)^{k-1}τ for τ on P_m (or G_m, restricted first)."""
        if X.kind == "G":
            X = self.res(X)
        if not 1 <= k <= X.level:
            raise BZError(f"derivative order {k} outside 1..{X.level}")
        for _ in range(k - 1):
            X = self.phi_minus(X)
        return self.psi_minus(X)

    def lift_derivative(self, D: PnRep, k: int) -> PnRep:
        """(Φ⁺)^{k-1}Ψ⁺ applied to a character of G_{m-k}."""
        X = self.psi_plus(D)
        for _ in range(k - 1):
            X = self.phi_plus(X)
        return X

    def derivatives(self, X: PnRep, index: int = 0) -> "DerivativeProfile":
        """Profile of one character (row ``index`` of X) of G_m."""
        one = X[index]
        parts = []
        for k in range(1, one.level + 1):
            D = self.derivative(one, k)
            self.decompose(D)  # raises on negative multiplicities
            parts.append((k, D))
        return DerivativeProfile(index, one.level, parts, self.Q)

    def filtration(self, X: PnRep) -> PnRep:
        """Σ_k (Φ⁺)^{k-1}Ψ⁺(τ^{(k)}); equals Res_P τ exactly."""
        R = self.res(X) if X.kind == "G" else X
        total = PnRep("P", R.level, np.zeros_like(R.values))
        for k in range(1, R.level + 1):
            total = total + self.lift_derivative(self.derivative(R, k), k)
        return total

    # -- Whittaker data on P_m -------------------------------------------------------------------
    def N_in_P(self, m: int) -> np.ndarray:
        P = self.group("P", m)
        M = P.mats
        lower = np.tril(np.ones((m, m), dtype=bool), -1)
        ok = (M[:, lower] == 0).all(axis=1) & (np.diagonal(M, axis1=1, axis2=2) == 1).all(axis=1)
        return np.flatnonzero(ok)

    def psi_on_N(self, M: np.ndarray) -> np.ndarray:
        m = M.shape[-1]
        i = np.arange(m - 1)
        slots = M[:, i, i + 1]
        return self.psi.exponent(slots).sum(axis=1) % self.p if m > 1 else np.zeros(len(M), np.int64)

    def gelfand_graev_P(self, m: int) -> PnRep:
        """Ind_{N_m}^{P_m} ψ."""
        P = self.group("P", m)
        idx = self.N_in_P(m)
        vals = psi_values(self.K, self.psi_on_N(P.mats[idx]), self.p)
        return PnRep("P", m, induce_from_elements(P, idx, vals)[None])

    # -- F-points ----------------------------------------------------------------------------------
    def rational_points(self, kind: str, level: int) -> np.ndarray:
        G = self.group(kind, level)
        if G.order == 1:
            return np.arange(1)
        return np.flatnonzero(self.tower.in_subfield(G.mats).all(axis=(1, 2)))

    def invariant_dimension(self, X: PnRep) -> np.ndarray:
        """dim Hom_{H(F)}(X, 1) for H = G_m or P_m."""
        G = self.group(X.kind, X.level)
        if G.order == 1:
            return X.dims
        return multiplicity_in_subset(self.K, G, X.values, self.rational_points(X.kind, X.level))


@dataclass
class DerivativeProfile:
    pi: int
    n: int
    parts: list[tuple[int, PnRep]]
    Q: int = 0

    @property
    def dims(self) -> list[int]:
        return [int(D.dims[0]) for _, D in self.parts]

    @property
    def highest(self) -> int:
        """Largest k with π^{(k)} ≠ 0."""
        nz = [k for k, D in self.parts if not D.is_zero()[0]]
        return max(nz) if nz else 0

    @property
    def generic(self) -> bool:
        return self.dims[-1] == 1

    def filtration_dimension(self) -> int:
        """Σ_k dim π^{(k)}·dim (Φ⁺)^{k-1}Ψ⁺(1): the dimension the filtration predicts."""
        return sum(d * _phi_plus_index(self.Q, self.n, k) for (k, _), d in zip(self.parts, self.dims))

    def to_dict(self) -> dict:
        return {"pi": self.pi, "n": self.n, "highest": self.highest, "generic": self.generic,
                "derivatives": [{"k": k, "dim": int(D.dims[0])} for k, D in self.parts]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _phi_plus_index(Q: int, n: int, k: int) -> int:
    """dim (Φ⁺)^{k-1}Ψ⁺(V) / dim V = Π_{j=n-k+2}^{n} (Q^{j-1} - 1)."""
    out = 1
    for j in range(n - k + 2, n + 1):
        out *= Q ** (j - 1) - 1
    return out


# -- module-level functor API -------------------------------------------------------------------

def psi_plus(tower: MirabolicTower, V: PnRep) -> PnRep:
    return tower.psi_plus(V)


def phi_plus(tower: MirabolicTower, V: PnRep) -> PnRep:
    return tower.phi_plus(V)


def psi_minus(tower: MirabolicTower, V: PnRep) -> PnRep:
    return tower.psi_minus(V)


def phi_minus(tower: MirabolicTower, V: PnRep) -> PnRep:
    return tower.phi_minus(V)


def decompose_Pn(tower: MirabolicTower, V: PnRep) -> tuple[PnRep, PnRep]:
    return tower.decompose_Pn(V)


def derivatives(tower: MirabolicTower, V: PnRep, index: int = 0) -> DerivativeProfile:
    return tower.derivatives(V, index)


# -- cuspidality, parabolic induction, GL_1 characters ---------------------------------------------

def block_unipotent(G: MatrixGroup, i: int) -> np.ndarray:
    """Indices of U_{(i, n-i)} = [[I_i, X], [0, I_{n-i}]] in G."""
    n = G.n
    Q = G.Q
    X = _vectors(Q, i * (n - i)).reshape(-1, i, n - i)
    M = np.broadcast_to(identity(n), (len(X), n, n)).copy()
    M[:, :i, i:] = X
    return G.index(M)


def cuspidal_mask(G: MatrixGroup, K: CyclotomicField, values) -> np.ndarray:
    """No invariants under any standard block unipotent radical."""
    values = np.asarray(values)
    ok = np.ones(values.shape[0], dtype=bool)
    for i in range(1, G.n):
        ok &= multiplicity_in_subset(K, G, values, block_unipotent(G, i)) == 0
    return ok


def parabolic_elements(G: MatrixGroup, sizes) -> np.ndarray:
    """Indices of the standard block-upper-triangular parabolic with the given block sizes."""
    n = G.n
    if sum(sizes) != n:
        raise BZError("block sizes must add up to n")
    M = G.mats
    ok = np.ones(G.order, dtype=bool)
    start = 0
    for s in sizes:
        ok &= (M[:, start + s:, start:start + s] == 0).all(axis=(1, 2))
        start += s
    return np.flatnonzero(ok)


def parabolic_induce(G: MatrixGroup, K: CyclotomicField, blocks) -> np.ndarray:
    """ρ_1 × ... × ρ_r: blocks are (GL_{n_i} group, class values (r_i, φ)); returns (r, φ)."""
    sizes = [grp.n for grp, _ in blocks]
    idx = parabolic_elements(G, sizes)
    mats = G.mats[idx]
    keys = []
    start = 0
    for (grp, _), s in zip(blocks, sizes):
        sub = np.ascontiguousarray(mats[:, start:start + s, start:start + s])
        keys.append(grp.class_of[grp.index(sub)])
        start += s
    # the Levi value depends only on the tuple of block classes
    combos, inverse = np.unique(np.stack(keys, axis=1), axis=0, return_inverse=True)
    vals = np.broadcast_to(K.one(), (len(combos), K.phi)).copy()
    for (_, bv), col in zip(blocks, combos.T):
        vals = K.mul(vals, np.asarray(bv)[col])
    return induce_from_elements(G, idx, vals[inverse.ravel()])


def gl1_characters(G1: MatrixGroup, K: CyclotomicField) -> np.ndarray:
    """χ_j(x) = ζ_{Q-1}^{j·log x} for j = 0..Q-2, on the classes of GL_1(E): (Q-1, r, φ)."""
    E = G1.field
    Q = E.order
    if K.m % (Q - 1):
        raise BZError("the cyclotomic field does not contain the (Q-1)-th roots of unity")
    logs = E.log_table[G1.mats[G1.classes.reps][:, 0, 0]]
    j = np.arange(Q - 1)[:, None]
    return K.R[(j * logs[None] * (K.m // (Q - 1))) % K.m]


def p_invariant_dimension(G: MatrixGroup, K: CyclotomicField, values, PF_idx) -> np.ndarray:
    """dim Hom_{P_n(F)}(π, 1) from the restriction multiplicity."""
    return multiplicity_in_subset(K, G, values, PF_idx)


def mirabolic_rational(G: MatrixGroup, tower: FieldTower) -> np.ndarray:
    """P_n(F) inside GL_n(E)."""
    M = G.mats
    n = G.n
    ok = (M[:, n - 1, : n - 1] == 0).all(axis=1) & (M[:, n - 1, n - 1] == 1)
    ok &= tower.in_subfield(M).all(axis=(1, 2))
    return np.flatnonzero(ok)


# -- Kirillov, Kable, Leibniz ------------------------------------------------------------------------

def kirillov_holds(tower: MirabolicTower, X: PnRep) -> np.ndarray:
    """Res_{P_n}χ = Ind_{N_n}^{P_n}ψ, per character."""
    R = tower.res(X)
    target = tower.gelfand_graev_P(X.level).values
    return (R.values == target).all(axis=(1, 2))


def kirillov_check(tower: MirabolicTower, X: PnRep) -> np.ndarray:
    """Cuspidal and restricting to the Kirillov model Ind_N^P ψ."""
    G = tower.group("G", X.level)
    return cuspidal_mask(G, tower.K, X.values) & kirillov_holds(tower, X)


def kable_multiplicity(tower: MirabolicTower, level: int, report: VerificationReport | None = None
                       ) -> VerificationReport:
    """dim Hom_{P_m(F)}(Φ⁺τ, 1) = dim Hom_{P_{m-1}(F)}(τ, 1) for all τ ∈ Irr(P_{m-1}),
    the inflated version for Ψ⁺ and Irr(G_{m-1}), and multiplicity one for Ind_N^P ψ."""
    report = report or VerificationReport({"E": tower.Q})
    m = level
    params = dict(E=tower.Q, m=m)
    if m >= 2:
        tau = tower.irr("P", m - 1)
        lhs = tower.invariant_dimension(tower.phi_plus(tau))
        rhs = tower.invariant_dimension(tau)
        report.add("bz", "P(F)-invariants of Φ⁺τ match those of τ", {**params, "count": len(tau)},
                   tuple(int(x) for x in lhs), tuple(int(x) for x in rhs))
    rho = tower.irr("G", m - 1)
    lhs = tower.invariant_dimension(tower.psi_plus(rho))
    rhs = tower.invariant_dimension(rho)
    report.add("bz", "P(F)-invariants of Ψ⁺ρ match GL(F)-invariants of ρ", {**params, "count": len(rho)},
               tuple(int(x) for x in lhs), tuple(int(x) for x in rhs))
    gg = tower.invariant_dimension(tower.gelfand_graev_P(m))
    report.add("bz", "Ind_N^P ψ has a unique P(F)-invariant form", params, int(gg[0]), 1)
    return report


def leibniz_prediction(tower: MirabolicTower, blocks, k: int) -> tuple[np.ndarray, int]:
    """(ρ_1 × ... × ρ_r)^{(k)} for cuspidal ρ_i: Σ over index sets S with Σ_{i∈S} n_i = k of
    the product of the remaining blocks.  Returns (character of G_{n-k}, number of sets m_k)."""
    n = sum(grp.n for grp, _ in blocks)
    target = tower.group("G", n - k)
    acc = np.zeros((target.num_classes, tower.K.phi), dtype=np.int64)
    count = 0
    for size in range(len(blocks) + 1):
        for S in combinations(range(len(blocks)), size):
            if sum(blocks[i][0].n for i in S) != k:
                continue
            count += 1
            rest = [blocks[i] for i in range(len(blocks)) if i not in S]
            if n - k == 0:
                acc += tower.K.one()[None]
            elif len(rest) == 1:
                acc += np.asarray(rest[0][1])
            else:
                acc += parabolic_induce(target, tower.K, rest)
    return acc, count


def leibniz_check(tower: MirabolicTower, blocks) -> list[tuple[int, int, bool]]:
    """Compare the derivatives of ρ_1 × ... × ρ_r with the Leibniz prediction: (k, m_k, ok)."""
    n = sum(grp.n for grp, _ in blocks)
    pi = parabolic_induce(tower.group("G", n), tower.K, blocks)
    X = PnRep("G", n, pi[None])
    out = []
    for k in range(1, n + 1):
        pred, mk = leibniz_prediction(tower, blocks, k)
        out.append((k, mk, bool((tower.derivative(X, k).values[0] == pred).all())))
    return out


# -- relatively cuspidal representations (n = 2) -------------------------------------------------------

@dataclass
class RelativeCuspidalSet:
    computed: set
    predicted: set
    p_dims: dict          # character index -> dim Hom_{P(F)}(π, 1) for generic distinguished π
    cuspidal: set
    principal: dict       # character index of ρ^∨ × ρ^σ -> exponent j of ρ = χ_j


def _bz_context(wb):
    """(tower, GL_1 characters in the tower field, lifted Irr(G)) for a workbench with n = 2."""
    cache = wb.cache
    if "bz_tower" not in cache:
        ctx = wb.ctx
        tower = MirabolicTower(ctx.tower, ctx.n, top=(wb.G, wb.table), seed=wb.seed)
        cache["bz_tower"] = tower
    return cache["bz_tower"]


def principal_series(wb, j1: int, j2: int) -> np.ndarray:
    """Ps(χ_{j1}, χ_{j2}) on GL_2(E), values in the tower field."""
    tower = _bz_context(wb)
    G1 = tower.group("G", 1)
    chars = gl1_characters(G1, tower.K)
    return parabolic_induce(wb.G, tower.K, [(G1, chars[j1]), (G1, chars[j2])])


def relative_cuspidal_classify(wb) -> RelativeCuspidalSet:
    """Generic distinguished π with dim Hom_{P(F)}(π,1) = 1, against the predicted list
    {cuspidal distinguished} ∪ {ρ^∨ × ρ^σ : ρ^∨ ≇ ρ^σ} with ρ running over characters of E^×."""
    ctx = wb.ctx
    if ctx.n != 2:
        raise BZError("the classification is implemented for n = 2 only")
    tower = _bz_context(wb)
    K = tower.K
    vals = tower.table("G", 2).values
    generic = np.zeros(len(vals), dtype=bool)
    generic[wb.generic] = True
    dist = wb.distinguished("sigma") == 1
    pdim = p_invariant_dimension(wb.G, K, vals, ctx.P_F)
    computed = {int(i) for i in np.flatnonzero(generic & dist & (pdim == 1))}
    cusp = cuspidal_mask(wb.G, K, vals)
    cuspidal = {int(i) for i in np.flatnonzero(cusp & dist)}
    Q, q = ctx.Q, ctx.q
    principal = {}
    for j in range(Q - 1):
        if j % (q - 1) == 0:  # ρ^{q+1} = 1, i.e. ρ^∨ ≅ ρ^σ
            continue
        ps = principal_series(wb, (-j) % (Q - 1), (q * j) % (Q - 1))
        idx = tower.table("G", 2).find(ps)
        if idx < 0:
            raise BZError(f"ρ^∨ × ρ^σ is reducible for ρ = χ_{j}")
        principal.setdefault(idx, j)
    pdims = {int(i): int(pdim[i]) for i in np.flatnonzero(generic & dist)}
    return RelativeCuspidalSet(computed, cuspidal | set(principal), pdims, cuspidal, principal)


def counterexample_pairs(wb) -> list[dict]:
    """Ps(χ_1, χ_2), χ_1 ≠ χ_2 trivial on F^×: P(F)- and GL_2(F)-invariant dimensions and the
    derivative multiplicities m_1, m_2 of the product formula."""
    ctx = wb.ctx
    if ctx.n != 2:
        raise BZError("the principal-series count is implemented for n = 2 only")
    tower = _bz_context(wb)
    K = tower.K
    Q, q = ctx.Q, ctx.q
    # F^× = <g^{q+1}> inside E^× = <g>, so χ_j is trivial on F^× iff (q-1) | j
    trivial_on_F = [j for j in range(Q - 1) if j % (q - 1) == 0]
    G1 = tower.group("G", 1)
    chars = gl1_characters(G1, K)
    out = []
    for j1, j2 in combinations(trivial_on_F, 2):
        ps = principal_series(wb, j1, j2)
        blocks = [(G1, chars[j1]), (G1, chars[j2])]
        lb = leibniz_check(tower, blocks)
        out.append(dict(
            j=(j1, j2),
            irreducible=tower.table("G", 2).find(ps) >= 0,
            p_dim=int(p_invariant_dimension(wb.G, K, ps[None], ctx.P_F)[0]),
            g_dim=int(multiplicity_in_subset(K, wb.G, ps[None], ctx.G_sigma)[0]),
            m=tuple(mk for _, mk, _ in lb),
            leibniz=all(ok for _, _, ok in lb)))
    return out


# -- explicit modules (n = 2 spot checks) ------------------------------------------------------------

@dataclass
class ExplicitModule:
    """A representation given by complex matrices for every element of its group."""

    group: MatrixGroup
    mats: np.ndarray  # (|group|, d, d)

    @property
    def dim(self) -> int:
        return self.mats.shape[1]

    def character(self) -> np.ndarray:
        return np.trace(self.mats, axis1=1, axis2=2)

    def contragredient(self) -> "ExplicitModule":
        return ExplicitModule(self.group, np.swapaxes(self.mats[self.group.inverse], 1, 2))

    def is_homomorphism(self, samples: int = 20, seed: int = 0, tol: float = 1e-9) -> bool:
        G = self.group
        rng = np.random.default_rng(seed)
        a = rng.integers(G.order, size=samples)
        b = rng.integers(G.order, size=samples)
        return bool(np.allclose(self.mats[a] @ self.mats[b], self.mats[G.mul(a, b)], atol=tol))

    def direct_sum(self, other: "ExplicitModule") -> "ExplicitModule":
        d1, d2 = self.dim, other.dim
        M = np.zeros((self.group.order, d1 + d2, d1 + d2), dtype=complex)
        M[:, :d1, :d1] = self.mats
        M[:, d1:, d1:] = other.mats
        return ExplicitModule(self.group, M)


def hom_dimension(V: ExplicitModule, W: ExplicitModule, tol: float = 1e-8) -> int:
    """dim Hom_G(V, W) as the nullity of X V(s) = W(s) X over a generating set."""
    if V.dim == 0 or W.dim == 0:
        return 0
    G = V.group
    rows = []
    Iv, Iw = np.eye(V.dim), np.eye(W.dim)
    for s in G.generators or (G.identity,):
        # vec(X V) - vec(W X) with column-major vec
        rows.append(np.kron(V.mats[s].T, Iw) - np.kron(Iv, W.mats[s]))
    A = np.vstack(rows)
    sv = np.linalg.svd(A, compute_uv=False)
    return int(V.dim * W.dim - (sv > tol).sum())


def induced_module(G: MatrixGroup, H_idx, h_values: np.ndarray) -> ExplicitModule:
    """Ind_H^G of a one-dimensional character given by complex values on H = G[H_idx]."""
    H_idx = np.asarray(H_idx)
    in_H = np.full(G.order, -1)
    in_H[H_idx] = np.arange(len(H_idx))
    # left transversal t_i: g t_i = t_j h
    seen = np.zeros(G.order, dtype=bool)
    trans = []
    coset = np.full(G.order, -1)
    for g in range(G.order):
        if seen[g]:
            continue
        members = G.mul(np.full(len(H_idx), g), H_idx)
        seen[members] = True
        coset[members] = len(trans)
        trans.append(g)
    trans = np.array(trans)
    n = len(trans)
    tinv = G.inverse[trans]
    M = np.zeros((G.order, n, n), dtype=complex)
    for g in range(G.order):
        gt = G.mul(np.full(n, g), trans)
        j = coset[gt]
        h = G.mul(tinv[j], gt)
        M[g, j, np.arange(n)] = h_values[in_H[h]]
    return ExplicitModule(G, M)


class ExplicitFunctors:
    """Ψ±, Φ± on explicit modules between G_1, P_1 and P_2 (θ_2 from the tower's ψ)."""

    def __init__(self, tower: MirabolicTower):
        self.tower = tower
        self.P2 = tower.group("P", 2)
        self.G1 = tower.group("G", 1)
        self.P1 = tower.group("P", 1)
        M = self.P2.mats
        self.U = np.flatnonzero(M[:, 0, 0] == 1)
        self.theta = np.exp(2j * np.pi * tower.psi.exponent(M[self.U, 0, 1]) / tower.p)
        self.levi = self.P2.index(_embed(self.G1.mats, np.zeros((1, 1), dtype=np.int64)))

    def psi_plus(self, W: ExplicitModule) -> ExplicitModule:
        blocks = np.ascontiguousarray(self.P2.mats[:, :1, :1])
        return ExplicitModule(self.P2, W.mats[self.G1.index(blocks)])

    def phi_plus(self, W: ExplicitModule) -> ExplicitModule:
        base = induced_module(self.P2, self.U, self.theta)
        out = ExplicitModule(self.P2, np.zeros((self.P2.order, 0, 0), dtype=complex))
        for _ in range(W.dim):
            out = out.direct_sum(base)
        return out

    def _image(self, V: ExplicitModule, weights) -> np.ndarray:
        e = np.tensordot(weights, V.mats[self.U], axes=1) / len(self.U)
        if V.dim == 0:
            return np.zeros((0, 0), dtype=complex)
        u, s, _ = np.linalg.svd(e)
        return u[:, s > 1e-8]

    def psi_minus(self, V: ExplicitModule) -> ExplicitModule:
        B = self._image(V, np.ones(len(self.U)))
        acts = B.conj().T[None] @ V.mats[self.levi] @ B[None]
        return ExplicitModule(self.G1, acts)

    def phi_minus(self, V: ExplicitModule) -> ExplicitModule:
        B = self._image(V, self.theta.conj())
        return ExplicitModule(self.P1, np.eye(B.shape[1], dtype=complex)[None])

    def gl1_module(self, j: int) -> ExplicitModule:
        E = self.G1.field
        logs = E.log_table[self.G1.mats[:, 0, 0]]
        vals = np.exp(2j * np.pi * j * logs / (E.order - 1))
        return ExplicitModule(self.G1, vals[:, None, None].astype(complex))

    def trivial_P1(self, d: int = 1) -> ExplicitModule:
        return ExplicitModule(self.P1, np.eye(d, dtype=complex)[None])


def verify_explicit_n2(tower: MirabolicTower, report: VerificationReport) -> VerificationReport:
    """The five functor relations on explicit modules of P_2."""
    F = ExplicitFunctors(tower)
    Q = tower.Q
    params = dict(E=Q, n=2)
    chis = [F.gl1_module(j) for j in range(Q - 1)]
    cusp = F.phi_plus(F.trivial_P1())
    modules = [F.psi_plus(c) for c in chis] + [cusp, F.psi_plus(chis[0]).direct_sum(cusp)]
    report.add("bz", "explicit modules are representations", params,
               all(V.is_homomorphism() for V in modules), True)

    def char_close(A, B):
        return A.dim == B.dim and bool(np.allclose(A.character(), B.character(), atol=1e-8))

    ok1 = all(char_close(F.psi_minus(V.contragredient()), F.psi_minus(V).contragredient())
              and F.phi_minus(V.contragredient()).dim == F.phi_minus(V).dim for V in modules)
    ok1 &= all(char_close(F.psi_plus(c.contragredient()), F.psi_plus(c).contragredient()) for c in chis)
    ok1 &= char_close(F.phi_plus(F.trivial_P1()).contragredient(), F.phi_plus(F.trivial_P1()))
    report.add("bz", "explicit: functors commute with the contragredient", params, ok1, True)
    adj = all(hom_dimension(F.phi_plus(F.trivial_P1()), V) ==
              hom_dimension(F.trivial_P1(), F.phi_minus(V)) for V in modules)
    adj &= all(hom_dimension(F.psi_plus(c), V) == hom_dimension(c, F.psi_minus(V))
               for c in chis for V in modules)
    report.add("bz", "explicit: Φ⁺ ⊣ Φ⁻ and Ψ⁺ ⊣ Ψ⁻ on Hom dimensions", params, adj, True)
    zero = all(F.phi_minus(F.psi_plus(c)).dim == 0 for c in chis) and F.psi_minus(cusp).dim == 0
    report.add("bz", "explicit: Φ⁻Ψ⁺ = 0 and Ψ⁻Φ⁺ = 0", params, zero, True)
    ident = all(hom_dimension(F.psi_minus(F.psi_plus(c)), c) == 1 for c in chis)
    ident &= F.phi_minus(cusp).dim == 1
    report.add("bz", "explicit: Φ⁻Φ⁺ ≅ Id and Ψ⁻Ψ⁺ ≅ Id", params, ident, True)
    dec = True
    for V in modules:
        parts = F.psi_plus(F.psi_minus(V)).direct_sum(F.phi_plus(F.phi_minus(V)))
        dec &= hom_dimension(parts, V) == hom_dimension(V, V) == hom_dimension(parts, parts)
        dec &= char_close(parts, V)
    report.add("bz", "explicit: V ≅ Φ⁺Φ⁻V ⊕ Ψ⁺Ψ⁻V", params, dec, True)
    return report


# -- the battery --------------------------------------------------------------------------------------

def verify_relations(tower: MirabolicTower, report: VerificationReport) -> VerificationReport:
    """All functor relations, exhaustively over the irreducibles of every level ≤ tower.n."""
    for m in range(2, tower.n + 1):
        params = dict(E=tower.Q, m=m)
        tau, rho, pi = tower.irr("P", m - 1), tower.irr("G", m - 1), tower.irr("P", m)
        fp, sp = tower.phi_plus(tau), tower.psi_plus(rho)
        fm, sm = tower.phi_minus(pi), tower.psi_minus(pi)
        cg = tower.contragredient
        report.add("bz", "functors commute with the contragredient", params,
                   fp == cg(tower.phi_plus(cg(tau))) and sp == cg(tower.psi_plus(cg(rho)))
                   and fm == cg(tower.phi_minus(cg(pi))) and sm == cg(tower.psi_minus(cg(pi))), True)
        adj_phi = (tower.inner(fp, pi) == tower.inner(tau, fm)).all()
        adj_phi_r = (tower.inner(pi, fp) == tower.inner(fm, tau)).all()
        adj_psi = (tower.inner(sp, pi) == tower.inner(rho, sm)).all()
        adj_psi_r = (tower.inner(pi, sp) == tower.inner(sm, rho)).all()
        report.add("bz", "Φ⁺ and Φ⁻ are left and right adjoint", params, bool(adj_phi and adj_phi_r), True)
        report.add("bz", "Ψ⁺ and Ψ⁻ are left and right adjoint", params, bool(adj_psi and adj_psi_r), True)
        report.add("bz", "Φ⁻Ψ⁺ = 0", params, bool(tower.phi_minus(sp).is_zero().all()), True)
        report.add("bz", "Ψ⁻Φ⁺ = 0", params, bool(tower.psi_minus(fp).is_zero().all()), True)
        report.add("bz", "Φ⁻Φ⁺ ≅ Id", params, tower.phi_minus(fp) == tau, True)
        report.add("bz", "Ψ⁻Ψ⁺ ≅ Id", params, tower.psi_minus(sp) == rho, True)
        a, b = tower.decompose_Pn(pi)
        report.add("bz", "π ≅ Φ⁺Φ⁻π ⊕ Ψ⁺Ψ⁻π", params, (a + b) == pi, True)
        one_part = (a.is_zero() ^ b.is_zero()).all()
        report.add("bz", "each irreducible of P_m lies in exactly one part", params, bool(one_part), True)
        # every irreducible of P_m is (Φ⁺)^{k-1}Ψ⁺ of an irreducible of G_{m-k}
        matched = np.zeros(len(pi), dtype=int)
        for k in range(1, m + 1):
            lifted = tower.lift_derivative(tower.irr("G", m - k), k)
            hits = tower.inner(lifted, pi)
            if not np.isin(hits, [0, 1]).all() or (hits.sum(axis=1) != 1).any():
                matched[:] = -99
            matched += hits.sum(axis=0)
        report.add("bz", "Irr(P_m) = {(Φ⁺)^{k-1}Ψ⁺ρ}, each exactly once", params,
                   bool((matched == 1).all()), True)
        factor = tower.Q ** (m - 1) - 1
        report.add("bz", "dim Φ⁺V = dim V·(Q^{m-1} - 1)", params,
                   tuple(int(x) for x in fp.dims), tuple(int(x) * factor for x in tau.dims))
        report.add("bz", "Ind_N^P ψ = (Φ⁺)^{m-1}Ψ⁺(1)", params,
                   tower.gelfand_graev_P(m) == tower.lift_derivative(tower.trivial("G", 0), m), True)
        kable_multiplicity(tower, m, report)
    if tower.n >= 2:
        verify_explicit_n2(tower, report)
    return report


def verify_filtration(tower: MirabolicTower, generic_idx, report: VerificationReport) -> VerificationReport:
    """Filtration, derivative bookkeeping, genericity and Kirillov models for Irr(GL_n)."""
    n = tower.n
    X = tower.irr("G", n)
    params = dict(E=tower.Q, n=n, count=len(X))
    report.add("bz", "Res_P π = Σ_k (Φ⁺)^{k-1}Ψ⁺(π^{(k)})", params,
               tower.filtration(X) == tower.res(X), True)
    generic = np.zeros(len(X), dtype=bool)
    generic[np.asarray(generic_idx, dtype=np.int64)] = True
    top = tower.derivative(X, n).dims
    report.add("bz", "π^{(n)} has dimension 1 exactly for generic π", params,
               tuple(int(x) for x in top), tuple(int(x) for x in generic.astype(int)))
    dims_ok = True
    for i in range(len(X)):
        prof = tower.derivatives(X, i)
        dims_ok &= prof.filtration_dimension() == int(X.dims[i])
    report.add("bz", "dim π = Σ_k dim π^{(k)}·dim (Φ⁺)^{k-1}Ψ⁺(1)", params, dims_ok, True)
    cusp = cuspidal_mask(tower.group("G", n), tower.K, X.values)
    kir = kirillov_holds(tower, X)
    report.add("bz", "cuspidal π are generic", params, bool((generic | ~cusp).all()), True)
    report.add("bz", "Res_P π = Ind_N^P ψ exactly for cuspidal π", params,
               tuple(np.flatnonzero(kir).tolist()), tuple(np.flatnonzero(cusp).tolist()))
    low = [tower.derivative(X[cusp], k) for k in range(1, n)] if cusp.any() else []
    report.add("bz", "cuspidal π have π^{(k)} = 0 for k < n", params,
               all(bool(D.is_zero().all()) for D in low), True)
    return report


def verify_leibniz(tower: MirabolicTower, report: VerificationReport) -> VerificationReport:
    """Derivatives of products of distinct cuspidals follow the Leibniz rule."""
    n = tower.n
    G1 = tower.group("G", 1)
    chars = gl1_characters(G1, tower.K)
    cases = [[(G1, chars[j]) for j in js] for js in combinations(range(len(chars)), n)]
    if n == 3:
        G2 = tower.group("G", 2)
        vals = tower.table("G", 2).values
        cusp = np.flatnonzero(cuspidal_mask(G2, tower.K, vals))
        cases += [[(G2, vals[c]), (G1, chars[j])] for c in cusp for j in range(len(chars))]
    ok = True
    for blocks in cases:
        ok &= all(good for _, _, good in leibniz_check(tower, blocks))
    report.add("bz", "Leibniz rule for products of cuspidals", dict(E=tower.Q, n=n, cases=len(cases)),
               bool(ok), True)
    return report


def verify_bz(wb, report: VerificationReport | None = None, relations_up_to: int = 3) -> VerificationReport:
    """The full mirabolic battery for a workbench context (n = 2 or 3)."""
    report = report or VerificationReport(wb.descriptor)
    ctx = wb.ctx
    tower = _bz_context(wb)
    rel = tower if relations_up_to <= ctx.n else MirabolicTower(ctx.tower, relations_up_to, seed=wb.seed)
    verify_relations(rel, report)
    verify_filtration(tower, wb.generic, report)
    verify_leibniz(tower, report)
    if ctx.n == 2:
        for d in counterexample_pairs(wb):
            p = dict(j=d["j"])
            report.add("bz", "Ps(χ_1,χ_2) with χ_i trivial on F^×: P(F)-invariants", p, d["p_dim"], 3)
            report.add("bz", "Ps(χ_1,χ_2) with χ_i trivial on F^×: GL_2(F)-invariants", p, d["g_dim"], 1)
            report.add("bz", "P(F)-invariants = Σ_k m_k", p, d["p_dim"], sum(d["m"]))
        rc = relative_cuspidal_classify(wb)
        report.add("bz", "relatively cuspidal set = predicted set", {}, sorted(rc.computed),
                   sorted(rc.predicted), rc.computed == rc.predicted)
    return report
