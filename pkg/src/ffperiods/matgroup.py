"""Enumerated matrix groups over a finite field.

A ``MatrixGroup`` stores its elements as an (order, n, n) array of field codes
sorted by their integer encoding, so membership and multiplication reduce to
``searchsorted`` lookups.  ``GroupContext`` builds GL_n(E) for a tower E/F and
records the subgroups, involutions and norm-one sets used elsewhere.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import comb, lcm, prod

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import kernels
from .field_tower import FieldTower, FiniteField

DEFAULT_BUDGET = 2**21


class BudgetExceeded(RuntimeError):
    pass


# -- batched linear algebra ------------------------------------------------------

def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def mat_inverse(field: FiniteField, M) -> np.ndarray:
    """Gauss-Jordan inverse of every matrix in the batch (raises on singular input)."""
    M = np.array(M, dtype=np.int64)
    single = M.ndim == 2
    if single:
        M = M[None]
    N, n, _ = M.shape
    A = np.concatenate([M, np.broadcast_to(identity(n), M.shape)], axis=2)
    rows = np.arange(N)
    for c in range(n):
        cand = A[:, c:, c] != 0
        if not cand.any(axis=1).all():
            raise ZeroDivisionError("singular matrix")
        piv = c + np.argmax(cand, axis=1)
        top = A[rows, c].copy()
        A[rows, c] = A[rows, piv]
        A[rows, piv] = top
        A[:, c] = field.mul(A[:, c], field.inv(A[:, c, c])[:, None])
        for r in range(n):
            if r == c:
                continue
            f = A[:, r, c]
            A[:, r] = field.sub(A[:, r], field.mul(f[:, None], A[:, c]))
    out = A[:, :, n:]
    return out[0] if single else out


def determinant(field: FiniteField, M) -> np.ndarray:
    M = np.array(M, dtype=np.int64)
    single = M.ndim == 2
    if single:
        M = M[None]
    N, n, _ = M.shape
    A = M.copy()
    det = np.ones(N, dtype=np.int64)
    rows = np.arange(N)
    alive = np.ones(N, dtype=bool)
    for c in range(n):
        cand = A[:, c:, c] != 0
        has = cand.any(axis=1)
        alive &= has
        piv = c + np.argmax(cand, axis=1)
        swapped = piv != c
        top = A[rows, c].copy()
        A[rows, c] = A[rows, piv]
        A[rows, piv] = top
        det = np.where(swapped, field.neg(det), det)
        d = np.where(has, A[:, c, c], 1)
        det = field.mul(det, d)
        inv = field.inv(d)
        for r in range(c + 1, n):
            f = field.mul(A[:, r, c], inv)
            A[:, r] = field.sub(A[:, r], field.mul(f[:, None], A[:, c]))
    det = np.where(alive, det, 0)
    return det[0] if single else det


def general_linear(field: FiniteField, n: int) -> np.ndarray:
    """All invertible n×n matrices over ``field``, in increasing code order."""
    Q = field.order
    total = Q ** (n * n)
    out = []
    chunk = 1 << 18
    for start in range(0, total, chunk):
        codes = np.arange(start, min(total, start + chunk), dtype=np.int64)
        mats = kernels.decode(codes, Q, n)
        out.append(mats[determinant(field, mats) != 0])
    return np.concatenate(out)


def gl_order(Q: int, n: int) -> int:
    return Q ** comb(n, 2) * prod(Q**i - 1 for i in range(1, n + 1))


def unitary_order(q: int, n: int) -> int:
    return q ** comb(n, 2) * prod(q**i - (-1) ** i for i in range(1, n + 1))


def permutation_matrix(perm) -> np.ndarray:
    """Matrix with a 1 in row i, column perm[i]."""
    n = len(perm)
    M = np.zeros((n, n), dtype=np.int64)
    M[np.arange(n), list(perm)] = 1
    return M


def permutation_length(perm) -> int:
    return sum(1 for i, j in itertools.combinations(range(len(perm)), 2) if perm[i] > perm[j])


# -- polynomial Smith form over the field ---------------------------------------------

def _ptrim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _padd(K, a, b):
    out = [0] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] = x
    for i, y in enumerate(b):
        out[i] = int(K.add(out[i], y))
    return _ptrim(out)


def _pscale(K, a, c):
    return _ptrim([int(K.mul(x, c)) for x in a])


def _pmul(K, a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = int(K.add(out[i + j], K.mul(x, y)))
    return _ptrim(out)


def _pdivmod(K, a, b):
    a = list(a)
    q = [0] * max(len(a) - len(b) + 1, 0)
    lead_inv = int(K.inv(b[-1]))
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        c = int(K.mul(a[-1], lead_inv))
        q[shift] = c
        a = _padd(K, a, [0] * shift + _pscale(K, b, int(K.neg(c))))
    return _ptrim(q), a


def _monic(K, a):
    return _pscale(K, a, int(K.inv(a[-1]))) if a else a


def smith_invariants(field: FiniteField, g) -> tuple[tuple[int, ...], ...]:
    """Invariant factors of xI - g over field[x] by unimodular row/column reduction.

    Returned as monic coefficient tuples (little-endian), trivial factors 1
    omitted, sorted by divisibility.
    """
    K = field
    g = np.asarray(g, dtype=np.int64)
    n = g.shape[0]
    M = [[_ptrim([int(K.neg(g[i, j]))] + ([1] if i == j else [])) for j in range(n)]
         for i in range(n)]
    diag = []
    for t in range(n):
        while True:
            entries = [(len(M[i][j]), i, j) for i in range(t, n) for j in range(t, n) if M[i][j]]
            if not entries:
                break
            _, i0, j0 = min(entries)
            M[t], M[i0] = M[i0], M[t]
            for row in M:
                row[t], row[j0] = row[j0], row[t]
            piv = M[t][t]
            clean = True
            for i in range(t + 1, n):
                if M[i][t]:
                    qt, _ = _pdivmod(K, M[i][t], piv)
                    M[i] = [_padd(K, M[i][j], _pscale(K, _pmul(K, qt, M[t][j]), int(K.neg(1))))
                            for j in range(n)]
                    clean &= not M[i][t]
            for j in range(t + 1, n):
                if M[t][j]:
                    qt, _ = _pdivmod(K, M[t][j], piv)
                    for i in range(n):
                        M[i][j] = _padd(K, M[i][j],
                                        _pscale(K, _pmul(K, qt, M[i][t]), int(K.neg(1))))
                    clean &= not M[t][j]
            if not clean:
                continue
            bad = next(((i, j) for i in range(t + 1, n) for j in range(t + 1, n)
                        if M[i][j] and _pdivmod(K, M[i][j], piv)[1]), None)
            if bad is None:
                break
            # fold the offending row into row t and reduce again
            M[t] = [_padd(K, M[t][j], M[bad[0]][j]) for j in range(n)]
        diag.append(_monic(K, M[t][t]))
    return tuple(tuple(d) for d in diag if len(d) > 1)


# -- groups -------------------------------------------------------------------------

@dataclass(frozen=True)
class ClassData:
    class_of: np.ndarray  # element index -> class id
    reps: np.ndarray      # class id -> element index of the representative
    sizes: np.ndarray

    @property
    def count(self) -> int:
        return len(self.reps)


class MatrixGroup:
    """A finite group of invertible matrices, fully enumerated."""

    def __init__(self, field: FiniteField, mats, name: str = "", seed: int = 0):
        mats = np.asarray(mats, dtype=np.int64)
        self.field = field
        self.n = mats.shape[-1]
        self.Q = field.order
        if self.Q ** (self.n * self.n) >= 2**63:
            raise ValueError("matrix codes would overflow int64")
        codes = kernels.encode(mats, self.Q)
        order = np.argsort(codes, kind="stable")
        self.codes = codes[order]
        if len(self.codes) > 1 and (np.diff(self.codes) == 0).any():
            raise ValueError("duplicate elements")
        self.mats = mats[order]
        self.name = name
        self.seed = seed

    def __repr__(self):
        return f"MatrixGroup({self.name or '?'}, order={self.order})"

    def __len__(self):
        return self.order

    @property
    def order(self) -> int:
        return len(self.codes)

    # -- lookup ------------------------------------------------------------------
    def find(self, mats) -> np.ndarray:
        """Indices of the given matrices, -1 where absent."""
        c = kernels.encode(np.asarray(mats, dtype=np.int64), self.Q)
        pos = np.searchsorted(self.codes, c)
        pos = np.minimum(pos, self.order - 1)
        return np.where(self.codes[pos] == c, pos, -1)

    def index(self, mats) -> np.ndarray:
        idx = self.find(mats)
        if np.any(idx < 0):
            raise KeyError(f"matrix not in {self!r}")
        return idx

    def contains(self, mats) -> np.ndarray:
        return self.find(mats) >= 0

    @cached_property
    def identity(self) -> int:
        return int(self.index(identity(self.n)))

    def matmul(self, A, B) -> np.ndarray:
        return kernels.matmul(self.field, A, B)

    def mul(self, i, j) -> np.ndarray:
        return self.index(self.matmul(self.mats[i], self.mats[j]))

    @cached_property
    def inverse(self) -> np.ndarray:
        return self.index(mat_inverse(self.field, self.mats))

    def subgroup(self, idx, name: str = "") -> "MatrixGroup":
        return MatrixGroup(self.field, self.mats[np.asarray(idx)], name, self.seed)

    # -- generation ----------------------------------------------------------------
    def closure(self, gens) -> np.ndarray:
        """Boolean mask of the subgroup generated by the given element indices."""
        reached = np.zeros(self.order, dtype=bool)
        reached[self.identity] = True
        frontier = np.array([self.identity])
        gmats = [self.mats[g] for g in gens]
        while len(frontier):
            new = []
            for s in gmats:
                nxt = self.index(self.matmul(self.mats[frontier], s))
                nxt = np.unique(nxt[~reached[nxt]])
                reached[nxt] = True
                new.append(nxt)
            frontier = np.unique(np.concatenate(new)) if new else np.array([], dtype=np.int64)
        return reached

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """A small generating set, chosen greedily from a seeded random stream."""
        rng = np.random.default_rng(self.seed)
        gens: list[int] = []
        reached = self.closure(gens)
        while not reached.all():
            outside = np.flatnonzero(~reached)
            gens.append(int(outside[rng.integers(len(outside))]))
            reached = self.closure(gens)
        return tuple(gens)

    # -- conjugacy -------------------------------------------------------------------
    def conjugate_by(self, s: int) -> np.ndarray:
        """Permutation i -> index(s g_i s^-1)."""
        S = self.mats[s]
        Sinv = self.mats[self.inverse[s]]
        return self.index(self.matmul(self.matmul(S, self.mats), Sinv))

    @cached_property
    def classes(self) -> ClassData:
        N = self.order
        src, dst = [], []
        for s in self.generators:
            src.append(np.arange(N))
            dst.append(self.conjugate_by(s))
        if src:
            src_a, dst_a = np.concatenate(src), np.concatenate(dst)
        else:
            src_a = dst_a = np.zeros(0, dtype=np.int64)
        graph = coo_matrix((np.ones(len(src_a), dtype=np.int8), (src_a, dst_a)), shape=(N, N))
        _, labels = connected_components(graph, directed=True, connection="weak")
        # canonical numbering: identity first, then by least member code
        first = np.full(labels.max() + 1, N, dtype=np.int64)
        np.minimum.at(first, labels, np.arange(N))
        id_label = labels[self.identity]
        key = np.where(np.arange(len(first)) == id_label, -1, first)
        order = np.argsort(key, kind="stable")
        relabel = np.empty_like(order)
        relabel[order] = np.arange(len(order))
        class_of = relabel[labels]
        reps = first[order]
        reps[0] = self.identity
        sizes = np.bincount(class_of, minlength=len(reps))
        return ClassData(class_of, reps, sizes)

    @property
    def class_of(self) -> np.ndarray:
        return self.classes.class_of

    @property
    def num_classes(self) -> int:
        return self.classes.count

    @cached_property
    def inverse_class(self) -> np.ndarray:
        return self.class_of[self.inverse[self.classes.reps]]

    @cached_property
    def rep_powers(self) -> list[np.ndarray]:
        """rep_powers[i][j] = class of rep_i^j for 0 <= j < order(rep_i)."""
        reps = self.classes.reps
        R = self.mats[reps]
        cur = np.broadcast_to(identity(self.n), R.shape).copy()
        rows = [np.zeros(len(reps), dtype=np.int64)]
        orders = np.zeros(len(reps), dtype=np.int64)
        j = 0
        while (orders == 0).any():
            j += 1
            cur = self.matmul(cur, R)
            idx = self.index(cur)
            hit = (idx == self.identity) & (orders == 0)
            orders[hit] = j
            rows.append(self.class_of[idx])
        table = np.stack(rows, axis=1)
        return [table[i, : orders[i]] for i in range(len(reps))]

    @cached_property
    def rep_orders(self) -> np.ndarray:
        return np.array([len(p) for p in self.rep_powers], dtype=np.int64)

    @cached_property
    def exponent(self) -> int:
        return lcm(*map(int, self.rep_orders))

    def power_class(self, j: int) -> np.ndarray:
        """Class of g^j for g in each class."""
        return np.array([p[j % len(p)] for p in self.rep_powers], dtype=np.int64)

    def class_fusion(self, sub: "MatrixGroup") -> np.ndarray:
        """For each class of ``sub``, the class of this group containing it."""
        return self.class_of[self.index(sub.mats[sub.classes.reps])]

    # -- invariants --------------------------------------------------------------------
    def class_invariant(self, g) -> tuple:
        return smith_invariants(self.field, g)

    @cached_property
    def class_invariants(self) -> list[tuple]:
        return [self.class_invariant(self.mats[r]) for r in self.classes.reps]


def linear_group(field: FiniteField, n: int, name: str | None = None) -> MatrixGroup:
    return MatrixGroup(field, general_linear(field, n), name or f"GL_{n}(F_{field.order})")


def mirabolic_matrices(field: FiniteField, n: int) -> np.ndarray:
    """[[A, x], [0, 1]] with A in GL_{n-1} and x a column, built directly."""
    if n == 1:
        return identity(1)[None]
    inner = general_linear(field, n - 1)
    Q = field.order
    cols = (np.arange(Q ** (n - 1))[:, None] // Q ** np.arange(n - 1)) % Q
    M = np.zeros((len(inner), len(cols), n, n), dtype=np.int64)
    M[:, :, : n - 1, : n - 1] = inner[:, None]
    M[:, :, : n - 1, n - 1] = cols[None]
    M[:, :, n - 1, n - 1] = 1
    return M.reshape(-1, n, n)


def mirabolic_group(field: FiniteField, n: int) -> MatrixGroup:
    return MatrixGroup(field, mirabolic_matrices(field, n), f"P_{n}(F_{field.order})")


# -- the context GL_n(E) ⊃ GL_n(F), U(n, E/F) -------------------------------------------

class GroupContext:
    """GL_n(E) for the tower E/F with its distinguished subgroups as index arrays."""

    def __init__(self, n: int, tower: FieldTower, budget: int = DEFAULT_BUDGET, seed: int = 0):
        self.n = n
        self.tower = tower
        self.E = tower.E
        self.q = tower.q
        self.Q = tower.E.order
        expected = gl_order(self.Q, n)
        if expected > budget:
            raise BudgetExceeded(
                f"|GL_{n}(F_{self.Q})| = {expected} exceeds the enumeration budget {budget}; "
                "raise --budget if enough memory is available")
        self.G = MatrixGroup(self.E, general_linear(self.E, n), f"GL_{n}(F_{self.Q})", seed)
        if self.G.order != expected:
            raise AssertionError("enumeration does not match the order formula")
        self.J = permutation_matrix(range(n - 1, -1, -1))
        self._subgroups: dict[str, MatrixGroup] = {}

    def __repr__(self):
        return f"GroupContext(n={self.n}, E=F_{self.Q}, F=F_{self.q})"

    @property
    def descriptor(self) -> dict:
        return {"n": self.n, **self.tower.descriptor}

    # -- involutions -------------------------------------------------------------------
    def involution(self, M, iota: str) -> np.ndarray:
        M = np.asarray(M, dtype=np.int64)
        if iota == "sigma":
            return self.tower.frobenius(M)
        if iota == "tau":
            inv = mat_inverse(self.E, M)
            t = np.swapaxes(inv, -1, -2)
            return self.tower.frobenius(t)[..., ::-1, ::-1].copy()
        raise ValueError(f"unknown involution {iota!r}")

    @cached_property
    def sigma_perm(self) -> np.ndarray:
        return self.G.index(self.involution(self.G.mats, "sigma"))

    @cached_property
    def tau_perm(self) -> np.ndarray:
        return self.G.index(self.involution(self.G.mats, "tau"))

    def perm(self, iota: str) -> np.ndarray:
        return {"sigma": self.sigma_perm, "tau": self.tau_perm}[iota]

    # -- subsets (sorted index arrays into G) -----------------------------------------------
    @cached_property
    def N(self) -> np.ndarray:
        M = self.G.mats
        n = self.n
        low = np.tril(np.ones((n, n), dtype=bool), -1)
        mask = (M[:, low] == 0).all(axis=1) & (np.diagonal(M, axis1=1, axis2=2) == 1).all(axis=1)
        return np.flatnonzero(mask)

    @cached_property
    def A(self) -> np.ndarray:
        off = ~np.eye(self.n, dtype=bool)
        return np.flatnonzero((self.G.mats[:, off] == 0).all(axis=1))

    @cached_property
    def W(self) -> np.ndarray:
        perms = list(itertools.permutations(range(self.n)))
        return self.G.index(np.stack([permutation_matrix(p) for p in perms]))

    @cached_property
    def P(self) -> np.ndarray:
        last = self.G.mats[:, self.n - 1, :]
        target = np.zeros(self.n, dtype=np.int64)
        target[-1] = 1
        return np.flatnonzero((last == target).all(axis=1))

    def fixed(self, iota: str) -> np.ndarray:
        return np.flatnonzero(self.perm(iota) == np.arange(self.G.order))

    @cached_property
    def G_sigma(self) -> np.ndarray:
        return self.fixed("sigma")

    @cached_property
    def G_tau(self) -> np.ndarray:
        return self.fixed("tau")

    def G_iota(self, iota: str) -> np.ndarray:
        return self.G_sigma if iota == "sigma" else self.G_tau

    def N_iota(self, iota: str) -> np.ndarray:
        return np.intersect1d(self.N, self.G_iota(iota))

    @cached_property
    def P_F(self) -> np.ndarray:
        return np.intersect1d(self.P, self.G_sigma)

    def norm_one_set(self, kappa: str) -> np.ndarray:
        """X_κ = {g : g g^κ = 1}."""
        prods = self.G.mul(np.arange(self.G.order), self.perm(kappa))
        return np.flatnonzero(prods == self.G.identity)

    def X(self, kappa: str) -> np.ndarray:
        key = f"X_{kappa}"
        if key not in self.__dict__:
            self.__dict__[key] = self.norm_one_set(kappa)
        return self.__dict__[key]

    def subgroup(self, name: str) -> MatrixGroup:
        """Named subgroup as its own MatrixGroup: G_sigma, G_tau, N, P, P_F, N_sigma, N_tau."""
        if name not in self._subgroups:
            table = {"G_sigma": lambda: self.G_sigma, "G_tau": lambda: self.G_tau,
                     "N": lambda: self.N, "P": lambda: self.P, "P_F": lambda: self.P_F,
                     "N_sigma": lambda: self.N_iota("sigma"),
                     "N_tau": lambda: self.N_iota("tau"), "A": lambda: self.A}
            self._subgroups[name] = self.G.subgroup(table[name](), f"{name}({self.G.name})")
        return self._subgroups[name]

    # -- closed forms --------------------------------------------------------------
    def expected_orders(self) -> dict[str, int]:
        n, q, Q = self.n, self.q, self.Q
        return {"G": gl_order(Q, n), "G_sigma": gl_order(q, n), "G_tau": unitary_order(q, n),
                "N": Q ** comb(n, 2), "A": (Q - 1) ** n,
                "P": gl_order(Q, n - 1) * Q ** (n - 1) if n > 1 else 1}

    # -- Weyl data ---------------------------------------------------------------------
    def weyl_elements(self) -> list[tuple[tuple[int, ...], int]]:
        """(permutation, index in G) for every permutation matrix."""
        perms = list(itertools.permutations(range(self.n)))
        return [(p, int(i)) for p, i in zip(perms, self.W)]

    def stabilizer_counts(self, perm, kappa: str) -> tuple[int, int]:
        """(|{(n1,n2) ∈ N_ι²: n1 w n2^-1 = w}|, |{n ∈ N(E): n w n^-κ = w}|), ι opposite to κ."""
        iota = opposite(kappa)
        G = self.G
        w = permutation_matrix(perm)
        Ni = self.N_iota(iota)
        # n1 w n2^-1 = w  <=>  n2 = w^-1 n1 w, which must lie in N_ι
        conj = G.find(G.matmul(G.matmul(w.T, G.mats[Ni]), w))
        first = int(np.isin(conj, Ni).sum())
        NE = self.N
        lhs = G.mul(G.mul(NE, np.full(len(NE), int(G.index(w)))),
                    G.inverse[self.perm(kappa)[NE]])
        second = int((lhs == int(G.index(w))).sum())
        return first, second

    # -- additive characters on N ---------------------------------------------------------
    def superdiagonal(self, idx) -> np.ndarray:
        M = self.G.mats[np.asarray(idx)]
        i = np.arange(self.n - 1)
        return M[..., i, i + 1]


def opposite(iota: str) -> str:
    return {"sigma": "tau", "tau": "sigma"}[iota]


def psi_exponents(psi, slots, scalings=None) -> np.ndarray:
    """ζ_p-exponent of ψ(Σ_i t_i x_i) for superdiagonal entries ``slots`` (..., n-1)."""
    E = psi.field
    slots = np.asarray(slots, dtype=np.int64)
    if scalings is not None:
        slots = E.mul(slots, np.asarray(scalings, dtype=np.int64))
    total = np.zeros(slots.shape[:-1], dtype=np.int64)
    for i in range(slots.shape[-1]):
        total = E.add(total, slots[..., i])
    return psi.exponent(total)


def build_context(n: int, tower: FieldTower, budget: int = DEFAULT_BUDGET, seed: int = 0):
    return GroupContext(n, tower, budget, seed)


def involution(ctx: GroupContext, g, iota: str):
    return ctx.involution(g, iota)


def norm_one_set(ctx: GroupContext, kappa: str) -> np.ndarray:
    return ctx.X(kappa)


def bruhat_decompose(field: FiniteField, g):
    """(n1, a, w, n2) with g = n1·a·w·n2; a diagonal, w a permutation matrix."""
    g = np.asarray(g, dtype=np.int64)
    n = g.shape[0]
    m, _ = kernels.bruhat(field, g[None])
    m = m[0]
    perm = tuple(int(np.flatnonzero(m[i])[0]) for i in range(n))
    w = permutation_matrix(perm)
    a = np.diag([int(m[i, perm[i]]) for i in range(n)])
    # recover n1, n2: n1 = g n2^-1 (aw)^-1 with n2 from the column reduction
    n1, n2 = _bruhat_unipotents(field, g, m)
    return n1, a, w, n2


def _bruhat_unipotents(field, g, m):
    # replay the elimination keeping the transformation matrices
    n = g.shape[0]
    K = field
    g = g.copy()
    L = identity(n)
    R = identity(n)
    used = [False] * n
    for r in range(n - 1, -1, -1):
        piv = next(j for j in range(n) if g[r, j] and not used[j])
        used[piv] = True
        pinv = int(K.inv(g[r, piv]))
        for j in range(n):
            if j != piv and g[r, j]:
                c = int(K.mul(g[r, j], pinv))
                g[:, j] = K.sub(g[:, j], K.mul(c, g[:, piv]))
                R[:, j] = K.sub(R[:, j], K.mul(c, R[:, piv]))
        for i in range(r):
            if g[i, piv]:
                c = int(K.mul(g[i, piv], pinv))
                g[i] = K.sub(g[i], K.mul(c, g[r]))
                L[i] = K.sub(L[i], K.mul(c, L[r]))
    assert (g == m).all()
    return mat_inverse(K, L), mat_inverse(K, R)
