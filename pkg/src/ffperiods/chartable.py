"""Exact character tables by Dixon's modular variant of Burnside's method.

The class sums of the group algebra act on its centre through the structure
constants a_ijk = #{(x, y) ∈ C_i × C_j : xy = z_k}.  Their simultaneous
eigenvectors are the central characters.  We diagonalize a random integer
combination modulo a prime ℓ ≡ 1 (mod exponent), recover degrees from the
orthogonality relations, and lift each value to Z[ζ_e] from the eigenvalue
multiplicities of ρ(g), which are read off the power maps.  Every table is
checked against the full orthogonality relations with certified arithmetic.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from math import isqrt

import flint
import numpy as np
from sympy import primitive_root

from . import kernels
from .cyclotomic import CyclotomicField, certifier, cyclotomic_field, primes_one_mod
from .matgroup import MatrixGroup

DIXON_PRIME_BOUND = 2**26


class CharacterTableError(RuntimeError):
    pass


class NotRational(ValueError):
    pass


# -- certified pairings ------------------------------------------------------------

def pairing(K: CyclotomicField, X, Y, weights, divisor: int = 1) -> np.ndarray:
    """Exact integers (Σ_i w_i X[a, i] conj(Y[b, i])) / divisor for all a, b.

    X, Y: canonical integer arrays (A, r, φ), (B, r, φ).  Raises NotRational if a
    pairing is not a rational integer multiple of ``divisor``.
    """
    X = np.asarray(X, dtype=np.int64)
    Y = np.asarray(Y, dtype=np.int64)
    w = np.asarray(weights, dtype=np.int64)
    l1x = np.abs(X).sum(axis=-1)
    l1y = np.abs(Y).sum(axis=-1)
    bound = K.reduction_height * int(((l1x * np.abs(w)).astype(object) @ l1y.T.astype(object)).max())
    cert = certifier(K, bound)
    eX = cert.embed(X)
    eY = cert.conj(cert.embed(Y))
    residues = []
    for ell, a, b in zip(cert.primes, eX, eY):
        wa = (a * (w % ell)[None, :, None]) % ell
        S = np.empty((X.shape[0], Y.shape[0], a.shape[-1]), dtype=np.int64)
        for u in range(a.shape[-1]):
            S[:, :, u] = (wa[:, :, u] @ b[:, :, u].T) % ell
        if not (S == S[:, :, :1]).all():
            raise NotRational("pairing is not rational")
        residues.append(S[:, :, 0])
    v = cert.crt(residues)
    if divisor != 1:
        if np.any(v % divisor != 0):
            raise NotRational(f"pairing not divisible by {divisor}")
        v = v // divisor
    return v.astype(np.int64)


def exact_sum(C, weights=None) -> np.ndarray:
    """Σ_t w_t C[t] over the first axis, overflow-checked."""
    C = np.asarray(C, dtype=np.int64)
    if weights is None:
        out = C.astype(object).sum(axis=0)
    else:
        out = np.tensordot(np.asarray(weights, dtype=object), C.astype(object), axes=1)
    return out


def exact_divide(C, d: int) -> np.ndarray:
    C = np.asarray(C, dtype=object)
    if any(int(x) % d for x in C.ravel()):
        raise NotRational(f"values are not divisible by {d}")
    return (C // d).astype(np.int64)


# -- Dixon ------------------------------------------------------------------------------

def structure_constants(G: MatrixGroup) -> np.ndarray:
    """c[i, j, k] = #{(x, y) ∈ C_i × C_j : xy = z_k}, z_k the k-th representative."""
    r = G.num_classes
    co = G.class_of
    inv_mats = G.mats[G.inverse]
    c = np.zeros((r, r, r), dtype=np.int64)
    for k, z in enumerate(G.classes.reps):
        # y runs over G, x = z y^-1
        x = G.index(G.matmul(G.mats[z], inv_mats))
        c[:, :, k] = kernels.pair_histogram(co[x], co, r)
    return c


def _central_characters(c, ell, rng, attempts=40):
    r = c.shape[0]
    eye = flint.nmod_mat(r, r, [int(i == j) for i in range(r) for j in range(r)], ell)
    for _ in range(attempts):
        coeffs = rng.integers(-64, 65, size=r)
        M = np.tensordot(coeffs, c % ell, axes=1) % ell
        Mf = flint.nmod_mat(M.tolist(), ell)
        roots = Mf.charpoly().roots()
        if len(roots) != r or any(mult != 1 for _, mult in roots):
            continue
        vecs = []
        for lam, _ in roots:
            basis, nullity = (Mf - eye * lam).nullspace()
            if nullity != 1:
                break
            v = [int(basis[i, 0]) for i in range(r)]
            if v[0] == 0:
                break
            inv0 = pow(v[0], -1, ell)
            vecs.append([x * inv0 % ell for x in v])
        else:
            return np.array(vecs, dtype=np.int64)
    return None


def _lift_values(G: MatrixGroup, chi_mod: np.ndarray, degrees, ell: int) -> np.ndarray:
    """Redundant Z[ζ_e] values from values mod ℓ via eigenvalue multiplicities."""
    e = G.exponent
    root = pow(primitive_root(ell), (ell - 1) // e, ell)
    nchar, r = chi_mod.shape
    out = np.zeros((nchar, r, e), dtype=np.int64)
    for i, pw in enumerate(G.rep_powers):
        o = len(pw)
        z = pow(root, e // o, ell)
        zinv = pow(z, -1, ell)
        # Z[j, t] = z^{-jt}
        Z = np.ones((o, o), dtype=np.int64)
        col = [pow(zinv, j, ell) for j in range(o)]
        for t in range(1, o):
            Z[:, t] = [pow(col[j], t, ell) for j in range(o)]
        vals = chi_mod[:, pw] % ell
        acc = np.zeros((nchar, o), dtype=np.int64)
        for j in range(o):
            acc = (acc + vals[:, j : j + 1] * Z[j][None, :]) % ell
        mult = acc * pow(o, -1, ell) % ell
        if (mult > np.asarray(degrees)[:, None]).any():
            raise CharacterTableError("eigenvalue multiplicities out of range")
        out[:, i, (np.arange(o) * (e // o))] = mult
    if not (out.sum(axis=2) == np.asarray(degrees)[:, None]).all():
        raise CharacterTableError("multiplicities do not add up to the degree")
    return out


def _hash_values(v: np.ndarray) -> str:
    return hashlib.sha256(np.ascontiguousarray(v, dtype=np.int64).tobytes()).hexdigest()


@dataclass
class CharacterTable:
    group: MatrixGroup
    K: CyclotomicField
    values: np.ndarray  # (characters, classes, φ(m)) canonical integers
    prime: int = 0
    seed: int = 0
    _cache: dict = field(default_factory=dict, repr=False)

    def __len__(self):
        return self.values.shape[0]

    @property
    def degrees(self) -> np.ndarray:
        return self.values[:, 0, 0].copy()

    @property
    def sizes(self) -> np.ndarray:
        return self.group.classes.sizes

    @property
    def order(self) -> int:
        return self.group.order

    def lift(self, K: CyclotomicField) -> "CharacterTable":
        if K.m == self.K.m:
            return self
        return CharacterTable(self.group, K, self.K.lift(self.values, K), self.prime, self.seed)

    def to_complex(self) -> np.ndarray:
        return self.K.to_complex(self.values)

    def inner_products(self, X, Y=None) -> np.ndarray:
        """⟨X_a, Y_b⟩_G for class functions given on the classes of this group."""
        Y = self.values if Y is None else Y
        return pairing(self.K, X, Y, self.sizes, self.order)

    def decompose(self, X) -> np.ndarray:
        """Multiplicities of the irreducibles in each class function of X (A, r, φ)."""
        X = np.asarray(X)
        single = X.ndim == 2
        m = self.inner_products(X[None] if single else X)
        return m[0] if single else m

    def verify(self) -> None:
        G = self.group
        if int((self.degrees.astype(object) ** 2).sum()) != G.order:
            raise CharacterTableError("Σ deg² ≠ |G|")
        gram = self.inner_products(self.values)
        if not (gram == np.eye(len(self), dtype=np.int64)).all():
            raise CharacterTableError("row orthogonality fails")
        # column orthogonality: Σ_χ χ(g_i) conj χ(g_j) = δ_ij |C_G(g_i)|
        cols = np.swapaxes(self.values, 0, 1)
        gram_c = pairing(self.K, cols, cols, np.ones(len(self), dtype=np.int64))
        expected = np.diag(G.order // self.sizes)
        if not (gram_c == expected).all():
            raise CharacterTableError("column orthogonality fails")

    def twist(self, class_perm) -> np.ndarray:
        """Values of χ∘α for a class permutation α."""
        return self.values[:, class_perm]

    def find(self, X) -> int:
        """Index of the irreducible equal to X, or -1."""
        hits = np.flatnonzero((self.values == np.asarray(X)[None]).all(axis=(1, 2)))
        return int(hits[0]) if len(hits) else -1


def dixon(G: MatrixGroup, K: CyclotomicField | None = None, seed: int = 0,
          verify: bool = True) -> CharacterTable:
    e = G.exponent
    c = structure_constants(G)
    sizes = G.classes.sizes
    inv_class = G.inverse_class
    rng = np.random.default_rng(seed)
    order = G.order
    for ell in primes_one_mod(e, 8, below=DIXON_PRIME_BOUND):
        if ell <= 2 * order:
            raise CharacterTableError("group too large for the Dixon prime bound")
        omega = _central_characters(c, ell, rng)
        if omega is None:
            continue
        inv_sizes = np.array([pow(int(s), -1, ell) for s in sizes], dtype=object)
        degrees = []
        for w in omega:
            w_obj = w.astype(object)
            S = int((w_obj * w_obj[inv_class] * inv_sizes).sum()) % ell
            d2 = order * pow(S, -1, ell) % ell
            d = isqrt(d2)
            if d * d != d2:
                break
            degrees.append(d)
        else:
            chi_mod = np.array([[d * int(w[i]) * int(inv_sizes[i]) % ell
                                 for i in range(len(sizes))]
                                for d, w in zip(degrees, omega)], dtype=np.int64)
            red = _lift_values(G, chi_mod, degrees, ell)
            Ke = cyclotomic_field(e)
            vals = Ke.reduce(red)
            target = K or Ke
            vals = Ke.lift(vals, target)
            keys = sorted(range(len(vals)), key=lambda a: (int(vals[a, 0, 0]), _hash_values(vals[a])))
            table = CharacterTable(G, target, vals[keys], ell, seed)
            if verify:
                table.verify()
            return table
    raise CharacterTableError("no prime separated the central characters")


_TABLES: dict[int, CharacterTable] = {}
DISK_CACHE = None  # set through cache.use_disk_cache


def character_table(G: MatrixGroup, K: CyclotomicField | None = None, seed: int = 0) -> CharacterTable:
    """Cached per group object; lifted into K when given."""
    key = id(G)
    if key not in _TABLES or _TABLES[key].group is not G:
        table = DISK_CACHE.load_table(G, seed) if DISK_CACHE is not None else None
        if table is None:
            table = dixon(G, None, seed)
            if DISK_CACHE is not None:
                DISK_CACHE.save_table(table)
        _TABLES[key] = table
    table = _TABLES[key]
    return table.lift(K) if K is not None else table


# -- restriction, induction ---------------------------------------------------------------

def class_counts(G: MatrixGroup, idx) -> np.ndarray:
    """Number of elements of the index set in each class of G."""
    return np.bincount(G.class_of[np.asarray(idx)], minlength=G.num_classes)


def restrict(values, fusion) -> np.ndarray:
    """Values of class functions of G on the classes of a subgroup (given the fusion map)."""
    return np.asarray(values)[..., fusion, :]


def induce_from_elements(G: MatrixGroup, idx, element_values) -> np.ndarray:
    """Ind_H^G of a class function of H = G[idx] given by its value on every element of H.

    Ind θ(g_k) = (|G| / (|H| |C_k|)) Σ_{h ∈ H ∩ C_k} θ(h).
    """
    idx = np.asarray(idx)
    vals = np.asarray(element_values, dtype=np.int64)
    r = G.num_classes
    cls = G.class_of[idx]
    acc = np.zeros((r,) + vals.shape[1:], dtype=object)
    np.add.at(acc, cls, vals.astype(object))
    out = np.zeros_like(acc)
    H = len(idx)
    for k in range(r):
        num = acc[k] * G.order
        den = H * int(G.classes.sizes[k])
        if any(int(x) % den for x in np.ravel(num)):
            raise NotRational("induced values are not integral")
        out[k] = num // den
    # move the class axis after any leading character axes
    return np.moveaxis(out.astype(np.int64), 0, -2)


def induce(G: MatrixGroup, H: MatrixGroup, values) -> np.ndarray:
    """Ind_H^G for class functions given on the classes of H (H a subgroup of G)."""
    values = np.asarray(values, dtype=np.int64)
    elem = values[..., H.class_of, :]
    elem = np.moveaxis(elem, -2, 0)
    return induce_from_elements(G, G.index(H.mats), elem)


def multiplicity_in_subset(K: CyclotomicField, G: MatrixGroup, values, idx) -> np.ndarray:
    """(1/|S|) Σ_{s ∈ S} χ(s) for a subgroup S = G[idx] (dimension of S-invariants)."""
    counts = class_counts(G, idx)
    ones = np.zeros((1, G.num_classes, K.phi), dtype=np.int64)
    ones[..., 0] = 1
    X = np.asarray(values)
    single = X.ndim == 2
    out = pairing(K, X[None] if single else X, ones, counts, len(idx))[:, 0]
    return out[0] if single else out


def restriction_multiplicity(K, G: MatrixGroup, values, idx, theta=None) -> np.ndarray:
    """⟨Res_S χ, θ⟩_S for S = G[idx]; θ given per element of S (canonical), trivial if None."""
    if theta is None:
        return multiplicity_in_subset(K, G, values, idx)
    idx = np.asarray(idx)
    X = np.asarray(values, dtype=np.int64)
    single = X.ndim == 2
    X = X[None] if single else X
    # pair element-wise: Σ_s χ(s) conj θ(s)
    elem = X[:, G.class_of[idx]]  # (A, |S|, φ)
    out = pairing(K, elem, np.asarray(theta, dtype=np.int64)[None], np.ones(len(idx), dtype=np.int64),
                  len(idx))[:, 0]
    return out[0] if single else out


def genericity_multiplicity(K, G: MatrixGroup, values, N_idx, psi_exps, p: int) -> np.ndarray:
    """⟨Res_N χ, ψ⟩_N with ψ(n) = ζ_p^{psi_exps[n]} on N = G[N_idx]."""
    return restriction_multiplicity(K, G, values, N_idx, psi_values(K, psi_exps, p))


def psi_values(K: CyclotomicField, exps, p: int) -> np.ndarray:
    """Canonical arrays of ζ_p^{exps} inside Q(ζ_m) (p | m)."""
    exps = np.asarray(exps, dtype=np.int64)
    step = K.m // p
    return K.R[(exps * step) % K.m]
