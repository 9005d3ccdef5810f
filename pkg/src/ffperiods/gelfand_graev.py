"""Gelfand-Graev representations, Bessel functions and Whittaker models.

For G = GL_n(K) with a non-degenerate character ψ of the upper unipotent N,
the Bessel function of a generic irreducible π is

    B_π(g) = (1/|N|) Σ_{n ∈ N} ψ(n)^{-1} χ_π(gn).

It is determined by its values on the relevant cells (anti-block-diagonal
scalar matrices) together with B(n1 c n2) = ψ(n1) ψ(n2) B(c).  Values are
stored as canonical integer numerators over the common denominator |N|.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import kernels
from .chartable import CharacterTable, psi_values
from .cyclotomic import Cyc, CyclotomicField, certifier, l1
from .field_tower import AdditiveCharacter
from .matgroup import MatrixGroup, permutation_matrix, psi_exponents


class NotGeneric(ValueError):
    pass


class HeckeError(RuntimeError):
    pass


def _modmatmul(A, B, ell: int) -> np.ndarray:
    """A @ B mod ℓ for residues below 2^25, exact through float64 BLAS.

    B is split into 13-bit halves so every partial dot product stays below 2^53.
    """
    if ell >= 1 << 26 or A.shape[-1] > 1 << 14:
        raise ValueError("operands too large for exact float products")
    Af = np.ascontiguousarray(A, dtype=np.float64)
    lo = np.ascontiguousarray(B & 0x1FFF, dtype=np.float64)
    hi = np.ascontiguousarray(B >> 13, dtype=np.float64)
    r_lo = np.matmul(Af, lo).astype(np.int64) % ell
    r_hi = np.matmul(Af, hi).astype(np.int64) % ell
    return (r_hi * (1 << 13) + r_lo) % ell


# -- relevant cells -------------------------------------------------------------------

def compositions(n: int):
    for k in range(1, n + 1):
        for cuts in itertools.combinations(range(1, n), k - 1):
            bounds = (0,) + cuts + (n,)
            yield tuple(bounds[i + 1] - bounds[i] for i in range(k))


@dataclass(frozen=True)
class RelevantCell:
    composition: tuple[int, ...]
    torus: tuple[int, ...]
    matrix: np.ndarray = field(compare=False, repr=False)

    @property
    def label(self) -> str:
        return f"{self.composition}:{self.torus}"


def cell_matrix(composition, torus) -> np.ndarray:
    """Blocks a_i·I_{n_i} on the anti-block-diagonal, a_1 in the top-right corner."""
    n = sum(composition)
    M = np.zeros((n, n), dtype=np.int64)
    row = 0
    col_end = n
    for size, a in zip(composition, torus):
        for t in range(size):
            M[row + t, col_end - size + t] = a
        row += size
        col_end -= size
    return M


def relevant_cells(n: int, field_order: int) -> list[RelevantCell]:
    units = range(1, field_order)
    out = []
    for comp in compositions(n):
        for torus in itertools.product(units, repeat=len(comp)):
            out.append(RelevantCell(comp, torus, cell_matrix(comp, torus)))
    return out


def monomial_matrices(n: int, field_order: int) -> np.ndarray:
    """Every a·w with a diagonal invertible and w a permutation matrix."""
    out = []
    for perm in itertools.permutations(range(n)):
        w = permutation_matrix(perm)
        for diag in itertools.product(range(1, field_order), repeat=n):
            out.append(np.diag(diag) @ w)
    return np.array(out, dtype=np.int64)


# -- the Gelfand-Graev setup ----------------------------------------------------------------

class GelfandGraev:
    """Bessel machinery for G = GL_n(K) enumerated, a character table of G and ψ.

    ``scalings`` (t_1..t_{n-1}) replace ψ by n -> ψ(Σ t_i n_{i,i+1}).
    """

    def __init__(self, G: MatrixGroup, psi: AdditiveCharacter, table: CharacterTable,
                 scalings=None):
        if table.group is not G:
            raise ValueError("character table belongs to another group")
        self.G = G
        self.n = G.n
        self.field = G.field
        self.psi = psi
        self.p = psi.p
        self.table = table
        self.K: CyclotomicField = table.K
        if self.K.m % self.p:
            raise ValueError("cyclotomic field must contain the p-th roots of unity")
        self.scalings = (np.ones(self.n - 1, dtype=np.int64) if scalings is None
                         else np.asarray(scalings, dtype=np.int64))
        if (self.scalings == 0).any():
            raise ValueError("degenerate character: a simple-root slot is zero")
        self.cells = relevant_cells(self.n, self.field.order)
        self.cell_codes = kernels.encode(np.stack([c.matrix for c in self.cells]), self.field.order)
        order = np.argsort(self.cell_codes)
        self._sorted_codes = self.cell_codes[order]
        self._sorted_pos = order
        self.identity_cell = next(i for i, c in enumerate(self.cells) if len(c.composition) == 1
                                  and c.torus == (1,))

    def __repr__(self):
        return f"GelfandGraev({self.G.name}, p={self.p})"

    def with_scalings(self, scalings) -> "GelfandGraev":
        return GelfandGraev(self.G, self.psi, self.table, scalings)

    # -- N and ψ ------------------------------------------------------------------------
    @cached_property
    def N(self) -> np.ndarray:
        M = self.G.mats
        n = self.n
        low = np.tril(np.ones((n, n), dtype=bool), -1)
        mask = (M[:, low] == 0).all(axis=1) & (np.diagonal(M, axis1=1, axis2=2) == 1).all(axis=1)
        return np.flatnonzero(mask)

    def psi_exp(self, slots) -> np.ndarray:
        return psi_exponents(self.psi, slots, self.scalings)

    @cached_property
    def psi_on_N(self) -> np.ndarray:
        i = np.arange(self.n - 1)
        return self.psi_exp(self.G.mats[self.N][:, i, i + 1])

    def zeta_step(self) -> int:
        return self.K.m // self.p

    # -- Bruhat data -----------------------------------------------------------------------
    def cell_index(self, monomials) -> np.ndarray:
        codes = kernels.encode(monomials, self.field.order)
        pos = np.searchsorted(self._sorted_codes, codes)
        pos = np.minimum(pos, len(self._sorted_codes) - 1)
        hit = self._sorted_codes[pos] == codes
        return np.where(hit, self._sorted_pos[pos], -1)

    def bruhat_of(self, mats) -> tuple[np.ndarray, np.ndarray]:
        """(cell index or -1, ψ exponent of n1·n2) for each matrix."""
        mats = np.asarray(mats, dtype=np.int64)
        out_c, out_s = [], []
        for s in range(0, len(mats), 1 << 16):
            mono, slots = kernels.bruhat(self.field, mats[s:s + (1 << 16)])
            out_c.append(self.cell_index(mono))
            out_s.append(self.psi_exp(slots))
        if not out_c:
            return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
        return np.concatenate(out_c), np.concatenate(out_s)

    @cached_property
    def bruhat_all(self) -> tuple[np.ndarray, np.ndarray]:
        return self.bruhat_of(self.G.mats)

    def bruhat_idx(self, idx) -> tuple[np.ndarray, np.ndarray]:
        c, s = self.bruhat_all
        idx = np.asarray(idx)
        return c[idx], s[idx]

    # -- character sums ---------------------------------------------------------------------
    def character_sums(self, mats, values=None) -> np.ndarray:
        """Σ_n ψ(n)^{-1} χ(g n) for each matrix g and each character (numerators).

        Returns an array (characters, len(mats), φ).
        """
        values = self.table.values if values is None else np.asarray(values)
        G = self.G
        mats = np.asarray(mats, dtype=np.int64)
        NM = G.mats[self.N]
        psiN = self.psi_on_N
        nchar = values.shape[0]
        out = np.zeros((nchar, len(mats), self.K.phi), dtype=np.int64)
        step = self.zeta_step()
        for a, g in enumerate(mats):
            cls = G.class_of[G.index(G.matmul(g, NM))]
            for t in range(self.p):
                sel = cls[psiN == t]
                if len(sel) == 0:
                    continue
                counts = np.bincount(sel, minlength=G.num_classes)
                S = np.tensordot(counts, values, axes=([0], [1]))
                out[:, a] += self.K.mul_zeta(S, -t * step)
        return out

    @cached_property
    def cell_sums(self) -> np.ndarray:
        """Character sums at every relevant cell: (characters, cells, φ)."""
        return self.character_sums(np.stack([c.matrix for c in self.cells]))

    @cached_property
    def generic_mask(self) -> np.ndarray:
        """Gelfand-Graev multiplicity of each irreducible (0 or 1)."""
        val = self.cell_sums[:, self.identity_cell]
        N = len(self.N)
        if (val[:, 1:] != 0).any() or (val[:, 0] % N != 0).any():
            raise HeckeError("Gelfand-Graev multiplicities are not integers")
        mult = val[:, 0] // N
        if not np.isin(mult, [0, 1]).all():
            raise HeckeError("Gelfand-Graev representation is not multiplicity free")
        return mult.astype(bool)

    @property
    def generic_indices(self) -> np.ndarray:
        return np.flatnonzero(self.generic_mask)

    def bessel_via_character(self, char_index: int) -> "BesselTable":
        if not self.generic_mask[char_index]:
            raise NotGeneric(f"character {char_index} is not generic")
        return BesselTable(self, int(char_index), self.cell_sums[char_index].copy(), len(self.N))

    def all_bessel(self) -> list["BesselTable"]:
        return [self.bessel_via_character(i) for i in self.generic_indices]

    # -- Hecke algebra route ------------------------------------------------------------------
    def admissible_monomials(self) -> np.ndarray:
        """Monomials aw whose double coset N·aw·N carries a nonzero (N,ψ)-biequivariant function."""
        G = self.G
        mons = monomial_matrices(self.n, self.field.order)
        NM = G.mats[self.N]
        psiN = self.psi_on_N
        keep = []
        for m in mons:
            minv = G.mats[G.inverse[G.index(m)]]
            # n1 m n2 = m  <=>  n2 = m^-1 n1^-1 m
            n1inv = G.mats[G.inverse[self.N]]
            n2 = G.matmul(G.matmul(minv, n1inv), m)
            pos = G.find(n2)
            in_N = np.isin(pos, self.N)
            n2_exp = np.zeros(len(self.N), dtype=np.int64)
            i = np.arange(self.n - 1)
            n2_exp[in_N] = self.psi_exp(n2[in_N][:, i, i + 1])
            ok = ((psiN[in_N] + n2_exp[in_N]) % self.p == 0).all()
            if ok:
                keep.append(m)
        del NM
        return np.array(keep, dtype=np.int64)

    @cached_property
    def hecke_structure(self) -> np.ndarray:
        """counts[a, b, c, t] = #{x : x ∈ N c_a N, x^-1 c_c ∈ N c_b N, total ψ-exponent t}.

        The structure constants of (f_a * f_b)(g) = Σ_x f_a(x) f_b(x^-1 g) at g = c_c are
        Σ_t counts[a, b, c, t] ζ_p^t.
        """
        G = self.G
        ncell = len(self.cells)
        cx, sx = self.bruhat_all
        inv_mats = G.mats[G.inverse]
        counts = np.zeros((ncell, ncell, ncell, self.p), dtype=np.int64)
        for c, cell in enumerate(self.cells):
            cy, sy = self.bruhat_of(G.matmul(inv_mats, cell.matrix))
            ok = (cx >= 0) & (cy >= 0)
            t = (sx[ok] + sy[ok]) % self.p
            flat = (cx[ok] * ncell + cy[ok]) * self.p + t
            counts[:, :, c, :] = np.bincount(flat, minlength=ncell * ncell * self.p).reshape(
                ncell, ncell, self.p)
        return counts

    def hecke_operator(self, a: int) -> np.ndarray:
        """Left convolution by f_a as a (cells × cells) matrix over Q(ζ_p), canonical in K."""
        counts = self.hecke_structure[a]  # (b, c, t)
        step = self.zeta_step()
        out = np.zeros((len(self.cells), len(self.cells), self.K.phi), dtype=np.int64)
        for t in range(self.p):
            out += counts[:, :, t].T[..., None] * self.K.zeta_power(t * step)[None, None]
        return out  # out[c, b]: coefficient of f_c in f_a * f_b

    def hecke_commutative(self) -> bool:
        counts = self.hecke_structure
        K = self.K
        step = self.zeta_step()
        zs = np.stack([K.zeta_power(t * step) for t in range(self.p)])
        vals = np.tensordot(counts, zs, axes=([3], [0]))
        return bool((vals == np.swapaxes(vals, 0, 1)).all())

    def hecke_apply(self, a: int, vec) -> np.ndarray:
        """(f_a * Σ_b v_b f_b) as coefficients on the cells (numerators unchanged)."""
        counts = self.hecke_structure[a]
        step = self.zeta_step()
        vec = np.asarray(vec, dtype=np.int64)
        out = np.zeros_like(vec)
        for t in range(self.p):
            S = np.tensordot(counts[:, :, t].T, vec, axes=([1], [0]))
            out += self.K.mul_zeta(S, t * step)
        return out

    def bessel_via_hecke(self, seed: int = 0) -> list[np.ndarray]:
        """Common eigenvectors of the convolution algebra, normalized at the identity cell.

        Computed numerically from a seeded random combination, then each is
        identified with an exact character-sum table and certified exactly as a
        common eigenvector of every generator.  Returns the exact cell vectors
        (numerators over |N|) in eigen-order.
        """
        ncell = len(self.cells)
        if not self.hecke_commutative():
            raise HeckeError("convolution algebra is not commutative")
        rng = np.random.default_rng(seed)
        coeffs = rng.normal(size=ncell)
        L = np.zeros((ncell, ncell), dtype=complex)
        for a in range(ncell):
            L += coeffs[a] * self.K.to_complex(self.hecke_operator(a))
        vals, vecs = np.linalg.eig(L)
        if np.min(np.abs(vals[:, None] - vals[None, :]) + np.eye(ncell) * 1e9) < 1e-8:
            raise HeckeError("eigenvalues not separated")
        vecs = vecs / vecs[self.identity_cell][None, :]
        exact = {int(i): self.cell_sums[i] for i in self.generic_indices}
        approx = {i: self.K.to_complex(v) / len(self.N) for i, v in exact.items()}
        matched = []
        used = set()
        for j in range(ncell):
            v = vecs[:, j]
            best = min(approx, key=lambda i: np.abs(approx[i] - v).max())
            if np.abs(approx[best] - v).max() > 1e-6 or best in used:
                raise HeckeError("eigenvector does not match a character-sum table")
            used.add(best)
            matched.append(best)
        self.certify_eigenvectors([exact[i] for i in matched])
        return [exact[i] for i in matched]

    def certify_eigenvectors(self, vecs) -> None:
        """Exact check that f_a * B = λ_a B for every basis element f_a and every B.

        Both sides are evaluated at all primitive roots modulo enough primes
        ℓ ≡ 1 (mod m) that a vanishing residue vector forces the canonical
        integer coefficients of the difference to vanish.
        """
        K = self.K
        vecs = np.asarray(vecs, dtype=np.int64)  # (v, cells, φ)
        counts = self.hecke_structure  # (a, b, c, t)
        h = K.reduction_height
        vmax = int(l1(vecs).max())
        image_l1 = h * int(counts.sum(axis=(1, 3)).max()) * vmax
        bound = 2 * h * image_l1 * vmax
        cert = certifier(K, bound)
        step = self.zeta_step()
        zs = cert.embed(np.stack([K.zeta_power(t * step) for t in range(self.p)]))
        Ev = cert.embed(vecs)
        ic = self.identity_cell
        nc = len(self.cells)
        for ell, z, V in zip(cert.primes, zs, Ev):
            # H[u, (a, c), b] = Σ_t counts[a, b, c, t] ζ^t (mod ℓ) at the unit u
            H = np.einsum("abct,tu->uacb", counts % ell, z) % ell
            H = H.reshape(H.shape[0], nc * nc, nc)
            Vu = np.transpose(V, (2, 1, 0))  # (u, b, vector)
            image = _modmatmul(H, Vu, ell).reshape(-1, nc, nc, V.shape[0])  # (u, a, c, v)
            lam = image[:, :, ic]  # (u, a, v)
            base = Vu[:, ic]  # (u, v)
            lhs = image * base[:, None, None] % ell
            rhs = Vu[:, None] * lam[:, :, None] % ell
            if (lhs != rhs).any():
                raise HeckeError("character-sum table is not a common eigenvector")

    # -- twisted classes -------------------------------------------------------------------------
    def twisted_classes(self, kappa_perm) -> np.ndarray:
        """Orbit labels of h -> y^κ h y^-1 on G, given the index permutation of κ."""
        G = self.G
        N = G.order
        src, dst = [], []
        for s in G.generators:
            sk = G.mats[kappa_perm[s]]
            sinv = G.mats[G.inverse[s]]
            img = G.index(G.matmul(G.matmul(sk, G.mats), sinv))
            src.append(np.arange(N))
            dst.append(img)
        graph = coo_matrix((np.ones(N * len(src), dtype=np.int8),
                            (np.concatenate(src), np.concatenate(dst))), shape=(N, N))
        _, labels = connected_components(graph, directed=True, connection="weak")
        return labels


def psi_sweep(ctx, psi: AdditiveCharacter, iota: str | None):
    """All scalings t ∈ (E^×)^{n-1} with ψ_t trivial on N ∩ G_ι (every t if ι is None)."""
    E = psi.field
    n = ctx.n
    i = np.arange(n - 1)
    if iota is not None:
        slots = ctx.G.mats[ctx.N_iota(iota)][:, i, i + 1]
    out = []
    for t in itertools.product(range(1, E.order), repeat=n - 1):
        if iota is not None and psi_exponents(psi, slots, t).any():
            continue
        out.append(tuple(int(x) for x in t))
    return out


# -- Bessel tables ---------------------------------------------------------------------------

@dataclass
class BesselTable:
    setup: GelfandGraev
    char_index: int
    values: np.ndarray  # (cells, φ) numerators
    denom: int

    @property
    def K(self) -> CyclotomicField:
        return self.setup.K

    @property
    def degree(self) -> int:
        return int(self.setup.table.degrees[self.char_index])

    def value_at_cell(self, c: int) -> Cyc:
        return self.K.scalar(self.values[c], self.denom)

    def rows(self):
        """(composition, torus, value) for each cell."""
        for cell, v in zip(self.setup.cells, self.values):
            yield cell.composition, cell.torus, self.K.scalar(v, self.denom)

    def evaluate_idx(self, idx) -> np.ndarray:
        """Numerators (over ``denom``) of B at group elements given by index."""
        c, s = self.setup.bruhat_idx(idx)
        return self._from_bruhat(c, s)

    def evaluate(self, mats) -> np.ndarray:
        c, s = self.setup.bruhat_of(mats)
        return self._from_bruhat(c, s)

    @cached_property
    def _shifted(self) -> np.ndarray:
        """ψ(n1 n2)·B(c) for every cell c and exponent t: (cells, p, φ)."""
        step = self.setup.zeta_step()
        return np.stack([self.K.mul_zeta(self.values, t * step) for t in range(self.setup.p)], axis=1)

    def _from_bruhat(self, c, s) -> np.ndarray:
        out = np.zeros((len(c), self.K.phi), dtype=np.int64)
        ok = c >= 0
        out[ok] = self._shifted[c[ok], s[ok]]
        return out

    @cached_property
    def on_group(self) -> np.ndarray:
        return self.evaluate_idx(np.arange(self.setup.G.order))

    def to_complex_cells(self) -> np.ndarray:
        return self.K.to_complex(self.values) / self.denom


def bessel_via_character(setup: GelfandGraev, char_index: int) -> BesselTable:
    return setup.bessel_via_character(char_index)


def bessel_via_hecke(setup: GelfandGraev, seed: int = 0) -> list[BesselTable]:
    vecs = setup.bessel_via_hecke(seed)
    tables = []
    for v in vecs:
        i = next(int(j) for j in setup.generic_indices
                 if (setup.cell_sums[j] == v).all())
        tables.append(BesselTable(setup, i, v, len(setup.N)))
    return tables


# -- dimension from the Bessel function ---------------------------------------------------

def bessel_square_sum(B: BesselTable) -> Cyc:
    """Σ_{g∈G} B(g) B(g^-1) over the enumerated group."""
    G = B.setup.G
    vals = B.on_group
    prod = B.K.mul(vals, vals[G.inverse])
    total = prod.astype(object).sum(axis=0).astype(np.int64)
    return B.K.scalar(total, B.denom**2)


def dim_from_bessel(B: BesselTable) -> int:
    s = bessel_square_sum(B)
    if not s.is_rational():
        raise ValueError("Σ B(g)B(g^-1) is not rational")
    d = Fraction(B.setup.G.order) / s.to_fraction()
    if d.denominator != 1:
        raise ValueError(f"|G| / Σ B B^- = {d} is not an integer")
    return int(d)


def dim_from_bessel_cellwise(B: BesselTable) -> int:
    """Same sum, computed cell by cell as Σ_c (|N|²/|Stab_c|) B(c) B(c^-1)."""
    setup = B.setup
    G = setup.G
    K = B.K
    Nn = len(setup.N)
    total = np.zeros(K.phi, dtype=object)
    cells = np.stack([c.matrix for c in setup.cells])
    inv_cells = G.mats[G.inverse[G.index(cells)]]
    inv_idx = setup.cell_index(inv_cells)
    NM = G.mats[setup.N]
    for c, cell in enumerate(setup.cells):
        m = cell.matrix
        minv = inv_cells[c]
        conj = G.matmul(G.matmul(minv, NM), m)
        stab = int(np.isin(G.find(conj), setup.N).sum())
        size = Nn * Nn // stab
        total = total + size * K.mul(B.values[c], B.values[inv_idx[c]]).astype(object)
    s = K.scalar(np.asarray(total, dtype=np.int64), B.denom**2)
    d = Fraction(G.order) / s.to_fraction()
    if d.denominator != 1:
        raise ValueError("non-integral dimension")
    return int(d)


# -- explicit Whittaker models --------------------------------------------------------------

def _cyc_solve(K: CyclotomicField, A: list[list[Cyc]], Bm: list[list[Cyc]]) -> list[list[Cyc]]:
    """A^{-1} Bm by Gauss-Jordan over Q(ζ_m)."""
    n = len(A)
    M = [row[:] + brow[:] for row, brow in zip(A, Bm)]
    width = len(M[0])
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        M[c], M[piv] = M[piv], M[c]
        inv = M[c][c].inverse()
        M[c] = [x * inv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c]:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [row[n:width] for row in M]


def _cyc_matmul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = A[i][0] * B[0][j]
            for t in range(1, k):
                acc = acc + A[i][t] * B[t][j]
            row.append(acc)
        out.append(row)
    return out


@dataclass
class WhittakerModel:
    """The span of right translates of B inside Ind_N^G ψ, in the basis φ_i = B(· x_i^{-1}).

    Coordinates are values at the points x_j: a function W in the model is
    represented by K^{-1}[W(x_j)], K_{ji} = B(x_j x_i^{-1}).
    """

    bessel: BesselTable
    points: np.ndarray  # element indices x_1..x_d

    @property
    def dim(self) -> int:
        return len(self.points)

    @property
    def K(self) -> CyclotomicField:
        return self.bessel.K

    def _values(self, left, right) -> list[list[Cyc]]:
        """[B(left_j · right_i)] as Cyc, left/right matrices."""
        G = self.bessel.setup.G
        d = self.dim
        prods = G.matmul(left[:, None], right[None, :]).reshape(-1, G.n, G.n)
        num = self.bessel.evaluate(prods)
        return [[self.K.scalar(num[j * d + i], self.bessel.denom) for i in range(d)]
                for j in range(d)]

    @cached_property
    def gram(self) -> list[list[Cyc]]:
        G = self.bessel.setup.G
        X = G.mats[self.points]
        Xinv = G.mats[G.inverse[self.points]]
        return self._values(X, Xinv)

    def action(self, g_idx: int) -> list[list[Cyc]]:
        G = self.bessel.setup.G
        X = G.mats[self.points]
        Xinv = G.mats[G.inverse[self.points]]
        XG = G.matmul(X, G.mats[g_idx])
        return _cyc_solve(self.K, self.gram, self._values(XG, Xinv))

    def intertwiner(self, kappa_perm) -> list[list[Cyc]]:
        """Matrix of T_κ: W -> W∘κ."""
        G = self.bessel.setup.G
        Xk = G.mats[kappa_perm[self.points]]
        Xinv = G.mats[G.inverse[self.points]]
        return _cyc_solve(self.K, self.gram, self._values(Xk, Xinv))

    def bessel_coordinates(self) -> list[Cyc]:
        """Coordinates of B itself."""
        G = self.bessel.setup.G
        num = self.bessel.evaluate_idx(self.points)
        col = [[self.K.scalar(v, self.bessel.denom)] for v in num]
        del G
        return [r[0] for r in _cyc_solve(self.K, self.gram, col)]


def whittaker_model(B: BesselTable, seed: int = 0) -> WhittakerModel:
    """Choose d points making the evaluation matrix invertible (numeric rank, then exact)."""
    setup = B.setup
    G = setup.G
    d = B.degree
    rng = np.random.default_rng(seed)
    cand = np.concatenate([[G.identity], rng.permutation(G.order)])
    cplx = B.K.to_complex(B.on_group) / B.denom
    chosen: list[int] = []
    inv = G.inverse
    for x in cand:
        if len(chosen) == d:
            break
        if x in chosen:
            continue
        trial = chosen + [int(x)]
        pts = np.array(trial)
        prods = G.index(G.matmul(G.mats[pts][:, None], G.mats[inv[pts]][None, :]).reshape(-1, G.n, G.n))
        M = cplx[prods].reshape(len(trial), len(trial))
        if np.linalg.matrix_rank(M, tol=1e-8) == len(trial):
            chosen = trial
    if len(chosen) != d:
        raise ValueError("could not find an invertible evaluation matrix")
    return WhittakerModel(B, np.array(chosen))


def matrix_trace(M) -> Cyc:
    acc = M[0][0]
    for i in range(1, len(M)):
        acc = acc + M[i][i]
    return acc


def twisted_trace_fast(B: BesselTable, kappa_perm, labels=None) -> np.ndarray:
    """Tr[π(g) T_κ] for every g as (numerators, denominators) via B averaged on twisted classes.

    Tr[π(g)T_κ] = (dim π / |G|) Σ_y B(y^κ g^κ y^-1) = dim π · mean of B over the
    orbit of g^κ under h -> y^κ h y^-1.
    Returns (num, den) arrays of shape (|G|, φ) and (|G|,).
    """
    setup = B.setup
    G = setup.G
    if labels is None:
        labels = setup.twisted_classes(kappa_perm)
    vals = B.on_group.astype(object)
    nlab = labels.max() + 1
    sums = np.zeros((nlab, B.K.phi), dtype=object)
    np.add.at(sums, labels, vals)
    sizes = np.bincount(labels, minlength=nlab)
    lab_k = labels[kappa_perm[np.arange(G.order)]]
    num = (sums[lab_k] * B.degree).astype(np.int64)
    den = (sizes[lab_k] * B.denom).astype(np.int64)
    return num, den


def psi_check_values(setup: GelfandGraev) -> np.ndarray:
    """ψ on N as canonical values in K (for exact pairing with class functions)."""
    return psi_values(setup.K, setup.psi_on_N, setup.p)
