"""Exact arithmetic in Q(ζ_m).

Two representations are used side by side:

* numpy integer arrays whose last axis holds coefficients in the power basis
  1, ζ, ..., ζ^{φ(m)-1} ("canonical").  Sums of root-of-unity multiples are
  done in the redundant basis of length m and folded back with ``reduce``.
* ``Cyc``: a scalar wrapping a flint ``fmpq_poly`` reduced modulo Φ_m, for
  products, inverses and small exact linear algebra.

Heavy identity checks go through ``ModularCertifier``: values are reduced at
every primitive m-th root of unity modulo primes ℓ ≡ 1 (mod m); a zero
residue pattern plus an a priori coefficient bound below ∏ℓ/2 proves the
identity over Z[ζ_m].
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, prod

import flint
import numpy as np
from sympy import isprime, primitive_root, totient


class CyclotomicField:
    def __init__(self, m: int):
        if m < 1:
            raise ValueError("m must be positive")
        self.m = m
        self.phi = int(totient(m))
        self.cyclo = flint.fmpz_poly.cyclotomic(m)
        self._cyclo_q = flint.fmpq_poly(self.cyclo)
        phi = self.phi
        R = np.zeros((m, phi), dtype=np.int64)
        for k in range(m):
            r = flint.fmpz_poly([0] * k + [1]) % self.cyclo
            coeffs = [int(c) for c in r.coeffs()]
            R[k, : len(coeffs)] = coeffs
        self.R = R
        self._R_float = R.astype(np.float64)
        self.reduction_height = int(np.abs(R).max())
        self.exps = np.arange(m)

    def __repr__(self):
        return f"Q(zeta_{self.m})"

    def __eq__(self, other):
        return isinstance(other, CyclotomicField) and other.m == self.m

    def __hash__(self):
        return hash(("Qzeta", self.m))

    # -- array helpers -------------------------------------------------------
    def reduce(self, X):
        """Redundant (..., m) integer array -> canonical (..., φ)."""
        X = np.asarray(X)
        if X.dtype == object:
            return X.dot(self.R.astype(object))
        X = X.astype(np.int64)
        # float64 BLAS is exact while every partial sum stays below 2^53
        if X.size and int(np.abs(X).max()) * self.m * self.reduction_height < 2**52:
            return np.rint(X.astype(np.float64) @ self._R_float).astype(np.int64)
        return X @ self.R

    def pad(self, C):
        C = np.asarray(C)
        out = np.zeros(C.shape[:-1] + (self.m,), dtype=C.dtype)
        out[..., : self.phi] = C
        return out

    def zeta_power(self, k: int) -> np.ndarray:
        return self.R[k % self.m].copy()

    def one(self) -> np.ndarray:
        return self.zeta_power(0)

    def zeros(self, shape=()) -> np.ndarray:
        return np.zeros(tuple(shape) + (self.phi,), dtype=np.int64)

    def mul_zeta(self, C, k):
        """Multiply canonical entries by ζ^k (k scalar or broadcastable int array)."""
        X = self.pad(C)
        k = np.asarray(k) % self.m
        if k.ndim == 0:
            X = np.roll(X, int(k), axis=-1)
        else:
            idx = (self.exps - k[..., None]) % self.m
            X = np.take_along_axis(X, np.broadcast_to(idx, X.shape), axis=-1)
        return self.reduce(X)

    def conj(self, C):
        X = self.pad(C)
        return self.reduce(X[..., (-self.exps) % self.m])

    def galois(self, C, a: int):
        """Apply ζ -> ζ^a (gcd(a, m) = 1)."""
        if gcd(a, self.m) != 1:
            raise ValueError("a must be a unit mod m")
        X = self.pad(C)
        out = np.zeros_like(X)
        np.add.at(out, (..., (a * self.exps) % self.m), X)
        return self.reduce(out)

    def lift(self, C, target: "CyclotomicField"):
        """Embed Q(ζ_m) into Q(ζ_M) for m | M via ζ_m -> ζ_M^{M/m}."""
        if target.m % self.m:
            raise ValueError(f"{self.m} does not divide {target.m}")
        step = target.m // self.m
        C = np.asarray(C)
        X = np.zeros(C.shape[:-1] + (target.m,), dtype=np.int64)
        X[..., : self.phi * step : step] = C
        return target.reduce(X)

    def mul(self, A, B):
        """Exact elementwise product of canonical arrays (broadcasting)."""
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        shape = np.broadcast_shapes(A.shape[:-1], B.shape[:-1])
        acc = np.zeros(shape + (self.m,), dtype=np.int64)
        Bp = np.broadcast_to(self.pad(B), shape + (self.m,))
        A = np.broadcast_to(A, shape + (self.phi,))
        for i in np.nonzero(A.reshape(-1, self.phi).any(axis=0))[0]:
            acc += A[..., i : i + 1] * np.roll(Bp, int(i), axis=-1)
        return self.reduce(acc)

    def is_rational(self, C):
        return ~np.asarray(C)[..., 1:].any(axis=-1)

    def is_zero(self, C):
        return ~np.asarray(C).any(axis=-1)

    def galois_trace(self, C):
        """Tr_{Q(ζ_m)/Q}; exact integer (times the common denominator)."""
        units = [a for a in range(self.m) if gcd(a, self.m) == 1]
        C = np.asarray(C, dtype=np.int64)
        total = np.zeros(C.shape[:-1], dtype=np.int64)
        for a in units:
            total += self.galois(C, a)[..., 0]
        return total

    def to_complex(self, C):
        z = np.exp(2j * np.pi * np.arange(self.phi) / self.m)
        return np.asarray(C) @ z

    # -- scalars ---------------------------------------------------------------
    def scalar(self, C, denom: int = 1) -> "Cyc":
        coeffs = [Fraction(int(c), int(denom)) for c in np.asarray(C).ravel()]
        return Cyc(self, flint.fmpq_poly([flint.fmpq(c.numerator, c.denominator)
                                          for c in coeffs]))

    def rational(self, r) -> "Cyc":
        r = Fraction(r)
        return Cyc(self, flint.fmpq_poly([flint.fmpq(r.numerator, r.denominator)]))

    def zeta(self, k: int = 1) -> "Cyc":
        return self.scalar(self.zeta_power(k))


@lru_cache(maxsize=None)
def cyclotomic_field(m: int) -> CyclotomicField:
    return CyclotomicField(m)


class Cyc:
    """An element of Q(ζ_m), immutable, reduced modulo Φ_m."""

    __slots__ = ("K", "poly")

    def __init__(self, K: CyclotomicField, poly):
        self.K = K
        if not isinstance(poly, flint.fmpq_poly):
            poly = flint.fmpq_poly(poly)
        if poly.degree() >= K.phi:
            poly = poly % K._cyclo_q
        self.poly = poly

    def _coerce(self, other):
        if isinstance(other, Cyc):
            if other.K.m != self.K.m:
                raise ValueError("mixing cyclotomic fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.K.rational(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Cyc(self.K, self.poly + other.poly)

    __radd__ = __add__

    def __neg__(self):
        return Cyc(self.K, -self.poly)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Cyc(self.K, self.poly - other.poly)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Cyc(self.K, (self.poly * other.poly) % self.K._cyclo_q)

    __rmul__ = __mul__

    def inverse(self) -> "Cyc":
        if self.poly.is_zero():
            raise ZeroDivisionError("inverse of 0 in Q(zeta)")
        g, s, _ = self.poly.xgcd(self.K._cyclo_q)
        if g.degree() != 0:
            raise ZeroDivisionError("non-invertible element")  # unreachable: Φ_m irreducible
        return Cyc(self.K, s / g[0])

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.K.rational(other)
        if not isinstance(other, Cyc):
            return NotImplemented
        return self.K.m == other.K.m and self.poly == other.poly

    def __hash__(self):
        return hash((self.K.m, tuple(str(c) for c in self.poly.coeffs())))

    def __bool__(self):
        return not self.poly.is_zero()

    def conj(self) -> "Cyc":
        num, den = self.to_array()
        return self.K.scalar(self.K.conj(num), den)

    def coefficients(self) -> list[Fraction]:
        out = [Fraction(int(c.p), int(c.q)) for c in self.poly.coeffs()]
        return out + [Fraction(0)] * (self.K.phi - len(out))

    def to_array(self) -> tuple[np.ndarray, int]:
        """(integer numerators, common denominator)."""
        co = self.coefficients()
        den = 1
        for c in co:
            den = den * c.denominator // gcd(den, c.denominator)
        return np.array([int(c * den) for c in co], dtype=np.int64), den

    def is_rational(self) -> bool:
        return self.poly.degree() <= 0

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coefficients()[0]

    def __complex__(self):
        co = self.coefficients()
        return complex(sum(float(c) * np.exp(2j * np.pi * k / self.K.m) for k, c in enumerate(co)))

    def __repr__(self):
        if self.is_rational():
            return str(self.to_fraction())
        terms = []
        for k, c in enumerate(self.coefficients()):
            if c:
                terms.append(f"{c}" if k == 0 else f"{c}*z{self.K.m}^{k}")
        return " + ".join(terms)


# -- modular certification -------------------------------------------------------

def primes_one_mod(m: int, count: int, below: int = 2**25) -> list[int]:
    """Largest primes ℓ < below with ℓ ≡ 1 (mod m)."""
    out = []
    start = below - 1 - ((below - 2) % m)
    ell = start
    while len(out) < count and ell > m:
        if isprime(ell):
            out.append(ell)
        ell -= m
    if len(out) < count:
        raise ValueError("not enough primes")
    return out


class ModularCertifier:
    """Evaluate canonical arrays at all primitive m-th roots of unity mod ℓ.

    ``embed(C)`` returns, per prime, residues with a trailing axis indexed by
    the units a mod m (the embedding ζ -> r^a).  Sums and products commute with
    ``embed``.  An element whose residues all vanish and whose canonical
    coefficients are bounded by B in absolute value is zero once ∏ℓ > 2B.
    """

    def __init__(self, K: CyclotomicField, nprimes: int):
        self.K = K
        self.primes = primes_one_mod(K.m, nprimes)
        self.modulus = prod(self.primes)
        self.units = np.array([a for a in range(K.m) if gcd(a, K.m) == 1], dtype=np.int64)
        self.V = []
        self.roots = []
        for ell in self.primes:
            r = pow(primitive_root(ell), (ell - 1) // K.m, ell)
            self.roots.append(r)
            V = np.zeros((K.phi, len(self.units)), dtype=np.int64)
            for j, u in enumerate(self.units):
                ru = pow(r, int(u), ell)
                col = [1]
                for _ in range(K.phi - 1):
                    col.append(col[-1] * ru % ell)
                V[:, j] = col
            self.V.append(V)
        where = {int(u): j for j, u in enumerate(self.units)}
        self.conj_perm = np.array([where[int((-u) % K.m)] for u in self.units])

    def certifies(self, bound: int) -> bool:
        return self.modulus > 2 * int(bound)

    def embed(self, C):
        """Canonical integer array (..., φ) -> list over primes of (..., #units) residues."""
        C = np.asarray(C, dtype=np.int64)
        out = []
        for ell, V in zip(self.primes, self.V):
            Cm = C % ell
            acc = np.zeros(C.shape[:-1] + (V.shape[1],), dtype=np.int64)
            step = 64  # 64 products of 25-bit residues stay below 2^63
            for s in range(0, self.K.phi, step):
                acc = (acc + Cm[..., s:s + step] @ V[s:s + step]) % ell
            out.append(acc)
        return out

    def conj(self, embedded):
        return [E[..., self.conj_perm] for E in embedded]

    def crt(self, residues) -> np.ndarray:
        """Symmetric CRT lift of per-prime integer arrays (object dtype)."""
        M = self.modulus
        total = np.zeros(np.shape(residues[0]), dtype=object)
        for ell, r in zip(self.primes, residues):
            Mi = M // ell
            total = total + np.asarray(r, dtype=object) * (Mi * pow(Mi, -1, ell))
        total = total % M
        return np.where(total > M // 2, total - M, total)


@lru_cache(maxsize=None)
def _certifier(m: int, nprimes: int) -> ModularCertifier:
    return ModularCertifier(cyclotomic_field(m), nprimes)


def certifier(K: CyclotomicField, bound: int) -> ModularCertifier:
    """Smallest cached certifier for field K whose prime product exceeds 2·bound."""
    nprimes = 1
    while True:
        C = _certifier(K.m, nprimes)
        if C.certifies(bound):
            return C
        nprimes += 1


def l1(C) -> np.ndarray:
    return np.abs(np.asarray(C, dtype=np.int64)).sum(axis=-1)
