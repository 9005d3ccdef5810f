"""Finite fields F_p ⊂ F_q ⊂ F_{q^2} with Frobenius, trace, norm and additive characters.

Elements are encoded as integers 0 <= x < p^k whose base-p digits are the
coefficients (little-endian) of a polynomial in the fixed generator.  All
arithmetic is table driven; every operation accepts numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from sympy import factorint, isprime

MAX_FIELD_SIZE = 2**20
TABLE_LIMIT = 4096


class FieldError(ValueError):
    pass


def _poly_mulmod(a, b, mod, p):
    # a, b: coefficient lists (little-endian), mod monic of degree k
    k = len(mod) - 1
    out = [0] * (2 * k - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    for d in range(len(out) - 1, k - 1, -1):
        c = out[d]
        if c:
            for t in range(k + 1):
                out[d - k + t] = (out[d - k + t] - c * mod[t]) % p
    return out[:k]


def _is_primitive(mod, p):
    """True when x generates (F_p[x]/mod)^× (which forces mod irreducible)."""
    k = len(mod) - 1
    order = p**k - 1
    if k == 1:
        root = (-mod[0]) % p
        if root == 0:
            return False
        return all(pow(root, order // r, p) != 1 for r in factorint(order)) if order > 1 else True

    def xpow(e):
        result = [1] + [0] * (k - 1)
        base = [0, 1] + [0] * (k - 2)
        while e:
            if e & 1:
                result = _poly_mulmod(result, base, mod, p)
            base = _poly_mulmod(base, base, mod, p)
            e >>= 1
        return result

    one = [1] + [0] * (k - 1)
    if xpow(order) != one:
        return False
    return all(xpow(order // r) != one for r in factorint(order))


def conway_like_modulus(p: int, k: int) -> tuple[int, ...]:
    """Least monic primitive polynomial of degree k over F_p.

    Coefficients are little-endian with the leading 1 last.  Candidates are
    ordered by the integer sum(c_i p^i) of the lower coefficients, so the choice
    is reproducible and cache keys are stable.
    """
    for code in range(p**k):
        low = [(code // p**i) % p for i in range(k)]
        mod = low + [1]
        if mod[0] == 0 and not (p == 2 and k == 1):
            continue
        if _is_primitive(mod, p):
            return tuple(mod)
    raise FieldError(f"no primitive polynomial of degree {k} over F_{p}")


class FiniteField:
    """The field F_{p^k} built on a primitive modulus.

    ``gen`` (the class of x) has multiplicative order p^k - 1.
    """

    def __init__(self, p: int, k: int, modulus: tuple[int, ...] | None = None):
        if not isprime(p):
            raise FieldError(f"{p} is not prime")
        if k < 1:
            raise FieldError("k must be positive")
        if p**k > MAX_FIELD_SIZE:
            raise FieldError(f"F_{p}^{k} exceeds the enumeration guard {MAX_FIELD_SIZE}")
        self.p = p
        self.k = k
        self.order = p**k
        self.modulus = tuple(modulus) if modulus is not None else conway_like_modulus(p, k)
        if len(self.modulus) != k + 1 or self.modulus[-1] != 1:
            raise FieldError("modulus must be monic of degree k")
        if not _is_primitive(list(self.modulus), p):
            raise FieldError("modulus is not primitive")
        self._build_tables()

    def __repr__(self):
        return f"GF({self.p}^{self.k})"

    def __eq__(self, other):
        return isinstance(other, FiniteField) and (self.p, self.k, self.modulus) == (
            other.p, other.k, other.modulus)

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    # -- construction -----------------------------------------------------
    def _build_tables(self):
        p, k, Q = self.p, self.k, self.order
        self.digits = np.array([[(x // p**i) % p for i in range(k)] for x in range(Q)],
                               dtype=np.int64)
        self._weights = p ** np.arange(k, dtype=np.int64)
        exp = np.zeros(Q - 1, dtype=np.int64)
        log = np.full(Q, -1, dtype=np.int64)
        cur = [1] + [0] * (k - 1)
        x = [0, 1] + [0] * (k - 2) if k > 1 else [(-self.modulus[0]) % p]
        for e in range(Q - 1):
            code = sum(c * p**i for i, c in enumerate(cur))
            exp[e] = code
            log[code] = e
            cur = _poly_mulmod(cur, x, list(self.modulus), p) if k > 1 else [
                (cur[0] * x[0]) % p]
        if (log[1:] < 0).any():
            raise FieldError("generator does not span the multiplicative group")
        self.exp_table = exp
        self.log_table = log
        self.gen = int(exp[1 % (Q - 1)]) if Q > 2 else 1
        neg = self.from_digits((-self.digits) % p)
        self.neg_table = neg
        inv = np.zeros(Q, dtype=np.int64)
        inv[1:] = exp[(-log[1:]) % (Q - 1)]
        self.inv_table = inv
        if Q <= TABLE_LIMIT:
            a = np.arange(Q)
            self.add_table = self.from_digits(
                (self.digits[:, None, :] + self.digits[None, :, :]) % p)
            la, lb = log[a][:, None], log[a][None, :]
            mul = exp[(la + lb) % (Q - 1)]
            mul[(la < 0) | (lb < 0)] = 0
            self.mul_table = mul.astype(np.int64)
        else:
            self.add_table = None
            self.mul_table = None

    # -- encoding ---------------------------------------------------------
    def from_digits(self, d):
        return np.asarray(d, dtype=np.int64) @ self._weights

    def elements(self):
        return np.arange(self.order, dtype=np.int64)

    def nonzero(self):
        return np.arange(1, self.order, dtype=np.int64)

    def prime_field_elements(self):
        return np.arange(self.p, dtype=np.int64)

    # -- arithmetic (vectorized) -------------------------------------------
    def add(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.add_table is not None:
            return self.add_table[a, b]
        return self.from_digits((self.digits[a] + self.digits[b]) % self.p)

    def neg(self, a):
        return self.neg_table[np.asarray(a, dtype=np.int64)]

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.mul_table is not None:
            return self.mul_table[a, b]
        la, lb = self.log_table[a], self.log_table[b]
        out = self.exp_table[(la + lb) % (self.order - 1)]
        return np.where((la < 0) | (lb < 0), 0, out)

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of 0 in a finite field")
        return self.inv_table[a]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def power(self, a, e: int):
        a = np.asarray(a, dtype=np.int64)
        la = self.log_table[a]
        out = self.exp_table[(la * e) % (self.order - 1)]
        if e == 0:
            return np.ones_like(a)
        return np.where(la < 0, 0, out)

    def frobenius(self, a, times: int = 1):
        """x -> x^(p^times)."""
        return self.power(a, self.p**times)

    def absolute_trace(self, a):
        """Tr_{F/F_p}(a) as an integer in [0, p)."""
        a = np.asarray(a, dtype=np.int64)
        acc = np.zeros_like(a)
        cur = a
        for _ in range(self.k):
            acc = self.add(acc, cur)
            cur = self.frobenius(cur)
        return acc  # prime-field elements encode as their residue

    def sum(self, values):
        acc = 0
        for v in np.asarray(values, dtype=np.int64).ravel():
            acc = int(self.add(acc, v))
        return acc

    def multiplicative_order(self, a: int) -> int:
        if a == 0:
            raise ValueError("0 has no multiplicative order")
        from math import gcd
        la = int(self.log_table[a])
        return (self.order - 1) // gcd(la, self.order - 1)

    def element_str(self, a: int) -> str:
        a = int(a)
        if a == 0:
            return "0"
        if a < self.p:
            return str(a)
        return f"g^{int(self.log_table[a])}"


@dataclass(frozen=True)
class AdditiveCharacter:
    """x -> zeta_p^{Tr_{E/F_p}(scale * x)} on the field ``field``.

    ``exps[x]`` is the exponent of zeta_p, so the character is stored exactly.
    ``mode`` records which involution it was built to be compatible with.
    """

    field: FiniteField
    scale: int
    mode: str = "sigma"
    exps: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.scale == 0:
            raise FieldError("scale must be nonzero")
        exps = self.field.absolute_trace(self.field.mul(self.field.elements(), self.scale))
        object.__setattr__(self, "exps", exps % self.field.p)

    @property
    def p(self):
        return self.field.p

    def __call__(self, x):
        """Value as a complex number (for display and float mode)."""
        return np.exp(2j * np.pi * self.exps[np.asarray(x, dtype=np.int64)] / self.p)

    def exponent(self, x):
        return self.exps[np.asarray(x, dtype=np.int64)]

    def scaled(self, t: int) -> "AdditiveCharacter":
        return AdditiveCharacter(self.field, int(self.field.mul(self.scale, t)), self.mode)


class FieldTower:
    """F_p ⊂ F = F_q ⊂ E = F_{q^2}, with F realized inside E as the σ-fixed points."""

    def __init__(self, p: int, k: int):
        if not isprime(p):
            raise FieldError(f"{p} is not prime")
        if p ** (2 * k) > MAX_FIELD_SIZE:
            raise FieldError(f"p^(2k) = {p**(2*k)} exceeds the guard {MAX_FIELD_SIZE}")
        self.p = p
        self.k = k
        self.q = p**k
        self.F = FiniteField(p, k)
        self.E = FiniteField(p, 2 * k)

    def __repr__(self):
        return f"FieldTower(F_{self.p} ⊂ F_{self.q} ⊂ F_{self.q**2})"

    @property
    def descriptor(self) -> dict:
        return {"p": self.p, "k": self.k, "F_modulus": list(self.F.modulus),
                "E_modulus": list(self.E.modulus)}

    # -- subfield --------------------------------------------------------
    def frobenius(self, x):
        """σ(x) = x^q on E."""
        return self.E.power(x, self.q)

    @cached_property
    def subfield(self) -> np.ndarray:
        """Sorted codes of the elements of F inside E."""
        x = self.E.elements()
        return x[self.frobenius(x) == x]

    def in_subfield(self, x):
        x = np.asarray(x, dtype=np.int64)
        return self.frobenius(x) == x

    @cached_property
    def embedding(self) -> np.ndarray:
        """embedding[c] = image in E of the element of the standalone F_q encoded c."""
        E, F = self.E, self.F
        mod = F.modulus
        roots = []
        for r in self.subfield:
            acc = 0
            pw = 1
            for c in mod:
                acc = int(E.add(acc, E.mul(pw, c)))
                pw = int(E.mul(pw, r))
            if acc == 0:
                roots.append(int(r))
        if not roots:
            raise FieldError("modulus of F has no root in E")
        r = min(roots)
        out = np.zeros(F.order, dtype=np.int64)
        for code in range(F.order):
            acc = 0
            pw = 1
            for c in F.digits[code]:
                acc = int(E.add(acc, E.mul(pw, int(c))))
                pw = int(E.mul(pw, r))
            out[code] = acc
        return out

    # -- trace / norm --------------------------------------------------------
    def trace_E_F(self, x):
        return self.E.add(x, self.frobenius(x))

    def norm_E_F(self, x):
        return self.E.mul(x, self.frobenius(x))

    def trace_zero_delta(self) -> int:
        """Least power g^e (e >= 0) of the generator of E^× with trace zero."""
        E = self.E
        for e in range(E.order - 1):
            d = int(E.exp_table[e])
            if int(self.trace_E_F(d)) == 0:
                return d
        raise FieldError("no trace-zero element")  # unreachable: ker Tr has q elements

    def additive_character(self, mode: str = "sigma") -> AdditiveCharacter:
        """ψ on E: ψ0(Tr x) in σ-mode, ψ0(Tr Δx) in τ-mode, ψ0 = zeta_p^{Tr_{F/F_p}}."""
        if mode == "sigma":
            return AdditiveCharacter(self.E, 1, "sigma")
        if mode == "tau":
            return AdditiveCharacter(self.E, self.trace_zero_delta(), "tau")
        raise ValueError(f"unknown mode {mode!r}")


def build_tower(p: int, k: int) -> FieldTower:
    return FieldTower(p, k)


def trace_E_F(tower: FieldTower, x):
    return tower.trace_E_F(x)


def norm_E_F(tower: FieldTower, x):
    return tower.norm_E_F(x)


def trace_zero_delta(tower: FieldTower) -> int:
    return tower.trace_zero_delta()


def additive_character(tower: FieldTower, mode: str = "sigma") -> AdditiveCharacter:
    return tower.additive_character(mode)
