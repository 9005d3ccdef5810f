"""Pure numpy versions of the hot loops.

Field elements are integer codes; ``add``/``mul`` are the Q×Q tables of the
field, ``neg``/``inv`` length-Q vectors (inv[0] is unused).
"""

from __future__ import annotations

import numpy as np


def matmul(A, B, add, mul):
    """Batched product of (N, n, n) code arrays (either side may be (n, n))."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    A, B = np.broadcast_arrays(A, B)
    n = A.shape[-1]
    out = mul[A[..., :, 0, None], B[..., None, 0, :]]
    for k in range(1, n):
        out = add[out, mul[A[..., :, k, None], B[..., None, k, :]]]
    return out


def encode(M, Q: int):
    """Σ entry·Q^pos over the row-major entries; injective for Q^(n²) < 2^63."""
    M = np.asarray(M, dtype=np.int64)
    flat = M.reshape(M.shape[:-2] + (-1,))
    weights = Q ** np.arange(flat.shape[-1], dtype=np.int64)
    return flat @ weights


def decode(codes, Q: int, n: int):
    codes = np.asarray(codes, dtype=np.int64)
    digits = (codes[..., None] // (Q ** np.arange(n * n, dtype=np.int64))) % Q
    return digits.reshape(codes.shape + (n, n))


def bruhat(M, add, mul, neg, inv):
    """Factor each g = n1·m·n2 (n1, n2 upper unipotent, m monomial).

    Returns (m, s) where m has shape (N, n, n) and s[:, i] is the sum of the
    (i, i+1) entries of n1 and n2.
    """
    g = np.array(M, dtype=np.int64, copy=True)
    N, n, _ = g.shape
    L = np.broadcast_to(np.eye(n, dtype=np.int64), g.shape).copy()
    R = L.copy()
    rows = np.arange(N)
    used = np.zeros((N, n), dtype=bool)
    for r in range(n - 1, -1, -1):
        cand = (g[:, r, :] != 0) & ~used
        if not cand.any(axis=1).all():
            raise ValueError("singular matrix in the batch")
        piv = np.argmax(cand, axis=1)
        used[rows, piv] = True
        pinv = inv[g[rows, r, piv]]
        for j in range(n):
            c = mul[g[:, r, j], pinv]
            c[piv == j] = 0
            # column j -= c * column piv, on g and on R
            g[:, :, j] = add[g[:, :, j], neg[mul[c[:, None], g[rows, :, piv]]]]
            R[:, :, j] = add[R[:, :, j], neg[mul[c[:, None], R[rows, :, piv]]]]
        for i in range(r):
            c = mul[g[rows, i, piv], pinv]
            g[:, i, :] = add[g[:, i, :], neg[mul[c[:, None], g[:, r, :]]]]
            L[:, i, :] = add[L[:, i, :], neg[mul[c[:, None], L[:, r, :]]]]
    idx = np.arange(n - 1)
    s = neg[add[L[:, idx, idx + 1], R[:, idx, idx + 1]]]
    return g, s


def pair_histogram(a, b, size: int):
    """counts[i, j] = #{t : a[t] = i, b[t] = j}."""
    flat = np.asarray(a, dtype=np.int64) * size + np.asarray(b, dtype=np.int64)
    return np.bincount(flat, minlength=size * size).reshape(size, size)
