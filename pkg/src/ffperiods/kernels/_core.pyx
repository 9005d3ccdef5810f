# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the loops in ``_fallback``; same signatures and results.

wraparound is off, so Python-level indexing below never uses negative indices.
"""

import numpy as np


ctypedef long long i64


def matmul(A, B, add, mul):
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    A, B = np.broadcast_arrays(A, B)
    shape = A.shape
    n = shape[len(shape) - 1]
    cdef const i64[:, :, ::1] a = np.ascontiguousarray(A.reshape(-1, n, n))
    cdef const i64[:, :, ::1] b = np.ascontiguousarray(B.reshape(-1, n, n))
    cdef const i64[:, ::1] ad = np.ascontiguousarray(add, dtype=np.int64)
    cdef const i64[:, ::1] mu = np.ascontiguousarray(mul, dtype=np.int64)
    out_arr = np.empty((a.shape[0], n, n), dtype=np.int64)
    cdef i64[:, :, ::1] out = out_arr
    cdef Py_ssize_t t, i, j, k, N = a.shape[0], nn = n
    cdef i64 acc
    with nogil:
        for t in range(N):
            for i in range(nn):
                for j in range(nn):
                    acc = mu[a[t, i, 0], b[t, 0, j]]
                    for k in range(1, nn):
                        acc = ad[acc, mu[a[t, i, k], b[t, k, j]]]
                    out[t, i, j] = acc
    return out_arr.reshape(shape)


def encode(M, long long Q):
    M = np.asarray(M, dtype=np.int64)
    lead = M.shape[:-2]
    cdef const i64[:, ::1] flat = np.ascontiguousarray(M.reshape(-1, M.shape[M.ndim - 1] * M.shape[M.ndim - 2]))
    out_arr = np.empty(flat.shape[0], dtype=np.int64)
    cdef i64[::1] out = out_arr
    cdef Py_ssize_t t, e, N = flat.shape[0], L = flat.shape[1]
    cdef i64 acc, w
    with nogil:
        for t in range(N):
            acc = 0
            w = 1
            for e in range(L):
                acc += flat[t, e] * w
                w *= Q
            out[t] = acc
    return out_arr.reshape(lead)


def decode(codes, long long Q, int n):
    codes = np.asarray(codes, dtype=np.int64)
    shape = codes.shape
    cdef const i64[::1] c = np.ascontiguousarray(codes.ravel())
    out_arr = np.empty((c.shape[0], n * n), dtype=np.int64)
    cdef i64[:, ::1] out = out_arr
    cdef Py_ssize_t t, e, N = c.shape[0], L = n * n
    cdef i64 x
    with nogil:
        for t in range(N):
            x = c[t]
            for e in range(L):
                out[t, e] = x % Q
                x = x // Q
    return out_arr.reshape(shape + (n, n))


def bruhat(M, add, mul, neg, inv):
    g_arr = np.array(M, dtype=np.int64, copy=True, order="C")
    cdef i64[:, :, ::1] g = g_arr
    cdef const i64[:, ::1] ad = np.ascontiguousarray(add, dtype=np.int64)
    cdef const i64[:, ::1] mu = np.ascontiguousarray(mul, dtype=np.int64)
    cdef const i64[::1] ng = np.ascontiguousarray(neg, dtype=np.int64)
    cdef const i64[::1] iv = np.ascontiguousarray(inv, dtype=np.int64)
    cdef Py_ssize_t N = g.shape[0], n = g.shape[1]
    s_arr = np.zeros((N, max(n - 1, 0)), dtype=np.int64)
    cdef i64[:, ::1] s = s_arr
    L_arr = np.zeros((n, n), dtype=np.int64)
    R_arr = np.zeros((n, n), dtype=np.int64)
    used_arr = np.zeros(n, dtype=np.int64)
    cdef i64[:, ::1] Lm = L_arr
    cdef i64[:, ::1] Rm = R_arr
    cdef i64[::1] used = used_arr
    cdef Py_ssize_t t, r, i, j, piv
    cdef i64 pinv, c
    cdef Py_ssize_t bad = -1
    with nogil:
        for t in range(N):
            for i in range(n):
                used[i] = 0
                for j in range(n):
                    Lm[i, j] = 1 if i == j else 0
                    Rm[i, j] = 1 if i == j else 0
            for r in range(n - 1, -1, -1):
                piv = 0
                while piv < n and (g[t, r, piv] == 0 or used[piv]):
                    piv += 1
                if piv == n:
                    bad = t
                    break
                used[piv] = 1
                pinv = iv[g[t, r, piv]]
                for j in range(n):
                    if j == piv or g[t, r, j] == 0:
                        continue
                    c = mu[g[t, r, j], pinv]
                    for i in range(n):
                        g[t, i, j] = ad[g[t, i, j], ng[mu[c, g[t, i, piv]]]]
                        Rm[i, j] = ad[Rm[i, j], ng[mu[c, Rm[i, piv]]]]
                for i in range(r):
                    if g[t, i, piv] == 0:
                        continue
                    c = mu[g[t, i, piv], pinv]
                    for j in range(n):
                        g[t, i, j] = ad[g[t, i, j], ng[mu[c, g[t, r, j]]]]
                        Lm[i, j] = ad[Lm[i, j], ng[mu[c, Lm[r, j]]]]
            if bad >= 0:
                break
            for i in range(n - 1):
                s[t, i] = ng[ad[Lm[i, i + 1], Rm[i, i + 1]]]
    if bad >= 0:
        raise ValueError(f"matrix {bad} of the batch is singular")
    return g_arr, s_arr


def pair_histogram(a, b, Py_ssize_t size):
    cdef const i64[::1] aa = np.ascontiguousarray(a, dtype=np.int64).ravel()
    cdef const i64[::1] bb = np.ascontiguousarray(b, dtype=np.int64).ravel()
    out_arr = np.zeros((size, size), dtype=np.int64)
    cdef i64[:, ::1] out = out_arr
    cdef Py_ssize_t t, N = aa.shape[0]
    with nogil:
        for t in range(N):
            out[aa[t], bb[t]] += 1
    return out_arr
