"""Hot loops: batched GF matrix products, encodings, Bruhat factorization.

The compiled extension is used when it was built; otherwise the numpy
fallback.  Set FFPERIODS_PURE_PYTHON=1 to force the fallback.
"""

from __future__ import annotations

import os

from . import _fallback

BACKEND = "python"
_impl = _fallback

if not os.environ.get("FFPERIODS_PURE_PYTHON"):
    try:
        from . import _core as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _fallback


def backend_module(name: str | None = None):
    """The kernel module for ``name`` ("cython" or "python"), or the active one."""
    if name is None:
        return _impl
    if name == "python":
        return _fallback
    if name == "cython":
        from . import _core

        return _core
    raise ValueError(f"unknown backend {name!r}")


def _field_tables(field):
    if field.add_table is None:
        raise ValueError(f"{field} is too large for table arithmetic")
    return field.add_table, field.mul_table


def matmul(field, A, B):
    add, mul = _field_tables(field)
    return _impl.matmul(A, B, add, mul)


def encode(M, Q: int):
    return _impl.encode(M, Q)


def decode(codes, Q: int, n: int):
    return _impl.decode(codes, Q, n)


def bruhat(field, M):
    add, mul = _field_tables(field)
    return _impl.bruhat(M, add, mul, field.neg_table, field.inv_table)


def pair_histogram(a, b, size: int):
    return _impl.pair_histogram(a, b, size)
