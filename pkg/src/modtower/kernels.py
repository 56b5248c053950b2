"""Kernel dispatch: compiled table kernels when available, numpy otherwise.

MODTOWER_KERNELS=py forces the pure backend, =c requires the compiled one,
anything else (default "auto") picks per call: the compiled kernels win for
table-backed fields on small and medium shapes, float64 BLAS wins for large
prime-field products.
"""

from __future__ import annotations

import os

import numpy as np

from . import _kernels_py as _py

try:
    from . import _gfkern as _c
except ImportError:  # pragma: no cover
    _c = None

_MODE = os.environ.get("MODTOWER_KERNELS", "auto")
if _MODE not in ("auto", "py", "c"):
    raise ValueError("MODTOWER_KERNELS must be auto, py or c")
if _MODE == "c" and _c is None:  # pragma: no cover
    raise ImportError("compiled kernels requested but modtower._gfkern is missing")

# above this output size the BLAS route beats the lookup loop for prime fields
_MATMUL_C_CUTOFF = 96


def compiled_available() -> bool:
    return _c is not None


def backend_summary() -> str:
    if _MODE == "py" or _c is None:
        return "numpy"
    return "compiled+numpy"


def _use_c(field) -> bool:
    return _MODE != "py" and _c is not None and field.mul_table is not None


def matmul(field, A, B):
    A = np.ascontiguousarray(A, dtype=np.int64)
    B = np.ascontiguousarray(B, dtype=np.int64)
    if _use_c(field) and (
        _MODE == "c"
        or field.deg > 1
        or max(A.shape[0], A.shape[1], B.shape[1]) <= _MATMUL_C_CUTOFF
    ):
        if A.shape[1] == B.shape[0] and min(A.shape[0], A.shape[1], B.shape[1]) > 0:
            return _c.matmul_table(A, B, field.add_table, field.mul_table)
    return _py.matmul(field, A, B)


def matmul_many(field, A, B):
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if _use_c(field) and (_MODE == "c" or field.deg > 1):
        # extension fields are where the numpy digit-slicing route is slow
        batch = np.broadcast_shapes(A.shape[:-2], B.shape[:-2])
        m, k, n = A.shape[-2], A.shape[-1], B.shape[-1]
        if k == B.shape[-2] and min(m, k, n) > 0 and all(batch):
            A3 = np.ascontiguousarray(
                np.broadcast_to(A, batch + (m, k)).reshape(-1, m, k)
            )
            B3 = np.ascontiguousarray(
                np.broadcast_to(B, batch + (k, n)).reshape(-1, k, n)
            )
            out = _c.matmul_many_table(A3, B3, field.add_table, field.mul_table)
            return out.reshape(batch + (m, n))
    return _py.matmul_many(field, A, B)


def pow_many(field, Z, e):
    Z = np.asarray(Z, dtype=np.int64)
    if not (_use_c(field) and (_MODE == "c" or field.deg > 1)):
        return _py.pow_many(field, Z, e)
    n = Z.shape[-1]
    out = np.zeros(Z.shape, dtype=np.int64)
    out[..., np.arange(n), np.arange(n)] = 1
    base = Z
    while e:
        if e & 1:
            out = matmul_many(field, out, base)
        e >>= 1
        if e:
            base = matmul_many(field, base, base)
    return out


def rref(field, A):
    A = np.ascontiguousarray(A, dtype=np.int64)
    if A.size and _use_c(field):
        R = A.copy()
        pivots = _c.rref_table(
            R, field.add_table, field.mul_table, field.inv_table, field.neg_table
        )
        return R, pivots
    return _py.rref(field, A)
