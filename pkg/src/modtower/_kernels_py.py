"""Pure numpy kernels for dense linear algebra over GF(q).

Matrices are 2-d (or batched 3-d) int64 arrays of element codes.  Prime-field
products ride on float64 BLAS, which is exact here: every dot product is a sum
of at most n terms bounded by (p-1)^2, far below 2^53 at the supported scale.
Extension fields decompose into digit slices: a product over GF(p^k) is k^2
prime-field products recombined through the reduction table of x^t mod the
modulus.
"""

from __future__ import annotations

import numpy as np


def _xred(field):
    # reduction table: row t = coefficients of x^t mod modulus, t < 2*deg-1
    tab = getattr(field, "_xred_table", None)
    if tab is not None:
        return tab
    p, deg = field.p, field.deg
    rows = np.zeros((2 * deg - 1, deg), dtype=np.int64)
    cur = [0] * deg
    cur[0] = 1
    for t in range(2 * deg - 1):
        rows[t] = cur
        carry = cur[-1]
        cur = [0] + cur[:-1]
        if carry:
            for i in range(deg):
                cur[i] = (cur[i] - carry * field.modulus[i]) % p
    field._xred_table = rows
    return rows


def matmul(field, A, B):
    """C = A @ B over the field; 2-d code arrays in, int64 code array out."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    assert A.ndim == 2 and B.ndim == 2 and A.shape[1] == B.shape[0]
    if A.shape[0] == 0 or B.shape[1] == 0 or A.shape[1] == 0:
        return np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    if field.deg == 1:
        C = np.matmul(A.astype(np.float64), B.astype(np.float64))
        return (C.astype(np.int64)) % field.p
    return _matmul_ext(field, A[None], B[None])[0]


def matmul_many(field, A, B):
    """Batched product: (..., m, k) @ (..., k, n), broadcast on batch dims."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if field.deg == 1:
        C = np.matmul(A.astype(np.float64), B.astype(np.float64))
        return (C.astype(np.int64)) % field.p
    batch = np.broadcast_shapes(A.shape[:-2], B.shape[:-2])
    A = np.broadcast_to(A, batch + A.shape[-2:]).reshape((-1,) + A.shape[-2:])
    B = np.broadcast_to(B, batch + B.shape[-2:]).reshape((-1,) + B.shape[-2:])
    out = _matmul_ext(field, A, B)
    return out.reshape(batch + out.shape[-2:])


def _matmul_ext(field, A, B):
    # A: (b, m, k), B: (b, k, n) over GF(p^deg).  One float64 BLAS product per
    # digit pair (i, j), recombined through the reduction table; intermediate
    # sums stay far below 2^53 so everything is exact.
    p, deg = field.p, field.deg
    Ad = field.digits[A].astype(np.float64)  # (b, m, k, deg)
    Bd = field.digits[B].astype(np.float64)
    R = _xred(field)  # (2*deg-1, deg)
    b, m, _ = A.shape
    n = B.shape[2]
    Cd = np.zeros((b, m, n, deg), dtype=np.int64)
    for i in range(deg):
        Ai = Ad[:, :, :, i]
        for j in range(deg):
            P = np.matmul(Ai, Bd[:, :, :, j]).astype(np.int64) % p
            red = R[i + j]
            for d in range(deg):
                if red[d]:
                    Cd[:, :, :, d] += P * int(red[d])
    Cd %= p
    return Cd @ field._ppow


def pow_many(field, Z, e):
    """Batched matrix power Z^e for a stack (b, n, n) of square matrices."""
    Z = np.asarray(Z, dtype=np.int64)
    b, n, _ = Z.shape
    out = np.zeros((b, n, n), dtype=np.int64)
    out[:, np.arange(n), np.arange(n)] = 1
    base = Z
    while e:
        if e & 1:
            out = matmul_many(field, out, base)
        e >>= 1
        if e:
            base = matmul_many(field, base, base)
    return out


def rref(field, A):
    """Reduced row echelon form with first-nonzero pivoting.

    Returns (R, pivots); deterministic for identical inputs.
    """
    R = np.array(A, dtype=np.int64, copy=True)
    rows, cols = R.shape
    pivots = []
    r = 0
    p = field.p
    prime = field.deg == 1
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            R[[r, pr]] = R[[pr, r]]
        piv = int(R[r, c])
        if piv != 1:
            if prime:
                R[r] = (R[r] * pow(piv, p - 2, p)) % p
            else:
                R[r] = field.scale_codes(int(field.inv_table[piv]), R[r])
        col = R[:, c].copy()
        col[r] = 0
        mask = col != 0
        if mask.any():
            if prime:
                R[mask] = (R[mask] - col[mask, None] * R[r][None, :]) % p
            else:
                prod = field.mul_codes(col[mask, None], R[r][None, :])
                R[mask] = field.sub_codes(R[mask], prod)
        pivots.append(c)
        r += 1
    return R, pivots
