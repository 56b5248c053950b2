"""Dense matrices over GF(q) and the exact solvers built on them.

Matrix wraps an immutable int64 array of element codes together with its
field.  Zero-dimensional shapes are legal everywhere; they behave as empty
maps.  All elimination is deterministic (first nonzero pivot in column
order), so identical inputs give bit-identical outputs.
"""

from __future__ import annotations

import numpy as np

from . import kernels
from .errors import DimensionMismatch, FieldMismatch, NotSquare
from .gf import FieldElement, FiniteField


class Matrix:
    """A rows x cols matrix of field element codes, immutable after construction."""

    __slots__ = ("field", "data", "_rref_cache")

    def __init__(self, field: FiniteField, data):
        arr = np.asarray(data, dtype=np.int64)
        if arr.ndim != 2:
            raise DimensionMismatch("matrix data must be 2-d, got shape %r" % (arr.shape,))
        if arr.size and (arr.min() < 0 or arr.max() >= field.q):
            raise FieldMismatch("entry code out of range for %r" % (field,))
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        self.field = field
        self.data = arr
        self._rref_cache = None

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zeros(cls, field, rows, cols):
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, field, n):
        return cls(field, np.eye(n, dtype=np.int64))

    @classmethod
    def from_rows(cls, field, rows):
        """rows of ints (codes) or FieldElements."""
        conv = [
            [e.code if isinstance(e, FieldElement) else int(e) for e in row]
            for row in rows
        ]
        arr = np.array(conv, dtype=np.int64) if conv else np.zeros((0, 0), dtype=np.int64)
        if arr.ndim == 1:
            arr = arr.reshape(len(conv), 0)
        return cls(field, arr)

    # -- basic info -----------------------------------------------------------

    @property
    def rows(self):
        return self.data.shape[0]

    @property
    def cols(self):
        return self.data.shape[1]

    @property
    def shape(self):
        return self.data.shape

    @property
    def entries(self):
        """Row-major list of FieldElement values."""
        return [FieldElement(self.field, int(c)) for c in self.data.ravel()]

    def __getitem__(self, ij):
        i, j = ij
        return FieldElement(self.field, int(self.data[i, j]))

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and other.field == self.field
            and other.data.shape == self.data.shape
            and np.array_equal(other.data, self.data)
        )

    def __hash__(self):
        return hash((self.field.signature(), self.data.shape, self.data.tobytes()))

    def __repr__(self):
        return "Matrix(%r, %r)" % (self.field, self.data.tolist())

    def is_zero(self):
        return not self.data.any()

    def is_identity(self):
        return self.rows == self.cols and np.array_equal(
            self.data, np.eye(self.rows, dtype=np.int64)
        )

    # -- arithmetic -----------------------------------------------------------

    def _same_field(self, other):
        if self.field != other.field:
            raise FieldMismatch("matrices over different fields")

    def __add__(self, other):
        self._same_field(other)
        if self.shape != other.shape:
            raise DimensionMismatch("shape %r vs %r" % (self.shape, other.shape))
        return Matrix(self.field, self.field.add_codes(self.data, other.data))

    def __sub__(self, other):
        self._same_field(other)
        if self.shape != other.shape:
            raise DimensionMismatch("shape %r vs %r" % (self.shape, other.shape))
        return Matrix(self.field, self.field.sub_codes(self.data, other.data))

    def __neg__(self):
        return Matrix(self.field, self.field.neg_codes(self.data))

    def __matmul__(self, other):
        self._same_field(other)
        if self.cols != other.rows:
            raise DimensionMismatch("cannot multiply %r by %r" % (self.shape, other.shape))
        return Matrix(self.field, kernels.matmul(self.field, self.data, other.data))

    def __mul__(self, scalar):
        if isinstance(scalar, FieldElement):
            if scalar.field != self.field:
                raise FieldMismatch("scalar from a different field")
            scalar = scalar.code
        return Matrix(self.field, self.field.scale_codes(int(scalar), self.data))

    __rmul__ = __mul__

    def transpose(self):
        return Matrix(self.field, self.data.T)

    def pow(self, e: int):
        if self.rows != self.cols:
            raise NotSquare("matrix power needs a square matrix")
        return Matrix(self.field, mat_pow(self.field, self.data, e))

    # -- elimination ----------------------------------------------------------

    def rref(self):
        """(reduced row echelon Matrix, pivot column tuple); cached."""
        if self._rref_cache is None:
            R, piv = kernels.rref(self.field, self.data)
            self._rref_cache = (Matrix(self.field, R), tuple(piv))
        return self._rref_cache

    def rank(self) -> int:
        return len(self.rref()[1])

    def nullspace(self):
        """Matrix whose rows form a basis of the right null space."""
        return Matrix(self.field, nullspace_rows(self.field, self.data))

    def inverse(self):
        if self.rows != self.cols:
            raise NotSquare("inverse needs a square matrix")
        X = solve_linear(self, Matrix.identity(self.field, self.rows))
        if X is None:
            raise ZeroDivisionError("matrix is singular")
        return X


# ---------------------------------------------------------------------------
# raw-array helpers (shared by the higher modules, which work on code arrays)
# ---------------------------------------------------------------------------

def mat_pow(field, A, e: int):
    n = A.shape[0]
    out = np.eye(n, dtype=np.int64)
    base = np.asarray(A, dtype=np.int64)
    while e:
        if e & 1:
            out = kernels.matmul(field, out, base)
        e >>= 1
        if e:
            base = kernels.matmul(field, base, base)
    return out


def nullspace_rows(field, A):
    """Basis of {x : A x = 0} as rows, from the RREF (deterministic)."""
    A = np.asarray(A, dtype=np.int64)
    rows, cols = A.shape
    R, piv = kernels.rref(field, A)
    piv = list(piv)
    free = [j for j in range(cols) if j not in piv]
    out = np.zeros((len(free), cols), dtype=np.int64)
    for a, j in enumerate(free):
        out[a, j] = 1
        for r, pc in enumerate(piv):
            out[a, pc] = field.neg_table[R[r, j]]
    return out


def row_space(field, A):
    """(RREF basis rows without zero rows, pivot list): canonical span form."""
    R, piv = kernels.rref(field, np.asarray(A, dtype=np.int64))
    return R[: len(piv)], list(piv)


def in_row_space(field, basis, pivots, v):
    """Whether v lies in the span of RREF basis rows."""
    v = np.array(v, dtype=np.int64, copy=True)
    for r, pc in enumerate(pivots):
        c = int(v[pc])
        if c:
            v = field.sub_codes(v, field.scale_codes(c, basis[r]))
    return not v.any()


def reduce_mod_rows(field, basis, pivots, v):
    """Remainder of v after elimination against RREF basis rows."""
    v = np.array(v, dtype=np.int64, copy=True)
    for r, pc in enumerate(pivots):
        c = int(v[pc])
        if c:
            v = field.sub_codes(v, field.scale_codes(c, basis[r]))
    return v


def solve_raw(field, A, B):
    """X with A X = B, or None; deterministic particular solution (free vars 0)."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if A.shape[0] != B.shape[0]:
        raise DimensionMismatch("A has %d rows, B has %d" % (A.shape[0], B.shape[0]))
    aug = np.hstack([A, B])
    R, piv = kernels.rref(field, aug)
    ncols = A.shape[1]
    if any(pc >= ncols for pc in piv):
        return None
    X = np.zeros((ncols, B.shape[1]), dtype=np.int64)
    for r, pc in enumerate(piv):
        X[pc] = R[r, ncols:]
    return X


def solve_linear(A: Matrix, B: Matrix, nullspace: bool = False):
    """Solve A X = B over the common field.

    Returns X (or None when inconsistent); with nullspace=True returns
    (X, N) where N's rows span ker A.
    """
    if not isinstance(A, Matrix) or not isinstance(B, Matrix):
        raise TypeError("solve_linear expects Matrix arguments")
    if A.field != B.field:
        raise FieldMismatch("matrices over different fields")
    if A.rows != B.rows:
        raise DimensionMismatch("A has %d rows, B has %d" % (A.rows, B.rows))
    X = solve_raw(A.field, A.data, B.data)
    Xm = None if X is None else Matrix(A.field, X)
    if nullspace:
        return Xm, A.nullspace()
    return Xm


def fitting_split(f: Matrix, n: int):
    """Bases of ker(f^n) and im(f^n); complementary by Fitting's lemma.

    Returns (kernel_basis, image_basis) as matrices whose rows are basis
    vectors.  The complementarity (dim sum = n, trivial intersection) is
    asserted, since downstream splitting relies on it.
    """
    if not isinstance(f, Matrix):
        raise TypeError("fitting_split expects a Matrix")
    if f.rows != f.cols:
        raise NotSquare("fitting_split needs a square matrix")
    if f.rows != n:
        raise DimensionMismatch("matrix is %dx%d but n = %d" % (f.rows, f.cols, n))
    field = f.field
    F = mat_pow(field, f.data, max(n, 1)) if n else np.zeros((0, 0), dtype=np.int64)
    ker = nullspace_rows(field, F)
    img, _ = row_space(field, F.T)  # column space of F, as rows
    if n:
        both = np.vstack([ker, img])
        assert both.shape[0] == n and len(kernels.rref(field, both)[1]) == n, (
            "kernel and image of f^n failed to be complementary"
        )
    return Matrix(field, ker), Matrix(field, img)


def charpoly(field, A):
    """Characteristic polynomial coefficients c, det(xI - A) = sum c[i] x^i.

    Exact over any GF(q): similarity reduction to Hessenberg form with row and
    matching column operations, then the Hessenberg determinant recurrence.
    """
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    if n != A.shape[1]:
        raise NotSquare("charpoly needs a square matrix")
    if n == 0:
        return np.array([1], dtype=np.int64)
    H = A.copy()
    for j in range(n - 2):
        nz = np.nonzero(H[j + 1 :, j])[0]
        if nz.size == 0:
            continue
        pr = j + 1 + int(nz[0])
        if pr != j + 1:
            H[[j + 1, pr]] = H[[pr, j + 1]]
            H[:, [j + 1, pr]] = H[:, [pr, j + 1]]
        inv = int(field.inv_table[H[j + 1, j]])
        for i in range(j + 2, n):
            if H[i, j]:
                fct = int(field.mul_codes(H[i, j], inv))
                H[i] = field.sub_codes(H[i], field.scale_codes(fct, H[j + 1]))
                H[:, j + 1] = field.add_codes(H[:, j + 1], field.scale_codes(fct, H[:, i]))
    # p_k for leading principal k x k blocks; polys as coefficient arrays
    polys = [np.array([1], dtype=np.int64)]
    for k in range(1, n + 1):
        prev = polys[k - 1]
        cur = np.zeros(k + 1, dtype=np.int64)
        cur[1:] = prev  # x * p_{k-1}
        hkk = int(H[k - 1, k - 1])
        if hkk:
            cur[:k] = field.sub_codes(cur[:k], field.scale_codes(hkk, prev))
        sub = 1  # product of subdiagonal entries H[i+1, i], descending
        for i in range(k - 2, -1, -1):
            sub = int(field.mul_codes(sub, int(H[i + 1, i])))
            if sub == 0:
                break
            hik = int(H[i, k - 1])
            if hik:
                coef = int(field.mul_codes(hik, sub))
                pi = polys[i]
                cur[: i + 1] = field.sub_codes(cur[: i + 1], field.scale_codes(coef, pi))
        polys.append(cur)
    return polys[n]
