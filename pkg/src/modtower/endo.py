"""Endomorphism algebras, their radicals, and indecomposable decompositions.

The radical comes from the characteristic-p-safe chain of iterated kernels
of charpoly-coefficient forms over the prime field.  The result is then
certified unconditionally: the candidate span must be a nilpotent two-sided
ideal and the quotient must be semisimple (Frobenius kernel for commutative
quotients, a separability idempotent for noncommutative ones).  A failed
certificate raises InternalCheckFailed instead of letting a wrong radical
propagate into locality or decomposition answers.
"""

from __future__ import annotations

from collections import namedtuple

import numpy as np

from . import kernels
from .errors import InternalCheckFailed, NotIndecomposable, TooLarge
from .gf import FieldEmbedding, make_field
from .matrix import (
    Matrix,
    charpoly,
    in_row_space,
    mat_pow,
    nullspace_rows,
    reduce_mod_rows,
    row_space,
    solve_raw,
)
from .modules import Module, ModuleMap, _hom_raw, identity_map, scalar_extend

_LITERAL_SCAN_CAP = 10**6
_SPLIT_DRAWS = 64
_POLY_SPLIT_DRAWS = 8
_SMALL_ENUM_CAP = 4096


class EndAlgebra:
    """End(U) with its multiplication table and certified radical."""

    def __init__(self, module: Module, basis, structure_constants, radical_basis,
                 quotient_field_degree, _internals):
        self.module = module
        self.basis = basis
        self.structure_constants = structure_constants
        self.radical_basis = radical_basis
        self.quotient_field_degree = quotient_field_degree
        (self._flat, self._piv, self._pivinv, self._id_coords,
         self._rad_rows, self._rad_piv) = _internals

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def field(self):
        return self.module.field

    def coords(self, X) -> np.ndarray:
        """Coordinates of an endomorphism matrix in the stored basis."""
        F = self.field
        v = np.asarray(X, dtype=np.int64).ravel()
        c = kernels.matmul(F, v[self._piv][None, :], self._pivinv)[0]
        back = kernels.matmul(F, c[None, :], self._flat)[0]
        assert np.array_equal(back, v), "matrix is not in the endomorphism algebra"
        return c

    def from_coords(self, c) -> np.ndarray:
        F = self.field
        n = self.module.dim
        row = kernels.matmul(F, np.asarray(c, dtype=np.int64)[None, :], self._flat)
        return row[0].reshape(n, n)

    def multiply(self, a, b) -> np.ndarray:
        """Product of two coordinate vectors."""
        return _alg_mul(self.field, self.structure_constants, a, b)

    def in_radical(self, c) -> bool:
        return in_row_space(self.field, self._rad_rows, self._rad_piv, c)

    def __repr__(self):
        return "EndAlgebra(dim=%d, radical dim=%d)" % (self.dim, len(self.radical_basis))


# ---------------------------------------------------------------------------
# algebra arithmetic in coordinates
# ---------------------------------------------------------------------------

def _alg_mul(F, sc, a, b):
    ab = F.mul_codes(np.asarray(a)[:, None], np.asarray(b)[None, :])
    return F.sum_codes(F.mul_codes(ab[:, :, None], sc), axis=(0, 1))


def _mult_rows(F, sc, coords, side):
    """Stacked multiplication operators, acting on coordinate row vectors.

    side "left": M[t][j] = x_t * e_j, so a @ M[t] is x_t * a.
    side "right": M[t][i] = e_i * x_t, so a @ M[t] is a * x_t.
    """
    coords = np.asarray(coords, dtype=np.int64)
    axis = 0 if side == "left" else 1
    if F.deg == 1:
        M = np.tensordot(coords, sc, axes=([1], [axis])) % F.p
        return np.ascontiguousarray(M.astype(np.int64))
    m = sc.shape[0]
    out = np.empty((len(coords), m, m), dtype=np.int64)
    shape = (-1, 1, 1) if axis == 0 else (1, -1, 1)
    for t, x in enumerate(coords):
        out[t] = F.sum_codes(F.mul_codes(x.reshape(shape), sc), axis=axis)
    return out


def _alg_pow(F, sc, id_coords, x, e):
    out = id_coords.copy()
    base = np.asarray(x, dtype=np.int64)
    while e:
        if e & 1:
            out = _alg_mul(F, sc, out, base)
        e >>= 1
        if e:
            base = _alg_mul(F, sc, base, base)
    return out


def _minimal_poly(F, sc, id_coords, x):
    """Ascending coefficients of the minimal polynomial of x."""
    rows = [id_coords]
    cur = id_coords
    while True:
        cur = _alg_mul(F, sc, cur, x)
        P = np.array(rows, dtype=np.int64)
        sol = solve_raw(F, P.T, cur[:, None])
        if sol is not None:
            coeffs = np.zeros(len(rows) + 1, dtype=np.int64)
            coeffs[: len(rows)] = F.neg_codes(sol[:, 0])
            coeffs[len(rows)] = 1
            return coeffs
        rows.append(cur)


def _eval_poly(F, sc, id_coords, poly, x):
    """poly(x) in coordinates, Horner order."""
    out = np.zeros_like(id_coords)
    for c in poly[::-1]:
        out = _alg_mul(F, sc, out, x)
        if c:
            out = F.add_codes(out, F.scale_codes(int(c), id_coords))
    return out


def _eval_poly_mat(F, poly, X):
    """poly(X) for a square matrix X, Horner order."""
    n = X.shape[0]
    out = np.zeros((n, n), dtype=np.int64)
    eye = np.eye(n, dtype=np.int64)
    for c in poly[::-1]:
        out = kernels.matmul(F, out, X)
        if c:
            out = F.add_codes(out, F.scale_codes(int(c), eye))
    return out


# ---------------------------------------------------------------------------
# polynomials over GF(q): dense ascending int64 coefficient arrays
# ---------------------------------------------------------------------------

def _ptrim(a):
    a = np.asarray(a, dtype=np.int64)
    nz = np.nonzero(a)[0]
    return a[: nz[-1] + 1] if nz.size else a[:0]


def _pdeg(a):
    return len(a) - 1


def _padd(F, a, b):
    n = max(len(a), len(b))
    out = np.zeros(n, dtype=np.int64)
    out[: len(a)] = a
    out[: len(b)] = F.add_codes(out[: len(b)], b)
    return _ptrim(out)


def _psub(F, a, b):
    n = max(len(a), len(b))
    out = np.zeros(n, dtype=np.int64)
    out[: len(a)] = a
    out[: len(b)] = F.sub_codes(out[: len(b)], b)
    return _ptrim(out)


def _pmul(F, a, b):
    if len(a) == 0 or len(b) == 0:
        return np.zeros(0, dtype=np.int64)
    out = np.zeros(len(a) + len(b) - 1, dtype=np.int64)
    for i, c in enumerate(a):
        if c:
            out[i : i + len(b)] = F.add_codes(out[i : i + len(b)], F.scale_codes(int(c), b))
    return out


def _pdivmod(F, a, b):
    a = _ptrim(a).copy()
    b = _ptrim(b)
    assert len(b) > 0, "polynomial division by zero"
    q = np.zeros(max(len(a) - len(b) + 1, 0), dtype=np.int64)
    binv = int(F.inv_codes(np.array([b[-1]]))[0])
    while len(a) >= len(b):
        shift = len(a) - len(b)
        c = int(F.mul_codes(int(a[-1]), binv))
        q[shift] = c
        a[shift:] = F.sub_codes(a[shift:], F.scale_codes(c, b))
        a = _ptrim(a)
    return _ptrim(q), a


def _pmonic(F, a):
    a = _ptrim(a)
    if len(a) == 0 or a[-1] == 1:
        return a
    inv = int(F.inv_codes(np.array([a[-1]]))[0])
    return F.scale_codes(inv, a)


def _pgcd(F, a, b):
    a, b = _ptrim(a), _ptrim(b)
    while len(b):
        a, b = b, _pdivmod(F, a, b)[1]
    return _pmonic(F, a)


def _pxgcd(F, a, b):
    """(g, u, v) with u a + v b = g and g monic."""
    r0, r1 = _ptrim(a), _ptrim(b)
    s0, s1 = np.array([1], dtype=np.int64), np.zeros(0, dtype=np.int64)
    t0, t1 = np.zeros(0, dtype=np.int64), np.array([1], dtype=np.int64)
    while len(r1):
        q, r = _pdivmod(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _psub(F, s0, _pmul(F, q, s1))
        t0, t1 = t1, _psub(F, t0, _pmul(F, q, t1))
    if len(r0) and r0[-1] != 1:
        inv = int(F.inv_codes(np.array([r0[-1]]))[0])
        r0, s0, t0 = (F.scale_codes(inv, x) for x in (r0, s0, t0))
    return r0, s0, t0


def _ppow(F, base, e):
    out = np.array([1], dtype=np.int64)
    while e:
        if e & 1:
            out = _pmul(F, out, base)
        e >>= 1
        if e:
            base = _pmul(F, base, base)
    return out


def _ppowmod(F, base, e, mod):
    out = np.array([1], dtype=np.int64)
    base = _pdivmod(F, base, mod)[1]
    while e:
        if e & 1:
            out = _pdivmod(F, _pmul(F, out, base), mod)[1]
        e >>= 1
        if e:
            base = _pdivmod(F, _pmul(F, base, base), mod)[1]
    return out


def _coprime_split(F, mu):
    """Proper factorization mu = A * B with gcd(A, B) = 1, or None.

    None means mu is a power of a single irreducible, so the element
    generates a local subalgebra and yields no idempotent.
    """
    mu = _pmonic(F, mu)
    n = _pdeg(mu)
    if n <= 1:
        return None
    a = 0
    while mu[a] == 0:
        a += 1
    if a > 0:
        # split off the t-power part
        A = np.zeros(a + 1, dtype=np.int64)
        A[a] = 1
        B = _pdivmod(F, mu, A)[0]
        return (A, B) if _pdeg(B) > 0 else None
    t = np.array([0, 1], dtype=np.int64)
    for i in range(1, n + 1):
        ti = _ppowmod(F, t, F.q**i, mu)
        D = _pgcd(F, mu, _psub(F, ti, t))
        if _pdeg(D) <= 0:
            continue
        if _pdeg(D) < n:
            A = _pgcd(F, mu, _ppow(F, D, n))  # pull in full multiplicities
            B = _pdivmod(F, mu, A)[0]
            return (A, B) if _pdeg(B) > 0 else None
        # mu is squarefree with all factors of degree exactly i
        if i == n:
            return None  # irreducible
        return _equal_degree_split(F, mu, i)
    raise InternalCheckFailed("distinct-degree scan failed to classify a minimal polynomial")


def _equal_degree_split(F, mu, d):
    """Split a squarefree mu whose irreducible factors all have degree d.

    Scans every nonconstant r of degree < deg(mu), lowest degree first; by
    CRT the residues (r mod f, r mod g) cover all pairs, so a separating r
    exists and the scan terminates.
    """
    n = _pdeg(mu)
    one = np.array([1], dtype=np.int64)
    for code in range(F.q, F.q**n):
        r = np.zeros(n, dtype=np.int64)
        c, k = code, 0
        while c:
            r[k] = c % F.q
            c //= F.q
            k += 1
        if F.p == 2:
            # absolute trace into GF(2) of the degree-d residue fields
            acc = _pdivmod(F, r, mu)[1]
            tr = acc
            for _ in range(F.deg * d - 1):
                acc = _ppowmod(F, acc, 2, mu)
                tr = _padd(F, tr, acc)
            g = _pgcd(F, mu, tr)
        else:
            e = (F.q**d - 1) // 2
            g = _pgcd(F, mu, _psub(F, _ppowmod(F, r, e, mu), one))
        if 0 < _pdeg(g) < n:
            return g, _pdivmod(F, mu, g)[0]
    raise InternalCheckFailed("equal-degree splitting exhausted its candidates")


# ---------------------------------------------------------------------------
# radical
# ---------------------------------------------------------------------------

def _scalar_restriction(F, sc):
    """Structure constants over the prime field.

    Basis element (i, t) for t < deg sits at position i*deg + t and stands
    for b_i x^t, where x generates F over GF(p).
    """
    Fp = make_field(F.p, 1)
    d = F.deg
    if d == 1:
        return Fp, sc
    m = sc.shape[0]
    xpow = [F.pow_code(F.p % F.q, r) for r in range(2 * d - 1)]
    out = np.zeros((m * d, m * d, m * d), dtype=np.int64)
    for s in range(d):
        for t in range(d):
            scaled = F.mul_codes(sc, int(xpow[s + t]))
            dig = F.digits[scaled]  # (m, m, m, deg)
            for u in range(d):
                out[s::d, t::d, u::d] = dig[:, :, :, u]
    return Fp, out


def _restrict_coords(F, v):
    if F.deg == 1:
        return np.asarray(v, dtype=np.int64)
    return F.digits[np.asarray(v, dtype=np.int64)].reshape(-1)


def _fold_coords(F, rows, m):
    """GF(p) coordinate rows back to F-codes, inverse of _restrict_coords."""
    if F.deg == 1:
        return np.asarray(rows, dtype=np.int64)
    return np.asarray(rows, dtype=np.int64).reshape(-1, m, F.deg) @ F._ppow


def _radical_rows(F, sc):
    """RREF rows over F spanning the radical, via the prime-field chain.

    Stage i intersects the previous ideal with the kernel of the pairing
    given by the coefficient of degree (dim - p^i) in the characteristic
    polynomial of left multiplication by a product.  Over the prime field
    each stage is a genuine bilinear form, and the final stage is exactly
    the radical.  Certification happens separately in _certify_radical.
    """
    m = sc.shape[0]
    if m == 0:
        return np.zeros((0, 0), dtype=np.int64)
    Fp, scp = _scalar_restriction(F, sc)
    n = scp.shape[0]
    C = np.eye(n, dtype=np.int64)
    i = 0
    while Fp.p**i <= n and C.shape[0]:
        k = C.shape[0]
        if i == 0:
            # the p^0 coefficient is -trace(L_x L_y), a bilinear form we can
            # evaluate in one matrix product instead of k^2 charpolys
            tau = np.einsum("xyy->x", scp) % Fp.p
            B = np.tensordot(scp, tau, axes=([2], [0])) % Fp.p
            M = ((C @ B) % Fp.p @ C.T) % Fp.p
            vals = (-M.T) % Fp.p
        else:
            # the form is symmetric: L_{xy} = L_x L_y and charpoly(PQ) = charpoly(QP)
            vals = np.zeros((k, k), dtype=np.int64)
            for b in range(k):
                for a in range(b, k):
                    z = _alg_mul(Fp, scp, C[a], C[b])
                    if not z.any():
                        continue
                    L = _mult_rows(Fp, scp, z[None], "left")[0]
                    cp = charpoly(Fp, L)
                    vals[b, a] = vals[a, b] = int(cp[n - Fp.p**i])
        ker = nullspace_rows(Fp, vals)
        if ker.shape[0]:
            C = row_space(Fp, kernels.matmul(Fp, ker, C))[0]
        else:
            C = C[:0]
        i += 1
    if C.shape[0] == 0:
        return np.zeros((0, m), dtype=np.int64)
    folded = _fold_coords(F, C, m)
    out = row_space(F, folded)[0]
    assert out.shape[0] * F.deg == C.shape[0], (
        "radical must be a subspace over the coefficient field"
    )
    return out


def _span_dim(F, rows):
    rows = np.asarray(rows, dtype=np.int64)
    return row_space(F, rows)[0].shape[0] if rows.size else 0


def _certify_radical(F, sc, id_coords, R, piv):
    """Prove R spans exactly the radical, or raise InternalCheckFailed.

    Containment one way: R is a nilpotent two-sided ideal.  The other way:
    the quotient algebra is semisimple.  Returns the quotient data.
    """
    m = sc.shape[0]
    k = R.shape[0]
    if k:
        left = _mult_rows(F, sc, R, "left").reshape(-1, m)
        right = _mult_rows(F, sc, R, "right").reshape(-1, m)
        if _span_dim(F, np.vstack([R, left, right])) != k:
            raise InternalCheckFailed("radical candidate is not an ideal")
        rmul = _mult_rows(F, sc, R, "right")  # a @ rmul[t] is a * r_t
        S = R
        for _ in range(m + 1):
            if S.shape[0] == 0:
                break
            prods = kernels.matmul_many(F, S[None], rmul).reshape(-1, m)
            S = row_space(F, prods)[0]
        if S.shape[0]:
            raise InternalCheckFailed("radical candidate is not nilpotent")
    nonpiv = [j for j in range(m) if j not in piv]
    mB = len(nonpiv)
    scB = np.zeros((mB, mB, mB), dtype=np.int64)
    for a, i in enumerate(nonpiv):
        for b, j in enumerate(nonpiv):
            prod = reduce_mod_rows(F, R, piv, sc[i, j])
            scB[a, b] = prod[nonpiv]
    idB = (reduce_mod_rows(F, R, piv, id_coords)[nonpiv]
           if m else np.zeros(0, dtype=np.int64))
    commutative = bool(np.array_equal(scB, scB.transpose(1, 0, 2)))
    if mB == 0:
        pass
    elif commutative:
        if _commutative_nil_dim(F, scB) != 0:
            raise InternalCheckFailed("quotient by the radical has a nonzero nilpotent")
    elif _separability_idempotent(F, scB, idB) is None:
        raise InternalCheckFailed("quotient by the radical admits no separability idempotent")
    return scB, idB, commutative


def _commutative_nil_dim(F, sc):
    """GF(p)-dimension of the nilradical of a commutative algebra.

    In characteristic p the p-power map on a commutative algebra is
    GF(p)-linear, and the iterated kernel collects exactly the nilpotents.
    """
    Fp, scp = _scalar_restriction(F, sc)
    n = scp.shape[0]
    frob = np.zeros((n, n), dtype=np.int64)
    for j in range(n):
        e = np.zeros(n, dtype=np.int64)
        e[j] = 1
        acc = e
        for _ in range(Fp.p - 1):
            acc = _alg_mul(Fp, scp, acc, e)
        frob[:, j] = acc
    steps = 0
    while Fp.p**steps < max(n, 1):
        steps += 1
    power = mat_pow(Fp, frob, max(steps, 1))
    return nullspace_rows(Fp, power).shape[0]


def _nil_mask(F, sc, coords):
    """Boolean mask marking the nilpotent elements among coordinate rows."""
    m = sc.shape[0]
    e = 0
    while 2**e < max(m, 1):
        e += 1
    P = _mult_rows(F, sc, coords, "left")
    for _ in range(max(e, 1)):
        P = kernels.matmul_many(F, P, P)
    return ~P.any(axis=(1, 2))


def _literal_radical_rows(F, sc):
    """RREF rows of {x : x*A is nil}, by scanning the whole algebra."""
    m = sc.shape[0]
    if m == 0:
        return np.zeros((0, 0), dtype=np.int64)
    total = F.q**m
    assert total <= _LITERAL_SCAN_CAP
    radix = F.q ** np.arange(m)
    nil = np.zeros(total, dtype=bool)
    chunk = max(1, (1 << 21) // max(1, m * m))
    for lo in range(0, total, chunk):
        idx = np.arange(lo, min(lo + chunk, total))
        coords = ((idx[:, None] // radix[None, :]) % F.q).astype(np.int64)
        nil[idx] = _nil_mask(F, sc, coords)
    commutative = bool(np.array_equal(sc, sc.transpose(1, 0, 2)))
    accepted = []
    for lo in range(0, total, chunk):
        idx = np.arange(lo, min(lo + chunk, total))
        coords = ((idx[:, None] // radix[None, :]) % F.q).astype(np.int64)
        gens = _mult_rows(F, sc, coords, "left")  # row j of gens[t]: x_t * e_j
        gcodes = gens @ radix
        cand = nil[gcodes].all(axis=1)
        for t in np.nonzero(cand)[0]:
            x = coords[t]
            if not x.any():
                continue
            if commutative:
                accepted.append(x)
                continue
            # every element of the right ideal x*A must be nilpotent
            span = row_space(F, gens[t])[0]
            dx = span.shape[0]
            sub_radix = F.q ** np.arange(dx)
            ok = True
            for sub in range(1, F.q**dx):
                cc = ((sub // sub_radix) % F.q).astype(np.int64)
                v = F.sum_codes(F.mul_codes(cc[:, None], span), axis=0)
                if not nil[int(v @ radix)]:
                    ok = False
                    break
            if ok:
                accepted.append(x)
    if not accepted:
        return np.zeros((0, m), dtype=np.int64)
    return row_space(F, np.array(accepted, dtype=np.int64))[0]


def _separability_idempotent(F, sc, id_coords):
    """Coefficient matrix of a separability idempotent, or None.

    e = sum e[i, j] (b_i (x) b_j) must centralize the bimodule action, a
    Sylvester condition A_k e = e B_k per basis element, and multiply down
    to the identity.  Both conditions are linear, and over a finite (hence
    perfect) field a solution exists exactly when the algebra is
    semisimple, so this certifies noncommutative quotients of any size.
    """
    m = sc.shape[0]
    K = np.eye(m * m, dtype=np.int64)  # rows: candidate coefficient matrices
    for k in range(m):
        mats = K.reshape(-1, m, m)
        Ak = np.ascontiguousarray(sc[k].T)
        Bk = np.ascontiguousarray(sc[:, k, :])
        lhs = kernels.matmul_many(F, Ak[None], mats)
        rhs = kernels.matmul_many(F, mats, Bk[None])
        diff = F.sub_codes(lhs, rhs).reshape(-1, m * m)
        ker = nullspace_rows(F, np.ascontiguousarray(diff.T))
        if ker.shape[0] == 0:
            return None
        K = kernels.matmul(F, ker, K)
    prods = F.mul_codes(K.reshape(-1, m, m)[:, :, :, None], sc[None])
    mu = F.sum_codes(F.sum_codes(prods, axis=1), axis=1)  # (d, m): mu of each row
    lam = solve_raw(F, mu.T, id_coords[:, None])
    if lam is None:
        return None
    e = kernels.matmul(F, lam.T, K).reshape(m, m)
    for k in range(m):
        same = np.array_equal(
            kernels.matmul(F, sc[k].T, e),
            kernels.matmul(F, e, np.ascontiguousarray(sc[:, k, :])),
        )
        assert same, "separability idempotent must centralize the bimodule action"
    back = F.sum_codes(F.sum_codes(F.mul_codes(e[:, :, None], sc), axis=0), axis=0)
    assert np.array_equal(back, id_coords), (
        "separability idempotent must multiply down to the identity"
    )
    return e


# ---------------------------------------------------------------------------
# end_algebra
# ---------------------------------------------------------------------------

_END_CACHE: dict = {}
_DECOMP_CACHE: dict = {}


def end_algebra(U: Module) -> EndAlgebra:
    """End(U) with structure constants and a certified radical basis."""
    if U in _END_CACHE:
        return _END_CACHE[U]
    F, n = U.field, U.dim
    raw = _hom_raw(U, U)
    m = len(raw)
    flat = (np.stack([X.reshape(-1) for X in raw])
            if m else np.zeros((0, n * n), dtype=np.int64))
    _, piv = kernels.rref(F, flat)
    piv = list(piv)
    assert len(piv) == m, "endomorphism basis must be linearly independent"
    pivinv = (Matrix(F, flat[:, piv]).inverse().data
              if m else np.zeros((0, 0), dtype=np.int64))
    sc = np.zeros((m, m, m), dtype=np.int64)
    if m:
        B = np.stack(raw)
        chunk = max(1, (1 << 22) // max(1, m * n * n))
        for lo in range(0, m, chunk):
            prods = kernels.matmul_many(F, B[lo : lo + chunk, None], B[None, :, :])
            pflat = prods.reshape(-1, n * n)
            coords = kernels.matmul(F, pflat[:, piv], pivinv)
            back = kernels.matmul(F, coords, flat)
            assert np.array_equal(back, pflat), "products must stay inside the span"
            sc[lo : lo + chunk] = coords.reshape(-1, m, m)
        idv = np.eye(n, dtype=np.int64).reshape(-1)
        id_coords = kernels.matmul(F, idv[piv][None, :], pivinv)[0]
        assert np.array_equal(kernels.matmul(F, id_coords[None, :], flat)[0], idv), (
            "identity must lie in the endomorphism algebra"
        )
    else:
        id_coords = np.zeros(0, dtype=np.int64)
    rad = _radical_rows(F, sc)
    radR, radpiv = (row_space(F, rad) if rad.shape[0]
                    else (np.zeros((0, m), dtype=np.int64), []))
    scB, idB, commutative = _certify_radical(F, sc, id_coords, radR, radpiv)
    qdeg = _local_degree(F, scB, idB, commutative) if m else None
    basis = [Matrix(F, X) for X in raw]
    radical_basis = ([Matrix(F, r.reshape(n, n)) for r in kernels.matmul(F, radR, flat)]
                     if radR.shape[0] else [])
    E = EndAlgebra(
        U, basis, sc, radical_basis, qdeg,
        (flat, piv, pivinv, id_coords, radR, radpiv),
    )
    _END_CACHE[U] = E
    return E


def _local_degree(F, scB, idB, commutative):
    """dim of the semisimple quotient when it is a field, else None."""
    mB = scB.shape[0]
    if mB == 0 or not commutative:
        # Wedderburn: finite division rings are fields, so a noncommutative
        # semisimple quotient is never a field
        return None
    # number of simple factors = dim of the fixed space of x -> x^q
    Q = np.zeros((mB, mB), dtype=np.int64)
    for j in range(mB):
        e = np.zeros(mB, dtype=np.int64)
        e[j] = 1
        Q[:, j] = _alg_pow(F, scB, idB, e, F.q)
    fixed = nullspace_rows(F, F.sub_codes(Q, np.eye(mB, dtype=np.int64)))
    factors = fixed.shape[0]
    assert factors >= 1, "a nonzero semisimple algebra has at least one factor"
    if factors != 1:
        return None
    if F.q**mB <= _SMALL_ENUM_CAP:
        # belt and braces: every nonzero element of a field is invertible
        radix = F.q ** np.arange(mB)
        idx = np.arange(1, F.q**mB)
        coords = ((idx[:, None] // radix[None, :]) % F.q).astype(np.int64)
        L = _mult_rows(F, scB, coords, "left")
        for i in range(L.shape[0]):
            if len(kernels.rref(F, L[i])[1]) != mB:
                raise InternalCheckFailed("factor count and invertibility scan disagree")
    return mB


def is_local(E: EndAlgebra) -> bool:
    """True when E modulo its radical is a field; False for the zero module."""
    if E.module.dim == 0:
        return False
    return E.quotient_field_degree is not None


# ---------------------------------------------------------------------------
# decomposition
# ---------------------------------------------------------------------------

def _submodule(V: Module, incl, proj):
    """Module carried by a direct summand, via its inclusion and projection."""
    F = V.field
    stack = kernels.matmul_many(
        F, kernels.matmul_many(F, proj[None], V._stack), incl[None]
    )
    return Module(V.group, F, stack)


def _find_idempotent(E: EndAlgebra, rng):
    """A nontrivial idempotent coordinate vector, or None."""
    F, sc, idc = E.field, E.structure_constants, E._id_coords
    m = E.dim
    candidates = [_unit(m, j) for j in range(m)]
    for i in range(min(m, 8)):
        for j in range(min(m, 8)):
            candidates.append(E.multiply(candidates[i], candidates[j]))
    for _ in range(200):
        candidates.append(rng.integers(0, F.q, size=m).astype(np.int64))
    if F.q**m <= _SMALL_ENUM_CAP:
        radix = F.q ** np.arange(m)
        idx = np.arange(1, F.q**m)
        candidates.extend(((idx[:, None] // radix[None, :]) % F.q).astype(np.int64))
    for x in candidates:
        if not x.any():
            continue
        mu = _minimal_poly(F, sc, idc, x)
        split = _coprime_split(F, mu)
        if split is None:
            continue
        A, Bp = split
        g, u, _ = _pxgcd(F, A, Bp)
        assert _pdeg(g) == 0 and g[0] == 1, "split factors must be coprime"
        e = _eval_poly(F, sc, idc, _pmul(F, u, A), x)
        assert np.array_equal(E.multiply(e, e), e), "uA(x) must be idempotent"
        if e.any() and not np.array_equal(e, idc):
            return e
    return None


def _split_leaves(V: Module, incl, proj, rng, out):
    """Recursive Fitting splitting, collecting (leaf, inclusion, projection).

    incl is (dim U x dim V) and proj its left inverse, composing the path
    back to the module the recursion started from.  Random draws only need
    a spanning set of the endomorphism space, so the structure constants
    and radical are computed lazily, once the draws stop splitting.
    """
    F = V.field
    if V.dim == 0:
        return
    raw = _hom_raw(V, V)
    h = len(raw)
    split = None
    if h > 1:  # a one-dimensional endomorphism space is the scalars
        basis = np.stack(raw)
        for t in range(_SPLIT_DRAWS):
            c = rng.integers(0, F.q, size=h).astype(np.int64)
            X = F.sum_codes(F.mul_codes(basis, c[:, None, None]), axis=0)
            Xpow = mat_pow(F, X, V.dim)
            P1 = nullspace_rows(F, Xpow)
            if 0 < P1.shape[0] < V.dim:
                split = (P1, row_space(F, Xpow.T)[0])
                break
            # Fitting on the kernel power misses invertible draws; a coprime
            # factor pair of the characteristic polynomial still splits them.
            # When charpoly is a prime power this costs a factoring attempt
            # for nothing, so only the early draws pay for it.
            if t >= _POLY_SPLIT_DRAWS:
                continue
            pair = _coprime_split(F, charpoly(F, X))
            if pair is not None:
                A, B = pair
                P1 = nullspace_rows(F, _eval_poly_mat(F, A, X))
                P2 = nullspace_rows(F, _eval_poly_mat(F, B, X))
                if 0 < P1.shape[0] < V.dim:
                    assert P1.shape[0] + P2.shape[0] == V.dim, (
                        "coprime charpoly factors must give complementary kernels"
                    )
                    split = (P1, P2)
                    break
    if split is None:
        E = end_algebra(V)
        if is_local(E):
            out.append((V, incl, proj))
            return
        e = _find_idempotent(E, rng)
        if e is None:
            raise InternalCheckFailed("found no splitting in a nonlocal algebra")
        X = E.from_coords(e)
        split = (nullspace_rows(F, X), row_space(F, X.T)[0])
    P1, P2 = split
    d1 = P1.shape[0]
    assert d1 + P2.shape[0] == V.dim, "kernel and image must be complementary"
    T = np.vstack([P1, P2])
    Tinv = Matrix(F, T).inverse().data
    for block in (slice(0, d1), slice(d1, V.dim)):
        sub_incl = np.ascontiguousarray(T.T[:, block])  # basis vectors as columns
        sub_proj = np.ascontiguousarray(Tinv[:, block].T)  # dual rows
        sub = _submodule(V, sub_incl, sub_proj)
        _split_leaves(
            sub,
            kernels.matmul(F, incl, sub_incl),
            kernels.matmul(F, sub_proj, proj),
            rng,
            out,
        )


def iso_indecomposable(A: Module, B: Module):
    """Isomorphism between indecomposables, or None; exact in all cases.

    A and B are isomorphic exactly when some product of hom basis elements
    (B -> A) o (A -> B) lands outside rad End(A): the radical is additively
    closed, so if every product lands inside, every composite does too,
    while a product outside it is a unit of the local algebra End(A).
    """
    if A.dim != B.dim:
        return None
    if A == B:
        return identity_map(A)
    fwd = _hom_raw(A, B)
    if not fwd:
        return None
    bwd = _hom_raw(B, A)
    if not bwd:
        return None
    E = end_algebra(A)
    F = A.field
    for phi in fwd:
        for psi in bwd:
            prod = kernels.matmul(F, psi, phi)
            if not E.in_radical(E.coords(prod)):
                out = ModuleMap(A, B, Matrix(F, phi))
                assert out.is_iso(), "a unit composite must make the forward map invertible"
                return out
    return None


def decompose(U: Module, seed: int = 0):
    """Indecomposable decomposition with explicit inclusions and projections.

    Returns one entry (module, multiplicity, pairs) per isomorphism class,
    where pairs lists (inclusion, projection) ModuleMaps with projection
    inverting inclusion on each copy.  The idempotents inclusion o projection
    are checked to sum to the identity of U.  Classes are ordered by
    dimension and then by representative stack bytes, so output order is
    stable, and Krull-Schmidt makes the classes seed-independent.
    """
    if U.dim == 0:
        return []
    hit = _DECOMP_CACHE.get((U, seed))
    if hit is not None:
        return hit
    F, n = U.field, U.dim
    rng = np.random.default_rng(seed)
    leaves: list = []
    eye = np.eye(n, dtype=np.int64)
    _split_leaves(U, eye, eye, rng, leaves)
    assert sum(V.dim for V, _, _ in leaves) == n
    classes: list = []
    for V, incl, proj in leaves:
        placed = False
        for rep, maps in classes:
            theta = iso_indecomposable(V, rep)
            if theta is not None:
                th = theta.matrix.data  # V -> rep
                thinv = theta.matrix.inverse().data
                maps.append(
                    (kernels.matmul(F, incl, thinv), kernels.matmul(F, th, proj))
                )
                placed = True
                break
        if not placed:
            classes.append((V, [(incl, proj)]))
    classes.sort(key=lambda c: (c[0].dim, c[0]._stack.tobytes()))
    out = []
    idem_sum = np.zeros((n, n), dtype=np.int64)
    for rep, maps in classes:
        pairs = []
        for incl, proj in maps:
            assert np.array_equal(
                kernels.matmul(F, proj, incl), np.eye(rep.dim, dtype=np.int64)
            ), "projection must invert inclusion on its summand"
            idem_sum = F.add_codes(idem_sum, kernels.matmul(F, incl, proj))
            pairs.append(
                (ModuleMap(rep, U, Matrix(F, incl)), ModuleMap(U, rep, Matrix(F, proj)))
            )
        out.append((rep, len(pairs), pairs))
    assert np.array_equal(idem_sum, eye), "summand idempotents must sum to 1"
    _DECOMP_CACHE[(U, seed)] = out
    return out


AbsIndecWitness = namedtuple("AbsIndecWitness", ["extension", "decomposition"])


def is_absolutely_indecomposable(U: Module):
    """(flag, witness) for an indecomposable U.

    Staying indecomposable under every scalar extension is equivalent to
    End/rad being the ground field itself.  When the quotient is a proper
    extension, extending scalars by exactly its degree splits U, and the
    witness carries that embedding with the resulting decomposition.
    """
    E = end_algebra(U)
    if not is_local(E):
        raise NotIndecomposable("module is not indecomposable")
    deg = E.quotient_field_degree
    if deg == 1:
        return True, None
    F = U.field
    emb = FieldEmbedding(F, make_field(F.p, F.deg * deg))
    ext = scalar_extend(U, emb)
    parts = decompose(ext, seed=0)
    if sum(mult for _, mult, _ in parts) < 2:
        raise InternalCheckFailed("a proper quotient field must split the extension")
    return False, AbsIndecWitness(emb, parts)


# ---------------------------------------------------------------------------
# radical oracle
# ---------------------------------------------------------------------------

def radical_oracle(E: EndAlgebra):
    """Radical by definition: all x whose right translates x*E are nil.

    Literal scan over the whole algebra, independent of the chain
    computation; raises TooLarge when |field|^dim exceeds the scan cap.
    """
    F, m = E.field, E.dim
    if F.q**m > _LITERAL_SCAN_CAP:
        raise TooLarge(
            "radical oracle needs |field|^dim <= %d, got %d"
            % (_LITERAL_SCAN_CAP, F.q**m)
        )
    if m == 0:
        return []
    rows = _literal_radical_rows(F, E.structure_constants)
    return [Matrix(F, E.from_coords(r)) for r in rows]


def _unit(m, j):
    e = np.zeros(m, dtype=np.int64)
    e[j] = 1
    return e
