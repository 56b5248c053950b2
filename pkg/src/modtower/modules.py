"""Group representations over GF(q) and the functors between them.

A Module materializes one invertible matrix per group element, stored as a
stacked (|G|, n, n) array of field codes.  Functor outputs carry enough
provenance (induced-module transversals, permutation-module cosets) for
hom_space to use the cheap structural bases instead of the generic linear
solve whenever one applies.
"""

from __future__ import annotations

import numpy as np

from . import kernels
from .errors import (
    DimensionMismatch,
    FieldMismatch,
    GroupMismatch,
    IsoUndecided,
    NotHEquivariant,
    NotNormal,
    TooLarge,
)
from .gf import FieldEmbedding, FiniteField
from .groups import (
    PermGroup,
    QuotientMap,
    Subgroup,
    compose,
    coset_index_map,
    invert,
    is_p_group,
    quotient,
    trivial_subgroup,
)
from .matrix import Matrix, mat_pow, nullspace_rows, reduce_mod_rows, solve_raw

_VALIDATE_PAIRS_CAP = 200
_HOM_SOLVE_CAP = 4000


class Module:
    """A finite-dimensional representation of a PermGroup over a finite field."""

    def __init__(self, group: PermGroup, field: FiniteField, stack, validate: bool = True):
        stack = np.ascontiguousarray(np.asarray(stack, dtype=np.int64))
        n = stack.shape[1] if stack.ndim == 3 else 0
        if stack.ndim != 3 or stack.shape != (group.order, n, n):
            raise DimensionMismatch(
                "stack must be (|G|, n, n), got %r" % (stack.shape,)
            )
        if stack.size and (stack.min() < 0 or stack.max() >= field.q):
            raise FieldMismatch("entry code out of range for %r" % (field,))
        stack.setflags(write=False)
        self.group = group
        self.field = field
        self.dim = n
        self._stack = stack
        self._hash = None
        self._induced = None  # (V, H, transversal) when built by induce
        self._perm_subgroup = None  # H when this is k[G/H] on the coset basis
        self._restricted = None  # (U, H) when built by restrict
        if validate:
            self._validate()

    # -- spec surface ----------------------------------------------------------

    @property
    def rho(self):
        """Element index -> Matrix.  Materialized for every element."""
        return _RhoView(self)

    def rho_matrix(self, i: int) -> Matrix:
        return Matrix(self.field, self._stack[i])

    def action(self, i: int):
        """Raw code array of rho(element i)."""
        return self._stack[i]

    def key(self):
        return (self.group, self.field.signature(), self.dim, self._stack.tobytes())

    def __eq__(self, other):
        return (
            isinstance(other, Module)
            and other.group == self.group
            and other.field == self.field
            and other.dim == self.dim
            and np.array_equal(other._stack, self._stack)
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.key())
        return self._hash

    def __repr__(self):
        return "Module(dim=%d over %r, %r)" % (self.dim, self.field, self.group)

    def is_zero(self) -> bool:
        return self.dim == 0

    # -- validation ------------------------------------------------------------

    def _validate(self):
        G, F, n = self.group, self.field, self.dim
        st = self._stack
        assert np.array_equal(st[G.id_index], np.eye(n, dtype=np.int64)), (
            "identity must act as the identity matrix"
        )
        # rho(g) rho(g^-1) = 1 makes every matrix invertible
        inv_st = st[G.inverse_of]
        prod = kernels.matmul_many(F, st, inv_st)
        assert np.array_equal(prod, np.broadcast_to(np.eye(n, dtype=np.int64), prod.shape)), (
            "rho(g) rho(g^-1) must be the identity"
        )
        # generator pairs determine the full homomorphism property by
        # induction on word length; still exhaust all pairs at small |G|
        gi = G.generator_indices()
        if gi:
            left = st[:, None, :, :]
            right = st[None, gi, :, :]
            prods = kernels.matmul_many(F, left, right)
            if G.mult is not None:
                tgt = G.mult[:, gi]
            else:
                tgt = np.array(
                    [[G.compose_indices(g, s) for s in gi] for g in range(G.order)]
                )
            assert np.array_equal(prods, st[tgt]), "rho is not multiplicative"
        if G.order <= _VALIDATE_PAIRS_CAP:
            pairs = [(i, j) for i in range(G.order) for j in range(G.order)]
        else:
            rng = np.random.default_rng(0)
            pairs = [tuple(map(int, ij)) for ij in rng.integers(0, G.order, size=(1000, 2))]
        pa = np.array([i for i, _ in pairs])
        pb = np.array([j for _, j in pairs])
        chunk = max(1, (1 << 22) // max(1, n * n))
        for lo in range(0, len(pairs), chunk):
            ia, ib = pa[lo : lo + chunk], pb[lo : lo + chunk]
            prods = kernels.matmul_many(F, st[ia], st[ib])
            if G.mult is not None:
                tgt = G.mult[ia, ib]
            else:
                tgt = np.array([G.compose_indices(int(i), int(j)) for i, j in zip(ia, ib)])
            assert np.array_equal(prods, st[tgt]), "rho is not multiplicative"


class _RhoView:
    def __init__(self, mod):
        self._mod = mod

    def __getitem__(self, i: int) -> Matrix:
        return self._mod.rho_matrix(i)

    def __len__(self):
        return self._mod.group.order

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]


class ModuleMap:
    """An equivariant linear map between modules over the same group."""

    def __init__(self, source: Module, target: Module, matrix: Matrix):
        if source.group != target.group:
            raise GroupMismatch("source and target over different groups")
        if source.field != target.field or matrix.field != source.field:
            raise FieldMismatch("source, target and matrix fields must agree")
        if matrix.shape != (target.dim, source.dim):
            raise DimensionMismatch(
                "map matrix must be %dx%d, got %r"
                % (target.dim, source.dim, matrix.shape)
            )
        # generator equivariance extends to all of G by multiplicativity
        F = source.field
        for s in source.group.generator_indices():
            lhs = kernels.matmul(F, matrix.data, source.action(s))
            rhs = kernels.matmul(F, target.action(s), matrix.data)
            if not np.array_equal(lhs, rhs):
                raise NotHEquivariant("map does not commute with the group action")
        self.source = source
        self.target = target
        self.matrix = matrix

    def __matmul__(self, other: "ModuleMap") -> "ModuleMap":
        if other.target != self.source:
            raise DimensionMismatch("maps do not compose")
        return ModuleMap(other.source, self.target, self.matrix @ other.matrix)

    def is_iso(self) -> bool:
        return (
            self.source.dim == self.target.dim
            and self.matrix.rank() == self.source.dim
        )

    def inverse(self) -> "ModuleMap":
        return ModuleMap(self.target, self.source, self.matrix.inverse())

    def __repr__(self):
        return "ModuleMap(%d -> %d over %r)" % (
            self.source.dim,
            self.target.dim,
            self.source.group,
        )


def identity_map(U: Module) -> ModuleMap:
    return ModuleMap(U, U, Matrix.identity(U.field, U.dim))


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def trivial_module(G: PermGroup, field: FiniteField) -> Module:
    return Module(G, field, np.ones((G.order, 1, 1), dtype=np.int64), validate=False)


def zero_module(G: PermGroup, field: FiniteField) -> Module:
    return Module(G, field, np.zeros((G.order, 0, 0), dtype=np.int64), validate=False)


def regular_module(G: PermGroup, field: FiniteField) -> Module:
    """Left multiplication on the element basis, i.e. k[G/1] on that basis."""
    n = G.order
    stack = np.zeros((n, n, n), dtype=np.int64)
    cols = np.arange(n)
    for g in range(n):
        if G.mult is not None:
            rows = G.mult[g]
        else:
            rows = np.array([G.compose_indices(g, j) for j in range(n)])
        stack[g, rows, cols] = 1
    M = Module(G, field, stack, validate=False)
    M._perm_subgroup = trivial_subgroup(G)
    _validate_perm_stack(M)
    return M


def permutation_module(G: PermGroup, H: Subgroup, field: FiniteField) -> Module:
    """k[G/H] on the left-coset basis, cosets ordered by least element."""
    if H.parent != G:
        raise GroupMismatch("subgroup of a different group")
    reps, which = coset_index_map(G, H)
    k = len(reps)
    stack = np.zeros((G.order, k, k), dtype=np.int64)
    cols = np.arange(k)
    for g in range(G.order):
        rows = np.array([which[G.compose_indices(g, r)] for r in reps])
        stack[g, rows, cols] = 1
    M = Module(G, field, stack, validate=False)
    M._perm_subgroup = H
    _validate_perm_stack(M)
    return M


def _validate_perm_stack(M):
    # permutation stacks are valid by construction; spot check the identity
    assert np.array_equal(
        M._stack[M.group.id_index], np.eye(M.dim, dtype=np.int64)
    )


def module_from_generator_images(G: PermGroup, field: FiniteField, gens, images) -> Module:
    """Module with prescribed matrices on a generating set.

    gens are element indices that generate G, images the matrices (code
    arrays) assigned to them.  The assignment extends along the Cayley
    graph; Module validation then rejects anything short of an actual
    homomorphism.
    """
    images = [np.asarray(M, dtype=np.int64) for M in images]
    if len(gens) != len(images):
        raise DimensionMismatch("one image per generator")
    n = images[0].shape[0] if images else 0
    for M in images:
        if M.shape != (n, n):
            raise DimensionMismatch("generator images must be square, same size")
    if n == 0:
        return zero_module(G, field)
    stack = np.full((G.order, n, n), -1, dtype=np.int64)
    stack[G.id_index] = np.eye(n, dtype=np.int64)
    frontier = [G.id_index]
    while frontier:
        nxt = []
        for x in frontier:
            for s, M in zip(gens, images):
                y = G.compose_indices(x, int(s))
                if stack[y, 0, 0] < 0:
                    stack[y] = kernels.matmul(field, stack[x], M)
                    nxt.append(y)
        frontier = nxt
    if (stack[:, 0, 0] < 0).any():
        raise GroupMismatch("given elements do not generate the group")
    return Module(G, field, stack)


# ---------------------------------------------------------------------------
# functors
# ---------------------------------------------------------------------------

def restrict(U: Module, H: Subgroup) -> Module:
    """U as a module over H, with H repackaged as a standalone group.

    Member k of H (in parent index order) is element k of the standalone
    group, both lists being lex sorted, so the stack restricts by indexing.
    """
    if H.parent != U.group:
        raise GroupMismatch("subgroup of a different group")
    K = H.as_group()
    stack = U._stack[np.array(H.member_indices, dtype=np.int64)]
    M = Module(K, U.field, stack, validate=False)
    M._restricted = (U, H)
    return M


def induce(V: Module, G: PermGroup, H: Subgroup) -> Module:
    """Induction along H <= G on the basis (transversal element, V-basis).

    The transversal is the least-element representative per left coset, so
    the block matrices are reproducible.
    """
    if H.parent != G:
        raise GroupMismatch("subgroup of a different group")
    if V.group != H.as_group():
        raise GroupMismatch("module is not over the given subgroup")
    reps, which = coset_index_map(G, H)
    k, dv = len(reps), V.dim
    n = k * dv
    members = np.array(H.member_indices, dtype=np.int64)
    stack = np.zeros((G.order, n, n), dtype=np.int64)
    for g in range(G.order):
        for i, t in enumerate(reps):
            gt = G.compose_indices(g, t)
            si = int(which[gt])
            h = G.compose_indices(G.inv_index(reps[si]), gt)
            hk = int(np.searchsorted(members, h))
            assert members[hk] == h, "transversal bookkeeping failed"
            stack[g, si * dv : (si + 1) * dv, i * dv : (i + 1) * dv] = V._stack[hk]
    M = Module(G, V.field, stack, validate=(G.order <= 64))
    M._induced = (V, H, tuple(reps))
    return M


class CoinvariantProjection:
    """The projection U -> U_N together with its section, as raw matrices.

    matrix is (dim U_N) x (dim U) and section is its right inverse; the
    quotient coordinates are the non-pivot unit vectors of the relation
    space, so repeated runs give identical bases.
    """

    def __init__(self, source, target, qmap, matrix, section):
        self.source = source
        self.target = target
        self.qmap = qmap
        self.matrix = matrix
        self.section = section

    def apply(self, v):
        return kernels.matmul(self.source.field, self.matrix.data, v)


def coinvariants_along(U: Module, qmap: QuotientMap):
    """(U_N over qmap.target, projection) for N = qmap.kernel."""
    if qmap.source != U.group:
        raise GroupMismatch("quotient map is over a different group")
    G, F, n = U.group, U.field, U.dim
    N = qmap.kernel
    # relation subspace: images of rho(n) - 1 over members of N
    rel = []
    eye = np.eye(n, dtype=np.int64)
    for i in N.member_indices:
        if i == G.id_index:
            continue
        rel.append(F.sub_codes(U._stack[i], eye).T)
    if rel:
        R, piv = kernels.rref(F, np.vstack(rel))
        R = R[: len(piv)]
        piv = list(piv)
    else:
        R = np.zeros((0, n), dtype=np.int64)
        piv = []
    nonpiv = [j for j in range(n) if j not in piv]
    m = len(nonpiv)
    if U.dim > 0 and is_p_group(N, F.p):
        assert m >= 1, "coinvariants of a nonzero module by a p-group vanished"
    # projection: pivot coordinate j (row r) maps to -R[r, nonpivots]
    proj = np.zeros((m, n), dtype=np.int64)
    for a, j in enumerate(nonpiv):
        proj[a, j] = 1
    for r, j in enumerate(piv):
        proj[:, j] = F.neg_codes(R[r, nonpiv])
    sect = np.zeros((n, m), dtype=np.int64)
    for a, j in enumerate(nonpiv):
        sect[j, a] = 1
    Q = qmap.target
    stack = np.empty((Q.order, m, m), dtype=np.int64)
    for q in range(Q.order):
        g = qmap.section(q)
        stack[q] = kernels.matmul(F, kernels.matmul(F, proj, U._stack[g]), sect)
    UN = Module(Q, F, stack)
    pr = CoinvariantProjection(U, UN, qmap, Matrix(F, proj), Matrix(F, sect))
    return UN, pr


def coinvariants(U: Module, N: Subgroup):
    """(U_N over G/N, projection).  N must be normal; NotNormal otherwise."""
    if N.parent != U.group:
        raise GroupMismatch("subgroup of a different group")
    _, qmap = quotient(U.group, N)  # raises NotNormal
    return coinvariants_along(U, qmap)


def coinvariants_map(pU: CoinvariantProjection, pW: CoinvariantProjection, alpha: ModuleMap) -> ModuleMap:
    """Functorial image of alpha: U -> W on the coinvariant quotients."""
    if alpha.source != pU.source or alpha.target != pW.source:
        raise GroupMismatch("map endpoints do not match the projections")
    if pU.qmap.target != pW.qmap.target:
        raise GroupMismatch("projections over different quotients")
    mat = pW.matrix @ alpha.matrix @ pU.section
    return ModuleMap(pU.target, pW.target, mat)


def conjugate_module(V: Module, x) -> Module:
    """The module x(V) over xHx^-1: the conjugate xhx^-1 acts as rho_V(h).

    x is a permutation tuple on the same points as V's group.
    """
    x = tuple(int(i) for i in x)
    H = V.group
    if len(x) != H.degree or sorted(x) != list(range(H.degree)):
        raise GroupMismatch("conjugator is not a permutation of the right degree")
    xinv = invert(x)
    K = PermGroup(H.degree, [compose(x, compose(g, xinv)) for g in H.generators])
    assert K.order == H.order
    stack = np.empty_like(V._stack)
    for k, kperm in enumerate(K.elements):
        h = H.index(compose(xinv, compose(kperm, x)))
        stack[k] = V._stack[h]
    return Module(K, V.field, stack, validate=False)


def scalar_extend(U: Module, e: FieldEmbedding) -> Module:
    if e.source != U.field:
        raise FieldMismatch("embedding source must be the module's field")
    return Module(U.group, e.target, e.apply_codes(U._stack), validate=False)


def direct_sum(*mods: Module) -> Module:
    assert mods, "direct_sum needs at least one module"
    G, F = mods[0].group, mods[0].field
    for M in mods[1:]:
        if M.group != G:
            raise GroupMismatch("direct sum over different groups")
        if M.field != F:
            raise FieldMismatch("direct sum over different fields")
    n = sum(M.dim for M in mods)
    stack = np.zeros((G.order, n, n), dtype=np.int64)
    off = 0
    for M in mods:
        stack[:, off : off + M.dim, off : off + M.dim] = M._stack
        off += M.dim
    return Module(G, F, stack, validate=False)


# ---------------------------------------------------------------------------
# hom spaces
# ---------------------------------------------------------------------------

def hom_space(U: Module, W: Module):
    """Basis of the equivariant maps U -> W, as ModuleMap values."""
    return [ModuleMap(U, W, Matrix(U.field, X)) for X in _hom_raw(U, W)]


def _hom_raw(U: Module, W: Module):
    if U.group != W.group:
        raise GroupMismatch("hom space needs modules over the same group")
    if U.field != W.field:
        raise FieldMismatch("hom space needs modules over the same field")
    if U.dim == 0 or W.dim == 0:
        return []
    if U._induced is not None:
        return _hom_from_induced(U, W)
    if W._induced is not None:
        return _hom_into_induced(U, W)
    if U._perm_subgroup is not None and U._perm_subgroup.is_trivial():
        return _hom_from_regular(U, W)
    if U._perm_subgroup is not None and W._perm_subgroup is not None:
        return _hom_perm_to_perm(U, W)
    return _hom_direct(U, W)


def _hom_direct(U: Module, W: Module):
    F = U.field
    s, t = U.dim, W.dim
    if s * t > _HOM_SOLVE_CAP:
        raise TooLarge(
            "hom solve with %d unknowns exceeds the %d cap" % (s * t, _HOM_SOLVE_CAP)
        )
    eye_t = np.eye(t, dtype=np.int64)
    eye_s = np.eye(s, dtype=np.int64)
    blocks = []
    for g in U.group.generator_indices():
        A = U.action(g)
        B = W.action(g)
        # row-major vec: vec(XA) = (I kron A^T) vec X, vec(BX) = (B kron I) vec X
        M = F.sub_codes(_kron(F, eye_t, A.T), _kron(F, B, eye_s))
        blocks.append(M)
    if not blocks:
        blocks = [np.zeros((0, s * t), dtype=np.int64)]
    NS = nullspace_rows(F, np.vstack(blocks))
    return [row.reshape(t, s) for row in NS]


def _kron(F, A, B):
    """Kronecker product over the field (codes)."""
    out = F.mul_codes(A[:, None, :, None], B[None, :, None, :])
    return out.reshape(A.shape[0] * B.shape[0], A.shape[1] * B.shape[1])


def _hom_from_regular(U: Module, W: Module):
    # Hom(k[G], W) = W: a map is determined by the image of the identity
    # basis vector, and column g of the map is rho_W(g) applied to it.
    out = []
    for a in range(W.dim):
        X = W._stack[:, :, a].T.copy()  # column g = rho_W(g) e_a
        out.append(np.ascontiguousarray(X))
    return out


def _hom_perm_to_perm(U: Module, W: Module):
    # Hom(k[G/K], k[G/H]): K-orbit sums on G/H, translated along cosets of K.
    G, F = U.group, U.field
    K, H = U._perm_subgroup, W._perm_subgroup
    repsK, whichK = coset_index_map(G, K)
    repsH, whichH = coset_index_map(G, H)
    nH = len(repsH)
    # orbits of K on the cosets G/H
    orbit_of = np.full(nH, -1, dtype=np.int64)
    orbits = []
    for c in range(nH):
        if orbit_of[c] >= 0:
            continue
        stackc = [c]
        orbit_of[c] = len(orbits)
        members = [c]
        while stackc:
            d = stackc.pop()
            for kk in K.member_indices:
                e = int(whichH[G.compose_indices(kk, repsH[d])])
                if orbit_of[e] < 0:
                    orbit_of[e] = len(orbits)
                    members.append(e)
                    stackc.append(e)
        orbits.append(sorted(members))
    out = []
    for orb in orbits:
        X = np.zeros((nH, len(repsK)), dtype=np.int64)
        for j, r in enumerate(repsK):
            for c in orb:
                X[int(whichH[G.compose_indices(r, repsH[c])]), j] = 1
        out.append(X)
    return out


def _hom_from_induced(U: Module, W: Module):
    # Hom(V induced to G, W) = Hom_H(V, W restricted to H):
    # beta lifts to the row of blocks rho_W(t_i) beta.
    V, H, reps = U._induced
    WH = restrict(W, H)
    base = _hom_raw(V, WH)
    F = U.field
    out = []
    for beta in base:
        blocks = [kernels.matmul(F, W._stack[t], beta) for t in reps]
        out.append(np.hstack(blocks))
    return out


def _hom_into_induced(U: Module, W: Module):
    # Hom(U, V induced to G) = Hom_H(U restricted to H, V):
    # alpha lifts to stacked blocks alpha rho_U(t_i)^-1.
    V, H, reps = W._induced
    UH = restrict(U, H)
    base = _hom_raw(UH, V)
    F = U.field
    G = U.group
    out = []
    for alpha in base:
        blocks = [
            kernels.matmul(F, alpha, U._stack[G.inv_index(t)]) for t in reps
        ]
        out.append(np.vstack(blocks))
    return out


# ---------------------------------------------------------------------------
# isomorphism testing
# ---------------------------------------------------------------------------

# default exhaustive-stage budget for iso_test; the CLI overrides it
ISO_BUDGET = 4096


def iso_test(U: Module, W: Module, seed: int = 0, budget=None):
    """An invertible equivariant map U -> W, or None when not isomorphic.

    Stages: dimension check, seeded random elements of Hom(U, W), exhaustive
    coefficient enumeration when q^dim(Hom) fits the budget, and finally an
    exact structural comparison through the indecomposable decompositions.
    IsoUndecided is reserved for the case where every stage is inconclusive.
    """
    if budget is None:
        budget = ISO_BUDGET
    if U.group != W.group:
        raise GroupMismatch("iso test needs modules over the same group")
    if U.field != W.field:
        raise FieldMismatch("iso test needs modules over the same field")
    if U.dim != W.dim:
        return None
    if U.dim == 0:
        return ModuleMap(U, W, Matrix.zeros(U.field, 0, 0))
    if U == W:
        return identity_map(U)
    F = U.field
    basis = _hom_raw(U, W)
    if not basis:
        return None
    n, h = U.dim, len(basis)
    B = np.stack(basis)
    rng = np.random.default_rng(seed)
    for _ in range(64):
        c = rng.integers(0, F.q, size=h)
        X = _combine(F, B, c)
        if _is_invertible(F, X):
            return ModuleMap(U, W, Matrix(F, X))
    if F.q**h <= budget:
        found = _exhaustive_iso(F, B)
        if found is None:
            return None
        return ModuleMap(U, W, Matrix(F, found))
    out = _structural_iso(U, W, seed, budget)
    if out is None or isinstance(out, ModuleMap):
        return out
    raise IsoUndecided("isomorphism search budget exhausted")


def _combine(F, B, coeffs):
    X = np.zeros(B.shape[1:], dtype=np.int64)
    for c, M in zip(coeffs, B):
        if c:
            X = F.add_codes(X, F.scale_codes(int(c), M))
    return X


def _is_invertible(F, X):
    if X.shape[0] != X.shape[1]:
        return False
    _, piv = kernels.rref(F, X)
    return len(piv) == X.shape[0]


def _exhaustive_iso(F, B):
    import itertools

    h = B.shape[0]
    # scaling does not change invertibility, so fix the first nonzero
    # coefficient to 1
    for lead in range(h):
        for tail in itertools.product(range(F.q), repeat=h - lead - 1):
            coeffs = (0,) * lead + (1,) + tail
            X = _combine(F, B, coeffs)
            if _is_invertible(F, X):
                return X
    return None


def _structural_iso(U: Module, W: Module, seed: int, budget: int):
    from .endo import decompose, iso_indecomposable

    DU = decompose(U, seed=seed)
    DW = decompose(W, seed=seed)
    if sorted(m.dim * mult for m, mult, _ in DU) != sorted(
        m.dim * mult for m, mult, _ in DW
    ):
        return None
    used = [False] * len(DW)
    total = Matrix.zeros(U.field, W.dim, U.dim)
    for modU, multU, mapsU in DU:
        match = None
        for j, (modW, multW, mapsW) in enumerate(DW):
            if used[j] or modW.dim != modU.dim or multW != multU:
                continue
            theta = iso_indecomposable(modU, modW)
            if theta is not None:
                match = (j, theta, mapsW)
                break
        if match is None:
            return None
        j, theta, mapsW = match
        used[j] = True
        for (inclU, projU), (inclW, projW) in zip(mapsU, mapsW):
            total = total + (inclW.matrix @ theta.matrix @ projU.matrix)
    if not all(used):
        return None
    out = ModuleMap(U, W, total)
    assert out.is_iso(), "assembled structural map must be invertible"
    return out
