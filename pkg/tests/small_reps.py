"""Exhaustive catalogues of small modules over p-groups.

Test-support code: enumerates every indecomposable module of bounded
dimension over a small p-group, up to isomorphism, by brute force over
generator images.  Used as an independent oracle and as the supply of
base modules for induction sweeps.
"""
import itertools

import numpy as np

from modtower.endo import decompose
from modtower.errors import TooLarge
from modtower.groups import PermGroup, is_p_group, subgroup_generated
from modtower.modules import (
    Module,
    iso_test,
    module_from_generator_images,
    trivial_module,
)

# enumerating p^(n^2) candidate matrices is fine up to here
_MATRIX_SPACE_CAP = 1 << 20


def generating_tuple(G: PermGroup):
    """A generating tuple of at most two elements, longest orders first."""
    by_order = sorted(range(G.order), key=lambda x: -G.element_order(x))
    if G.element_order(by_order[0]) == G.order:
        return (by_order[0],)
    for x, y in itertools.combinations(by_order, 2):
        if subgroup_generated(G, [x, y]).order == G.order:
            return (x, y)
    raise TooLarge("no generating pair; group needs three or more generators")


def _partitions(n, max_part):
    if n == 0:
        yield ()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest


def _jordan_block(d):
    J = np.eye(d, dtype=np.int64)
    for i in range(d - 1):
        J[i, i + 1] = 1
    return J


def _jordan_sum(parts):
    n = sum(parts)
    A = np.zeros((n, n), dtype=np.int64)
    at = 0
    for d in parts:
        A[at : at + d, at : at + d] = _jordan_block(d)
        at += d
    return A


def _cyclic_indecomposables(G, F, max_dim):
    # unipotent Jordan blocks J_d(1); d <= |G| keeps the generator order valid
    g = generating_tuple(G)[0]
    return [
        module_from_generator_images(G, F, (g,), (_jordan_block(d),))
        for d in range(1, min(G.order, max_dim) + 1)
    ]


def _all_matrices(p, n):
    count = p ** (n * n)
    digits = np.unravel_index(np.arange(count), (p,) * (n * n))
    return np.stack(digits, axis=1).reshape(count, n, n).astype(np.int64)


def _batched_matmul(p, A, B):
    return np.einsum("mij,mjk->mik", A, B) % p


def _batched_power(p, mats, e):
    out = np.broadcast_to(np.eye(mats.shape[-1], dtype=np.int64), mats.shape).copy()
    base = mats % p
    while e:
        if e & 1:
            out = _batched_matmul(p, out, base)
        base = _batched_matmul(p, base, base)
        e >>= 1
    return out


def _matrices_of_order_dividing(p, n, order):
    if p ** (n * n) > _MATRIX_SPACE_CAP:
        raise TooLarge("matrix space too large to enumerate")
    mats = _all_matrices(p, n)
    pw = _batched_power(p, mats, order)
    keep = (pw == np.eye(n, dtype=np.int64)).all(axis=(1, 2))
    return mats[keep]


def _batched_nullity(p, mats):
    # kernel size is p^nullity; count kernel vectors exactly
    n = mats.shape[-1]
    vecs = np.array(list(itertools.product(range(p), repeat=n)), dtype=np.int64)
    prods = np.einsum("mij,vj->mvi", mats, vecs) % p
    counts = (prods == 0).all(axis=2).sum(axis=1)
    out = np.zeros(len(mats), dtype=np.int64)
    c = counts.copy()
    while (c > 1).any():
        c = c // p
        out += c >= 1
    return out


def _hom_tables(G, p, gens, A, Bs):
    """Extend (A, B) along the Cayley graph for every B at once.

    Returns the stacked tables and a mask of the B for which the extension
    is a homomorphism.  Consistency on (x, generator) pairs is enough: the
    general product rule follows by induction on word length.
    """
    M, n = Bs.shape[0], A.shape[0]
    images = [np.broadcast_to(A, (M, n, n)), Bs]
    rho = np.zeros((M, G.order, n, n), dtype=np.int64)
    known = np.zeros(G.order, dtype=bool)
    rho[:, G.id_index] = np.eye(n, dtype=np.int64)
    known[G.id_index] = True
    frontier = [G.id_index]
    while frontier:
        nxt = []
        for x in frontier:
            for s, mat in zip(gens, images):
                y = G.compose_indices(x, s)
                if not known[y]:
                    rho[:, y] = _batched_matmul(p, rho[:, x], mat)
                    known[y] = True
                    nxt.append(y)
        frontier = nxt
    assert known.all(), "generators do not generate"
    ok = np.ones(M, dtype=bool)
    for x in range(G.order):
        for s, mat in zip(gens, images):
            z = G.compose_indices(x, s)
            prod = _batched_matmul(p, rho[:, x], mat)
            ok &= (prod == rho[:, z]).all(axis=(1, 2))
    return rho, ok


def _invariant_keys(p, tables):
    # nullity profile of (rho(x) - 1)^j per element; an iso invariant
    M, O, n, _ = tables.shape
    eye = np.eye(n, dtype=np.int64)
    out = np.zeros((M, O, n), dtype=np.int64)
    for x in range(O):
        N = (tables[:, x] - eye) % p
        P = N
        for j in range(n):
            out[:, x, j] = _batched_nullity(p, P)
            P = _batched_matmul(p, P, N)
    return out


def _pair_indecomposable_candidates(G, F, max_dim):
    p = F.p
    s0, s1 = generating_tuple(G)
    o0, o1 = G.element_order(s0), G.element_order(s1)
    buckets = {}
    for n in range(1, max_dim + 1):
        Bs = _matrices_of_order_dividing(p, n, o1)
        for parts in _partitions(n, min(n, o0)):
            A = _jordan_sum(parts)
            rho, ok = _hom_tables(G, p, (s0, s1), A, Bs)
            kept = rho[ok]
            keys = _invariant_keys(p, kept)
            for t in range(kept.shape[0]):
                buckets.setdefault((n, keys[t].tobytes()), []).append(kept[t])
    return buckets


def small_indecomposables(G: PermGroup, F, max_dim=4, seed=0):
    """All indecomposable G-modules of dim <= max_dim, up to isomorphism.

    G must be a p-group for the field's p and generated by at most two
    elements; images of generators are then unipotent, so Jordan forms on
    one generator side exhaust the search space up to isomorphism.
    """
    if G.order == 1:
        return [trivial_module(G, F)]
    assert is_p_group(G, F.p), "enumeration assumes a p-group in defining characteristic"
    gens = generating_tuple(G)
    if len(gens) == 1:
        mods = _cyclic_indecomposables(G, F, max_dim)
    else:
        assert F.q == F.p, "pair enumeration runs over prime fields"
        mods = []
        for (_, _), tables in sorted(
            _pair_indecomposable_candidates(G, F, max_dim).items()
        ):
            reps = []
            for table in tables:
                V = Module(G, F, table)
                if all(iso_test(V, W, seed=seed) is None for W in reps):
                    reps.append(V)
            mods.extend(reps)
    out = []
    for V in mods:
        if sum(m for _, m, _ in decompose(V, seed=seed)) == 1:
            out.append(V)
    return out
