"""Finite permutation groups, materialized as full element lists.

Elements are image tuples on points 0..degree-1, composed left to right:
compose(g, h) maps x to g[h[x]].  The element list is sorted
lexicographically, which puts the identity at index 0, so indices are stable
across runs and every representative choice below (coset reps, class reps)
is "least index" and therefore deterministic.

Groups with at most _TABLE_CAP elements carry a full composition table;
larger groups fall back to dict lookups and are merely slower.
"""

from __future__ import annotations

import numpy as np

from .errors import (
    BadIndex,
    MixedParents,
    NotNormal,
    SearchBudgetExceeded,
    TooLarge,
)

_ORDER_CAP = 20000
_TABLE_CAP = 4096


def compose(g, h):
    """Image tuple of x -> g[h[x]]."""
    return tuple(g[x] for x in h)


def invert(g):
    out = [0] * len(g)
    for i, x in enumerate(g):
        out[x] = i
    return tuple(out)


class PermGroup:
    """A finite permutation group on points 0..degree-1."""

    def __init__(self, degree: int, generators, max_order: int = _ORDER_CAP):
        degree = int(degree)
        gens = []
        for g in generators:
            t = tuple(int(x) for x in g)
            if len(t) != degree or sorted(t) != list(range(degree)):
                raise ValueError("not a permutation of 0..%d: %r" % (degree - 1, t))
            if t not in gens:
                gens.append(t)
        self.degree = degree
        self.generators = gens
        self.elements = _closure(degree, gens, max_order)
        self._index = {e: i for i, e in enumerate(self.elements)}
        self.id_index = self._index[tuple(range(degree))]
        assert self.id_index == 0, "identity is lexicographically least"
        n = len(self.elements)
        self._elts = np.array(self.elements, dtype=np.int32).reshape(n, degree)
        inv = np.empty(n, dtype=np.int32)
        for i, e in enumerate(self.elements):
            inv[i] = self._index[invert(e)]
        self.inverse_of = inv
        self.mult = _build_table(self) if n <= _TABLE_CAP else None
        self._orders = None
        self._hash = None

    @property
    def order(self) -> int:
        return len(self.elements)

    def index(self, perm) -> int:
        return self._index[tuple(perm)]

    def compose_indices(self, i: int, j: int) -> int:
        if self.mult is not None:
            return int(self.mult[i, j])
        return self._index[compose(self.elements[i], self.elements[j])]

    def inv_index(self, i: int) -> int:
        return int(self.inverse_of[i])

    def conj_index(self, i: int, g: int) -> int:
        """Index of g e_i g^-1."""
        return self.compose_indices(self.compose_indices(g, i), self.inv_index(g))

    def element_order(self, i: int) -> int:
        if self._orders is None:
            self._orders = np.zeros(self.order, dtype=np.int32)
        if self._orders[i] == 0:
            k, cur = 1, i
            while cur != self.id_index:
                cur = self.compose_indices(cur, i)
                k += 1
            self._orders[i] = k
        return int(self._orders[i])

    def generator_indices(self):
        return [self._index[g] for g in self.generators]

    def __eq__(self, other):
        return (
            isinstance(other, PermGroup)
            and other.degree == self.degree
            and other.elements == self.elements
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.degree, tuple(self.elements)))
        return self._hash

    def __repr__(self):
        return "PermGroup(degree=%d, order=%d)" % (self.degree, self.order)


def _closure(degree, gens, max_order):
    """BFS over right products of generators; returns the sorted element list."""
    ident = tuple(range(degree))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for w in frontier:
            for g in gens:
                p = compose(w, g)
                if p not in seen:
                    if len(seen) >= max_order:
                        raise TooLarge(
                            "group closure exceeds the cap of %d elements" % max_order
                        )
                    seen.add(p)
                    nxt.append(p)
        frontier = nxt
    return sorted(seen)


def _build_table(G: PermGroup):
    n, deg = G.order, G.degree
    E = G._elts
    # byte view in big-endian so void comparison matches numeric lex order
    V = np.ascontiguousarray(E.astype(">u4")).view(np.dtype((np.void, deg * 4))).ravel()
    table = np.empty((n, n), dtype=np.int32)
    for i in range(n):
        composed = E[i][E]  # rows: e_i o e_j over all j
        W = np.ascontiguousarray(composed.astype(">u4")).view(
            np.dtype((np.void, deg * 4))
        ).ravel()
        table[i] = np.searchsorted(V, W)
    return table


# ---------------------------------------------------------------------------
# subgroups
# ---------------------------------------------------------------------------

class Subgroup:
    """A subgroup of a PermGroup, stored as a sorted tuple of element indices."""

    def __init__(self, parent: PermGroup, member_indices, _checked: bool = False):
        idx = sorted({int(i) for i in member_indices})
        if idx and (idx[0] < 0 or idx[-1] >= parent.order):
            raise BadIndex("member index out of range")
        self.parent = parent
        self.member_indices = tuple(idx)
        self._member_set = frozenset(idx)
        self._group_cache = None
        if not _checked:
            _check_closed(parent, self.member_indices)

    @property
    def order(self) -> int:
        return len(self.member_indices)

    def contains_index(self, i: int) -> bool:
        return i in self._member_set

    def is_trivial(self) -> bool:
        return self.member_indices == (self.parent.id_index,)

    def is_whole_group(self) -> bool:
        return self.order == self.parent.order

    def as_group(self) -> PermGroup:
        """The same permutations as a standalone PermGroup.

        Both element lists are lex sorted, so the k-th member index here
        corresponds to element index k of the standalone group.
        """
        if self._group_cache is None:
            perms = [self.parent.elements[i] for i in self.member_indices]
            H = PermGroup(self.parent.degree, perms)
            assert H.order == self.order
            self._group_cache = H
        return self._group_cache

    def __eq__(self, other):
        return (
            isinstance(other, Subgroup)
            and other.parent == self.parent
            and other.member_indices == self.member_indices
        )

    def __hash__(self):
        return hash((self.parent, self.member_indices))

    def __repr__(self):
        return "Subgroup(order=%d of %r)" % (self.order, self.parent)


def _check_closed(G: PermGroup, idx):
    if G.id_index not in idx:
        raise BadIndex("subgroup must contain the identity")
    if G.mult is not None:
        ii = np.array(idx, dtype=np.int64)
        sub = G.mult[np.ix_(ii, ii)]
        if not np.isin(sub, ii).all():
            raise BadIndex("member set is not closed under composition")
        if not np.isin(G.inverse_of[ii], ii).all():
            raise BadIndex("member set is not closed under inverse")
        return
    mem = set(idx)
    for i in idx:
        if G.inv_index(i) not in mem:
            raise BadIndex("member set is not closed under inverse")
        for j in idx:
            if G.compose_indices(i, j) not in mem:
                raise BadIndex("member set is not closed under composition")


def whole_group(G: PermGroup) -> Subgroup:
    return Subgroup(G, range(G.order), _checked=True)


def trivial_subgroup(G: PermGroup) -> Subgroup:
    return Subgroup(G, [G.id_index], _checked=True)


def subgroup_generated(G: PermGroup, gens) -> Subgroup:
    """Smallest subgroup of G containing the given element indices."""
    gens = [int(i) for i in gens]
    for i in gens:
        if i < 0 or i >= G.order:
            raise BadIndex("element index %d out of range" % i)
    members = {G.id_index}
    frontier = [G.id_index]
    while frontier:
        nxt = []
        for w in frontier:
            for g in gens:
                p = G.compose_indices(w, g)
                if p not in members:
                    members.add(p)
                    nxt.append(p)
        frontier = nxt
    return Subgroup(G, members, _checked=True)


def _require_same_parent(*subs):
    parent = subs[0].parent
    for s in subs[1:]:
        if s.parent is not parent and s.parent != parent:
            raise MixedParents("subgroups belong to different groups")
    return parent


def _left_mult_row(G: PermGroup, g: int, idx):
    """Indices of e_g o e_j for j in idx."""
    if G.mult is not None:
        return G.mult[g, np.asarray(idx, dtype=np.int64)]
    return np.array([G.compose_indices(g, j) for j in idx], dtype=np.int32)


def _right_mult_col(G: PermGroup, idx, g: int):
    if G.mult is not None:
        return G.mult[np.asarray(idx, dtype=np.int64), g]
    return np.array([G.compose_indices(i, g) for i in idx], dtype=np.int32)


def conjugate_indices(G: PermGroup, idx, g: int):
    """Sorted indices of g e_i g^-1 for i in idx."""
    row = _left_mult_row(G, g, idx)
    out = _right_mult_col(G, row, G.inv_index(g))
    out = np.sort(out)
    return out


def conjugate_subgroup(H: Subgroup, g: int) -> Subgroup:
    G = H.parent
    return Subgroup(G, conjugate_indices(G, H.member_indices, g), _checked=True)


def is_normal(G: PermGroup, H: Subgroup) -> bool:
    """gHg^-1 = H for all g; generator conjugation suffices by composition."""
    if H.parent != G:
        raise MixedParents("subgroup of a different group")
    mem = H._member_set
    for g in G.generator_indices():
        row = conjugate_indices(G, H.member_indices, g)
        if not all(int(i) in mem for i in row):
            return False
    return True


def normalizer(G: PermGroup, H: Subgroup) -> Subgroup:
    """N_G(H) = {g : gHg^-1 = H} by exhaustive scan."""
    if H.parent != G:
        raise MixedParents("subgroup of a different group")
    target = np.array(H.member_indices, dtype=np.int64)
    if G.mult is not None:
        rows = G.mult[:, target]  # (|G|, |H|) of g h
        conj = G.mult[rows, G.inverse_of[:, None].astype(np.int64)]
        conj.sort(axis=1)
        mask = (conj == target[None, :]).all(axis=1)
        members = np.nonzero(mask)[0]
    else:
        members = [
            g
            for g in range(G.order)
            if np.array_equal(conjugate_indices(G, H.member_indices, g), target)
        ]
    return Subgroup(G, members, _checked=True)


def intersect(H: Subgroup, K: Subgroup) -> Subgroup:
    G = _require_same_parent(H, K)
    return Subgroup(G, H._member_set & K._member_set, _checked=True)


def left_transversal(G: PermGroup, H: Subgroup):
    """Least-index representatives of the left cosets gH, ascending."""
    if H.parent != G:
        raise MixedParents("subgroup of a different group")
    seen = np.zeros(G.order, dtype=bool)
    reps = []
    hh = np.array(H.member_indices, dtype=np.int64)
    for g in range(G.order):
        if seen[g]:
            continue
        reps.append(g)
        seen[_left_mult_row(G, g, hh)] = True
    assert len(reps) * H.order == G.order
    return reps


def coset_index_map(G: PermGroup, H: Subgroup):
    """(transversal, array mapping g to its coset number in that transversal)."""
    reps = left_transversal(G, H)
    which = np.empty(G.order, dtype=np.int64)
    hh = np.array(H.member_indices, dtype=np.int64)
    for c, r in enumerate(reps):
        which[_left_mult_row(G, r, hh)] = c
    return reps, which


def double_cosets(G: PermGroup, K: Subgroup, H: Subgroup):
    """Least-index representative per K\\G/H double coset, ascending.

    Asserts the cosets partition G exactly.
    """
    _require_same_parent(K, H)
    if K.parent != G:
        raise MixedParents("subgroups of a different group")
    seen = np.zeros(G.order, dtype=bool)
    reps = []
    total = 0
    kk = np.array(K.member_indices, dtype=np.int64)
    hh = np.array(H.member_indices, dtype=np.int64)
    for g in range(G.order):
        if seen[g]:
            continue
        reps.append(g)
        kg = np.unique(_right_mult_col(G, kk, g))
        if G.mult is not None:
            coset = np.unique(G.mult[np.ix_(kg, hh)])
        else:
            coset = np.unique(
                np.array(
                    [G.compose_indices(int(a), int(b)) for a in kg for b in hh],
                    dtype=np.int64,
                )
            )
        assert not seen[coset].any(), "double cosets must be disjoint"
        seen[coset] = True
        total += coset.size
    assert total == G.order, "double cosets must cover G"
    return reps


def _p_part(n: int, p: int) -> int:
    out = 1
    while n % p == 0:
        out *= p
        n //= p
    return out


def is_p_group(H: Subgroup, p: int) -> bool:
    return _p_part(H.order, p) == H.order


def sylow_p(G: PermGroup, p: int) -> Subgroup:
    """A Sylow p-subgroup, grown by iterated normalizer extension.

    Start from the p-part of the least-index element of order divisible by
    p; while |P| is short of the full p-part, the normalizer N_G(P) contains
    an element whose image mod P has order p, and adjoining its p-part
    multiplies |P| by p.  Every choice is least-index, so the result is
    deterministic.
    """
    target = _p_part(G.order, p)
    if target == 1:
        return trivial_subgroup(G)
    z = None
    for g in range(G.order):
        o = G.element_order(g)
        if o % p == 0:
            z = _power_index(G, g, o // p)  # element of order exactly p
            break
    P = subgroup_generated(G, [z])
    while P.order < target:
        N = normalizer(G, P)
        grown = False
        for n in N.member_indices:
            if P.contains_index(n):
                continue
            o = G.element_order(n)
            m = o // _p_part(o, p)
            zp = _power_index(G, n, m)  # p-part of n
            if P.contains_index(zp):
                continue
            P = subgroup_generated(G, list(P.member_indices) + [zp])
            grown = True
            break
        assert grown, "normalizer growth stalled below the Sylow order"
    assert P.order == target
    return P


def _power_index(G: PermGroup, g: int, e: int) -> int:
    out = G.id_index
    base = g
    while e:
        if e & 1:
            out = G.compose_indices(out, base)
        e >>= 1
        if e:
            base = G.compose_indices(base, base)
    return out


def subgroup_conjugacy_key(G: PermGroup, H: Subgroup):
    """Lexicographically least sorted index tuple over all conjugates of H."""
    if H.parent != G:
        raise MixedParents("subgroup of a different group")
    idx = np.array(H.member_indices, dtype=np.int64)
    if G.mult is not None:
        rows = G.mult[:, idx]
        conj = G.mult[rows, G.inverse_of[:, None].astype(np.int64)]
        conj.sort(axis=1)
        best = conj[np.lexsort(conj.T[::-1])][0]
        return tuple(int(i) for i in best)
    best = None
    for g in range(G.order):
        row = tuple(int(i) for i in conjugate_indices(G, H.member_indices, g))
        if best is None or row < best:
            best = row
    return best


def are_conjugate(G: PermGroup, H: Subgroup, K: Subgroup) -> bool:
    if H.order != K.order:
        return False
    return subgroup_conjugacy_key(G, H) == subgroup_conjugacy_key(G, K)


def p_subgroups_up_to_conjugacy(G: PermGroup, p: int, max_classes: int = 512):
    """One representative per conjugacy class of p-subgroups, trivial included.

    Built bottom-up: a p-group of order p^(i+1) has a normal maximal subgroup
    of order p^i, so every class at the next layer arises by adjoining to a
    known representative P an element of N_G(P) whose image mod P has order
    p.  Representatives are the least member tuple within each class, and
    the list is sorted by order then member tuple.
    """
    triv = trivial_subgroup(G)
    found = {subgroup_conjugacy_key(G, triv): triv}
    layer = [triv]
    while layer:
        nxt = []
        for P in layer:
            N = normalizer(G, P)
            for z in N.member_indices:
                if P.contains_index(z):
                    continue
                zp = _power_index(G, z, p)
                if not P.contains_index(zp):
                    continue
                Q = subgroup_generated(G, list(P.member_indices) + [z])
                assert Q.order == P.order * p
                key = subgroup_conjugacy_key(G, Q)
                if key not in found:
                    if len(found) >= max_classes:
                        raise SearchBudgetExceeded(
                            "more than %d conjugacy classes of p-subgroups"
                            % max_classes
                        )
                    rep = Subgroup(G, key, _checked=True)
                    found[key] = rep
                    nxt.append(rep)
        layer = nxt
    out = sorted(found.values(), key=lambda S: (S.order, S.member_indices))
    return out


# ---------------------------------------------------------------------------
# quotients
# ---------------------------------------------------------------------------

class QuotientMap:
    """A surjection G -> Q with kernel N, as an index-to-index array.

    The homomorphism property is verified on all pairs when both composition
    tables exist, and on generator pairs plus a 1,000-pair sample otherwise.
    """

    def __init__(self, source: PermGroup, target: PermGroup, kernel: Subgroup, image_of):
        self.source = source
        self.target = target
        self.kernel = kernel
        self.image_of = np.asarray(image_of, dtype=np.int64)
        self._section = None
        self._validate()

    def __call__(self, i: int) -> int:
        return int(self.image_of[i])

    def section(self, j: int) -> int:
        """Least-index preimage of target element j."""
        if self._section is None:
            sec = np.full(self.target.order, -1, dtype=np.int64)
            for i in range(self.source.order - 1, -1, -1):
                sec[self.image_of[i]] = i
            self._section = sec
        return int(self._section[j])

    def _validate(self):
        img = self.image_of
        assert img.shape == (self.source.order,)
        assert len(np.unique(img)) == self.target.order, "map must be surjective"
        assert img[self.source.id_index] == self.target.id_index
        ker = np.nonzero(img == self.target.id_index)[0]
        assert tuple(int(i) for i in ker) == self.kernel.member_indices, (
            "kernel must equal the preimage of the identity"
        )
        S, T = self.source, self.target
        if S.mult is not None and T.mult is not None:
            lhs = img[S.mult]
            rhs = T.mult[img[:, None], img[None, :]]
            assert np.array_equal(lhs, rhs), "homomorphism check failed"
        else:
            pairs = [(i, j) for i in S.generator_indices() for j in S.generator_indices()]
            rng = np.random.default_rng(0)
            pairs += [
                (int(a), int(b))
                for a, b in rng.integers(0, S.order, size=(1000, 2))
            ]
            for i, j in pairs:
                assert img[S.compose_indices(i, j)] == T.compose_indices(
                    int(img[i]), int(img[j])
                ), "homomorphism check failed"

    def __repr__(self):
        return "QuotientMap(%r -> %r)" % (self.source, self.target)


def quotient(G: PermGroup, N: Subgroup):
    """(G/N acting on the left cosets of N, quotient map), N normal.

    Cosets are numbered by their least element index, ascending, so the
    quotient's point labels are deterministic.
    """
    if N.parent != G:
        raise MixedParents("subgroup of a different group")
    if not is_normal(G, N):
        raise NotNormal("subgroup is not normal")
    reps, which = coset_index_map(G, N)
    k = len(reps)
    # permutation of cosets induced by left multiplication with g
    def act(g: int):
        return tuple(int(which[G.compose_indices(g, r)]) for r in reps)

    Q = PermGroup(k, [act(g) for g in G.generator_indices()] or [tuple(range(k))])
    assert Q.order * N.order == G.order, "quotient order bookkeeping failed"
    image_of = np.empty(G.order, dtype=np.int64)
    for g in range(G.order):
        image_of[g] = Q.index(act(g))
    qmap = QuotientMap(G, Q, N, image_of)
    return Q, qmap


# ---------------------------------------------------------------------------
# subnormality and exhaustive enumeration
# ---------------------------------------------------------------------------

def normal_closure(G: PermGroup, ambient: Subgroup, H: Subgroup) -> Subgroup:
    """Smallest subgroup of `ambient` containing H and normal in it."""
    gens = set(H.member_indices)
    for a in ambient.member_indices:
        for h in H.member_indices:
            gens.add(G.conj_index(h, a))
    S = subgroup_generated(G, gens)
    while True:
        new = set(S.member_indices)
        for a in ambient.member_indices:
            row = conjugate_indices(G, S.member_indices, a)
            new.update(int(i) for i in row)
        if len(new) == S.order:
            return S
        S = subgroup_generated(G, new)


def is_subnormal(G: PermGroup, H: Subgroup) -> bool:
    """Whether H = K_r <| ... <| K_0 = G for some chain of normal steps.

    Uses the normal closure descent: the chain of iterated normal closures
    of H reaches H exactly when H is subnormal.
    """
    if H.parent != G:
        raise MixedParents("subgroup of a different group")
    K = whole_group(G)
    while True:
        if K.member_indices == H.member_indices:
            return True
        K2 = normal_closure(G, K, H)
        if K2.member_indices == K.member_indices:
            return False
        K = K2


def all_subgroups(G: PermGroup, max_count: int = 100000):
    """Every subgroup, by iterated one-generator extensions.  Desk scale only."""
    found = {trivial_subgroup(G).member_indices: trivial_subgroup(G)}
    frontier = list(found.values())
    while frontier:
        nxt = []
        for H in frontier:
            for g in range(G.order):
                if H.contains_index(g):
                    continue
                K = subgroup_generated(G, list(H.member_indices) + [g])
                if K.member_indices not in found:
                    if len(found) >= max_count:
                        raise SearchBudgetExceeded("subgroup enumeration budget hit")
                    found[K.member_indices] = K
                    nxt.append(K)
        frontier = nxt
    return sorted(found.values(), key=lambda S: (S.order, S.member_indices))


# ---------------------------------------------------------------------------
# stock groups
# ---------------------------------------------------------------------------

def cyclic_group(n: int) -> PermGroup:
    if n == 1:
        return PermGroup(1, [(0,)])
    shift = tuple((i + 1) % n for i in range(n))
    return PermGroup(n, [shift])


def klein_four_group() -> PermGroup:
    return PermGroup(4, [(1, 0, 3, 2), (2, 3, 0, 1)])


def dihedral_group(n: int) -> PermGroup:
    """Order 2n, acting on the n vertices; n >= 3."""
    rot = tuple((i + 1) % n for i in range(n))
    flip = tuple((n - i) % n for i in range(n))
    G = PermGroup(n, [rot, flip])
    assert G.order == 2 * n
    return G


def quaternion_group() -> PermGroup:
    """Q8 in its regular action on the 8 unit quaternions 1,-1,i,-i,j,-j,k,-k."""
    left_i = (2, 3, 1, 0, 6, 7, 5, 4)
    left_j = (4, 5, 7, 6, 1, 0, 2, 3)
    G = PermGroup(8, [left_i, left_j])
    assert G.order == 8
    return G


def symmetric_group(n: int) -> PermGroup:
    if n == 1:
        return PermGroup(1, [(0,)])
    swap = (1, 0) + tuple(range(2, n))
    cyc = tuple((i + 1) % n for i in range(n))
    return PermGroup(n, [swap, cyc])


def alternating_group(n: int) -> PermGroup:
    if n < 3:
        return PermGroup(n, [tuple(range(n))])
    three = (1, 2, 0) + tuple(range(3, n))
    if n == 3:
        return PermGroup(3, [three])
    if n % 2 == 1:
        cyc = tuple((i + 1) % n for i in range(n))
    else:
        cyc = (0,) + tuple(1 + (i + 1) % (n - 1) for i in range(n - 1))
    G = PermGroup(n, [three, cyc])
    return G
