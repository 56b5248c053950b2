"""Towers of finite quotients and the level-wise workbench built on them.

A profinite group enters the system only as a finite truncation window: a
list of finite quotients, coarsest first, with a surjection from each level
onto the one before it.  A module lives at the deepest level and descends by
coinvariants, and every "for all open normal subgroups" statement turns into
a per-level check across the window.  Reports always carry the window size,
since nothing outside it has been looked at.
"""

from __future__ import annotations

import numpy as np

from . import kernels
from .endo import (
    decompose,
    end_algebra,
    is_absolutely_indecomposable,
    is_local,
)
from .errors import (
    GroupMismatch,
    HypothesisViolated,
    IncompatibleSubgroupTower,
    InternalCheckFailed,
    LevelMismatch,
    MonotonicityViolated,
    NotIndecomposable,
    NotIndecomposableAtLevel,
)
from .groups import (
    PermGroup,
    QuotientMap,
    Subgroup,
    is_p_group,
    is_subnormal,
    quotient,
    trivial_subgroup,
)
from .matrix import Matrix
from .modules import (
    Module,
    ModuleMap,
    coinvariants_along,
    coinvariants_map,
    induce,
    iso_test,
)
from .relproj import is_relatively_projective, vertex


class Tower:
    """A finite truncation window of a profinite group, coarsest level first.

    maps[i] is the connecting surjection levels[i+1] -> levels[i].  The prime
    p is optional and only needed for the pro-p bookkeeping: kernel_is_p_group
    records, per connecting map, whether its kernel is a p-group, and the
    tower counts as virtually pro-p when every kernel is.
    """

    def __init__(self, levels, maps, p=None, subgroup_tower=None):
        levels = list(levels)
        maps = list(maps)
        if not levels:
            raise LevelMismatch("a tower needs at least one level")
        if len(maps) != len(levels) - 1:
            raise LevelMismatch(
                "%d levels need %d connecting maps, got %d"
                % (len(levels), len(levels) - 1, len(maps))
            )
        for i, qm in enumerate(maps):
            if qm.source != levels[i + 1] or qm.target != levels[i]:
                raise LevelMismatch("map %d does not join level %d to level %d" % (i, i + 1, i))
        self.levels = levels
        self.maps = maps
        self.p = p
        self.kernel_is_p_group = [
            qm.kernel.order == 1 or (p is not None and is_p_group(qm.kernel, p))
            for qm in maps
        ]
        self.subgroup_tower = None
        if subgroup_tower is not None:
            validate_subgroup_tower(self, subgroup_tower)
            self.subgroup_tower = list(subgroup_tower)

    @property
    def depth(self) -> int:
        return len(self.levels)

    @property
    def virtually_pro_p(self) -> bool:
        return self.p is not None and all(self.kernel_is_p_group)

    def composite_image(self, a: int, b: int):
        """Index array of the composed surjection from level a onto level b <= a."""
        if not 0 <= b <= a < self.depth:
            raise LevelMismatch("no surjection from level %d to level %d" % (a, b))
        img = np.arange(self.levels[a].order, dtype=np.int64)
        for t in range(a - 1, b - 1, -1):
            img = self.maps[t].image_of[img]
        return img

    def composite_map(self, a: int, b: int) -> QuotientMap:
        img = self.composite_image(a, b)
        Ga, Gb = self.levels[a], self.levels[b]
        ker = Subgroup(Ga, np.nonzero(img == Gb.id_index)[0])
        return QuotientMap(Ga, Gb, ker, img)

    def __repr__(self):
        return "Tower(%s)" % " <- ".join(str(G.order) for G in self.levels)


def validate_subgroup_tower(T: Tower, subs) -> None:
    """Check H_i <= G_i with image of H_{i+1} equal to H_i under each map."""
    subs = list(subs)
    if len(subs) != T.depth:
        raise IncompatibleSubgroupTower(
            "%d subgroups for %d levels" % (len(subs), T.depth)
        )
    for i, H in enumerate(subs):
        if H.parent != T.levels[i]:
            raise IncompatibleSubgroupTower("subgroup %d lives in the wrong level" % i)
    for i, qm in enumerate(T.maps):
        image = {int(qm(x)) for x in subs[i + 1].member_indices}
        if image != set(subs[i].member_indices):
            raise IncompatibleSubgroupTower(
                "image of level-%d subgroup is not the level-%d subgroup" % (i + 1, i)
            )


def tower_from_normal_chain(G: PermGroup, chain, p=None, subgroup_tower=None) -> Tower:
    """Tower G/N_0 <- ... <- G/N_{r-1} <- G from a descending chain of normals.

    chain lists normal subgroups of G, strictly descending by inclusion; the
    deepest level is always G itself.
    """
    chain = list(chain) + [trivial_subgroup(G)]
    for a, b in zip(chain, chain[1:]):
        if not b._member_set < a._member_set:
            raise LevelMismatch("kernel chain must descend strictly")
    levels, from_g = [], []
    for N in chain[:-1]:
        Q, qm = quotient(G, N)
        levels.append(Q)
        from_g.append(qm)
    # G itself is the deepest level, not a relabeled copy of G/1
    levels.append(G)
    from_g.append(
        QuotientMap(G, G, trivial_subgroup(G), np.arange(G.order, dtype=np.int64))
    )
    maps = []
    for i in range(len(levels) - 1):
        fine, coarse = from_g[i + 1], from_g[i]
        img = np.array(
            [coarse(fine.section(x)) for x in range(levels[i + 1].order)],
            dtype=np.int64,
        )
        ker = Subgroup(levels[i + 1], np.nonzero(img == levels[i].id_index)[0])
        maps.append(QuotientMap(levels[i + 1], levels[i], ker, img))
    return Tower(levels, maps, p=p, subgroup_tower=subgroup_tower)


def project_subgroup_tower(T: Tower, H: Subgroup):
    """The compatible subgroup tower of images of H <= deepest level."""
    if H.parent != T.levels[-1]:
        raise IncompatibleSubgroupTower("subgroup must live at the deepest level")
    out = []
    for i in range(T.depth):
        img = T.composite_image(T.depth - 1, i)
        out.append(Subgroup(T.levels[i], {int(img[x]) for x in H.member_indices}))
    validate_subgroup_tower(T, out)
    return out


# ---------------------------------------------------------------------------
# module towers
# ---------------------------------------------------------------------------

class ModuleTower:
    """Coinvariant levels of a base module, indexed like the tower."""

    def __init__(self, tower: Tower, levels, projections):
        self.tower = tower
        self.levels = levels
        self.projections = projections  # projections[i]: levels[i+1] -> levels[i]

    @property
    def base(self) -> Module:
        return self.levels[-1]

    def __repr__(self):
        return "ModuleTower(dims %s)" % [U.dim for U in self.levels]


def build_module_tower(T: Tower, base: Module) -> ModuleTower:
    """Descend base through every connecting map by coinvariants.

    The iterated quotients are cross-checked against the one-step coinvariants
    of the base along each composite map: both projections must have the same
    kernel, and the resulting change of basis must be an equivariant iso.
    Along p-group kernels a nonzero level can never project to zero.
    """
    if base.group != T.levels[-1]:
        raise LevelMismatch("base module must live at the deepest level")
    mods = [base]
    projs = []
    for i in range(T.depth - 2, -1, -1):
        UN, pr = coinvariants_along(mods[0], T.maps[i])
        if T.kernel_is_p_group[i] and base.field.p == T.p and mods[0].dim > 0:
            assert UN.dim > 0, "coinvariants along a p-kernel killed a nonzero module"
        mods.insert(0, UN)
        projs.insert(0, pr)
    L = T.depth - 1
    F = base.field
    for j in range(L):
        direct_mod, direct_pr = coinvariants_along(base, T.composite_map(L, j))
        comp = projs[j].matrix.data
        sect = projs[j].section.data
        for t in range(j + 1, L):
            comp = kernels.matmul(F, comp, projs[t].matrix.data)
            sect = kernels.matmul(F, projs[t].section.data, sect)
        theta = kernels.matmul(F, direct_pr.matrix.data, sect)
        assert np.array_equal(
            kernels.matmul(F, theta, comp), direct_pr.matrix.data
        ), "iterated and direct coinvariant projections must agree up to basis"
        iso = ModuleMap(mods[j], direct_mod, Matrix(F, theta))
        assert iso.is_iso(), "level bases must be related by an equivariant iso"
    return ModuleTower(T, mods, projs)


# ---------------------------------------------------------------------------
# stabilization
# ---------------------------------------------------------------------------

class TowerReport:
    """Per-level decomposition data with the first stable window index."""

    def __init__(self, module_tower, summand_counts, dim_multisets,
                 quotient_degrees, vertex_orders, relproj_verdicts,
                 stabilization_level):
        self.module_tower = module_tower
        self.summand_counts = summand_counts
        self.dim_multisets = dim_multisets
        self.quotient_degrees = quotient_degrees
        self.vertex_orders = vertex_orders
        self.relproj_verdicts = relproj_verdicts
        self.stabilization_level = stabilization_level

    @property
    def window(self) -> int:
        return len(self.summand_counts)

    def as_dict(self):
        return {
            "kind": "tower",
            "window": self.window,
            "level_orders": [G.order for G in self.module_tower.tower.levels],
            "level_dims": [U.dim for U in self.module_tower.levels],
            "summand_counts": list(self.summand_counts),
            "dim_multisets": [list(d) for d in self.dim_multisets],
            "quotient_degrees": list(self.quotient_degrees),
            "vertex_orders": list(self.vertex_orders),
            "relproj_verdicts": list(self.relproj_verdicts),
            "stabilization_level": self.stabilization_level,
        }


def stabilization_report(MT: ModuleTower, seed: int = 0, vertices: bool = False) -> TowerReport:
    """Decompose every level and report where the window stops changing.

    Summand counts may only grow toward finer levels when all kernels are
    p-groups; a decrease raises MonotonicityViolated.  The per-level quotient
    field degree is recorded for indecomposable levels, the vertex class only
    on request (it costs a full subgroup scan per level), and relative
    projectivity against the tower's distinguished subgroups when present.
    """
    T = MT.tower
    counts, dims, degrees, verts, rps = [], [], [], [], []
    for i, U in enumerate(MT.levels):
        parts = decompose(U, seed=seed)
        count = sum(m for _, m, _ in parts)
        counts.append(count)
        dims.append(sorted(rep.dim for rep, m, _ in parts for _ in range(m)))
        if count == 1:
            E = end_algebra(U)
            degrees.append(E.quotient_field_degree if is_local(E) else None)
        else:
            degrees.append(None)
        if vertices and count == 1:
            verts.append(vertex(U).vertex.order)
        else:
            verts.append(None)
        if T.subgroup_tower is not None:
            rps.append(is_relatively_projective(U, T.subgroup_tower[i]).verdict)
        else:
            rps.append(None)
    if T.virtually_pro_p:
        for i in range(len(counts) - 1):
            if counts[i] > counts[i + 1]:
                raise MonotonicityViolated(
                    "summand count %d at level %d exceeds %d at finer level %d"
                    % (counts[i], i, counts[i + 1], i + 1)
                )
    monitored = list(zip(counts, degrees))
    stab = len(monitored) - 1
    while stab > 0 and monitored[stab - 1] == monitored[-1]:
        stab -= 1
    return TowerReport(MT, counts, dims, degrees, verts, rps, stab)


# ---------------------------------------------------------------------------
# level-wise relative projectivity
# ---------------------------------------------------------------------------

class RelProjTowerReport:
    def __init__(self, certificates, uniform):
        self.certificates = certificates
        self.uniform = uniform

    def as_dict(self):
        return {
            "kind": "relproj_tower",
            "verdicts": [c.verdict for c in self.certificates],
            "uniform": self.uniform,
            "certificates": [c.as_dict() for c in self.certificates],
        }


def levelwise_relproj(MT: ModuleTower, H_tower) -> RelProjTowerReport:
    """is_relatively_projective at every level against a compatible H tower."""
    validate_subgroup_tower(MT.tower, H_tower)
    certs = [
        is_relatively_projective(U, H) for U, H in zip(MT.levels, H_tower)
    ]
    uniform = len({c.verdict for c in certs}) <= 1
    return RelProjTowerReport(certs, uniform)


# ---------------------------------------------------------------------------
# Green harness
# ---------------------------------------------------------------------------

def _hypothesis_failures(T: Tower, H_tower, p: int):
    """Per-level reasons the induction hypothesis fails, empty when it holds.

    A level is fine when the whole group is a p-group, or the subgroup is
    subnormal with p-power index.
    """
    out = []
    for i, (G, H) in enumerate(zip(T.levels, H_tower)):
        if _is_p_power(G.order, p):
            continue
        index = G.order // H.order
        if not _is_p_power(index, p):
            out.append((i, "index %d of the level-%d subgroup is not a power of %d"
                        % (index, i, p)))
            continue
        if not is_subnormal(G, H):
            out.append((i, "level-%d subgroup is not subnormal" % i))
    return out


def _is_p_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def _restricted_composite(T: Tower, H_tower, a: int, b: int) -> QuotientMap:
    """The composite surjection H_a -> H_b carved out of the group maps."""
    Ha, Hb = H_tower[a].as_group(), H_tower[b].as_group()
    img_full = T.composite_image(a, b)
    Ga, Gb = T.levels[a], T.levels[b]
    img = np.empty(Ha.order, dtype=np.int64)
    for x in range(Ha.order):
        gi = Ga.index(Ha.elements[x])
        img[x] = Hb.index(Gb.elements[int(img_full[gi])])
    ker = Subgroup(Ha, np.nonzero(img == Hb.id_index)[0])
    return QuotientMap(Ha, Hb, ker, img)


class GreenReport:
    """Outcome of the induced-module indecomposability harness."""

    def __init__(self, hypothesis_ok, failures, levels, verdict):
        self.hypothesis_ok = hypothesis_ok
        self.failures = failures
        self.levels = levels
        self.verdict = verdict

    def as_dict(self):
        return {
            "kind": "green",
            "hypothesis_ok": self.hypothesis_ok,
            "failures": [list(f) for f in self.failures],
            "levels": [dict(r) for r in self.levels],
            "verdict": self.verdict,
        }


def green_check(T: Tower, H_tower, V: Module, strict: bool = True) -> GreenReport:
    """Induce an absolutely indecomposable module and certify every level.

    With the hypotheses satisfied (base absolutely indecomposable; each level
    either a p-group or the subgroup subnormal of p-power index), the induced
    module must be indecomposable with scalar quotient field at every level,
    and a failure raises InternalCheckFailed.  strict controls whether a
    violated hypothesis raises or is merely recorded while the computation
    documents what actually happens.  The level identity between inducing
    then descending and descending then inducing is certified by iso_test
    unconditionally.
    """
    validate_subgroup_tower(T, H_tower)
    L = T.depth - 1
    if V.group != H_tower[L].as_group():
        raise GroupMismatch("base module must live over the deepest subgroup")
    p = V.field.p
    failures = list(_hypothesis_failures(T, H_tower, p))
    try:
        abs_ok, _ = is_absolutely_indecomposable(V)
    except NotIndecomposable:
        abs_ok = False
    if not abs_ok:
        failures.insert(0, (-1, "base module is not absolutely indecomposable"))
    if failures and strict:
        raise HypothesisViolated("; ".join(reason for _, reason in failures))
    X = induce(V, T.levels[L], H_tower[L])
    XT = build_module_tower(T, X)
    rows = []
    clean = True
    for i, Xi in enumerate(XT.levels):
        parts = decompose(Xi)
        count = sum(m for _, m, _ in parts)
        degree = None
        if count == 1:
            E = end_algebra(Xi)
            degree = E.quotient_field_degree if is_local(E) else None
        Vi, _ = coinvariants_along(V, _restricted_composite(T, H_tower, L, i))
        expected = induce(Vi, T.levels[i], H_tower[i])
        theta = iso_test(Xi, expected)
        if theta is None:
            raise InternalCheckFailed(
                "induction and coinvariants do not commute at level %d" % i
            )
        rows.append({
            "level": i,
            "dim": Xi.dim,
            "summand_count": count,
            "quotient_degree": degree,
            "exchange_ok": True,
        })
        if count != 1 or degree != 1:
            clean = False
    if not failures and not clean:
        raise InternalCheckFailed(
            "hypotheses hold but an induced level is not absolutely indecomposable"
        )
    return GreenReport(not failures, failures, rows, clean)


class UniformSummandReport:
    """Outcome of the all-summands-isomorphic harness."""

    def __init__(self, hypothesis_ok, failures, levels, verdict):
        self.hypothesis_ok = hypothesis_ok
        self.failures = failures
        self.levels = levels
        self.verdict = verdict

    def as_dict(self):
        return {
            "kind": "uniform_summands",
            "hypothesis_ok": self.hypothesis_ok,
            "failures": [list(f) for f in self.failures],
            "levels": [dict(r) for r in self.levels],
            "verdict": self.verdict,
        }


def summands_isomorphic_check(T: Tower, H_tower, V: Module, strict: bool = True) -> UniformSummandReport:
    """Check that every level of the induced tower has a single summand class.

    V must be indecomposable; the level hypotheses match green_check.  When
    they hold, a level with two non-isomorphic summand classes is a bug trap.
    """
    validate_subgroup_tower(T, H_tower)
    L = T.depth - 1
    if V.group != H_tower[L].as_group():
        raise GroupMismatch("base module must live over the deepest subgroup")
    if sum(m for _, m, _ in decompose(V)) != 1:
        raise NotIndecomposable("base module must be indecomposable")
    failures = _hypothesis_failures(T, H_tower, V.field.p)
    if failures and strict:
        raise HypothesisViolated("; ".join(reason for _, reason in failures))
    X = induce(V, T.levels[L], H_tower[L])
    XT = build_module_tower(T, X)
    rows = []
    clean = True
    for i, Xi in enumerate(XT.levels):
        parts = decompose(Xi)
        classes = len(parts)
        mult = parts[0][1] if classes == 1 else None
        rows.append({
            "level": i,
            "dim": Xi.dim,
            "class_count": classes,
            "multiplicity": mult,
        })
        if classes != 1:
            clean = False
    if not failures and not clean:
        raise InternalCheckFailed(
            "hypotheses hold but an induced level has non-isomorphic summands"
        )
    return UniformSummandReport(not failures, failures, rows, clean)


# ---------------------------------------------------------------------------
# End algebra towers
# ---------------------------------------------------------------------------

class EndoTowerReport:
    def __init__(self, rows, stabilization_level, stabilized_degree):
        self.rows = rows  # (dim E, dim R, quotient degree) per level
        self.stabilization_level = stabilization_level
        self.stabilized_degree = stabilized_degree

    def as_dict(self):
        return {
            "kind": "endo_tower",
            "rows": [list(r) for r in self.rows],
            "stabilization_level": self.stabilization_level,
            "stabilized_degree": self.stabilized_degree,
        }


def endo_tower(MT: ModuleTower) -> EndoTowerReport:
    """Per-level (dim E, dim R, quotient degree) with the radical descent check.

    Every level must be indecomposable.  For each connecting projection the
    functorial image of a radical basis element of the finer End algebra must
    land in the radical of the coarser one; that is the finite shadow of the
    radical-into-radical lemma and failing it is a bug, not a finding.
    """
    ends = []
    for i, U in enumerate(MT.levels):
        if sum(m for _, m, _ in decompose(U)) != 1:
            raise NotIndecomposableAtLevel("level %d is not indecomposable" % i)
        ends.append(end_algebra(U))
    rows = [
        (E.dim, len(E.radical_basis), E.quotient_field_degree) for E in ends
    ]
    for i, pr in enumerate(MT.projections):
        fine, coarse = ends[i + 1], ends[i]
        for r in fine.radical_basis:
            alpha = ModuleMap(MT.levels[i + 1], MT.levels[i + 1], r)
            down = coinvariants_map(pr, pr, alpha)
            if not coarse.in_radical(coarse.coords(down.matrix.data)):
                raise InternalCheckFailed(
                    "radical of level %d does not descend into level %d" % (i + 1, i)
                )
    degrees = [r[2] for r in rows]
    stab = len(degrees) - 1
    while stab > 0 and degrees[stab - 1] == degrees[-1]:
        stab -= 1
    return EndoTowerReport(rows, stab, degrees[-1])
