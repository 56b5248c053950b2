"""Smoke checks for the tower layer."""
import numpy as np

from modtower.gf import make_field
from modtower.groups import (
    cyclic_group, symmetric_group, dihedral_group, klein_four_group,
    is_normal, subgroup_generated, trivial_subgroup, whole_group, sylow_p,
)
from modtower.modules import (
    Module, trivial_module, zero_module, regular_module, permutation_module,
    direct_sum, iso_test,
)
from modtower.tower import (
    Tower, build_module_tower, endo_tower, green_check, levelwise_relproj,
    project_subgroup_tower, stabilization_report, summands_isomorphic_check,
    tower_from_normal_chain, validate_subgroup_tower,
)
from modtower.errors import (
    HypothesisViolated, IncompatibleSubgroupTower, LevelMismatch,
    NotIndecomposableAtLevel,
)

F2 = make_field(2, 1)
F3 = make_field(3, 1)

C8 = cyclic_group(8)
g = C8.generator_indices()[0]
g2 = C8.compose_indices(g, g)
g4 = C8.compose_indices(g2, g2)
T8 = tower_from_normal_chain(
    C8, [subgroup_generated(C8, [g2]), subgroup_generated(C8, [g4])], p=2
)
assert [G.order for G in T8.levels] == [2, 4, 8]
assert T8.virtually_pro_p and T8.depth == 3
print("PASS tower C2 <- C4 <- C8 from a normal chain")

MT = build_module_tower(T8, regular_module(C8, F2))
assert [U.dim for U in MT.levels] == [2, 4, 8]
for i, G in enumerate(T8.levels):
    assert iso_test(MT.levels[i], regular_module(G, F2)) is not None
print("PASS regular module tower descends to regular modules")

MTt = build_module_tower(T8, trivial_module(C8, F2))
assert [U.dim for U in MTt.levels] == [1, 1, 1]
assert all(p.matrix.is_identity() for p in MTt.projections)
MTz = build_module_tower(T8, zero_module(C8, F2))
assert [U.dim for U in MTz.levels] == [0, 0, 0]
print("PASS trivial and zero module towers")

rep = stabilization_report(MT, vertices=True)
assert rep.summand_counts == [1, 1, 1]
assert rep.dim_multisets == [[2], [4], [8]]
assert rep.quotient_degrees == [1, 1, 1]
assert rep.vertex_orders == [1, 1, 1]
assert rep.stabilization_level == 0
print("PASS stabilization on the regular tower")

MT2 = build_module_tower(T8, direct_sum(trivial_module(C8, F2), trivial_module(C8, F2)))
rep2 = stabilization_report(MT2)
assert rep2.summand_counts == [2, 2, 2]
print("PASS direct sum base keeps count 2 at every level")

S3 = symmetric_group(3)
A3 = sylow_p(S3, 3)
TS = tower_from_normal_chain(S3, [A3], p=3)
base = permutation_module(S3, A3, F3)
repS = stabilization_report(build_module_tower(TS, base))
assert repS.summand_counts == [2, 2]
assert repS.stabilization_level == 0
print("PASS k + sign persists down a C2-quotient tower over GF(3)")

# levelwise relative projectivity
certs = levelwise_relproj(MT, project_subgroup_tower(T8, trivial_subgroup(C8)))
assert [c.verdict for c in certs.certificates] == [True, True, True] and certs.uniform
certs = levelwise_relproj(MTt, project_subgroup_tower(T8, trivial_subgroup(C8)))
assert [c.verdict for c in certs.certificates] == [False, False, False] and certs.uniform
certs = levelwise_relproj(MTt, project_subgroup_tower(T8, whole_group(C8)))
assert all(c.verdict for c in certs.certificates)
print("PASS levelwise relproj: regular/trivial against 1 and G")

try:
    validate_subgroup_tower(T8, [trivial_subgroup(G) for G in T8.levels[:2]])
    raise SystemExit("FAIL: expected IncompatibleSubgroupTower")
except IncompatibleSubgroupTower:
    pass
try:
    Tower([C8, cyclic_group(4)], [])
    raise SystemExit("FAIL: expected LevelMismatch")
except LevelMismatch:
    pass
print("PASS tower validation errors")

# green_check on C2 <- C4 with the C2 subgroup tower
C4 = cyclic_group(4)
h = C4.generator_indices()[0]
T4 = tower_from_normal_chain(C4, [subgroup_generated(C4, [C4.compose_indices(h, h)])], p=2)
H2 = subgroup_generated(C4, [C4.compose_indices(h, h)])
Hts = project_subgroup_tower(T4, H2)
V = trivial_module(Hts[-1].as_group(), F2)
gr = green_check(T4, Hts, V)
assert gr.hypothesis_ok and gr.verdict
assert [r["dim"] for r in gr.levels] == [2, 2]
assert all(r["summand_count"] == 1 and r["quotient_degree"] == 1 for r in gr.levels)
print("PASS green: trivial module up C2 <= C4 tower")

# single-level green with a non-normal C2 inside D4
D4 = dihedral_group(4)
refl = subgroup_generated(D4, [D4.generator_indices()[1]])
assert not is_normal(D4, refl)
T1 = Tower([D4], [], p=2)
gr = green_check(T1, [refl], trivial_module(refl.as_group(), F2))
assert gr.verdict and gr.levels[0]["dim"] == 4
print("PASS green: non-normal C2 < D4, induced dim 4 absolutely indecomposable")

# negative control: index not a p-power
TS1 = Tower([S3], [], p=3)
V3 = trivial_module(A3.as_group(), F3)
try:
    green_check(TS1, [A3], V3)
    raise SystemExit("FAIL: expected HypothesisViolated")
except HypothesisViolated:
    pass
gr = green_check(TS1, [A3], V3, strict=False)
assert not gr.hypothesis_ok and not gr.verdict
assert gr.levels[0]["summand_count"] == 2
print("PASS green negative control: S3/C3 at p=3 splits and is flagged")

# summands_isomorphic_check
K4 = klein_four_group()
a, b = K4.generator_indices()
diag = subgroup_generated(K4, [K4.compose_indices(a, b)])
TK = Tower([K4], [], p=2)
us = summands_isomorphic_check(TK, [diag], trivial_module(diag.as_group(), F2))
assert us.verdict and us.levels[0]["class_count"] == 1 and us.levels[0]["multiplicity"] == 1
us = summands_isomorphic_check(TS1, [A3], V3, strict=False)
assert not us.hypothesis_ok and not us.verdict and us.levels[0]["class_count"] == 2
print("PASS uniform summand checks, positive and negative")

# endo towers
et = endo_tower(MT)
assert et.rows == [(2, 1, 1), (4, 3, 1), (8, 7, 1)]
assert et.stabilized_degree == 1
et = endo_tower(MTt)
assert et.rows == [(1, 0, 1), (1, 0, 1), (1, 0, 1)]
C3 = cyclic_group(3)
stack = np.zeros((3, 2, 2), dtype=np.int64)
stack[0] = np.eye(2, dtype=np.int64)
stack[1] = np.array([[0, 1], [1, 1]])
stack[2] = np.array([[1, 1], [1, 0]])
order = [C3.elements.index(p) for p in [(0, 1, 2), (1, 2, 0), (2, 0, 1)]]
arranged = np.empty_like(stack)
for slot, gi in enumerate(order):
    arranged[gi] = stack[slot]
simple = Module(C3, F2, arranged)
et = endo_tower(build_module_tower(Tower([C3], [], p=3), simple))
assert et.rows == [(2, 0, 2)] and et.stabilized_degree == 2
try:
    endo_tower(MT2)
    raise SystemExit("FAIL: expected NotIndecomposableAtLevel")
except NotIndecomposableAtLevel:
    pass
print("PASS endo towers: regular chain, trivial, GF(4) quotient, error path")

print("ALL TOWER SMOKE PASSED")
