"""Smoke checks for the relative projectivity layer."""
import numpy as np

from modtower.gf import make_field
from modtower.groups import (
    cyclic_group, symmetric_group, dihedral_group, sylow_p,
    trivial_subgroup, whole_group, subgroup_generated,
)
from modtower.modules import (
    ModuleMap, trivial_module, regular_module, permutation_module,
    direct_sum, restrict, identity_map, hom_space, iso_test,
)
from modtower.relproj import (
    trace_map, is_relatively_projective, sylow_implies_relproj_check,
    vertex, sources,
)
from modtower.errors import GroupMismatch, IndexDivisibleByP, NotIndecomposable
from modtower.matrix import Matrix

F2 = make_field(2, 1)
F3 = make_field(3, 1)

C4 = cyclic_group(4)
S3 = symmetric_group(3)
D4 = dihedral_group(4)

# --- trace map --------------------------------------------------------------

# index times identity when alpha is the identity
U = trivial_module(S3, F3)
H3 = sylow_p(S3, 3)
tr = trace_map(identity_map(restrict(U, H3)), H3, S3)
assert np.array_equal(tr.matrix.data, np.array([[2]])), tr.matrix.data
print("PASS trace of identity = index (|S3:C3| = 2 over GF(3))")

# H = G leaves any alpha unchanged
PM = permutation_module(S3, subgroup_generated(S3, [S3.index((1, 0, 2))]), F3)
HG = whole_group(S3)
PMG = restrict(PM, HG)
for b in hom_space(PMG, PMG):
    assert np.array_equal(trace_map(b, HG, S3).matrix.data, b.matrix.data)
print("PASS trace over a single coset is the identity operation")

# |G| = 0 in k kills the trace from the trivial subgroup
C2 = cyclic_group(2)
t2 = trivial_module(C2, F2)
tr0 = trace_map(identity_map(restrict(t2, trivial_subgroup(C2))), trivial_subgroup(C2), C2)
assert not tr0.matrix.data.any()
print("PASS trace from H = 1 vanishes when p | |G|")

# transitivity through an intermediate subgroup
RC4 = regular_module(C4, F2)
K = subgroup_generated(C4, [C4.compose_indices(C4.generator_indices()[0], C4.generator_indices()[0])])
assert K.order == 2
KG = K.as_group()
UK = restrict(RC4, K)
triv_G = trivial_subgroup(C4)
triv_K = trivial_subgroup(KG)
M = np.array([[1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1], [1, 0, 0, 1]], dtype=np.int64)
a_direct = ModuleMap(restrict(RC4, triv_G), restrict(RC4, triv_G), Matrix(F2, M))
a_nested = ModuleMap(restrict(UK, triv_K), restrict(UK, triv_K), Matrix(F2, M))
lhs = trace_map(a_direct, triv_G, C4).matrix.data
rhs = trace_map(trace_map(a_nested, triv_K, KG), K, C4).matrix.data
assert np.array_equal(lhs, rhs)
print("PASS trace transitivity through C2 <= C4")

# modules that were not produced by restrict are rejected
try:
    trace_map(identity_map(RC4), triv_G, C4)
    raise SystemExit("FAIL: expected GroupMismatch")
except GroupMismatch:
    print("PASS trace rejects maps without restriction provenance")

# --- relative projectivity, both criteria -----------------------------------

cert = is_relatively_projective(PM, HG)
assert cert.verdict and cert.cross_check
assert isinstance(cert.witness, ModuleMap)
d = cert.as_dict()
assert d["verdict"] is True and d["kind"] == "relproj"
print("PASS any module is projective relative to the whole group")

cert = is_relatively_projective(RC4, triv_G)
assert cert.verdict, "free modules are projective"
traced = trace_map(cert.witness, triv_G, C4)
assert traced.matrix.is_identity()
print("PASS regular C4 over GF(2) is projective relative to 1, witness checks")

cert = is_relatively_projective(t2, trivial_subgroup(C2))
assert not cert.verdict and not cert.cross_check
assert isinstance(cert.witness, str)
print("PASS trivial kC2 module is not projective relative to 1")

# agreement sweep across subgroups and fields
sweep = [
    (trivial_module(S3, F3), S3),
    (permutation_module(S3, sylow_p(S3, 3), F3), S3),
    (regular_module(S3, F3), S3),
    (trivial_module(D4, F2), D4),
    (permutation_module(D4, subgroup_generated(D4, [D4.generator_indices()[0]]), F2), D4),
]
pairs = 0
for UU, GG in sweep:
    for HH in (trivial_subgroup(GG), sylow_p(GG, UU.field.p), whole_group(GG)):
        is_relatively_projective(UU, HH)  # CriteriaDisagree is the failure mode
        pairs += 1
assert pairs == 15
print("PASS dual criteria agree on a 15-pair sweep")

# --- sylow averaging witness -------------------------------------------------

assert sylow_implies_relproj_check(trivial_module(S3, F3), H3)
print("PASS averaging witness for C3 <= S3 at p = 3")

try:
    sylow_implies_relproj_check(RC4, K)
    raise SystemExit("FAIL: expected IndexDivisibleByP")
except IndexDivisibleByP:
    print("PASS index divisible by p is rejected")

# --- vertices ----------------------------------------------------------------

rep = vertex(RC4)
assert rep.vertex.order == 1
assert all(rep.verdicts), "a projective module is projective relative to everything"
assert rep.sources and rep.sources[0][0].dim == 1 and rep.sources[0][1] == 4
print("PASS vertex(regular C4) = 1 with a 1-dim source of multiplicity 4")

rep = vertex(trivial_module(D4, F2))
assert rep.vertex.order == 8
assert sum(rep.verdicts) == 1, "only the whole group works for the trivial module"
assert rep.sources[0][0].dim == 1 and rep.sources[0][1] == 1
d = rep.as_dict()
assert d["vertex_members"] == list(range(8))
print("PASS vertex(trivial over D4 at p=2) = D4 itself")

rep = vertex(trivial_module(S3, F3))
assert rep.vertex.order == 3
assert rep.verdicts == [False, True]
S = rep.sources[0][0]
assert S.dim == 1 and np.all(S._stack == np.ones((3, 1, 1), dtype=np.int64))
print("PASS vertex(trivial over S3 at p=3) = C3 with trivial source")

try:
    vertex(direct_sum(t2, t2))
    raise SystemExit("FAIL: expected NotIndecomposable")
except NotIndecomposable:
    print("PASS vertex rejects decomposable modules")

# conjugation invariance of the vertex: vertex of a conjugated module matches
from modtower.modules import conjugate_module
from modtower.groups import conjugate_subgroup
UD = permutation_module(D4, subgroup_generated(D4, [D4.generator_indices()[1]]), F2)
from modtower.endo import decompose
parts = decompose(UD)
leaf = parts[0][0]
vr1 = vertex(leaf)
for g in (1, 3, 5):
    Ug = conjugate_module(leaf, D4.elements[g])
    vr2 = vertex(Ug)
    assert vr1.vertex.order == vr2.vertex.order
print("PASS vertex order is conjugation invariant on a D4 summand")

print("ALL RELPROJ SMOKE PASSED")
