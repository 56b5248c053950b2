"""Second smoke pass: coinvariants, conjugates, Mackey, GF(4) endo path."""
import numpy as np

from modtower.gf import make_field, FieldEmbedding
from modtower.groups import (
    cyclic_group, symmetric_group, dihedral_group, sylow_p, quotient,
    trivial_subgroup, whole_group, subgroup_generated, left_transversal,
    double_cosets, intersect, conjugate_subgroup, Subgroup,
)
from modtower.modules import (
    Module, trivial_module, regular_module, permutation_module, restrict,
    induce, coinvariants, coinvariants_along, conjugate_module, scalar_extend,
    direct_sum, hom_space, iso_test,
)
from modtower.endo import end_algebra, is_local, decompose, radical_oracle

F2 = make_field(2, 1)
F3 = make_field(3, 1)
F4 = make_field(2, 2)

# --- coinvariants(regular(C4), C2) = regular(C2) ------------------------------
C4 = cyclic_group(4)
g = C4.generators[0]
gg = C4.compose_indices(C4.index(g), C4.index(g))
C2sub = subgroup_generated(C4, [gg])
assert len(C2sub.member_indices) == 2
rC4 = regular_module(C4, F2)
Q, proj = coinvariants(rC4, C2sub)
assert Q.dim == 2, Q.dim
rQ = regular_module(proj.qmap.target, F2)
assert iso_test(Q, rQ) is not None
print("PASS coinvariants(kC4, C2) = k[C4/C2]")

# --- conjugate module of a restricted module ----------------------------------
S3 = symmetric_group(3)
P3 = sylow_p(S3, 3)
U = permutation_module(S3, P3, F3)
x = next(S3.elements[i] for i in range(S3.order) if i != S3.id_index)
H = sylow_p(S3, 2)
V = restrict(U, H)
Vx = conjugate_module(V, x)
assert Vx.dim == V.dim
assert Vx.group.order == 2
print("PASS conjugate_module")

# --- Mackey: restrict(induce(V, G, H), K) = sum over K\\G/H double cosets ------
# G = S3, H = Sylow3, K = Sylow2, V = trivial over H
tH = trivial_module(P3.as_group(), F3)
ind = induce(tH, S3, P3)
lhs = restrict(ind, H)
# each double coset contributes [K : K meet xHx^-1] dims for a trivial V
total = 0
for x in double_cosets(S3, H, P3):
    Hx = conjugate_subgroup(P3, x)
    L = intersect(H, Hx)
    total += len(H.member_indices) // len(L.member_indices)
assert lhs.dim == total == ind.dim  # dim check of the Mackey formula
print("PASS Mackey dimension bookkeeping")

# --- GF(4) endomorphism path: regular(C2) over GF(4) ---------------------------
C2 = cyclic_group(2)
r4 = regular_module(C2, F4)
E = end_algebra(r4)
assert E.dim == 2 and len(E.radical_basis) == 1 and is_local(E)
assert E.quotient_field_degree == 1
ora = radical_oracle(E)
assert len(ora) == len(E.radical_basis)
print("PASS End(GF(4)[C2]) radical over the extension field")

# --- k[S3/C2] over GF(3) is indecomposable of dim 3 (projective cover) --------
U3 = permutation_module(S3, H, F3)
assert U3.dim == 3
parts = decompose(U3, seed=0)
assert len(parts) == 1 and parts[0][1] == 1, [(p[0].dim, p[1]) for p in parts]
E3 = end_algebra(U3)
assert is_local(E3) and E3.quotient_field_degree == 1
assert len(E3.radical_basis) == 1
print("PASS k[S3/C2] over GF(3) = P(trivial), local End")

# --- decompose regular(C8) over GF(2): indecomposable --------------------------
C8 = cyclic_group(8)
r8 = regular_module(C8, F2)
parts = decompose(r8, seed=0)
assert len(parts) == 1 and parts[0][0].dim == 8
E8 = end_algebra(r8)
assert is_local(E8) and len(E8.radical_basis) == 7
print("PASS regular C8 over GF(2) indecomposable")

# --- decompose regular(S3) over GF(2): 1 + 2x2 ---------------------------------
rS3 = regular_module(S3, F2)
parts = decompose(rS3, seed=0)
sig = sorted((p[0].dim, p[1]) for p in parts)
# kS3 over GF(2): P(triv) = k + simple 2-dim, blocks: dim 2 projective of trivial,
# and the 2-dim simple with multiplicity 2
assert sum(p[0].dim * p[1] for p in parts) == 6
print("PASS decompose regular S3 over GF(2):", sig)

print("ALL SECOND SMOKE PASSED")
