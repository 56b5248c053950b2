"""The shared desk corpus: groups, fields and modules the checks sweep over.

Built lazily and cached per (group, field) cell, because decomposing every
permutation module is the expensive part and several checks want the same
material.
"""
from modtower.endo import decompose
from modtower.gf import make_field
from modtower.groups import (
    all_subgroups,
    alternating_group,
    cyclic_group,
    dihedral_group,
    klein_four_group,
    quaternion_group,
    symmetric_group,
)
from modtower.modules import (
    iso_test,
    permutation_module,
    regular_module,
    trivial_module,
)

GF2 = make_field(2, 1)
GF3 = make_field(3, 1)
GF4 = make_field(2, 2)
FIELDS = (GF2, GF3, GF4)

GROUPS = [
    ("C2", cyclic_group(2)),
    ("C4", cyclic_group(4)),
    ("C8", cyclic_group(8)),
    ("C2xC2", klein_four_group()),
    ("D4", dihedral_group(4)),
    ("Q8", quaternion_group()),
    ("S3", symmetric_group(3)),
    ("A4", alternating_group(4)),
    ("C9", cyclic_group(9)),
    ("D9", dihedral_group(9)),
]


def modular_fields(G):
    """The corpus fields whose characteristic divides the group order."""
    return [F for F in FIELDS if G.order % F.p == 0]


def cells():
    """Every (name, group, field) cell of the corpus."""
    for name, G in GROUPS:
        for F in modular_fields(G):
            yield name, G, F


_SUBGROUPS = {}
_CELL = {}


def subgroups(name):
    if name not in _SUBGROUPS:
        G = dict(GROUPS)[name]
        _SUBGROUPS[name] = all_subgroups(G)
    return _SUBGROUPS[name]


def cell_modules(name, G, F):
    """(all_modules, indec_classes) for one corpus cell.

    all_modules: [(label, module)] with the trivial module, the regular
    module and one permutation module per subgroup.  indec_classes: one
    representative per isomorphism class of indecomposable summand over
    all of them.
    """
    key = (name, F.signature())
    if key in _CELL:
        return _CELL[key]
    mods = [("trivial", trivial_module(G, F)), ("regular", regular_module(G, F))]
    for k, H in enumerate(subgroups(name)):
        mods.append(("perm[%d:%d]" % (G.order // H.order, k), permutation_module(G, H, F)))
    classes = []
    for label, U in mods:
        for rep, _, _ in decompose(U):
            if all(iso_test(rep, W) is None for _, W in classes):
                classes.append(("%s/dim%d" % (label, rep.dim), rep))
    _CELL[key] = (mods, classes)
    return _CELL[key]
