"""Line-oriented input files for the command line front end.

A workbench file is sectioned UTF-8 text.  '#' starts a comment, blank
lines are ignored, and a section runs until the next header:

    [field]
    gf 4                    # prime power

    [group]
    degree 4
    gen (1 2 3 4)           # 1-based disjoint cycles, 'id' for the identity
    gen (2 4)

    [subgroup H]
    gen (1 3)(2 4)          # no gen lines = trivial subgroup

    [module U]
    kind perm H             # trivial | regular | perm NAME | jordan D | matrix
    over H                  # optional: module over a named subgroup instead
    gen 1 0 ; 1 1           # matrix kind: one line per generator, ';' between rows

    [tower]
    chain N1 N2             # normal subgroups of the group, strictly descending
    subgroup H              # optional: seeds the subgroup tower

Modules of kind matrix list one gen line per generator of the acting
group, in declaration order; entries are field element codes.
"""
import re

import numpy as np

from .errors import DimensionMismatch, LevelMismatch, NotNormal, ParseError
from .gf import FiniteField, make_field
from .groups import PermGroup, Subgroup, subgroup_generated, trivial_subgroup
from .modules import (
    module_from_generator_images,
    permutation_module,
    regular_module,
    trivial_module,
)
from .tower import Tower, tower_from_normal_chain

_HEADER = re.compile(r"^\[([a-z]+)(?:\s+(\S+))?\]$")
_CYCLE = re.compile(r"\(([^()]*)\)")


class WorkbenchInput:
    """Parsed contents of one workbench file."""

    def __init__(self, field, group, subgroups, modules, tower_chain,
                 tower_subgroup, tower_line):
        self.field: FiniteField = field
        self.group: PermGroup = group
        self.subgroups = subgroups  # name -> (Subgroup, parent gen indices)
        self.modules = modules  # (name, Module, over name or None)
        self.tower_chain = tower_chain  # names, or None when no [tower]
        self.tower_subgroup = tower_subgroup
        self.tower_line = tower_line

    def subgroup(self, name) -> Subgroup:
        if name not in self.subgroups:
            raise ParseError("no [subgroup %s] section" % name)
        return self.subgroups[name][0]

    def build_tower(self) -> Tower:
        if self.tower_chain is None:
            raise ParseError("this command needs a [tower] section")
        chain = [self.subgroup(nm) for nm in self.tower_chain]
        try:
            return tower_from_normal_chain(self.group, chain, p=self.field.p)
        except (NotNormal, LevelMismatch) as e:
            raise ParseError(
                "line %d: bad tower chain: %s" % (self.tower_line, e)
            ) from e


def _strip(line):
    return line.split("#", 1)[0].strip()


def _parse_perm(text, degree, lineno):
    if text == "id":
        return tuple(range(degree))
    out = list(range(degree))
    seen = set()
    chunks = _CYCLE.findall(text)
    if not chunks or _CYCLE.sub("", text).strip():
        raise ParseError("line %d: expected cycles like (1 2 3)(4 5)" % lineno)
    for chunk in chunks:
        try:
            pts = [int(t) for t in chunk.split()]
        except ValueError:
            raise ParseError("line %d: cycle entries must be integers" % lineno)
        if len(pts) < 2:
            raise ParseError("line %d: cycles need at least two points" % lineno)
        for a in pts:
            if not 1 <= a <= degree:
                raise ParseError(
                    "line %d: point %d outside 1..%d" % (lineno, a, degree)
                )
            if a in seen:
                raise ParseError("line %d: point %d repeated" % (lineno, a))
            seen.add(a)
        for a, b in zip(pts, pts[1:] + pts[:1]):
            out[a - 1] = b - 1
    return tuple(out)


def _parse_matrix_row(text, lineno):
    rows = []
    for part in text.split(";"):
        try:
            rows.append([int(t) for t in part.split()])
        except ValueError:
            raise ParseError("line %d: matrix entries must be integers" % lineno)
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ParseError("line %d: matrix must be square" % lineno)
    return np.array(rows, dtype=np.int64)


def _sectioned(text):
    """Yield (header name, argument, header line, [(lineno, line), ...])."""
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line:
            continue
        m = _HEADER.match(line)
        if m:
            if current is not None:
                yield current
            current = (m.group(1), m.group(2), lineno, [])
            continue
        if current is None:
            raise ParseError("line %d: content before any section header" % lineno)
        current[3].append((lineno, line))
    if current is not None:
        yield current


def _keyed(body):
    out = []
    for ln, line in body:
        parts = line.split(None, 1)
        out.append((ln, parts[0], parts[1] if len(parts) > 1 else ""))
    return out


def parse_workbench(text: str) -> WorkbenchInput:
    field = None
    group = None
    subgroups = {}
    module_specs = []
    tower_chain = None
    tower_subgroup = None
    tower_line = 0
    seen = set()
    for name, arg, header_ln, body in _sectioned(text):
        if name in ("field", "group", "tower") and arg is not None:
            raise ParseError("line %d: [%s] takes no name" % (header_ln, name))
        if name in ("subgroup", "module") and arg is None:
            raise ParseError("line %d: [%s] needs a name" % (header_ln, name))
        key = (name, arg)
        if key in seen:
            raise ParseError("line %d: duplicate section" % header_ln)
        seen.add(key)
        rows = _keyed(body)

        if name == "field":
            for ln, k, v in rows:
                if k != "gf":
                    raise ParseError("line %d: [field] only has 'gf Q'" % ln)
                try:
                    q = int(v)
                except ValueError:
                    raise ParseError("line %d: 'gf' needs an integer" % ln)
                p, k_ = _prime_power(q, ln)
                field = make_field(p, k_)
            if field is None:
                raise ParseError("line %d: [field] needs a 'gf' line" % header_ln)

        elif name == "group":
            degree, perms = None, []
            for ln, k, v in rows:
                if k == "degree":
                    try:
                        degree = int(v)
                    except ValueError:
                        raise ParseError("line %d: bad degree" % ln)
                    if degree < 1:
                        raise ParseError("line %d: degree must be positive" % ln)
                elif k == "gen":
                    if degree is None:
                        raise ParseError("line %d: degree must come first" % ln)
                    perms.append(_parse_perm(v, degree, ln))
                else:
                    raise ParseError("line %d: unknown [group] key '%s'" % (ln, k))
            if degree is None:
                raise ParseError("line %d: [group] needs a degree" % header_ln)
            group = PermGroup(degree, perms)

        elif name == "subgroup":
            if group is None:
                raise ParseError("line %d: [group] must come first" % header_ln)
            idxs = []
            for ln, k, v in rows:
                if k != "gen":
                    raise ParseError("line %d: [subgroup] only has gen lines" % ln)
                perm = _parse_perm(v, group.degree, ln)
                try:
                    idxs.append(group.index(perm))
                except KeyError:
                    raise ParseError(
                        "line %d: permutation is not in the group" % ln
                    )
            sub = (
                subgroup_generated(group, idxs) if idxs else trivial_subgroup(group)
            )
            subgroups[arg] = (sub, idxs)

        elif name == "module":
            module_specs.append((arg, header_ln, rows))

        elif name == "tower":
            tower_line = header_ln
            tower_chain = []
            for ln, k, v in rows:
                if k == "chain":
                    tower_chain = v.split()
                elif k == "subgroup":
                    tower_subgroup = v.strip()
                    if not tower_subgroup:
                        raise ParseError("line %d: 'subgroup' needs a name" % ln)
                else:
                    raise ParseError("line %d: unknown [tower] key '%s'" % (ln, k))

        else:
            raise ParseError("line %d: unknown section [%s]" % (header_ln, name))

    if field is None:
        raise ParseError("missing [field] section")
    if group is None:
        raise ParseError("missing [group] section")
    win = WorkbenchInput(
        field, group, subgroups, [], tower_chain, tower_subgroup, tower_line
    )
    for arg, header_ln, rows in module_specs:
        win.modules.append(_build_module(win, arg, header_ln, rows))
    for nm in tower_chain or []:
        win.subgroup(nm)
    if tower_subgroup is not None:
        win.subgroup(tower_subgroup)
    return win


def _prime_power(q, lineno):
    if q < 2:
        raise ParseError("line %d: field size must be at least 2" % lineno)
    p = 2
    while p * p <= q:
        if q % p == 0:
            break
        p += 1
    if q % p:
        p = q
    k = 0
    while q % p == 0:
        q //= p
        k += 1
    if q != 1:
        raise ParseError("line %d: field size must be a prime power" % lineno)
    return p, k


def _acting_group(win, over):
    """(group, generator indices within it) for a module section."""
    if over is None:
        return win.group, list(win.group.generator_indices())
    sub, parent_gens = win.subgroups[over]
    H = sub.as_group()
    return H, [H.index(win.group.elements[i]) for i in parent_gens]


def _build_module(win, name, header_ln, rows):
    kind, kind_arg, over, images = None, None, None, []
    for ln, k, v in rows:
        if k == "kind":
            parts = v.split()
            if not parts:
                raise ParseError("line %d: empty kind" % ln)
            kind, kind_arg = parts[0], (parts[1] if len(parts) > 1 else None)
            if len(parts) > 2:
                raise ParseError("line %d: too many kind arguments" % ln)
        elif k == "over":
            over = v.strip()
            if over not in win.subgroups:
                raise ParseError("line %d: no [subgroup %s] section" % (ln, over))
        elif k == "gen":
            images.append((ln, _parse_matrix_row(v, ln)))
        else:
            raise ParseError("line %d: unknown [module] key '%s'" % (ln, k))
    if kind is None:
        raise ParseError("line %d: [module %s] needs a kind" % (header_ln, name))
    if kind != "matrix" and images:
        raise ParseError(
            "line %d: gen lines only belong to matrix modules" % header_ln
        )
    F = win.field

    if kind == "perm":
        if over is not None:
            raise ParseError(
                "line %d: perm modules are always over the group" % header_ln
            )
        if kind_arg is None:
            raise ParseError("line %d: 'kind perm' needs a subgroup" % header_ln)
        return name, permutation_module(win.group, win.subgroup(kind_arg), F), None

    G, gens = _acting_group(win, over)
    if kind == "trivial":
        return name, trivial_module(G, F), over
    if kind == "regular":
        return name, regular_module(G, F), over
    if kind == "jordan":
        try:
            d = int(kind_arg)
        except (TypeError, ValueError):
            raise ParseError("line %d: 'kind jordan' needs a size" % header_ln)
        if not 1 <= d <= G.order:
            raise ParseError(
                "line %d: jordan size must lie in 1..group order" % header_ln
            )
        g = max(range(G.order), key=G.element_order)
        if G.element_order(g) != G.order:
            raise ParseError("line %d: jordan modules need a cyclic group" % header_ln)
        J = np.eye(d, dtype=np.int64)
        for i in range(d - 1):
            J[i, i + 1] = 1
        return name, module_from_generator_images(G, F, (g,), (J,)), over
    if kind == "matrix":
        if not gens:
            raise ParseError(
                "line %d: matrix modules need a group with generators" % header_ln
            )
        if len(images) != len(gens):
            raise ParseError(
                "line %d: expected %d gen lines, one per generator, got %d"
                % (header_ln, len(gens), len(images))
            )
        mats = []
        for ln, M in images:
            if (M >= F.q).any() or (M < 0).any():
                raise ParseError(
                    "line %d: entries must be field codes below %d" % (ln, F.q)
                )
            mats.append(M)
        try:
            return name, module_from_generator_images(G, F, gens, mats), over
        except (AssertionError, DimensionMismatch) as e:
            raise ParseError(
                "line %d: images do not define a module: %s" % (header_ln, e)
            ) from None
    raise ParseError("line %d: unknown module kind '%s'" % (header_ln, kind))
