"""Command line front end.

Each command reads one workbench file (see textio), runs an experiment,
and emits a report: a human-readable summary on stdout by default, or a
canonical JSON document with sorted keys under --format structured.  The
structured document embeds the input text and all knobs, so `verify` can
re-run it from scratch and compare bit for bit.

Exit codes: 0 ok, 2 parse or input error, 3 budget exhausted, 4 failed
verification, 5 internal assertion.
"""
import argparse
import json
import sys

from . import __version__, modules as _modules
from .endo import decompose, end_algebra, is_absolutely_indecomposable
from .errors import (
    InternalCheckFailed,
    ModtowerError,
    NotIndecomposable,
    OrderTooLarge,
    ParseError,
    SearchBudgetExceeded,
    TooLarge,
    VerificationFailure,
)
from .relproj import is_relatively_projective, vertex
from .textio import parse_workbench
from .tower import (
    build_module_tower,
    green_check,
    levelwise_relproj,
    project_subgroup_tower,
    stabilization_report,
)


class WorkbenchConfig:
    """Knobs shared by every command; all randomness flows from the seed."""

    def __init__(self, seed=0, budget_iso=4096, budget_subgroups=512,
                 max_group_order=10000):
        if seed < 0:
            raise ParseError("seed must be non-negative")
        if min(budget_iso, budget_subgroups, max_group_order) <= 0:
            raise ParseError("budgets must be positive")
        self.seed = seed
        self.budget_iso = budget_iso
        self.budget_subgroups = budget_subgroups
        self.max_group_order = max_group_order

    def provenance(self):
        return {
            "seed": self.seed,
            "budget_iso": self.budget_iso,
            "budget_subgroups": self.budget_subgroups,
            "max_group_order": self.max_group_order,
            "version": __version__,
        }

    @classmethod
    def from_provenance(cls, prov):
        try:
            return cls(
                seed=int(prov["seed"]),
                budget_iso=int(prov["budget_iso"]),
                budget_subgroups=int(prov["budget_subgroups"]),
                max_group_order=int(prov["max_group_order"]),
            )
        except (KeyError, TypeError, ValueError):
            raise ParseError("certificate provenance block is malformed")


class Report:
    def __init__(self, command, input_text, config, records):
        self.command = command
        self.input_text = input_text
        self.config = config
        self.records = records

    def as_dict(self):
        return {
            "command": self.command,
            "input": self.input_text,
            "provenance": self.config.provenance(),
            "records": self.records,
        }

    def as_json(self):
        return json.dumps(self.as_dict(), sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _summand_rows(parts):
    rows = []
    for W, mult, _ in parts:
        E = end_algebra(W)
        rows.append({
            "dim": W.dim,
            "multiplicity": mult,
            "end_dim": E.dim,
            "radical_dim": len(E.radical_basis),
            "quotient_degree": E.quotient_field_degree,
            "absolutely_indecomposable": is_absolutely_indecomposable(W)[0],
        })
    return rows


def cmd_decompose(win, cfg):
    records = []
    for name, U, _ in win.modules:
        parts = decompose(U, seed=cfg.seed)
        records.append({
            "kind": "decompose",
            "module": name,
            "dim": U.dim,
            "total_summands": sum(m for _, m, _ in parts),
            "summands": _summand_rows(parts),
        })
    if not records:
        raise ParseError("decompose needs at least one [module] section")
    return records


def cmd_vertex(win, cfg):
    records = []
    for name, U, _ in win.modules:
        try:
            rep = vertex(U, max_classes=cfg.budget_subgroups)
        except NotIndecomposable:
            records.append({
                "kind": "vertex",
                "module": name,
                "error": "NotIndecomposable",
                "decomposition": [
                    {"dim": W.dim, "multiplicity": m}
                    for W, m, _ in decompose(U, seed=cfg.seed)
                ],
            })
            continue
        rec = rep.as_dict()
        rec["module"] = name
        records.append(rec)
    if not records:
        raise ParseError("vertex needs at least one [module] section")
    return records


def cmd_relproj(win, cfg):
    if not win.subgroups:
        raise ParseError("relproj needs at least one [subgroup] section")
    records = []
    for name, U, over in win.modules:
        if over is not None:
            continue
        for sub_name in win.subgroups:
            cert = is_relatively_projective(U, win.subgroup(sub_name))
            rec = cert.as_dict()
            rec["module"] = name
            rec["subgroup"] = sub_name
            records.append(rec)
    if not records:
        raise ParseError("relproj needs at least one [module] section")
    return records


def cmd_tower(win, cfg):
    T = win.build_tower()
    H_tower = None
    if win.tower_subgroup is not None:
        H_tower = project_subgroup_tower(T, win.subgroup(win.tower_subgroup))
    records = []
    for name, U, over in win.modules:
        if over is not None:
            continue
        MT = build_module_tower(T, U)
        rec = stabilization_report(MT, seed=cfg.seed).as_dict()
        rec["module"] = name
        if H_tower is not None:
            rec["levelwise_relproj"] = levelwise_relproj(MT, H_tower).as_dict()
        records.append(rec)
    if not records:
        raise ParseError("tower needs at least one [module] section over the group")
    return records


def cmd_green(win, cfg):
    T = win.build_tower()
    if win.tower_subgroup is None:
        raise ParseError("green needs a 'subgroup' line in the [tower] section")
    H_tower = project_subgroup_tower(T, win.subgroup(win.tower_subgroup))
    bases = [
        (name, V) for name, V, over in win.modules if over == win.tower_subgroup
    ]
    if not bases:
        raise ParseError(
            "green needs a [module] with 'over %s'" % win.tower_subgroup
        )
    records = []
    for name, V in bases:
        rec = green_check(T, H_tower, V, strict=False).as_dict()
        rec["module"] = name
        records.append(rec)
    return records


_COMMANDS = {
    "decompose": cmd_decompose,
    "vertex": cmd_vertex,
    "relproj": cmd_relproj,
    "tower": cmd_tower,
    "green": cmd_green,
}


def run_command(command, input_text, cfg) -> Report:
    """Parse and run one command; pure function of (command, text, config)."""
    if command not in _COMMANDS:
        raise ParseError("unknown command '%s'" % command)
    win = parse_workbench(input_text)
    if win.group.order > cfg.max_group_order:
        raise OrderTooLarge(
            "group order %d exceeds --max-group-order %d"
            % (win.group.order, cfg.max_group_order)
        )
    saved = _modules.ISO_BUDGET
    _modules.ISO_BUDGET = cfg.budget_iso
    try:
        records = _COMMANDS[command](win, cfg)
    finally:
        _modules.ISO_BUDGET = saved
    return Report(command, input_text, cfg, records)


def run_verify(document) -> Report:
    """Re-run the embedded experiment and compare against the stored report."""
    if not isinstance(document, dict):
        raise ParseError("certificate must be a JSON object")
    for key in ("command", "input", "provenance", "records"):
        if key not in document:
            raise ParseError("certificate is missing '%s'" % key)
    command = document["command"]
    if command not in _COMMANDS:
        raise ParseError("certificate names unknown command '%s'" % command)
    prov = document["provenance"]
    cfg = WorkbenchConfig.from_provenance(prov)
    fresh = run_command(command, document["input"], cfg)
    stored = json.dumps(document, sort_keys=True, indent=2) + "\n"
    if stored != fresh.as_json():
        raise VerificationFailure(
            "stored %s report does not match a fresh run" % command
        )
    return Report("verify", document["input"], cfg,
                  [{"kind": "verify", "verified": True, "command": command}])


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def _fmt_bool(v):
    return "yes" if v else "no"

def _text_decompose(r, out):
    out.append(
        "module %s: dim %d, %d summands"
        % (r["module"], r["dim"], r["total_summands"])
    )
    for s in r["summands"]:
        out.append(
            "  dim %d x%d: End dim %d, radical %d, quotient degree %d,"
            " absolutely indecomposable %s"
            % (s["dim"], s["multiplicity"], s["end_dim"], s["radical_dim"],
               s["quotient_degree"], _fmt_bool(s["absolutely_indecomposable"]))
        )


def _text_vertex(r, out):
    if "error" in r:
        dims = ", ".join(
            "%d x%d" % (d["dim"], d["multiplicity"]) for d in r["decomposition"]
        )
        out.append("module %s: not indecomposable (summands %s)" % (r["module"], dims))
        return
    out.append(
        "module %s: vertex order %d (class %d of %d), verdicts %s"
        % (r["module"], len(r["vertex_members"]), r["conjugacy_class_id"],
           len(r["class_orders"]),
           "".join("T" if v else "." for v in r["verdicts"]))
    )
    for s in r["sources"]:
        out.append("  source dim %d x%d" % (s["dim"], s["multiplicity"]))


def _text_relproj(r, out):
    out.append(
        "module %s rel %s (order %d): %s"
        % (r["module"], r["subgroup"], len(r["subgroup_members"]),
           "projective" if r["verdict"] else "not projective")
    )


def _text_tower(r, out):
    out.append(
        "module %s: orders %s, dims %s, summand counts %s, stabilizes at %d"
        % (r["module"], r["level_orders"], r["level_dims"],
           r["summand_counts"], r["stabilization_level"])
    )
    if r.get("levelwise_relproj") is not None:
        lr = r["levelwise_relproj"]
        out.append(
            "  levelwise relproj: %s (uniform %s)"
            % ("".join("T" if v else "." for v in lr["verdicts"]),
               _fmt_bool(lr["uniform"]))
        )


def _text_green(r, out):
    out.append(
        "module %s: hypothesis %s, verdict %s"
        % (r["module"], _fmt_bool(r["hypothesis_ok"]), _fmt_bool(r["verdict"]))
    )
    for lvl, reason in r["failures"]:
        out.append("  hypothesis failure at level %d: %s" % (lvl, reason))
    for row in r["levels"]:
        out.append(
            "  level %d: dim %d, %d summands, quotient degree %s, exchange %s"
            % (row["level"], row["dim"], row["summand_count"],
               row["quotient_degree"], _fmt_bool(row["exchange_ok"]))
        )


def _text_verify(r, out):
    out.append("verified %s report: fresh run matches" % r["command"])


_RENDERERS = {
    "decompose": _text_decompose,
    "vertex": _text_vertex,
    "relproj": _text_relproj,
    "tower": _text_tower,
    "green": _text_green,
    "verify": _text_verify,
}


def render_text(report: Report) -> str:
    out = ["%s (seed %d)" % (report.command, report.config.seed)]
    for r in report.records:
        _RENDERERS[r["kind"]](r, out)
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _build_parser():
    ap = argparse.ArgumentParser(
        prog="modtower",
        description="exact workbench for modules over towers of finite groups",
    )
    sub = ap.add_subparsers(dest="command", required=True)
    for name, doc in [
        ("decompose", "indecomposable decomposition and End/radical table"),
        ("vertex", "vertex and sources of indecomposable modules"),
        ("relproj", "relative projectivity certificates"),
        ("tower", "levelwise decomposition along a quotient tower"),
        ("green", "induction from a subgroup tower, with hypothesis checks"),
        ("verify", "re-run a structured report and compare"),
    ]:
        p = sub.add_parser(name, help=doc)
        p.add_argument("input", help="workbench file" if name != "verify"
                       else "structured report to check")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--format", choices=("text", "structured"),
                       default="text", dest="fmt")
        p.add_argument("--budget-iso", type=int, default=4096)
        p.add_argument("--budget-subgroups", type=int, default=512)
        p.add_argument("--max-group-order", type=int, default=10000)
        p.add_argument("--out", default=None,
                       help="also write the structured report here")
    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = WorkbenchConfig(args.seed, args.budget_iso,
                              args.budget_subgroups, args.max_group_order)
        try:
            with open(args.input, encoding="utf-8") as fh:
                raw = fh.read()
        except OSError as e:
            raise ParseError("cannot read %s: %s" % (args.input, e))
        if args.command == "verify":
            try:
                document = json.loads(raw)
            except json.JSONDecodeError as e:
                raise ParseError("certificate is not valid JSON: %s" % e)
            report = run_verify(document)
        else:
            report = run_command(args.command, raw, cfg)
    except ParseError as e:
        print("error: %s" % e, file=sys.stderr)
        return 2
    except (SearchBudgetExceeded, TooLarge, OrderTooLarge) as e:
        print("budget exhausted: %s" % e, file=sys.stderr)
        return 3
    except VerificationFailure as e:
        print("verification failed: %s" % e, file=sys.stderr)
        return 4
    except (InternalCheckFailed, AssertionError) as e:
        print("internal check failed: %s" % e, file=sys.stderr)
        return 5
    except ModtowerError as e:
        print("error: %s" % e, file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(report.as_json())
    if args.fmt == "structured":
        sys.stdout.write(report.as_json())
    else:
        sys.stdout.write(render_text(report))
    return 0


if __name__ == "__main__":
    sys.exit(main())
