"""Smoke checks for textio parsing and the CLI front end."""
import json
import os
import subprocess
import sys
import tempfile

from modtower.cli import WorkbenchConfig, run_command, run_verify
from modtower.errors import ParseError, VerificationFailure
from modtower.textio import parse_workbench

C4_REGULAR = """
[field]
gf 2

[group]
degree 4
gen (1 2 3 4)

[subgroup one]

[subgroup half]
gen (1 3)(2 4)

[module U]
kind regular

[tower]
chain half
"""

S3_PERM = """
[field]
gf 3
[group]
degree 3
gen (1 2 3)
gen (1 2)
[subgroup rot]
gen (1 2 3)
[module P]
kind perm rot
"""

GREEN_FILE = """
[field]
gf 2
[group]
degree 4
gen (1 2 3 4)
[subgroup half]
gen (1 3)(2 4)
[tower]
chain half
subgroup half
[module V]
kind trivial
over half
"""

cfg = WorkbenchConfig()

win = parse_workbench(C4_REGULAR)
assert win.field.q == 2 and win.group.order == 4
assert win.subgroup("one").order == 1 and win.subgroup("half").order == 2
assert win.modules[0][1].dim == 4
T = win.build_tower()
assert [G.order for G in T.levels] == [2, 4]
print("PASS parse: C4 file with subgroups, module, tower")

rep = run_command("decompose", C4_REGULAR, cfg)
(rec,) = rep.records
assert rec["total_summands"] == 1 and rec["summands"][0]["quotient_degree"] == 1
rep = run_command("decompose", S3_PERM, cfg)
(rec,) = rep.records
assert rec["total_summands"] == 2
assert [s["dim"] for s in rec["summands"]] == [1, 1]
print("PASS decompose: regular C4 one summand, perm S3/C3 over GF(3) two")

rep = run_command("vertex", C4_REGULAR, cfg)
assert len(rep.records[0]["vertex_members"]) == 1
print("PASS vertex: regular module has trivial vertex")

rep = run_command("relproj", C4_REGULAR, cfg)
by = {(r["module"], r["subgroup"]): r["verdict"] for r in rep.records}
assert by[("U", "one")] is True and by[("U", "half")] is True
print("PASS relproj: regular module projective relative to 1 and C2")

rep = run_command("tower", C4_REGULAR, cfg)
rec = rep.records[0]
assert rec["summand_counts"] == [1, 1] and rec["stabilization_level"] == 0
print("PASS tower: counts table on C2 <- C4")

rep = run_command("green", GREEN_FILE, cfg)
rec = rep.records[0]
assert rec["hypothesis_ok"] and rec["verdict"]
assert [r["dim"] for r in rec["levels"]] == [2, 2]
print("PASS green: trivial module over C2 <= C4")

# determinism and verify round trip
a = run_command("tower", C4_REGULAR, cfg).as_json()
b = run_command("tower", C4_REGULAR, cfg).as_json()
assert a == b
doc = json.loads(a)
assert run_verify(doc).records[0]["verified"]
doc_bad = json.loads(a)
doc_bad["records"][0]["summand_counts"][0] = 5
try:
    run_verify(doc_bad)
    raise SystemExit("FAIL: tampered certificate accepted")
except VerificationFailure:
    pass
print("PASS verify: accepts fresh report, rejects tampering")

for bad, what in [
    ("[field]\ngf 6\n", "gf 6"),
    ("[field]\ngf 2\n[group]\ngen (1 2)\n", "gen before degree"),
    ("[field]\ngf 2\n[group]\ndegree 2\ngen (1 3)\n", "point out of range"),
    ("[junk]\n", "unknown section"),
    ("[field]\ngf 2\n", "missing group"),
]:
    try:
        parse_workbench(bad)
        raise SystemExit("FAIL: parse accepted %s" % what)
    except ParseError:
        pass
print("PASS parse errors: %s and friends" % "gf 6")

# the installed console script end to end, with exit codes
with tempfile.TemporaryDirectory() as td:
    path = os.path.join(td, "c4.mw")
    with open(path, "w") as fh:
        fh.write(C4_REGULAR)
    cert = os.path.join(td, "cert.json")
    r = subprocess.run(
        [sys.executable, "-m", "modtower.cli", "decompose", path,
         "--format", "structured", "--out", cert],
        capture_output=True, text=True)
    assert r.returncode == 0, r.stderr
    assert json.loads(r.stdout)["command"] == "decompose"
    r2 = subprocess.run(
        [sys.executable, "-m", "modtower.cli", "verify", cert],
        capture_output=True, text=True)
    assert r2.returncode == 0, r2.stderr
    assert "matches" in r2.stdout

    # tamper with one entry -> exit 4
    doc = json.load(open(cert))
    doc["records"][0]["dim"] = 3
    json.dump(doc, open(cert, "w"))
    r3 = subprocess.run(
        [sys.executable, "-m", "modtower.cli", "verify", cert],
        capture_output=True, text=True)
    assert r3.returncode == 4, (r3.returncode, r3.stderr)

    bad = os.path.join(td, "bad.mw")
    with open(bad, "w") as fh:
        fh.write("[field]\ngf 2\n[group]\ndegree 2\ngen (1 3)\n")
    r4 = subprocess.run(
        [sys.executable, "-m", "modtower.cli", "decompose", bad],
        capture_output=True, text=True)
    assert r4.returncode == 2 and "line 5" in r4.stderr, (r4.returncode, r4.stderr)

    r5 = subprocess.run(
        [sys.executable, "-m", "modtower.cli", "decompose", path,
         "--max-group-order", "3"],
        capture_output=True, text=True)
    assert r5.returncode == 3, (r5.returncode, r5.stderr)

    r6 = subprocess.run(
        [sys.executable, "-m", "modtower.cli", "tower", path], capture_output=True, text=True)
    assert r6.returncode == 0 and "stabilizes at 0" in r6.stdout, r6.stdout
print("PASS subprocess round trip: exit codes 0, 2, 3, 4 and text output")

print("ALL CLI SMOKE PASSED")
