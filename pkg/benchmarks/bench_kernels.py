"""Compare the compiled table kernels against the numpy fallback.

Run from the repository root:

    python3 benchmarks/bench_kernels.py

Each case times matmul and rref through the public dispatch layer with
MODTOWER_KERNELS pinned to one backend, re-importing the package per
backend in a subprocess so the dispatch mode is honest.
"""
import json
import os
import subprocess
import sys

_CASES = [
    ("GF(2)  64x64 matmul", "matmul", 2, 64),
    ("GF(2) 256x256 matmul", "matmul", 2, 256),
    ("GF(4)  64x64 matmul", "matmul", 4, 64),
    ("GF(9)  96x96 matmul", "matmul", 9, 96),
    ("GF(2) 128x128 rref", "rref", 2, 128),
    ("GF(4)  96x96 rref", "rref", 4, 96),
]

_WORKER = r"""
import json, sys, time
import numpy as np
from modtower.gf import make_field
from modtower import kernels

op, q, n = sys.argv[1], int(sys.argv[2]), int(sys.argv[3])
p = 2 if q % 2 == 0 else 3
k = 1
while p ** k < q:
    k += 1
F = make_field(p, k)
rng = np.random.default_rng(0)
A = rng.integers(0, q, size=(n, n)).astype(np.int64)
B = rng.integers(0, q, size=(n, n)).astype(np.int64)

def run():
    if op == "matmul":
        return kernels.matmul(F, A, B)
    return kernels.rref(F, A)[0]

run()  # warm tables
reps, t0 = 0, time.perf_counter()
while time.perf_counter() - t0 < 0.4:
    out = run()
    reps += 1
per = (time.perf_counter() - t0) / reps
print(json.dumps({"per_call_ms": per * 1000.0, "checksum": int(out.sum())}))
"""


def _time_case(op, q, n, mode):
    env = dict(os.environ, MODTOWER_KERNELS=mode)
    r = subprocess.run(
        [sys.executable, "-c", _WORKER, op, str(q), str(n)],
        capture_output=True, text=True, env=env, check=True,
    )
    return json.loads(r.stdout)


def main():
    header = "%-24s %12s %12s %8s" % ("case", "numpy ms", "compiled ms", "speedup")
    print(header)
    print("-" * len(header))
    for label, op, q, n in _CASES:
        py = _time_case(op, q, n, "py")
        cc = _time_case(op, q, n, "c")
        if py["checksum"] != cc["checksum"]:
            raise SystemExit("backends disagree on %s" % label)
        print("%-24s %12.3f %12.3f %7.1fx"
              % (label, py["per_call_ms"], cc["per_call_ms"],
                 py["per_call_ms"] / cc["per_call_ms"]))


if __name__ == "__main__":
    main()
