"""Time the hot kernels under both backends.

Each backend runs in its own interpreter because ``RINGCOVER_NUMBA`` is
read at import time.  Numba timings exclude JIT compilation (one warm-up
call first).

    python benchmarks/bench_kernels.py [--repeat N]
"""
from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import numpy as np
from ringcover._accel import backend
from ringcover.covering import associative_tables_f2, random_algebra_f2
from ringcover.lattice import _subring_masks, closure
from ringcover.catalog import example

repeat = int(sys.argv[1])

def best(fn):
    fn()
    times = []
    for _ in range(repeat):
        t = time.perf_counter(); fn(); times.append(time.perf_counter() - t)
    return min(times)

def subring_lattice():
    _subring_masks.cache_clear()
    _subring_masks(example(10).ring)

R = random_algebra_f2(4, np.random.default_rng(7))
res = {
    "backend": backend(),
    "assoc tables k=2": best(lambda: associative_tables_f2(2)),
    "assoc tables k=3": best(lambda: associative_tables_f2(3)),
    "subring lattice, order 16": best(subring_lattice),
    "256 closures, order 16": best(lambda: [closure(R, [a, b]) for a in range(16) for b in range(16)]),
}
print(json.dumps(res))
"""


def run(flag: str, repeat: int) -> dict:
    env = dict(os.environ, RINGCOVER_NUMBA=flag)
    out = subprocess.run([sys.executable, "-c", WORKER, str(repeat)], env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    fast = run("1", args.repeat)
    slow = run("0", args.repeat)
    width = max(len(k) for k in fast if k != "backend")
    print(f"{'kernel':<{width}}  {fast['backend']:>10}  {slow['backend']:>10}  speedup")
    for key in fast:
        if key == "backend":
            continue
        print(f"{key:<{width}}  {fast[key]:>9.4f}s  {slow[key]:>9.4f}s  {slow[key] / fast[key]:>6.1f}x")


if __name__ == "__main__":
    main()
