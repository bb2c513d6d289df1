"""Compare the numba and pure-numpy elimination kernels.

    python benchmarks/bench_kernels.py [--repeat 5]

Times GF(2) and GF(p) row reduction on the n=4 obstruction matrix and on a
larger random {-1, 0, 1} matrix.  Both backends must return the same rank;
the first numba call is a warm-up and is not timed.
"""

from __future__ import annotations

import argparse
import statistics
import time

import numpy as np

from simplex_obstruction import build_matrix
from simplex_obstruction._jit import HAVE_NUMBA
from simplex_obstruction.linalg.kernels import gf2_rref, modp_rref, pack_gf2


def _time(fn, repeat):
    out, runs = None, []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        runs.append(time.perf_counter() - t0)
    return out, statistics.median(runs)


def bench(name, a, repeat, backends):
    rows = []
    for kernel in ("gf2", "gf7"):
        ranks = {}
        for be in backends:
            if kernel == "gf2":
                run = lambda: gf2_rref(pack_gf2(a), a.shape[1], be)[0]
            else:
                run = lambda: modp_rref(np.ascontiguousarray(a % 7), 7, be)[0]
            run()  # warm-up / jit compile
            ranks[be], t = _time(run, repeat)
            rows.append((name, kernel, be, ranks[be], t))
        if len(set(ranks.values())) != 1:
            raise SystemExit(f"backends disagree on {name}/{kernel}: {ranks}")
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    backends = ["numba", "numpy"] if HAVE_NUMBA else ["numpy"]
    rng = np.random.default_rng(args.seed)
    cases = [("M n=4 (2416x552)", build_matrix(4).dense()),
             ("random 800x800", rng.integers(-1, 2, size=(800, 800)))]
    rows = []
    for name, a in cases:
        rows += bench(name, a, args.repeat, backends)

    print(f"{'matrix':<20} {'kernel':<6} {'backend':<7} {'rank':>6} {'median ms':>10}")
    for name, kernel, be, rank, t in rows:
        print(f"{name:<20} {kernel:<6} {be:<7} {rank:>6} {t * 1e3:>10.1f}")
    if HAVE_NUMBA:
        for name, _ in cases:
            for kernel in ("gf2", "gf7"):
                t = {be: s for n_, k, be, _, s in rows if n_ == name and k == kernel}
                print(f"speedup {name} {kernel}: {t['numpy'] / t['numba']:.1f}x")


if __name__ == "__main__":
    main()
