"""Compare the compiled and pure-Python simplex kernels on solver programs.

Programs are captured from real solves of generated instances, then every
program is re-solved with each backend. Both backends must return identical
solutions; the script prints per-size timings.

    python benchmarks/bench_kernel.py --n-range 3..8 --trials 3
"""
from __future__ import annotations

import argparse
import time

from rentfair import lp as lpmod
from rentfair import solver
from rentfair.cli import generate, parse_range
from rentfair.lp import simplex
from rentfair.model import Family, Objective


def capture(n, k, trials):
    programs = []
    real = solver.solve_lp

    def keep(lp, backend=None):
        programs.append(lp)
        return real(lp, backend)

    solver.solve_lp = keep
    try:
        for trial in range(trials):
            economy = generate(n, k, trial).economy
            for family in Family:
                solver.solve(economy, Objective.full(family, n))
    finally:
        solver.solve_lp = real
    return programs


def timed(programs, backend):
    start = time.perf_counter()
    out = [lpmod.solve_lp(p, backend) for p in programs]
    return time.perf_counter() - start, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-range", type=parse_range, default=parse_range("3..8"))
    ap.add_argument("--k", type=int, default=3)
    ap.add_argument("--trials", type=int, default=3)
    args = ap.parse_args(argv)
    if simplex.BACKEND != "cython":
        print("compiled kernel not built; only the pure-Python kernel is available")
        return 1
    print("n,programs,python_s,cython_s,speedup")
    for n in args.n_range:
        programs = capture(n, args.k, args.trials)
        t_py, a = timed(programs, "python")
        t_cy, b = timed(programs, "cython")
        if [(s.status, s.point) for s in a] != [(s.status, s.point) for s in b]:
            raise SystemExit(f"backends disagree at n={n}")
        print(f"{n},{len(programs)},{t_py:.4f},{t_cy:.4f},{t_py / t_cy:.2f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
