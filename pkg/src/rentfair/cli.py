"""Command-line front end.

Exit codes: 0 success, 1 internal error, 2 invalid input, 3 oracle size
guard, 4 a result that fails verification.
"""
from __future__ import annotations

import argparse
import csv
import json
import random
import sys
import time
from fractions import Fraction

from . import __version__
from .envy import check_membership, is_envy_free
from .io import InstanceError, InstanceFile, ResultFile, trace_to_json
from .model import Economy, Family, Objective, Preference, SlopeSet, validate
from .oracle import SizeGuardError, oracle_solve
from .solver import SolverError, iteration_bound, nonnegative_rents_possible, solve

EXIT_OK, EXIT_INTERNAL, EXIT_INVALID, EXIT_SIZE_GUARD, EXIT_REJECTED = 0, 1, 2, 3, 4

FAMILIES = [f.value for f in Family]


class _Fail(Exception):
    def __init__(self, code, message=None, violations=None):
        super().__init__(message)
        self.code = code
        self.message = message
        self.violations = violations


def _read(path):
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise _Fail(EXIT_INVALID, violations=[f"cannot read {path}: {exc.strerror}"]) from None


def _write(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load(path, family_override=None):
    try:
        inst = InstanceFile.parse(_read(path))
    except InstanceError as exc:
        raise _Fail(EXIT_INVALID, violations=exc.violations) from None
    economy, objective = inst.economy, inst.objective
    if family_override is not None:
        objective = Objective.full(family_override, economy.n)
    elif objective is None:
        objective = Objective.full(Family.MAXMIN_UTILITY, economy.n)
    problems = validate(economy, objective)
    if problems:
        raise _Fail(EXIT_INVALID, violations=problems)
    return economy, objective


def cmd_solve(args):
    economy, objective = _load(args.instance, args.objective)
    if args.require_nonnegative:
        ok, res = nonnegative_rents_possible(economy)
        print("possible" if ok else "impossible")
        if args.output:
            _write(ResultFile.from_allocation(economy, res.allocation, res.objective_value,
                                              res.certified).serialize(), args.output)
        return EXIT_OK
    res = solve(economy, objective)
    trace = trace_to_json(economy, res.trace) if args.trace else None
    out = ResultFile.from_allocation(economy, res.allocation, res.objective_value, res.certified, trace)
    _write(out.serialize(), args.output)
    return EXIT_OK


def verify_report(economy: Economy, objective: Objective, result: ResultFile) -> list[str]:
    """Reasons the result is not an optimal allocation for the objective; empty if it is."""
    try:
        alloc = result.allocation(economy)
    except InstanceError as exc:
        return exc.violations
    problems = []
    if alloc.total != economy.total_rent:
        problems.append(f"budget balance violated: rents sum to {alloc.total}, "
                        f"total is {economy.total_rent}")
    witness = is_envy_free(economy, alloc, check_total=False)
    if witness is not None:
        problems.append(f"agent {economy.agents[witness.envious]} envies agent "
                        f"{economy.agents[witness.envied]} by {witness.gap}")
        return problems
    verdict = check_membership(economy, alloc, objective)
    if not verdict.member:
        ids = economy.agents if objective.family.on_utilities else economy.rooms
        kind = "agent" if objective.family.on_utilities else "room"
        for k in sorted(verdict.unreached):
            problems.append(f"{kind} {ids[k]} unreached")
    return problems


def cmd_verify(args):
    economy, objective = _load(args.instance, args.objective)
    try:
        result = ResultFile.parse(_read(args.result))
    except InstanceError as exc:
        raise _Fail(EXIT_INVALID, violations=exc.violations) from None
    problems = verify_report(economy, objective, result)
    if problems:
        for line in problems:
            print(line)
        return EXIT_REJECTED
    print("ok")
    return EXIT_OK


def cmd_oracle(args):
    economy, objective = _load(args.instance, args.objective)
    try:
        value, alloc = oracle_solve(economy, objective, force=args.force)
    except SizeGuardError as exc:
        raise _Fail(EXIT_SIZE_GUARD, str(exc)) from None
    _write(ResultFile.from_allocation(economy, alloc, value, True).serialize(), args.output)
    return EXIT_OK


def slope_set_for(k: int) -> SlopeSet:
    return SlopeSet(tuple(Fraction(j, 2) for j in range(k)))


def generate(n: int, k: int, seed: int, tightness: str = "mid") -> InstanceFile:
    """Random instance; ``tightness`` places budgets relative to the envy-free rent range.

    Envy-free rents never differ by more than the largest value spread, so
    ``low`` budgets sit above every possible rent and ``high`` ones below.
    """
    rng = random.Random(f"{n}:{k}:{seed}:{tightness}")
    slopes = slope_set_for(k)
    values = [[rng.randint(0, 100) for _ in range(n)] for _ in range(n)]
    m = rng.randint(0, 100 * n)
    spread = max(max(row) - min(row) for row in values)
    mean = Fraction(m, n)
    prefs = []
    for row in values:
        if tightness == "low":
            b = int(mean) + spread + 1 + rng.randint(0, 20)
        elif tightness == "high":
            b = max(0, int(mean) - spread - 1 - rng.randint(0, 20))
        else:
            b = max(0, int(mean) + rng.randint(-spread, spread))
        prefs.append(Preference(tuple(row), b, rng.choice(slopes.rhos)))
    economy = Economy(tuple(prefs), slopes, m)
    return InstanceFile(economy, Objective.full(Family.MAXMIN_UTILITY, n))


def cmd_gen(args):
    if args.n < 1 or args.k < 1:
        raise _Fail(EXIT_INVALID, violations=["--n and --k must be at least 1"])
    _write(generate(args.n, args.k, args.seed, args.budget_tightness).serialize(), args.output)
    return EXIT_OK


def parse_range(text: str) -> range:
    lo, sep, hi = text.partition("..")
    try:
        lo = int(lo)
        hi = int(hi) if sep else lo
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO..HI, got {text!r}") from None
    return range(lo, hi + 1)


def bench_rows(ns, k, trials, family=Family.MAXMIN_UTILITY, seed=0):
    for n in ns:
        for trial in range(trials):
            economy = generate(n, k, seed * 100003 + trial, "mid").economy
            start = time.perf_counter()
            res = solve(economy, Objective.full(family, n))
            wall = time.perf_counter() - start
            yield n, k, trial, len(res.trace.iterations), iteration_bound(n, k), wall


def cmd_bench(args):
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["n", "k", "trial", "iterations", "bound", "wall_time"])
    breach = False
    for n, k, trial, its, bound, wall in bench_rows(args.n_range, args.k, args.trials,
                                                    Family(args.objective), args.seed):
        out.writerow([n, k, trial, its, bound, f"{wall:.6f}"])
        breach |= its > bound
    return EXIT_INTERNAL if breach else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rentfair", description="Exact envy-free rent division.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="compute a selection of the envy-free set")
    s.add_argument("instance")
    s.add_argument("--objective", choices=FAMILIES, help="override the instance objective (full scope)")
    s.add_argument("--trace", action=argparse.BooleanOptionalAction, default=False)
    s.add_argument("--output", "-o")
    s.add_argument("--require-nonnegative", action="store_true",
                   help="only report whether an envy-free allocation with nonnegative rents exists")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="check a result against an instance")
    v.add_argument("instance")
    v.add_argument("result")
    v.add_argument("--objective", choices=FAMILIES)
    v.set_defaults(func=cmd_verify)

    o = sub.add_parser("oracle", help="brute-force optimum for small instances")
    o.add_argument("instance")
    o.add_argument("--objective", choices=FAMILIES)
    o.add_argument("--output", "-o")
    o.add_argument("--force", action="store_true", help="ignore the size guard")
    o.set_defaults(func=cmd_oracle)

    g = sub.add_parser("gen", help="write a random instance")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--k", type=int, default=2)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--budget-tightness", choices=["low", "mid", "high"], default="mid")
    g.add_argument("--output", "-o")
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("bench", help="loop iterations against the iteration bound, as CSV")
    b.add_argument("--n-range", type=parse_range, default=parse_range("2..6"))
    b.add_argument("--k", type=int, default=2)
    b.add_argument("--trials", type=int, default=10)
    b.add_argument("--objective", choices=FAMILIES, default=Family.MAXMIN_UTILITY.value)
    b.add_argument("--seed", type=int, default=0)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Fail as exc:
        if exc.violations is not None:
            print(json.dumps({"violations": exc.violations}), file=sys.stderr)
        if exc.message:
            print(exc.message, file=sys.stderr)
        return exc.code
    except (SolverError, Exception) as exc:  # noqa: BLE001 - report, never traceback
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
