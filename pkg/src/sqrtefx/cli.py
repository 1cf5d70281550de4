"""Command line: ``sqrtefx {gen,solve,verify,oracle,batch}``.

Exit codes: 0 ok, 1 malformed input, 2 verification failure, 3 internal
invariant breach, 4 enumeration budget refusal.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from collections import Counter
from concurrent.futures import ProcessPoolExecutor

from . import io
from .engine import RunConfig, run
from .errors import (BudgetExceededError, EngineBugError, GenerationError, InvalidInstanceError,
                     MalformedInputError, TheoremViolationError)
from .generate import GenConfig, generate, random_family
from .model import Verdict, Witness
from .oracle import DEFAULT_BUDGET, best_alpha_squared
from .verify import Alpha, efx_factor_squared, is_alpha_efx, ratio_lt

EXIT_OK, EXIT_MALFORMED, EXIT_VIOLATION, EXIT_BUG, EXIT_BUDGET = 0, 1, 2, 3, 4

_ALPHA_FLAG = {"1": Alpha.ONE, "one": Alpha.ONE, "inv-sqrt2": Alpha.INV_SQRT2}


def capped(ratio: tuple) -> tuple:
    """The reported EFX level: alpha^2 clipped to 1."""
    return (1, 1) if not ratio_lt(ratio, (1, 1)) else ratio


def fmt_ratio(r: tuple) -> str:
    return "inf" if r[1] == 0 else f"{r[0]}/{r[1]}"


def check_allocation(inst, alloc, alpha, allow_partial=False) -> Verdict:
    held = set()
    for b in alloc.values():
        held |= b
    if sorted(alloc) != list(range(inst.n)):
        return Verdict(False, Witness("agent-set", tuple(sorted(alloc))), "allocation")
    if not allow_partial:
        missing = sorted(set(range(inst.m)) - held)
        if missing:
            return Verdict(False, Witness("incomplete", (), missing[0]), "allocation")
    return is_alpha_efx(inst, alloc, alpha)


def _cmd_gen(args) -> int:
    cfg = GenConfig(args.n, args.m, args.value_max, args.share_prob, args.q_cap, args.seed)
    sys.stdout.write(io.dumps(io.instance_to_dict(generate(cfg))))
    return EXIT_OK


def _cmd_solve(args) -> int:
    inst = io.load_instance(args.instance)
    report = run(inst, RunConfig(check_invariants=args.check))
    alloc = report.final_allocation
    factor = efx_factor_squared(inst, alloc)
    verdict = is_alpha_efx(inst, alloc, Alpha.INV_SQRT2)
    if args.trace:
        io.write_trace(args.trace, report.events, verdict)
    doc = io.dumps(io.allocation_to_dict(alloc, capped(factor)))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(doc)
    else:
        sys.stdout.write(doc)
    print(f"alpha^2 = {fmt_ratio(capped(factor))} (raw {fmt_ratio(factor)}), "
          f"{len(report.events)} events", file=sys.stderr)
    return EXIT_OK


def _cmd_verify(args) -> int:
    inst = io.load_instance(args.instance)
    alloc = io.load_allocation(args.allocation)
    v = check_allocation(inst, alloc, _ALPHA_FLAG[args.alpha], args.allow_partial)
    if v.ok:
        print(f"ok: allocation is {args.alpha}-EFX")
        return EXIT_OK
    print("violation: " + json.dumps(v.witness.to_dict(), sort_keys=True))
    return EXIT_VIOLATION


def _cmd_oracle(args) -> int:
    inst = io.load_instance(args.instance)
    ratio, alloc = best_alpha_squared(inst, args.budget)
    doc = io.allocation_to_dict(alloc)
    doc["best_alpha_squared"] = list(ratio)
    sys.stdout.write(io.dumps(doc))
    return EXIT_OK


def solve_and_check(inst, check=True, oracle_budget=None) -> dict:
    """One batch unit: solve, verify at 1/sqrt(2), optionally compare with the oracle."""
    row = {"n": inst.n, "m": inst.m, "status": "ok", "detail": ""}
    try:
        report = run(inst, RunConfig(check_invariants=check))
    except EngineBugError as exc:
        return {**row, "status": "engine-bug", "detail": str(exc)}
    except TheoremViolationError as exc:
        return {**row, "status": "engine-bug", "detail": str(exc)}
    alloc = report.final_allocation
    factor = efx_factor_squared(inst, alloc)
    row.update(events=len(report.events), rules=dict(report.rule_histogram()),
               alpha_squared=factor, allocation=io.allocation_to_dict(alloc),
               trace=io.trace_lines(report.events))
    v = check_allocation(inst, alloc, Alpha.INV_SQRT2)
    if not v.ok:
        return {**row, "status": "violation", "detail": str(v.witness)}
    if oracle_budget is not None:
        try:
            best, _ = best_alpha_squared(inst, oracle_budget)
        except BudgetExceededError:
            row["oracle"] = None
        else:
            row["oracle"] = best
            if ratio_lt(best, (1, 2)):
                return {**row, "status": "oracle-below-bound", "detail": fmt_ratio(best)}
            if ratio_lt(best, factor):
                return {**row, "status": "solver-above-oracle", "detail": fmt_ratio(best)}
    return row


def _batch_unit(job):
    k, inst, check, budget = job
    return k, inst, solve_and_check(inst, check, budget)


def _cmd_batch(args) -> int:
    family = random_family(args.count, args.seed, (args.n_min, args.n_max),
                           (args.m_min, args.m_max), args.value_max, args.share_prob, args.q_cap)
    budget = args.budget if args.oracle else None
    jobs = [(k, inst, args.check, budget) for k, inst in family]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as ex:
            results = list(ex.map(_batch_unit, jobs, chunksize=8))
    else:
        results = [_batch_unit(j) for j in jobs]

    rules = Counter()
    statuses = Counter()
    factors = []
    oracle_seen = 0
    rows = []
    for k, inst, row in results:
        statuses[row["status"]] += 1
        rules.update(row.get("rules", {}))
        if "alpha_squared" in row:
            factors.append(row["alpha_squared"])
        if row.get("oracle") is not None:
            oracle_seen += 1
        if args.out_dir:
            from pathlib import Path
            out = Path(args.out_dir)
            out.mkdir(parents=True, exist_ok=True)
            io.save_instance(inst, out / f"instance_{k:05d}.json")
            if "allocation" in row:
                (out / f"allocation_{k:05d}.json").write_text(io.dumps(row["allocation"]))
                (out / f"trace_{k:05d}.jsonl").write_text("\n".join(row["trace"]) + "\n")
        rows.append({"index": k, "n": row["n"], "m": row["m"], "status": row["status"],
                     "events": row.get("events", ""),
                     "alpha_squared": fmt_ratio(row["alpha_squared"]) if "alpha_squared" in row else "",
                     "oracle": fmt_ratio(row["oracle"]) if row.get("oracle") else "",
                     "detail": row["detail"]})

    print(f"instances: {len(results)}")
    for status, c in sorted(statuses.items()):
        print(f"  {status:<20} {c}")
    print("rule applications:")
    for rule in ("BasicFeasible", "R1", "R2", "R3", "R4", "R5", "Final"):
        print(f"  {rule:<20} {rules.get(rule, 0)}")
    if factors:
        worst = factors[0]
        for f in factors:
            if ratio_lt(f, worst):
                worst = f
        exact = sum(1 for f in factors if not ratio_lt(f, (1, 1)))
        print(f"min alpha^2:           {fmt_ratio(worst)}")
        print(f"exactly EFX:           {exact}/{len(factors)}")
    if args.oracle:
        print(f"oracle within budget:  {oracle_seen}/{len(results)}")
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]) if rows else ["index"])
            w.writeheader()
            w.writerows(rows)
    failures = {s: c for s, c in statuses.items() if s != "ok"}
    if failures:
        return EXIT_BUG if "engine-bug" in failures else EXIT_VIOLATION
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sqrtefx",
                                description="1/sqrt(2)-EFX allocations for (2, inf)-bounded instances")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a random instance")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--value-max", type=int, default=100)
    g.add_argument("--share-prob", type=float, default=0.8)
    g.add_argument("--q-cap", type=int, default=None)
    g.add_argument("--seed", type=int, default=0)
    g.set_defaults(func=_cmd_gen)

    s = sub.add_parser("solve", help="run the algorithm on an instance file")
    s.add_argument("instance")
    s.add_argument("--trace", help="write the JSONL event trace here")
    s.add_argument("--check", action="store_true", help="check all invariants after every event")
    s.add_argument("--out", help="write the allocation here instead of stdout")
    s.set_defaults(func=_cmd_solve)

    v = sub.add_parser("verify", help="check an allocation for alpha-EFX")
    v.add_argument("instance")
    v.add_argument("allocation")
    v.add_argument("--alpha", choices=sorted(_ALPHA_FLAG), default="inv-sqrt2")
    v.add_argument("--allow-partial", action="store_true",
                   help="do not require every good to be allocated")
    v.set_defaults(func=_cmd_verify)

    o = sub.add_parser("oracle", help="exhaustive best EFX factor")
    o.add_argument("instance")
    o.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    o.set_defaults(func=_cmd_oracle)

    b = sub.add_parser("batch", help="generate, solve and verify many instances")
    b.add_argument("--count", type=int, default=100)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--n-min", type=int, default=1)
    b.add_argument("--n-max", type=int, default=8)
    b.add_argument("--m-min", type=int, default=1)
    b.add_argument("--m-max", type=int, default=20)
    b.add_argument("--value-max", type=int, default=100)
    b.add_argument("--share-prob", type=float, default=0.8)
    b.add_argument("--q-cap", type=int, default=None)
    b.add_argument("--check", action="store_true")
    b.add_argument("--oracle", action="store_true", help="cross-check with the exhaustive oracle")
    b.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--out-dir", help="write instances, allocations and traces here")
    b.add_argument("--csv", help="write one summary row per instance here")
    b.set_defaults(func=_cmd_batch)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (MalformedInputError, InvalidInstanceError, GenerationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except BudgetExceededError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (EngineBugError, TheoremViolationError) as exc:
        print(f"internal invariant breach: {exc}", file=sys.stderr)
        return EXIT_BUG


if __name__ == "__main__":
    sys.exit(main())
