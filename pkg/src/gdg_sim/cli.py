"""Command-line entry point for reproducible gathering experiments.

Exit codes: 0 success, 1 verdict failure, 2 usage/config error. All
randomness flows from a single seed through random.Random (Mersenne
Twister), so identical configs replay byte-identically.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from pathlib import Path
from typing import Optional

from . import adversary as adv
from .checkers import (
    BoundParams,
    bound_for,
    check_variant,
    monitor_invariants,
)
from .ring_model import (
    AC,
    BRE,
    COT,
    RE,
    ST,
    DynClass,
    EvolvingRing,
    ring_from_json,
    ring_to_json,
    verify_class,
)
from .sim_engine import run, trace_to_jsonl

EXPECTED_VARIANT = {ST: "G", BRE: "G", RE: "G_E", AC: "G_W", COT: "G_EW"}

USAGE_ERROR = 2
VERDICT_FAILURE = 1


class CliError(Exception):
    pass


def _parse_ids(text: str) -> list[int]:
    try:
        ids = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise CliError(f"bad --ids value {text!r}")
    if len(ids) != len(set(ids)) or any(i <= 0 for i in ids):
        raise CliError("ids must be distinct positive integers")
    return ids


def _resolve_seed(value: Optional[int]) -> int:
    if value is not None:
        return value
    env = os.environ.get("GDG_SEED")
    if env is not None:
        return int(env)
    return 0


def _placement_for(
    ids: list[int], n: int, placement: Optional[str], rng: random.Random
) -> dict[int, int]:
    if placement is None or placement == "random":
        return {rid: rng.randrange(n) for rid in sorted(ids)}
    nodes = [int(x) for x in placement.split(",") if x.strip()]
    if len(nodes) != len(ids):
        raise CliError("--placement must list one node per id")
    if any(not 0 <= v < n for v in nodes):
        raise CliError("--placement node out of range")
    return dict(zip(sorted(ids), nodes))


def _dyn_class(tag: Optional[str], delta: Optional[int]) -> Optional[DynClass]:
    if tag is None:
        return None
    if tag == BRE:
        if delta is None:
            raise CliError("--class bre requires --delta")
        return DynClass(BRE, delta)
    return DynClass(tag)


def default_horizon(ring: EvolvingRing, dyn: DynClass, R: int, id_rmin: int) -> int:
    """Bound for bounded classes; a cycle-length heuristic for the rest."""
    if dyn.tag in (ST, BRE, AC):
        return bound_for(BoundParams(dyn, ring.n, R, id_rmin))
    delta = max(1, len(ring.schedule.cycle))
    base = bound_for(BoundParams(DynClass(BRE, delta), ring.n, R, id_rmin))
    return 4 * base + len(ring.schedule.prefix)


def cmd_run(args: argparse.Namespace) -> int:
    ids = _parse_ids(args.ids)
    R = len(ids)
    if R < 4:
        raise CliError("at least 4 robots are required")
    seed = _resolve_seed(args.seed)
    rng = random.Random(seed)
    dyn = _dyn_class(args.dyn_class, args.delta)

    if args.schedule:
        ring = ring_from_json(Path(args.schedule).read_text())
        if dyn is not None and not verify_class(ring, dyn):
            raise CliError(f"schedule does not satisfy class {dyn.tag}")
    else:
        if dyn is None:
            raise CliError("either --class or --schedule is required")
        ring = adv.generate(adv.GeneratorSpec(dyn, args.n, seed))
    if args.n and ring.n != args.n:
        raise CliError("--n disagrees with the schedule")
    n = ring.n

    placement = _placement_for(ids, n, args.placement, rng)
    id_rmin = min(ids)
    bound = None
    if dyn is not None and dyn.tag in (ST, BRE, AC):
        bound = bound_for(BoundParams(dyn, n, R, id_rmin))
    horizon = args.horizon or (
        default_horizon(ring, dyn, R, id_rmin) if dyn is not None else 10_000
    )

    trace, outcome = run(
        ring,
        placement,
        horizon,
        class_claim=dyn.tag if dyn else None,
        seed=seed,
    )
    verdict = check_variant(trace, horizon, bound)
    violations = monitor_invariants(trace)
    doc = verdict.to_dict()
    doc["violations"] = [list(v) for v in violations]
    doc["final_positions"] = outcome.final_positions
    doc["halted_at_horizon"] = outcome.halted_at_horizon

    if args.trace_out:
        Path(args.trace_out).write_text(trace_to_jsonl(trace))
    if args.verdict_out:
        Path(args.verdict_out).write_text(json.dumps(doc, indent=2) + "\n")
    print(json.dumps(doc))

    if dyn is None:
        return 0
    expected = EXPECTED_VARIANT[dyn.tag]
    return 0 if expected in verdict.variants and not violations else VERDICT_FAILURE


def cmd_adversary(args: argparse.Namespace) -> int:
    ids = _parse_ids(args.ids)
    if len(ids) < 4:
        raise CliError("at least 4 robots are required")
    if args.horizon < 1:
        raise CliError("horizon must be >= 1")
    seed = _resolve_seed(args.seed)
    rng = random.Random(seed)
    n = args.n
    r1 = args.r1 if args.r1 is not None else sorted(ids)[-1]
    r2 = args.r2 if args.r2 is not None else sorted(ids)[-2]
    placement = _placement_for(ids, n, args.placement, rng)
    if placement[r1] == placement[r2]:  # targets must start apart
        placement[r2] = (placement[r1] + 1 + rng.randrange(n - 1)) % n

    result = adv.adaptive_ac_adversary(n, len(ids), placement, r1, r2, args.horizon)
    if args.schedule_out:
        Path(args.schedule_out).write_text(ring_to_json(result.ring) + "\n")
    if args.trace_out:
        Path(args.trace_out).write_text(trace_to_jsonl(result.trace))
    if result.defeated_at is not None:
        print(json.dumps({"defeated_at": result.defeated_at}))
        return VERDICT_FAILURE
    print(json.dumps({"defeated_at": None, "rounds": len(result.trace.events)}))
    return 0


def cmd_batch(args: argparse.Namespace) -> int:
    entries = json.loads(Path(args.spec).read_text())
    report = {"runs": [], "matrix": {}}
    per_class: dict[str, list[set[str]]] = {}
    for i, entry in enumerate(entries):
        try:
            ns = _run_namespace(entry)
            ids = _parse_ids(ns.ids)
            seed = _resolve_seed(ns.seed)
            rng = random.Random(seed)
            dyn = _dyn_class(ns.dyn_class, ns.delta)
            if dyn is None:
                raise CliError("batch entries need a class")
            ring = adv.generate(adv.GeneratorSpec(dyn, ns.n, seed))
            placement = _placement_for(ids, ring.n, ns.placement, rng)
            id_rmin = min(ids)
            bound = (
                bound_for(BoundParams(dyn, ring.n, len(ids), id_rmin))
                if dyn.tag in (ST, BRE, AC)
                else None
            )
            horizon = ns.horizon or default_horizon(ring, dyn, len(ids), id_rmin)
            trace, _ = run(ring, placement, horizon, class_claim=dyn.tag, seed=seed)
            verdict = check_variant(trace, horizon, bound)
            report["runs"].append(
                {"index": i, "class": dyn.tag, "seed": seed, **verdict.to_dict()}
            )
            per_class.setdefault(dyn.tag, []).append(set(verdict.variants))
        except Exception as exc:  # noqa: BLE001 - batch must keep going
            report["runs"].append({"index": i, "error": str(exc)})
    for tag, variant_sets in per_class.items():
        common = set.intersection(*variant_sets) if variant_sets else set()
        report["matrix"][tag] = sorted(common)
    print(json.dumps(report, indent=2))
    if args.report_out:
        Path(args.report_out).write_text(json.dumps(report, indent=2) + "\n")
    return 0


def _run_namespace(entry: dict) -> argparse.Namespace:
    return argparse.Namespace(
        n=entry.get("n", 0),
        ids=entry.get("ids", ""),
        dyn_class=entry.get("class"),
        delta=entry.get("delta"),
        placement=entry.get("placement"),
        seed=entry.get("seed"),
        horizon=entry.get("horizon"),
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gdg-sim")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate one gathering run")
    p_run.add_argument("--n", type=int, default=0)
    p_run.add_argument("--r", type=int, default=None, help="robot count (checked against --ids)")
    p_run.add_argument("--ids", required=True)
    p_run.add_argument("--class", dest="dyn_class", choices=[COT, AC, RE, BRE, ST])
    p_run.add_argument("--delta", type=int)
    p_run.add_argument("--schedule")
    p_run.add_argument("--placement")
    p_run.add_argument("--seed", type=int)
    p_run.add_argument("--horizon", type=int)
    p_run.add_argument("--trace-out")
    p_run.add_argument("--verdict-out")
    p_run.set_defaults(func=cmd_run)

    p_adv = sub.add_parser("adversary", help="run the adaptive AC adversary")
    p_adv.add_argument("--n", type=int, required=True)
    p_adv.add_argument("--ids", required=True)
    p_adv.add_argument("--r1", type=int)
    p_adv.add_argument("--r2", type=int)
    p_adv.add_argument("--placement")
    p_adv.add_argument("--seed", type=int)
    p_adv.add_argument("--horizon", type=int, required=True)
    p_adv.add_argument("--schedule-out")
    p_adv.add_argument("--trace-out")
    p_adv.set_defaults(func=cmd_adversary)

    p_batch = sub.add_parser("batch", help="run a list of configs and aggregate")
    p_batch.add_argument("--spec", required=True)
    p_batch.add_argument("--report-out")
    p_batch.set_defaults(func=cmd_batch)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "r", None) is not None and args.r != len(_parse_ids(args.ids)):
            raise CliError("--r disagrees with --ids")
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (FileNotFoundError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
