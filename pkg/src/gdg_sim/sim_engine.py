"""Synchronous Look-Compute-Move execution producing replayable traces.

All robots compute against the same frozen configuration, then move
simultaneously. Identical inputs yield bit-identical traces: robots are
always processed in id order and every decision is deterministic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Optional

from .gdg_protocol import Direction, RobotVars, View, compute
from .ring_model import (
    EvolvingRing,
    Snapshot,
    left_edge_of,
    right_edge_of,
    step_left,
    step_right,
)

# A pluggable per-robot algorithm: View -> (updated vars, fired-rule label).
ComputeFn = Callable[[View], tuple[RobotVars, str]]


@dataclass(frozen=True, slots=True)
class Configuration:
    round: int
    positions: dict[int, int]  # robot id -> node
    vars: dict[int, RobotVars]
    prev_positions: dict[int, int]


@dataclass(frozen=True, slots=True)
class RobotRecord:
    position: int  # node occupied at the end of the round
    state: str
    dir: str
    rule: Optional[str]  # None for already-terminated robots
    moved: bool


@dataclass(frozen=True, slots=True)
class TraceEvent:
    round: int
    robots: dict[int, RobotRecord]
    snapshot: Snapshot


@dataclass(frozen=True, slots=True)
class Trace:
    n: int
    R: int
    ids: tuple[int, ...]
    class_claim: Optional[str]
    seed: Optional[int]
    horizon: int
    events: tuple[TraceEvent, ...] = ()


@dataclass(frozen=True, slots=True)
class RunOutcome:
    termination_rounds: dict[int, Optional[int]]
    final_positions: dict[int, int]
    halted_at_horizon: bool


def initial_configuration(placement: dict[int, int], n: int) -> Configuration:
    if len(set(placement)) != len(placement):
        raise ValueError("robot ids must be distinct")
    for node in placement.values():
        if not 0 <= node < n:
            raise ValueError("placement node out of range")
    vars = {rid: RobotVars(id=rid) for rid in placement}
    return Configuration(
        round=0,
        positions=dict(placement),
        vars=vars,
        prev_positions=dict(placement),
    )


def build_view(config: Configuration, ring: EvolvingRing, robot_id: int) -> View:
    if robot_id not in config.vars:
        raise KeyError(f"unknown robot id {robot_id}")
    t = config.round
    node = config.positions[robot_id]
    snap = ring.snapshot(t)
    prev_snap = ring.snapshot(t - 1) if t > 0 else None
    mates = tuple(
        config.vars[other]
        for other in sorted(config.vars)
        if other != robot_id and config.positions[other] == node
    )
    return View(
        self_vars=config.vars[robot_id],
        mates=mates,
        edge_right_current=bool(snap[right_edge_of(node, ring.n)]),
        edge_left_current=bool(snap[left_edge_of(node, ring.n)]),
        edge_right_previous=bool(prev_snap[right_edge_of(node, ring.n)]) if prev_snap else False,
        edge_left_previous=bool(prev_snap[left_edge_of(node, ring.n)]) if prev_snap else False,
        has_moved=config.positions[robot_id] != config.prev_positions[robot_id],
        n=ring.n,
        R=len(config.vars),
    )


def step(
    config: Configuration,
    ring: EvolvingRing,
    compute_fn: ComputeFn = compute,
) -> tuple[Configuration, TraceEvent]:
    """One full Look-Compute-Move round."""
    t = config.round
    snap = ring.snapshot(t)
    new_vars: dict[int, RobotVars] = {}
    fired: dict[int, Optional[str]] = {}
    for rid in sorted(config.vars):
        vars = config.vars[rid]
        if vars.terminated:
            new_vars[rid] = vars
            fired[rid] = None
            continue
        view = build_view(config, ring, rid)
        new_vars[rid], fired[rid] = compute_fn(view)

    new_positions: dict[int, int] = {}
    moved: dict[int, bool] = {}
    for rid in sorted(config.vars):
        node = config.positions[rid]
        vars = new_vars[rid]
        target = node
        if not vars.terminated:
            if vars.dir is Direction.RIGHT and snap[right_edge_of(node, ring.n)]:
                target = step_right(node, ring.n)
            elif vars.dir is Direction.LEFT and snap[left_edge_of(node, ring.n)]:
                target = step_left(node, ring.n)
        new_positions[rid] = target
        moved[rid] = target != node

    event = TraceEvent(
        round=t,
        robots={
            rid: RobotRecord(
                position=new_positions[rid],
                state=new_vars[rid].state.value,
                dir=new_vars[rid].dir.value,
                rule="terminated" if config.vars[rid].terminated else fired[rid],
                moved=moved[rid],
            )
            for rid in sorted(config.vars)
        },
        snapshot=snap,
    )
    next_config = Configuration(
        round=t + 1,
        positions=new_positions,
        vars=new_vars,
        prev_positions=dict(config.positions),
    )
    return next_config, event


def run(
    ring: EvolvingRing,
    placement: dict[int, int],
    horizon: int,
    compute_fn: ComputeFn = compute,
    class_claim: Optional[str] = None,
    seed: Optional[int] = None,
) -> tuple[Trace, RunOutcome]:
    """Iterate rounds until all robots terminated or the horizon is reached."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    if len(placement) < 4:
        raise ValueError("at least 4 robots are required")
    config = initial_configuration(placement, ring.n)
    events: list[TraceEvent] = []
    termination: dict[int, Optional[int]] = {rid: None for rid in placement}
    while config.round < horizon:
        config, event = step(config, ring, compute_fn)
        events.append(event)
        for rid, rec in event.robots.items():
            if rec.rule in ("Term1", "Term2") and termination[rid] is None:
                termination[rid] = event.round
        if all(v.terminated for v in config.vars.values()):
            break
    outcome = RunOutcome(
        termination_rounds=termination,
        final_positions=dict(config.positions),
        halted_at_horizon=not all(v.terminated for v in config.vars.values()),
    )
    trace = Trace(
        n=ring.n,
        R=len(placement),
        ids=tuple(sorted(placement)),
        class_claim=class_claim,
        seed=seed,
        horizon=horizon,
        events=tuple(events),
    )
    return trace, outcome


# ---------------------------------------------------------------------------
# JSON-lines trace format: one header object, then one object per round.
# ---------------------------------------------------------------------------


def trace_to_jsonl(trace: Trace) -> str:
    lines = [
        json.dumps(
            {
                "n": trace.n,
                "R": trace.R,
                "ids": list(trace.ids),
                "class": trace.class_claim,
                "seed": trace.seed,
                "horizon": trace.horizon,
            },
            separators=(",", ":"),
        )
    ]
    for ev in trace.events:
        lines.append(
            json.dumps(
                {
                    "round": ev.round,
                    "snapshot": list(ev.snapshot),
                    "robots": {
                        str(rid): {
                            "pos": rec.position,
                            "state": rec.state,
                            "dir": rec.dir,
                            "rule": rec.rule,
                            "moved": rec.moved,
                        }
                        for rid, rec in ev.robots.items()
                    },
                },
                separators=(",", ":"),
            )
        )
    return "\n".join(lines) + "\n"


def trace_from_jsonl(text: str) -> Trace:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    header = json.loads(lines[0])
    events = []
    for ln in lines[1:]:
        doc = json.loads(ln)
        events.append(
            TraceEvent(
                round=doc["round"],
                snapshot=tuple(doc["snapshot"]),
                robots={
                    int(rid): RobotRecord(
                        position=rec["pos"],
                        state=rec["state"],
                        dir=rec["dir"],
                        rule=rec["rule"],
                        moved=rec["moved"],
                    )
                    for rid, rec in doc["robots"].items()
                },
            )
        )
    return Trace(
        n=header["n"],
        R=header["R"],
        ids=tuple(header["ids"]),
        class_claim=header["class"],
        seed=header["seed"],
        horizon=header["horizon"],
        events=tuple(events),
    )
