"""Seeded ring generators per dynamics class, plus the adaptive adversary.

The adaptive adversary targets two robots of a deterministic algorithm on
an always-connected ring. It builds the schedule online: whenever the two
targets are adjacent it withholds the edge between them, and when they are
at distance two it forks the execution one round ahead to decide whether a
single edge removal is needed. Every emitted snapshot misses at most one
edge, so the schedule is always-connected by construction.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from typing import Optional

from .gdg_protocol import Direction, RobotVars, View
from .ring_model import (
    AC,
    BRE,
    COT,
    RE,
    ST,
    DynClass,
    EvolvingRing,
    Schedule,
    Snapshot,
    static_ring,
    verify_class,
)
from . import sim_engine
from .sim_engine import ComputeFn, Configuration, Trace, TraceEvent, compute


@dataclass(frozen=True, slots=True)
class GeneratorSpec:
    dyn_class: DynClass
    n: int
    seed: int
    cycle_budget: int = 8
    prefix_budget: int = 6  # RE/COT only
    missing_edge: Optional[int] = None  # COT: the eventual missing edge
    kill_round: Optional[int] = None  # COT: first round the edge is gone
    ac_policy: str = "rotate"  # or "random"


def _all_present(n: int) -> Snapshot:
    return (1,) * n


def _absent_one(n: int, e: int) -> Snapshot:
    return tuple(0 if i == e else 1 for i in range(n))


def generate(spec: GeneratorSpec) -> EvolvingRing:
    """Build a ring in the requested class; the result is post-checked."""
    rng = random.Random(spec.seed)
    n = spec.n
    tag = spec.dyn_class.tag

    if tag == ST:
        ring = static_ring(n)
    elif tag == AC:
        length = rng.randint(2, max(2, spec.cycle_budget))
        snaps = []
        for i in range(length):
            if spec.ac_policy == "rotate":
                snaps.append(_absent_one(n, i % n))
            else:
                snaps.append(_absent_one(n, rng.randrange(n)))
        ring = EvolvingRing(n, Schedule((), tuple(snaps)))
    elif tag == BRE:
        delta = spec.dyn_class.delta
        assert delta is not None and delta >= 1
        length = delta * rng.randint(1, max(1, spec.cycle_budget // delta) or 1)
        # Each edge gets one guaranteed slot per delta-aligned block, so any
        # window of delta consecutive rounds hits it; other slots are random.
        phases = [rng.randrange(delta) for _ in range(n)]
        snaps = []
        for t in range(length):
            snaps.append(
                tuple(
                    1 if t % delta == phases[e] else rng.randint(0, 1)
                    for e in range(n)
                )
            )
        ring = EvolvingRing(n, Schedule((), tuple(snaps)))
    elif tag == RE:
        length = rng.randint(1, max(1, spec.cycle_budget))
        snaps = [[rng.randint(0, 1) for _ in range(n)] for _ in range(length)]
        for e in range(n):  # every footprint edge must recur
            if not any(s[e] for s in snaps):
                snaps[rng.randrange(length)][e] = 1
        prefix_len = rng.randint(0, max(0, spec.prefix_budget))
        prefix = []
        for _ in range(prefix_len):
            row = [rng.randint(0, 1) for _ in range(n)]
            prefix.append(tuple(row))
        ring = EvolvingRing(
            n, Schedule(tuple(prefix), tuple(tuple(s) for s in snaps))
        )
    elif tag == COT:
        e = spec.missing_edge if spec.missing_edge is not None else rng.randrange(n)
        kill = spec.kill_round if spec.kill_round is not None else rng.randint(1, 20)
        kill = max(1, kill)  # the edge must exist at least once before dying
        prefix = tuple(_all_present(n) for _ in range(kill))
        cycle_len = rng.randint(1, max(1, spec.cycle_budget))
        cycle = []
        for _ in range(cycle_len):
            row = [rng.randint(0, 1) for _ in range(n)]
            row[e] = 0
            cycle.append(row)
        for other in range(n):  # all surviving edges stay recurrent
            if other != e and not any(row[other] for row in cycle):
                cycle[rng.randrange(cycle_len)][other] = 1
        ring = EvolvingRing(
            n, Schedule(prefix, tuple(tuple(row) for row in cycle))
        )
    else:
        raise ValueError(f"unknown dynamics class {tag}")

    if not verify_class(ring, spec.dyn_class):
        raise AssertionError(f"generated ring failed {tag} verification")
    return ring


def never_move(view: View) -> tuple[RobotVars, str]:
    """Trivial algorithm under test: robots park forever."""
    return replace(view.self_vars, dir=Direction.BOT), "idle"


@dataclass(frozen=True, slots=True)
class AdversaryResult:
    ring: EvolvingRing
    trace: Trace
    defeated_at: Optional[int]  # round at which the targets met, if ever


def _ring_distance(a: int, b: int, n: int) -> int:
    d = (b - a) % n
    return min(d, n - d)


def _edge_between(a: int, b: int, n: int) -> int:
    """Edge joining two adjacent nodes."""
    if (a + 1) % n == b:
        return a
    if (b + 1) % n == a:
        return b
    raise ValueError("nodes are not adjacent")


def _step_with_snapshot(
    config: Configuration,
    snapshots: list[Snapshot],
    snap: Snapshot,
    n: int,
    compute_fn: ComputeFn,
) -> tuple[Configuration, TraceEvent]:
    ring = EvolvingRing(n, Schedule(tuple(snapshots) + (snap,), (_all_present(n),)))
    return sim_engine.step(config, ring, compute_fn)


def adaptive_ac_adversary(
    n: int,
    R: int,
    placement: dict[int, int],
    r1: int,
    r2: int,
    horizon: int,
    compute_fn: ComputeFn = compute,
) -> AdversaryResult:
    """Keep robots r1 and r2 apart for `horizon` rounds on an AC schedule."""
    if r1 == r2 or placement[r1] == placement[r2]:
        raise ValueError("targets must be distinct robots on distinct nodes")
    if horizon < 1:
        raise ValueError("horizon must be >= 1")

    config = sim_engine.initial_configuration(placement, n)
    snapshots: list[Snapshot] = []
    events: list[TraceEvent] = []
    defeated: Optional[int] = None

    while config.round < horizon:
        p1, p2 = config.positions[r1], config.positions[r2]
        d = _ring_distance(p1, p2, n)
        snap = _all_present(n)
        if d == 1:
            snap = _absent_one(n, _edge_between(p1, p2, n))
        elif d == 2:
            # One-round fork under the all-present continuation: only if the
            # targets would meet do we withhold the edge they meet across.
            fork, _ = _step_with_snapshot(config, snapshots, snap, n, compute_fn)
            if fork.positions[r1] == fork.positions[r2]:
                meeting = fork.positions[r1]
                if _ring_distance(p1, meeting, n) == 1:
                    snap = _absent_one(n, _edge_between(p1, meeting, n))
                else:
                    snap = _absent_one(n, _edge_between(p2, meeting, n))
        config, event = _step_with_snapshot(config, snapshots, snap, n, compute_fn)
        snapshots.append(snap)
        events.append(event)
        if config.positions[r1] == config.positions[r2] and defeated is None:
            defeated = event.round
            break

    # Close the schedule: repeat the last emitted snapshot forever (at most
    # one absent edge, so the extension stays always-connected).
    tail = snapshots[-1] if snapshots else _all_present(n)
    ring = EvolvingRing(n, Schedule(tuple(snapshots), (tail,)))
    trace = Trace(
        n=n,
        R=R,
        ids=tuple(sorted(placement)),
        class_claim=AC,
        seed=None,
        horizon=horizon,
        events=tuple(events),
    )
    return AdversaryResult(ring=ring, trace=trace, defeated_at=defeated)
