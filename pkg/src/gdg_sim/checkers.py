"""Verdicts on traces: gathering variants, round bounds, invariant monitors.

The four variants, strongest first:

    G     all robots terminate on one node within a bound
    G_E   all robots terminate on one node, eventually
    G_W   all but at most one terminate on one node within a bound
    G_EW  all but at most one terminate on one node, eventually

Verdicts are downward-closed: G implies G_E and G_W, each of which
implies G_EW.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .ring_model import AC, BRE, COT, RE, ST, DynClass
from .sim_engine import Trace

VARIANTS = ("G", "G_E", "G_W", "G_EW")

# Default bound constants, validated empirically; configurable per check.
AC_DEFAULTS = (16, 3, 12)
BRE_DEFAULTS = (4, 3, 8)


@dataclass(frozen=True, slots=True)
class BoundParams:
    dyn_class: DynClass
    n: int
    R: int
    id_rmin: int
    c1: Optional[int] = None
    c2: Optional[int] = None
    c3: Optional[int] = None


@dataclass(frozen=True, slots=True)
class Verdict:
    safety_ok: bool
    variants: frozenset[str]
    termination_round: Optional[int]
    bound_ok: Optional[bool]
    violations: tuple[tuple[str, int], ...] = ()

    def to_dict(self) -> dict:
        return {
            "safety_ok": self.safety_ok,
            "variants": sorted(self.variants),
            "termination_round": self.termination_round,
            "bound_ok": self.bound_ok,
            "violations": [list(v) for v in self.violations],
        }


class BoundNotApplicable(Exception):
    """COT and RE admit no bounded-variant round bound."""


def bound_for(p: BoundParams) -> int:
    """Explicit round bound for the bounded variants in AC, BRE, and ST."""
    tag = p.dyn_class.tag
    if tag == AC:
        c1, c2, c3 = (
            p.c1 if p.c1 is not None else AC_DEFAULTS[0],
            p.c2 if p.c2 is not None else AC_DEFAULTS[1],
            p.c3 if p.c3 is not None else AC_DEFAULTS[2],
        )
        return c1 * p.id_rmin * p.n * p.n + c2 * p.R * p.n + c3 * p.n * p.n
    if tag in (BRE, ST):
        delta = p.dyn_class.delta if tag == BRE else 1
        assert delta is not None
        c1, c2, c3 = (
            p.c1 if p.c1 is not None else BRE_DEFAULTS[0],
            p.c2 if p.c2 is not None else BRE_DEFAULTS[1],
            p.c3 if p.c3 is not None else BRE_DEFAULTS[2],
        )
        return c1 * p.n * delta * p.id_rmin + c2 * p.n * delta * p.R + c3 * p.n * delta
    raise BoundNotApplicable(f"no round bound for class {tag}")


def _termination_info(trace: Trace) -> tuple[dict[int, int], dict[int, int]]:
    """(termination round, final node) per robot that fired Term1/Term2."""
    rounds: dict[int, int] = {}
    nodes: dict[int, int] = {}
    for ev in trace.events:
        for rid, rec in ev.robots.items():
            if rec.rule in ("Term1", "Term2") and rid not in rounds:
                rounds[rid] = ev.round
                nodes[rid] = rec.position
    return rounds, nodes


def check_safety(trace: Trace) -> bool:
    """All robots that terminate do so on the same node."""
    _, nodes = _termination_info(trace)
    return len(set(nodes.values())) <= 1


def check_variant(trace: Trace, horizon: int, bound: Optional[int] = None) -> Verdict:
    rounds, _ = _termination_info(trace)
    safety = check_safety(trace)
    done = sorted(rounds.values())
    variants: set[str] = set()
    if safety and len(done) >= trace.R - 1:
        variants.add("G_EW")
        if len(done) == trace.R:
            variants.add("G_E")
        if bound is not None and done[trace.R - 2] <= bound:
            variants.add("G_W")
        if "G_E" in variants and bound is not None and done[-1] <= bound:
            variants.add("G")
    bound_ok = bool(variants & {"G", "G_W"}) if bound is not None else None
    return Verdict(
        safety_ok=safety,
        variants=frozenset(variants),
        termination_round=done[-1] if done else None,
        bound_ok=bound_ok,
    )


# ---------------------------------------------------------------------------
# Invariant monitors
# ---------------------------------------------------------------------------

MIN_STATE_NAMES = {"minWaitingWalker", "minTailWalker"}
WAITING_NAMES = {"waitingWalker", "minWaitingWalker"}
RIGHTWARD_NAMES = {"righter", "potentialMin"}


def monitor_invariants(trace: Trace, ids: Optional[list[int]] = None) -> list[tuple[str, int]]:
    """Check GDG execution invariants round by round; returns violations.

    Monitored properties:
      min-id        a robot in a min state carries the minimum identifier
      min-closed    min states are never left
      tower-min     at most one maximal tower-min episode (R-2 co-located
                    waiting robots around the min) in the whole run
      waiting-still every waitingWalker sits with the minWaitingWalker and
                    neither moves
      dir-right     righter/potentialMin robots have always headed right
      no-reentry    righter, potentialMin, and waiting states are not
                    re-entered once left
    """
    all_ids = list(ids) if ids is not None else list(trace.ids)
    rmin = min(all_ids)
    violations: list[tuple[str, int]] = []
    prev_states: dict[int, str] = {rid: "righter" for rid in all_ids}
    left_righter: set[int] = set()
    left_rightward: set[int] = set()
    left_waiting: set[int] = set()
    dir_history_ok: dict[int, bool] = {rid: True for rid in all_ids}
    tower_episodes = 0
    in_tower = False

    for ev in trace.events:
        states = {rid: rec.state for rid, rec in ev.robots.items()}
        positions = {rid: rec.position for rid, rec in ev.robots.items()}

        for rid, st in states.items():
            if st in MIN_STATE_NAMES and rid != rmin:
                violations.append(("min-id", ev.round))
            if prev_states[rid] in MIN_STATE_NAMES and st not in MIN_STATE_NAMES:
                violations.append(("min-closed", ev.round))
            if st == "righter" and rid in left_righter:
                violations.append(("no-reentry", ev.round))
            if st in RIGHTWARD_NAMES and rid in left_rightward:
                violations.append(("no-reentry", ev.round))
            if st in WAITING_NAMES and rid in left_waiting:
                violations.append(("no-reentry", ev.round))

        # While a robot remains righter/potentialMin it
        # must have chosen right at every Move phase so far.
        for rid, rec in ev.robots.items():
            if rec.rule is None or rec.rule == "terminated":
                continue
            if states[rid] in RIGHTWARD_NAMES:
                if rec.dir != "right" or not dir_history_ok[rid]:
                    violations.append(("dir-right", ev.round))
            if rec.dir != "right":
                dir_history_ok[rid] = False

        # Waiting robots stay parked next to the min.
        min_waiting = [rid for rid, st in states.items() if st == "minWaitingWalker"]
        for rid, st in states.items():
            if st != "waitingWalker":
                continue
            rec = ev.robots[rid]
            if rec.moved:
                violations.append(("waiting-still", ev.round))
            if min_waiting:
                anchor = min_waiting[0]
                if positions[rid] != positions[anchor] or ev.robots[anchor].moved:
                    violations.append(("waiting-still", ev.round))

        # Tower-min detection: minWaitingWalker plus R-3 waitingWalkers
        # together on one node.
        tower_now = False
        if min_waiting:
            anchor = min_waiting[0]
            waiting_here = [
                rid
                for rid, st in states.items()
                if st == "waitingWalker" and positions[rid] == positions[anchor]
            ]
            tower_now = len(waiting_here) == trace.R - 3
        if tower_now and not in_tower:
            tower_episodes += 1
            if tower_episodes > 1:
                violations.append(("tower-min", ev.round))
        in_tower = tower_now

        for rid, st in states.items():
            if prev_states[rid] == "righter" and st != "righter":
                left_righter.add(rid)
            if prev_states[rid] in RIGHTWARD_NAMES and st not in RIGHTWARD_NAMES:
                left_rightward.add(rid)
            if prev_states[rid] in WAITING_NAMES and st not in WAITING_NAMES:
                left_waiting.add(rid)
        prev_states = states

    return violations
