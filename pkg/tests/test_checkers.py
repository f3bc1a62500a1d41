import pytest

from gdg_sim.checkers import (
    BoundNotApplicable,
    BoundParams,
    bound_for,
    check_safety,
    check_variant,
    monitor_invariants,
)
from gdg_sim.ring_model import AC, BRE, COT, RE, ST, DynClass, static_ring
from gdg_sim.sim_engine import RobotRecord, Trace, TraceEvent, run


def rec(pos, state="righter", dir="right", rule="M8", moved=False):
    return RobotRecord(position=pos, state=state, dir=dir, rule=rule, moved=moved)


def trace_of(events, R=4, n=4):
    return Trace(
        n=n,
        R=R,
        ids=(1, 2, 3, 4) if R == 4 else tuple(range(1, R + 1)),
        class_claim=None,
        seed=None,
        horizon=len(events),
        events=tuple(events),
    )


class TestBoundFor:
    def test_ac_formula(self):
        p = BoundParams(DynClass(AC), n=4, R=4, id_rmin=1)
        assert bound_for(p) == 16 * 1 * 16 + 3 * 4 * 4 + 12 * 16 == 496

    def test_st_is_bre_with_unit_window(self):
        p = BoundParams(DynClass(ST), n=4, R=4, id_rmin=1)
        assert bound_for(p) == 96
        assert bound_for(p) == bound_for(BoundParams(DynClass(BRE, 1), n=4, R=4, id_rmin=1))

    def test_bre_scales_with_delta(self):
        base = bound_for(BoundParams(DynClass(BRE, 1), n=6, R=5, id_rmin=2))
        doubled = bound_for(BoundParams(DynClass(BRE, 2), n=6, R=5, id_rmin=2))
        assert doubled == 2 * base == 372

    def test_custom_constants(self):
        p = BoundParams(DynClass(AC), n=4, R=4, id_rmin=1, c1=1, c2=0, c3=0)
        assert bound_for(p) == 16

    @pytest.mark.parametrize("tag", [COT, RE])
    def test_unbounded_classes_refuse(self, tag):
        with pytest.raises(BoundNotApplicable):
            bound_for(BoundParams(DynClass(tag), n=4, R=4, id_rmin=1))


class TestSafetyAndVariants:
    def _terminating_trace(self, rounds_nodes):
        """rounds_nodes: {robot: (termination round, node)}; one event per round."""
        horizon = max(r for r, _ in rounds_nodes.values()) + 1
        events = []
        for t in range(horizon):
            robots = {}
            for rid in (1, 2, 3, 4):
                done_round, node = rounds_nodes.get(rid, (None, 0))
                if done_round is None:
                    robots[rid] = rec(0, rule="M8")
                elif t < done_round:
                    robots[rid] = rec(node, rule="M8")
                elif t == done_round:
                    robots[rid] = rec(node, rule="Term1", dir="bot")
                else:
                    robots[rid] = rec(node, rule="terminated", dir="bot")
            events.append(TraceEvent(round=t, robots=robots, snapshot=(1, 1, 1, 1)))
        return trace_of(events)

    def test_safety_holds_on_common_node(self):
        trace = self._terminating_trace({1: (2, 3), 2: (2, 3), 3: (2, 3), 4: (5, 3)})
        assert check_safety(trace)

    def test_safety_fails_on_split_termination(self):
        trace = self._terminating_trace({1: (2, 3), 2: (2, 1), 3: (2, 3), 4: (2, 3)})
        assert not check_safety(trace)
        assert check_variant(trace, horizon=10).variants == frozenset()

    def test_full_gathering_within_bound(self):
        trace = self._terminating_trace({1: (2, 3), 2: (2, 3), 3: (2, 3), 4: (5, 3)})
        v = check_variant(trace, horizon=10, bound=100)
        assert v.variants == frozenset({"G", "G_E", "G_W", "G_EW"})
        assert v.termination_round == 5
        assert v.bound_ok

    def test_full_gathering_after_bound(self):
        trace = self._terminating_trace({1: (2, 3), 2: (2, 3), 3: (2, 3), 4: (7, 3)})
        v = check_variant(trace, horizon=10, bound=5)
        assert v.variants == frozenset({"G_E", "G_EW", "G_W"})
        assert v.bound_ok is not None
        assert "G" not in v.variants

    def test_partial_gathering(self):
        trace = self._terminating_trace({1: (2, 3), 2: (2, 3), 3: (4, 3)})
        v = check_variant(trace, horizon=10, bound=100)
        assert v.variants == frozenset({"G_W", "G_EW"})

    def test_partial_gathering_unbounded(self):
        trace = self._terminating_trace({1: (2, 3), 2: (2, 3), 3: (4, 3)})
        v = check_variant(trace, horizon=10)
        assert v.variants == frozenset({"G_EW"})
        assert v.bound_ok is None

    def test_too_few_terminations(self):
        trace = self._terminating_trace({1: (2, 3), 2: (2, 3)})
        assert check_variant(trace, horizon=10).variants == frozenset()


class TestMonitors:
    def test_clean_run_has_no_violations(self):
        trace, _ = run(static_ring(4), {1: 0, 2: 1, 3: 2, 4: 3}, horizon=200)
        assert monitor_invariants(trace) == []

    def test_flags_moved_waiting_walker(self):
        events = [
            TraceEvent(
                round=0,
                robots={
                    1: rec(0, "minWaitingWalker", "bot", "M1"),
                    2: rec(1, "waitingWalker", "bot", "K3", moved=True),
                    3: rec(2),
                    4: rec(3),
                },
                snapshot=(1, 1, 1, 1),
            )
        ]
        hits = monitor_invariants(trace_of(events))
        assert ("waiting-still", 0) in hits

    def test_flags_wrong_id_min(self):
        events = [
            TraceEvent(
                round=0,
                robots={
                    1: rec(0),
                    2: rec(1, "minWaitingWalker", "bot", "M1"),
                    3: rec(2),
                    4: rec(3),
                },
                snapshot=(1, 1, 1, 1),
            )
        ]
        hits = monitor_invariants(trace_of(events))
        assert ("min-id", 0) in hits

    def test_flags_second_tower_episode(self):
        def tower(t, present):
            waiting_state = "waitingWalker" if present else "awareSearcher"
            return TraceEvent(
                round=t,
                robots={
                    1: rec(0, "minWaitingWalker", "bot", "K2"),
                    2: rec(0, waiting_state, "bot", "K2"),
                    3: rec(1),
                    4: rec(2),
                },
                snapshot=(1, 1, 1, 1),
            )

        events = [tower(0, True), tower(1, False), tower(2, True)]
        hits = monitor_invariants(trace_of(events))
        assert ("tower-min", 2) in hits

    def test_flags_min_state_abandoned(self):
        events = [
            TraceEvent(
                round=0,
                robots={
                    1: rec(0, "minWaitingWalker", "bot", "M1"),
                    2: rec(1),
                    3: rec(2),
                    4: rec(3),
                },
                snapshot=(1, 1, 1, 1),
            ),
            TraceEvent(
                round=1,
                robots={
                    1: rec(0, "righter", "right", "M8"),
                    2: rec(1),
                    3: rec(2),
                    4: rec(3),
                },
                snapshot=(1, 1, 1, 1),
            ),
        ]
        hits = monitor_invariants(trace_of(events))
        assert ("min-closed", 1) in hits
        assert ("no-reentry", 1) in hits

    def test_flags_backward_righter(self):
        events = [
            TraceEvent(
                round=0,
                robots={
                    1: rec(0, "righter", "left", "M8", moved=True),
                    2: rec(1),
                    3: rec(2),
                    4: rec(3),
                },
                snapshot=(1, 1, 1, 1),
            )
        ]
        hits = monitor_invariants(trace_of(events))
        assert ("dir-right", 0) in hits
