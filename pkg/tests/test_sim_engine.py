import pytest

from gdg_sim.gdg_protocol import Direction, RobotState
from gdg_sim.ring_model import EvolvingRing, Schedule, static_ring
from gdg_sim.sim_engine import (
    build_view,
    initial_configuration,
    run,
    step,
    trace_from_jsonl,
    trace_to_jsonl,
)


def ring_of(n, prefix, cycle):
    return EvolvingRing(n, Schedule(tuple(map(tuple, prefix)), tuple(map(tuple, cycle))))


PLACEMENT = {1: 0, 2: 1, 3: 2, 4: 3}


class TestBuildView:
    def test_round_zero_has_no_history(self):
        config = initial_configuration(PLACEMENT, 4)
        view = build_view(config, static_ring(4), 1)
        assert view.mates == ()
        assert not view.edge_right_previous
        assert not view.edge_left_previous
        assert not view.has_moved
        assert (view.n, view.R) == (4, 4)

    def test_mates_sorted_by_id(self):
        config = initial_configuration({1: 0, 2: 0, 3: 0, 4: 2}, 4)
        view = build_view(config, static_ring(4), 2)
        assert [m.id for m in view.mates] == [1, 3]

    def test_edges_from_current_snapshot(self):
        ring = ring_of(4, [[0, 1, 1, 1]], [[1, 1, 1, 1]])
        config = initial_configuration(PLACEMENT, 4)
        view = build_view(config, ring, 1)  # node 0: right edge e0, left edge e3
        assert not view.edge_right_current
        assert view.edge_left_current

    def test_unknown_robot(self):
        config = initial_configuration(PLACEMENT, 4)
        with pytest.raises(KeyError):
            build_view(config, static_ring(4), 9)


class TestStep:
    def test_spread_righters_rotate(self):
        config = initial_configuration(PLACEMENT, 4)
        config, event = step(config, static_ring(4))
        assert config.positions == {1: 1, 2: 2, 3: 3, 4: 0}
        assert all(rec.rule == "M8" and rec.moved for rec in event.robots.values())

    def test_missing_edge_blocks_move(self):
        ring = ring_of(4, [[0, 1, 1, 1]], [[1, 1, 1, 1]])
        config = initial_configuration(PLACEMENT, 4)
        config, event = step(config, ring)
        assert config.positions[1] == 0
        assert not event.robots[1].moved
        # the robot keeps trying: direction right, no step counted
        assert event.robots[1].dir == "right"

    def test_all_colocated_terminate_in_place(self):
        config = initial_configuration({1: 2, 2: 2, 3: 2, 4: 2}, 4)
        config, event = step(config, static_ring(4))
        assert all(rec.rule == "Term1" for rec in event.robots.values())
        assert all(v.terminated for v in config.vars.values())
        assert config.positions == {1: 2, 2: 2, 3: 2, 4: 2}

    def test_terminated_robots_stay_frozen(self):
        config = initial_configuration({1: 2, 2: 2, 3: 2, 4: 2}, 4)
        config, _ = step(config, static_ring(4))
        frozen = dict(config.vars)
        config, event = step(config, static_ring(4))
        assert config.vars == frozen
        assert all(rec.rule == "terminated" for rec in event.robots.values())
        assert all(not rec.moved for rec in event.robots.values())


class TestRun:
    def test_gathers_on_static_ring(self):
        trace, outcome = run(static_ring(4), PLACEMENT, horizon=200, seed=0)
        assert not outcome.halted_at_horizon
        assert len(set(outcome.final_positions.values())) == 1
        assert all(r is not None for r in outcome.termination_rounds.values())

    def test_immediate_gathering(self):
        trace, outcome = run(static_ring(4), {1: 2, 2: 2, 3: 2, 4: 2}, horizon=10)
        assert outcome.termination_rounds == {1: 0, 2: 0, 3: 0, 4: 0}
        assert len(trace.events) == 1

    def test_horizon_halt(self):
        trace, outcome = run(static_ring(4), PLACEMENT, horizon=3)
        assert outcome.halted_at_horizon
        assert len(trace.events) == 3

    def test_bad_horizon(self):
        with pytest.raises(ValueError):
            run(static_ring(4), PLACEMENT, horizon=0)

    def test_too_few_robots(self):
        with pytest.raises(ValueError):
            run(static_ring(4), {1: 0, 2: 1, 3: 2}, horizon=5)

    def test_permanent_gap_funnels_everyone(self):
        # e0 vanishes permanently after round 0. Rightbound robots pile up
        # against the gap at node 0 and gather there.
        ring = ring_of(4, [[1, 1, 1, 1]], [[0, 1, 1, 1]])
        trace, outcome = run(ring, PLACEMENT, horizon=400)
        assert not outcome.halted_at_horizon
        assert set(outcome.final_positions.values()) == {0}


class TestTraceSerialization:
    def test_round_trip(self):
        trace, _ = run(static_ring(4), PLACEMENT, horizon=100, class_claim="st", seed=7)
        text = trace_to_jsonl(trace)
        assert trace_from_jsonl(text) == trace

    def test_replay_is_byte_identical(self):
        a, _ = run(static_ring(4), PLACEMENT, horizon=100, class_claim="st", seed=7)
        b, _ = run(static_ring(4), PLACEMENT, horizon=100, class_claim="st", seed=7)
        assert trace_to_jsonl(a) == trace_to_jsonl(b)

    def test_header_fields(self):
        trace, _ = run(static_ring(4), PLACEMENT, horizon=5, class_claim="st", seed=3)
        header = trace_to_jsonl(trace).splitlines()[0]
        assert '"n":4' in header
        assert '"seed":3' in header
