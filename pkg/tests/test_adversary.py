import pytest

from gdg_sim.adversary import (
    AdversaryResult,
    GeneratorSpec,
    adaptive_ac_adversary,
    generate,
    never_move,
)
from gdg_sim.ring_model import (
    AC,
    BRE,
    COT,
    RE,
    ST,
    DynClass,
    edge_present,
    verify_class,
)


class TestGenerators:
    @pytest.mark.parametrize("seed", range(20))
    @pytest.mark.parametrize(
        "dyn",
        [DynClass(ST), DynClass(AC), DynClass(RE), DynClass(COT), DynClass(BRE, 2)],
        ids=lambda d: d.tag,
    )
    def test_output_is_in_class(self, dyn, seed):
        ring = generate(GeneratorSpec(dyn, n=6, seed=seed))
        assert verify_class(ring, dyn)

    @pytest.mark.parametrize("seed", range(10))
    def test_cot_rings_are_strictly_degraded(self, seed):
        ring = generate(GeneratorSpec(DynClass(COT), n=6, seed=seed))
        assert not verify_class(ring, DynClass(RE))

    @pytest.mark.parametrize("delta", [1, 2, 3, 5])
    def test_bre_respects_delta(self, delta):
        ring = generate(GeneratorSpec(DynClass(BRE, delta), n=6, seed=11))
        assert verify_class(ring, DynClass(BRE, delta))

    def test_seeded_reproducibility(self):
        spec = GeneratorSpec(DynClass(RE), n=8, seed=42)
        assert generate(spec) == generate(spec)

    def test_cot_kill_round_and_edge_are_honored(self):
        spec = GeneratorSpec(DynClass(COT), n=6, seed=0, missing_edge=2, kill_round=5)
        ring = generate(spec)
        assert all(edge_present(ring, 2, t) for t in range(5))
        assert all(not edge_present(ring, 2, t) for t in range(5, 40))


class TestAdaptiveAdversary:
    PLACEMENT = {1: 0, 2: 1, 3: 2, 4: 3}

    def test_defeats_parked_robots_never(self):
        res = adaptive_ac_adversary(4, 4, self.PLACEMENT, 3, 4, 50, compute_fn=never_move)
        assert res.defeated_at is None

    def test_gdg_targets_never_meet(self):
        res = adaptive_ac_adversary(4, 4, self.PLACEMENT, 3, 4, 500)
        assert res.defeated_at is None
        for ev in res.trace.events:
            assert ev.robots[3].position != ev.robots[4].position

    def test_schedule_is_always_connected(self):
        res = adaptive_ac_adversary(6, 4, {2: 0, 5: 1, 9: 3, 11: 5}, 9, 11, 300)
        span = len(res.ring.schedule.prefix) + len(res.ring.schedule.cycle)
        for t in range(span):
            absent = sum(
                1 for e in range(6) if not edge_present(res.ring, e, t)
            )
            assert absent <= 1
        assert verify_class(res.ring, DynClass(AC))

    def test_emitted_schedule_matches_trace(self):
        res = adaptive_ac_adversary(4, 4, self.PLACEMENT, 3, 4, 100)
        for ev in res.trace.events:
            for e in range(4):
                assert edge_present(res.ring, e, ev.round) == bool(ev.snapshot[e])

    def test_rejects_colocated_targets(self):
        with pytest.raises(ValueError):
            adaptive_ac_adversary(4, 4, {1: 0, 2: 0, 3: 1, 4: 2}, 1, 2, 10)

    def test_rejects_bad_horizon(self):
        with pytest.raises(ValueError):
            adaptive_ac_adversary(4, 4, self.PLACEMENT, 3, 4, 0)
