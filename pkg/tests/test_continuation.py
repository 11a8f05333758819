import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hopfrelax.ansatz import AnsatzParams, hopfion_ansatz, vacuum
from hopfrelax.continuation import (
    CheckpointError,
    ContinuationSchedule,
    checkpoint_load,
    checkpoint_save,
    default_schedule,
    run,
)
from hopfrelax.lattice import LatticeSpec
from hopfrelax.optimizer import OptimizerConfig


def box_spec(n, edge=6.0):
    return LatticeSpec(n, edge / (n - 1))


class TestSchedule:
    def test_coarse_fine_example(self):
        sched = default_schedule(0.1, 0.9, 0.01)
        assert len(sched) == 20
        assert sched.alphas[0] == 0.0
        assert sched.alphas[-1] == 1.0
        assert sched.alphas[9] == pytest.approx(0.9)
        assert sched.alphas[10] == pytest.approx(0.91)

    def test_degenerate_three_points(self):
        sched = default_schedule(0.5, 0.5, 0.5)
        assert list(sched) == [0.0, 0.5, 1.0]

    def test_default_66_points(self):
        sched = default_schedule(0.02, 0.9, 0.005)
        assert len(sched) == 66
        tail = sched.alphas[-4:]
        assert tail == pytest.approx((0.985, 0.99, 0.995, 1.0))

    def test_invalid_parameters(self):
        with pytest.raises(ValueError):
            default_schedule(0.01, 0.9, 0.02)  # fine > coarse
        with pytest.raises(ValueError):
            default_schedule(0.1, 0.0, 0.1)
        with pytest.raises(ValueError):
            default_schedule(0.1, 1.0, 0.1)

    def test_schedule_invariants_enforced(self):
        with pytest.raises(ValueError):
            ContinuationSchedule((0.0, 0.5))  # must end at 1
        with pytest.raises(ValueError):
            ContinuationSchedule((0.1, 1.0))  # must start at 0
        with pytest.raises(ValueError):
            ContinuationSchedule((0.0, 0.5, 0.5, 1.0))  # strictly increasing

    @given(
        coarse=st.floats(0.05, 0.5),
        threshold=st.floats(0.1, 0.95),
        ratio=st.floats(0.1, 1.0),
    )
    def test_generated_schedules_are_valid(self, coarse, threshold, ratio):
        fine = max(coarse * ratio, 1e-3)
        sched = default_schedule(coarse, threshold, fine)
        a = sched.alphas
        assert a[0] == 0.0 and a[-1] == 1.0
        assert all(y > x for x, y in zip(a, a[1:]))
        assert all(y - x <= coarse + 1e-12 for x, y in zip(a, a[1:]))


class TestCheckpoint:
    def test_round_trip_bit_exact(self, tmp_path, rng):
        spec = box_spec(12)
        phi, c = hopfion_ansatz(spec, AnsatzParams(1))
        c.values[5, 5, 5] = (0.1, -0.2, 0.3)
        path = tmp_path / "state.ckpt"
        checkpoint_save(path, 0.37, phi, c, q_intent=1)
        ckpt = checkpoint_load(path)
        assert ckpt.alpha == 0.37
        assert ckpt.q_intent == 1
        assert ckpt.lattice == spec
        assert np.array_equal(ckpt.phi.values, phi.values)
        assert np.array_equal(ckpt.c.values, c.values)
        assert np.array_equal(ckpt.phi.vacuum, phi.vacuum)

    def test_bad_magic_rejected(self, tmp_path):
        path = tmp_path / "bad.ckpt"
        path.write_bytes(b"NOTMAGIC" + b"\0" * 200)
        with pytest.raises(CheckpointError, match="magic"):
            checkpoint_load(path)

    def test_truncation_reports_offset(self, tmp_path):
        spec = box_spec(8)
        phi, c = vacuum(spec)
        path = tmp_path / "t.ckpt"
        checkpoint_save(path, 0.0, phi, c)
        raw = path.read_bytes()
        path.write_bytes(raw[: len(raw) // 2])
        with pytest.raises(CheckpointError, match="truncated"):
            checkpoint_load(path)

    def test_corruption_detected_by_checksum(self, tmp_path):
        spec = box_spec(8)
        phi, c = hopfion_ansatz(spec, AnsatzParams(1))
        path = tmp_path / "c.ckpt"
        checkpoint_save(path, 0.5, phi, c)
        raw = bytearray(path.read_bytes())
        raw[-9] ^= 0xFF  # flip a payload byte
        path.write_bytes(bytes(raw))
        with pytest.raises(CheckpointError, match="checksum"):
            checkpoint_load(path)


class TestRun:
    def test_vacuum_sweep_records_are_trivial(self):
        spec = box_spec(10)
        sched = ContinuationSchedule((0.0, 0.5, 1.0))
        records = run(vacuum(spec), sched)
        assert len(records) == 3
        for r in records:
            assert r.energy.total == 0.0
            assert r.hopf_charge == 0.0
            assert r.converged
            assert np.isnan(r.derrick_ratio)

    def test_one_record_per_point_even_unconverged(self):
        spec = box_spec(12)
        sched = ContinuationSchedule((0.0, 0.5, 1.0))
        records = run(
            hopfion_ansatz(spec, AnsatzParams(1)),
            sched,
            OptimizerConfig(max_iterations=2),
        )
        assert len(records) == 3
        assert all(not r.converged for r in records)

    def test_sink_receives_records_in_order(self):
        spec = box_spec(10)
        sched = ContinuationSchedule((0.0, 1.0))
        seen = []
        records = run(vacuum(spec), sched, sink=seen.append)
        assert seen == records

    def test_checkpoints_written_per_step(self, tmp_path):
        spec = box_spec(10)
        sched = ContinuationSchedule((0.0, 0.5, 1.0))
        run(vacuum(spec), sched, checkpoint_dir=tmp_path)
        names = sorted(p.name for p in tmp_path.glob("*.ckpt"))
        assert names == [
            "state_alpha_0.000000.ckpt",
            "state_alpha_0.500000.ckpt",
            "state_alpha_1.000000.ckpt",
        ]

    def test_resume_reproduces_uninterrupted_run(self, tmp_path):
        # a real (tiny, coarse) soliton run: relax, checkpoint, resume, and
        # compare the records of both histories
        spec = box_spec(14)
        sched = ContinuationSchedule((0.0, 0.4, 0.7, 1.0))
        opt = OptimizerConfig(max_iterations=120)
        full = run(
            hopfion_ansatz(spec, AnsatzParams(1)),
            sched,
            opt,
            checkpoint_dir=tmp_path,
        )
        ckpt = checkpoint_load(tmp_path / "state_alpha_0.400000.ckpt")
        resumed = run(
            (ckpt.phi, ckpt.c),
            sched,
            opt,
            resume_alpha=ckpt.alpha,
        )
        assert [r.alpha for r in resumed] == [0.7, 1.0]
        for a, b in zip(full[2:], resumed):
            assert b.energy.total == pytest.approx(a.energy.total, abs=1e-10)
            assert b.iterations == a.iterations
            assert b.converged == a.converged

    @pytest.mark.slow
    def test_warm_start_beats_cold_start(self):
        # continuation exists precisely because re-seeding at finite coupling
        # costs far more iterations than following the branch
        spec = box_spec(20)
        opt = OptimizerConfig(max_iterations=4000)
        sched = ContinuationSchedule((0.0, 0.25, 0.5, 1.0))
        records = run(hopfion_ansatz(spec, AnsatzParams(1)), sched, opt)
        warm_iters = records[2].iterations  # alpha = 0.5 step, warm started

        from hopfrelax.optimizer import minimize

        phi, c = hopfion_ansatz(spec, AnsatzParams(1))
        cold = minimize(phi, c, 0.5, opt)
        assert warm_iters <= cold.iterations
