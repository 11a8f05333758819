import numpy as np
import pytest

from hopfrelax.ansatz import AnsatzParams, hopfion_ansatz, vacuum
from hopfrelax.cli import CSV_COLUMNS, main
from hopfrelax.config import (
    ConfigError,
    RunConfig,
    load_config,
    parse_config,
    serialize_config,
)
from hopfrelax.continuation import checkpoint_load, checkpoint_save
from hopfrelax.lattice import LatticeSpec


def tiny_overrides(outdir, n=12, schedule=("0.5", "0.5", "0.5")):
    h = 6.0 / (n - 1)
    return [
        f"lattice.n={n}",
        f"lattice.h={h}",
        "optimizer.max_iterations=60",
        f"schedule.coarse_step={schedule[0]}",
        f"schedule.refine_threshold={schedule[1]}",
        f"schedule.fine_step={schedule[2]}",
        f"output.directory={outdir}",
    ]


def run_cli(*argv):
    return main(list(argv))


def with_sets(base, overrides):
    argv = list(base)
    for item in overrides:
        argv += ["--set", item]
    return argv


class TestConfig:
    def test_round_trip_identity(self):
        cfg = RunConfig()
        cfg.lattice.n = 48
        cfg.ansatz.charge = 2
        cfg.output.directory = "elsewhere"
        text = serialize_config(cfg)
        again = parse_config(text)
        assert serialize_config(again) == text
        assert again == cfg

    def test_unknown_key_named_in_error(self):
        with pytest.raises(ConfigError, match="lattice.spacing"):
            parse_config("lattice.spacing = 0.1")

    def test_bad_value_named(self):
        with pytest.raises(ConfigError, match="lattice.n"):
            parse_config("lattice.n = many")

    def test_overrides_win_over_file(self):
        cfg = parse_config("lattice.n = 32", overrides=["lattice.n=48"])
        assert cfg.lattice.n == 48

    def test_comments_and_blanks_ignored(self):
        cfg = parse_config("# a comment\n\nlattice.n = 24  # trailing\n")
        assert cfg.lattice.n == 24

    def test_validate_names_offending_key(self):
        cfg = RunConfig()
        cfg.ansatz.charge = 0
        with pytest.raises(ConfigError, match="ansatz.charge"):
            cfg.validate()
        cfg = RunConfig()
        cfg.ansatz.core_radius = 5.0
        with pytest.raises(ConfigError, match="core_radius"):
            cfg.validate()

    def test_threads_env_override(self, monkeypatch):
        cfg = RunConfig()
        cfg.threads = 2
        monkeypatch.setenv("HOPFRELAX_THREADS", "5")
        assert cfg.resolved_threads() == 5
        monkeypatch.delenv("HOPFRELAX_THREADS")
        assert cfg.resolved_threads() == 2


class TestInit:
    def test_init_writes_checkpoint_and_reports_charge(self, tmp_path, capsys):
        outdir = tmp_path / "out"
        rc = run_cli(
            *with_sets(
                ["init"],
                tiny_overrides(outdir, n=32) + ["lattice.h=" + str(6.0 / 31)],
            )
        )
        assert rc == 0
        out = capsys.readouterr().out
        assert (outdir / "init.ckpt").exists()
        charge_line = [l for l in out.splitlines() if l.startswith("seed charge")][0]
        assert abs(float(charge_line.split(":")[1]) - 1.0) < 0.08

    def test_init_rejects_zero_charge(self, tmp_path, capsys):
        rc = run_cli(
            *with_sets(["init"], tiny_overrides(tmp_path) + ["ansatz.charge=0"])
        )
        assert rc == 1
        assert "ansatz.charge" in capsys.readouterr().err

    def test_full_resolution_dry_run_accepted(self, capsys):
        rc = run_cli(
            "init",
            "--dry-run",
            "--set",
            "lattice.n=480",
            "--set",
            "lattice.h=0.0125",
        )
        assert rc == 0
        out = capsys.readouterr().out
        assert "memory estimate" in out
        assert "N=480" in out
        # two fields at 480^3 weigh about 5 GB
        fields_gb = float(out.split("fields")[1].split("GB")[0])
        assert 4.0 <= fields_gb <= 6.5


class TestRun:
    def test_vacuum_sweep_csv(self, tmp_path, capsys):
        # charge cannot be zero through the ansatz, so drive a tiny real run
        outdir = tmp_path / "out"
        rc = run_cli(*with_sets(["run"], tiny_overrides(outdir)))
        assert rc == 0
        csv_path = outdir / "records.csv"
        lines = csv_path.read_text().strip().splitlines()
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert len(lines) == 1 + 3  # header + [0, 0.5, 1]
        assert (outdir / "state_alpha_1.000000.ckpt").exists()

    def test_resume_appends_without_duplicates(self, tmp_path):
        outdir = tmp_path / "out"
        rc = run_cli(*with_sets(["run"], tiny_overrides(outdir)))
        assert rc == 0
        csv_path = outdir / "records.csv"
        before = csv_path.read_text().strip().splitlines()
        rc = run_cli(
            *with_sets(
                ["run", "--resume", str(outdir / "state_alpha_0.500000.ckpt")],
                tiny_overrides(outdir),
            )
        )
        assert rc == 0
        after = csv_path.read_text().strip().splitlines()
        alphas = [float(l.split(",")[0]) for l in after[1:]]
        assert alphas == [0.0, 0.5, 1.0, 1.0]  # resumed run re-emits only > 0.5

    def test_resume_shape_mismatch_rejected(self, tmp_path, capsys):
        spec = LatticeSpec(10, 6.0 / 9)
        phi, c = vacuum(spec)
        ckpt = tmp_path / "other.ckpt"
        checkpoint_save(ckpt, 0.5, phi, c)
        rc = run_cli(
            *with_sets(
                ["run", "--resume", str(ckpt)], tiny_overrides(tmp_path / "out", n=12)
            )
        )
        assert rc == 3
        assert "does not match" in capsys.readouterr().err

    def test_numerical_failure_exit_code(self, tmp_path, capsys):
        spec = LatticeSpec(12, 6.0 / 11)
        phi, c = vacuum(spec)
        c.values[5, 5, 5] = (1e200, 0.0, 0.0)  # legal boundary, absurd interior
        ckpt = tmp_path / "hot.ckpt"
        checkpoint_save(ckpt, 0.5, phi, c)
        rc = run_cli(
            *with_sets(
                ["run", "--resume", str(ckpt)], tiny_overrides(tmp_path / "out")
            )
        )
        assert rc == 2
        assert "numerical failure" in capsys.readouterr().err

    def test_vtk_every_writes_volumes(self, tmp_path):
        outdir = tmp_path / "out"
        rc = run_cli(
            *with_sets(["run"], tiny_overrides(outdir) + ["output.vtk_every=2"])
        )
        assert rc == 0
        names = sorted(p.name for p in outdir.glob("volume_*.vtk"))
        assert names == ["volume_0000.vtk", "volume_0002.vtk"]


class TestExportVtk:
    def test_vacuum_volume_contents(self, tmp_path):
        spec = LatticeSpec(8, 0.5)
        phi, c = vacuum(spec)
        ckpt = tmp_path / "v.ckpt"
        checkpoint_save(ckpt, 0.0, phi, c)
        out = tmp_path / "v.vtk"
        assert run_cli("export-vtk", str(ckpt), str(out)) == 0
        text = out.read_text().splitlines()
        assert text[3] == "DATASET STRUCTURED_POINTS"
        assert text[4] == "DIMENSIONS 8 8 8"
        assert text[6] == f"SPACING {0.5:.17g} {0.5:.17g} {0.5:.17g}"
        # phi3 section: all ones; c_magnitude: all zeros
        i_phi3 = text.index("SCALARS phi3 double 1")
        phi3 = text[i_phi3 + 2 : i_phi3 + 2 + 8**3]
        assert all(float(v) == 1.0 for v in phi3)
        i_cm = text.index("SCALARS c_magnitude double 1")
        cmag = text[i_cm + 2 : i_cm + 2 + 8**3]
        assert all(float(v) == 0.0 for v in cmag)

    def test_point_order_is_x_fastest(self, tmp_path):
        spec = LatticeSpec(4, 1.0)
        phi, c = vacuum(spec)
        # tag one site: x-index 1, y-index 0, z-index 0 -> flat position 1
        phi.values[1, 0, 0] = (1.0, 0.0, 0.0)
        ckpt = tmp_path / "o.ckpt"
        checkpoint_save(ckpt, 0.0, phi, c)
        out = tmp_path / "o.vtk"
        run_cli("export-vtk", str(ckpt), str(out))
        text = out.read_text().splitlines()
        first_vec = text.index("VECTORS phi double") + 1
        assert [float(v) for v in text[first_vec + 1].split()] == [1.0, 0.0, 0.0]

    def test_missing_checkpoint_is_io_error(self, tmp_path, capsys):
        rc = run_cli("export-vtk", str(tmp_path / "nope.ckpt"), str(tmp_path / "o.vtk"))
        assert rc == 3

    @pytest.mark.slow
    def test_seed_isosurface_is_a_torus(self, tmp_path):
        # external mesh check: the phi3 = 0 isosurface of a charge-1 ring
        # has Euler characteristic 0
        from skimage import measure

        spec = LatticeSpec(48, 6.0 / 47)
        phi, _ = hopfion_ansatz(spec, AnsatzParams(1))
        verts, faces, _, _ = measure.marching_cubes(phi.values[..., 2], level=0.0)
        edges = set()
        for tri in faces:
            for a, b in ((0, 1), (1, 2), (2, 0)):
                e = (min(tri[a], tri[b]), max(tri[a], tri[b]))
                edges.add(e)
        euler = len(verts) - len(edges) + len(faces)
        assert euler == 0


class TestDiagnose:
    def test_vacuum_diagnostics(self, tmp_path, capsys):
        spec = LatticeSpec(10, 0.5)
        phi, c = vacuum(spec)
        ckpt = tmp_path / "d.ckpt"
        checkpoint_save(ckpt, 0.3, phi, c)
        assert run_cli("diagnose", str(ckpt)) == 0
        out = capsys.readouterr().out
        assert "derrick ratio    : undefined" in out
        assert "E_total          : 0.0000000000" in out

    def test_identity_residual_small_and_c0_instability(self, tmp_path, capsys):
        spec = LatticeSpec(24, 6.0 / 23)
        phi, c = hopfion_ansatz(spec, AnsatzParams(1))
        ckpt = tmp_path / "d.ckpt"
        checkpoint_save(ckpt, 0.0, phi, c)
        assert run_cli("diagnose", str(ckpt)) == 0
        out = capsys.readouterr().out
        residual = float(out.split("identity residual:")[1].splitlines()[0])
        assert residual <= 1e-12
        pullback = float(out.split("pullback       :")[1].splitlines()[0])
        inst = float(out.split("instability norm :")[1].splitlines()[0])
        assert inst == pytest.approx(2.0 * pullback, rel=1e-10)

    def test_corrupt_checkpoint_exit_code(self, tmp_path, capsys):
        bad = tmp_path / "bad.ckpt"
        bad.write_bytes(b"garbage")
        assert run_cli("diagnose", str(bad)) == 3


class TestPrintConfig:
    def test_effective_config_echo(self, capsys):
        assert run_cli("print-config", "--set", "lattice.n=24", "--set", "lattice.h=0.26") == 0
        out = capsys.readouterr().out
        assert "lattice.n = 24" in out
