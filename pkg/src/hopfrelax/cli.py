"""Command-line driver: seed a configuration, sweep the coupling, export
volumes, or inspect a saved state.

Subcommands
    init        build the seed fields, report diagnostics, write a checkpoint
    run         execute the full coupling sweep with CSV / checkpoint output
    export-vtk  dump a checkpoint as a legacy-ASCII structured-points volume
    diagnose    print the diagnostic suite for one checkpoint

Exit codes: 0 success, 1 configuration error, 2 numerical failure,
3 I/O or checkpoint error.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import numpy as np

from .ansatz import hopfion_ansatz
from .config import ConfigError, RunConfig, load_config, serialize_config
from .continuation import (
    CheckpointError,
    ContinuationRecord,
    checkpoint_load,
    checkpoint_save,
    run as run_continuation,
)
from .diagnostics import (
    core_curve,
    derrick_ratio,
    hopf_charge,
    instability_norm,
)
from .energy import evaluate, evaluate_decomposed
from .optimizer import NumericalError
from .vtkio import write_structured_points

CSV_COLUMNS = [
    "alpha",
    "E_total",
    "E_dirichlet",
    "E_pullback",
    "E_cross",
    "E_dc_sq",
    "E_c_sq",
    "hopf_charge",
    "core_length",
    "core_reliable",
    "derrick_ratio",
    "instability_norm",
    "iterations",
    "converged",
]


def record_to_row(r: ContinuationRecord) -> list[str]:
    def num(x):
        return format(float(x), ".17g")

    return [
        num(r.alpha),
        num(r.energy.total),
        num(r.energy.dirichlet),
        num(r.energy.pullback),
        num(r.energy.cross),
        num(r.energy.dc_sq),
        num(r.energy.c_sq),
        num(r.hopf_charge),
        num(r.core_length),
        "true" if r.core_reliable else "false",
        num(r.derrick_ratio),
        num(r.instability_norm),
        str(r.iterations),
        "true" if r.converged else "false",
    ]


def _field_bytes(n: int) -> int:
    return n**3 * 3 * 8


def _memory_estimate(n: int) -> str:
    fields = 2 * _field_bytes(n)
    # optimizer history holds 2 * depth flattened copies of both fields
    work = (2 * 10 + 6) * 2 * _field_bytes(n)
    return (
        f"memory estimate for N={n}: fields {fields / 1e9:.2f} GB, "
        f"peak with optimizer history about {(fields + work) / 1e9:.1f} GB"
    )


def cmd_init(cfg: RunConfig, dry_run: bool = False) -> int:
    cfg.validate()
    spec = cfg.lattice_spec()
    print(_memory_estimate(cfg.lattice.n))
    if dry_run:
        print("dry run: no fields generated")
        return 0
    outdir = Path(cfg.output.directory)
    outdir.mkdir(parents=True, exist_ok=True)
    phi, c = hopfion_ansatz(spec, cfg.ansatz_params())
    breakdown = evaluate(phi, c, 0.0)
    charge = hopf_charge(phi)
    curve = core_curve(phi)
    path = outdir / "init.ckpt"
    checkpoint_save(path, 0.0, phi, c, q_intent=cfg.ansatz.charge)
    print(f"seed charge     : {charge:.6f}")
    print(f"seed energy     : {breakdown.total:.8f}")
    print(f"seed core length: {curve.length:.6f} (closed={curve.closed})")
    print(f"checkpoint      : {path}")
    return 0


def cmd_run(cfg: RunConfig, resume: str | None = None) -> int:
    cfg.validate()
    spec = cfg.lattice_spec()
    outdir = Path(cfg.output.directory)
    outdir.mkdir(parents=True, exist_ok=True)
    csv_path = Path(cfg.output.csv_path)
    if not csv_path.is_absolute():
        csv_path = outdir / csv_path

    resume_alpha = None
    if resume is not None:
        ckpt = checkpoint_load(resume)
        if ckpt.lattice != spec:
            raise CheckpointError(
                f"checkpoint lattice {ckpt.lattice.n_points}^3 (h={ckpt.lattice.spacing}) "
                f"does not match configured {spec.n_points}^3 (h={spec.spacing})"
            )
        phi, c = ckpt.phi, ckpt.c
        resume_alpha = ckpt.alpha
        print(f"resuming after alpha={resume_alpha:.6f} from {resume}")
    else:
        phi, c = hopfion_ansatz(spec, cfg.ansatz_params())

    fresh = resume is None or not csv_path.exists()
    csv_file = open(csv_path, "w" if fresh else "a", newline="", encoding="utf-8")
    writer = csv.writer(csv_file)
    if fresh:
        writer.writerow(CSV_COLUMNS)
        csv_file.flush()

    schedule = cfg.continuation_schedule()
    points = list(schedule)
    vtk_every = cfg.output.vtk_every
    state = {"step": 0}

    def sink(record: ContinuationRecord):
        writer.writerow(record_to_row(record))
        csv_file.flush()
        print(
            f"alpha={record.alpha:.4f}: E={record.energy.total:.6f} "
            f"Q={record.hopf_charge:+.4f} core={record.core_length:.4f}"
            f"{'' if record.core_reliable else ' (unreliable)'} "
            f"D={record.derrick_ratio:+.5f} it={record.iterations}"
            f"{'' if record.converged else ' NOT CONVERGED'}",
            flush=True,
        )

    def state_callback(alpha, phi_state, c_state, record):
        idx = state["step"]
        state["step"] += 1
        if vtk_every > 0 and idx % vtk_every == 0:
            vtk_path = outdir / f"volume_{idx:04d}.vtk"
            write_structured_points(
                vtk_path, spec, phi_state.values, c_state.values,
                title=f"state at alpha={alpha:.6f}",
            )

    print(f"sweep over {len(points)} coupling values on {spec.n_points}^3, h={spec.spacing:.6g}")
    try:
        run_continuation(
            (phi, c),
            schedule,
            cfg.optimizer_config(),
            sink=sink,
            checkpoint_dir=outdir,
            resume_alpha=resume_alpha,
            state_callback=state_callback,
        )
    finally:
        csv_file.close()
    print(f"records: {csv_path}")
    return 0


def cmd_export_vtk(checkpoint: str, out_path: str) -> int:
    ckpt = checkpoint_load(checkpoint)
    write_structured_points(
        out_path,
        ckpt.lattice,
        ckpt.phi.values,
        ckpt.c.values,
        title=f"state at alpha={ckpt.alpha:.6f}",
    )
    print(f"wrote {out_path}")
    return 0


def cmd_diagnose(checkpoint: str) -> int:
    ckpt = checkpoint_load(checkpoint)
    phi, c, alpha = ckpt.phi, ckpt.c, ckpt.alpha
    breakdown = evaluate(phi, c, alpha)
    decomposed = evaluate_decomposed(phi, c, alpha)
    residual = abs(sum(decomposed) - breakdown.total) / max(abs(breakdown.total), 1e-300)
    print(f"alpha            : {alpha:.6f}")
    print(f"lattice          : {ckpt.lattice.n_points}^3, h={ckpt.lattice.spacing:.6g}")
    print(f"E_total          : {breakdown.total:.10f}")
    print(f"  dirichlet      : {breakdown.dirichlet:.10f}")
    print(f"  pullback       : {breakdown.pullback:.10f}")
    print(f"  cross          : {breakdown.cross:.10f}")
    print(f"  dc_sq          : {breakdown.dc_sq:.10f}")
    print(f"  c_sq           : {breakdown.c_sq:.10f}")
    print(f"identity residual: {residual:.3e}")
    print(f"hopf charge      : {hopf_charge(phi):.6f}")
    curve = core_curve(phi)
    print(
        f"core length      : {curve.length:.6f} "
        f"(closed={curve.closed}, reliable={curve.reliable})"
    )
    if breakdown.total > 0.0:
        print(f"derrick ratio    : {derrick_ratio(breakdown):+.6f}")
    else:
        print("derrick ratio    : undefined (zero energy)")
    print(f"instability norm : {instability_norm(phi, c):.10f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hopfrelax",
        description="Relax hopfion solitons under a tunable supercurrent coupling.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config_options(p):
        p.add_argument("--config", help="flat key=value configuration file")
        p.add_argument(
            "--set",
            dest="overrides",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="override a configuration key (repeatable; wins over the file)",
        )

    p_init = sub.add_parser("init", help="generate the seed state and checkpoint")
    add_config_options(p_init)
    p_init.add_argument(
        "--dry-run",
        action="store_true",
        help="validate and print the memory estimate without allocating fields",
    )

    p_run = sub.add_parser("run", help="execute the coupling sweep")
    add_config_options(p_run)
    p_run.add_argument("--resume", help="checkpoint to continue from")

    p_vtk = sub.add_parser("export-vtk", help="write a checkpoint as a VTK volume")
    p_vtk.add_argument("checkpoint")
    p_vtk.add_argument("out_path")

    p_diag = sub.add_parser("diagnose", help="print diagnostics for a checkpoint")
    p_diag.add_argument("checkpoint")

    p_cfg = sub.add_parser("print-config", help="echo the effective configuration")
    add_config_options(p_cfg)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "init":
            cfg = load_config(args.config, args.overrides)
            return cmd_init(cfg, dry_run=args.dry_run)
        if args.command == "run":
            cfg = load_config(args.config, args.overrides)
            return cmd_run(cfg, resume=args.resume)
        if args.command == "export-vtk":
            return cmd_export_vtk(args.checkpoint, args.out_path)
        if args.command == "diagnose":
            return cmd_diagnose(args.checkpoint)
        if args.command == "print-config":
            cfg = load_config(args.config, args.overrides)
            cfg.validate()
            sys.stdout.write(serialize_config(cfg))
            return 0
        parser.error(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except (CheckpointError, OSError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
