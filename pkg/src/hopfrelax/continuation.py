"""Sweep the coupling from 0 to 1, re-minimizing at each step.

Each schedule point is minimized starting from the previous minimizer, so
the sweep follows a single branch of minimizers. Every step emits a
ContinuationRecord with the full diagnostic set and, when a checkpoint
directory is given, a binary snapshot the sweep can be resumed from
bit-exactly. Non-convergence at a step is recorded and the sweep moves on;
only a non-finite energy aborts.
"""

from __future__ import annotations

import struct
import zlib
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .diagnostics import core_curve, derrick_ratio, hopf_charge, instability_norm
from .energy import EnergyBreakdown
from .lattice import DirectorField, LatticeSpec, OneFormField
from .optimizer import MinimizeResult, OptimizerConfig, minimize

__all__ = [
    "ContinuationSchedule",
    "ContinuationRecord",
    "CheckpointError",
    "default_schedule",
    "run",
    "checkpoint_save",
    "checkpoint_load",
    "checkpoint_path",
]


class CheckpointError(Exception):
    """Unusable checkpoint file: bad magic, truncation, or corruption."""


@dataclass(frozen=True)
class ContinuationSchedule:
    """Strictly increasing coupling values from 0 to 1 inclusive."""

    alphas: tuple

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
        a = self.alphas
        if len(a) < 2:
            raise ValueError("schedule needs at least the two endpoints")
        if a[0] != 0.0 or a[-1] != 1.0:
            raise ValueError("schedule must start at 0 and end at 1")
        if any(y <= x for x, y in zip(a, a[1:])):
            raise ValueError("schedule must be strictly increasing")

    def __len__(self):
        return len(self.alphas)

    def __iter__(self):
        return iter(self.alphas)


def default_schedule(
    coarse_step: float = 0.02,
    refine_threshold: float = 0.9,
    fine_step: float = 0.005,
) -> ContinuationSchedule:
    """Uniform coarse spacing up to the threshold, then fine spacing to 1.

    The dense tail resolves the regime where the minimizer degenerates
    quickly as full coupling is approached.
    """
    if not 0.0 < fine_step <= coarse_step:
        raise ValueError("need 0 < fine_step <= coarse_step")
    if not 0.0 < refine_threshold < 1.0:
        raise ValueError("refine_threshold must lie in (0, 1)")
    n_coarse = int(np.floor(refine_threshold / coarse_step + 1e-9))
    alphas = [i * coarse_step for i in range(n_coarse + 1)]
    last = alphas[-1]
    n_fine = int(np.ceil((1.0 - last) / fine_step - 1e-9))
    alphas.extend(last + j * fine_step for j in range(1, n_fine))
    alphas.append(1.0)
    return ContinuationSchedule(tuple(alphas))


@dataclass(frozen=True)
class ContinuationRecord:
    alpha: float
    energy: EnergyBreakdown
    hopf_charge: float
    core_length: float
    core_reliable: bool
    derrick_ratio: float  # nan when the energy is not positive
    instability_norm: float
    iterations: int
    converged: bool


def _measure(alpha: float, result: MinimizeResult) -> ContinuationRecord:
    phi, c = result.phi, result.c
    curve = core_curve(phi)
    terms = result.energy
    ratio = derrick_ratio(terms) if terms.total > 0.0 else float("nan")
    return ContinuationRecord(
        alpha=alpha,
        energy=terms,
        hopf_charge=hopf_charge(phi),
        core_length=curve.length,
        core_reliable=curve.reliable,
        derrick_ratio=ratio,
        instability_norm=instability_norm(phi, c),
        iterations=result.iterations,
        converged=result.converged,
    )


def checkpoint_path(directory, alpha: float) -> Path:
    return Path(directory) / f"state_alpha_{alpha:.6f}.ckpt"


def run(
    initial: tuple[DirectorField, OneFormField],
    schedule: ContinuationSchedule,
    opt: OptimizerConfig | None = None,
    sink=None,
    checkpoint_dir=None,
    resume_alpha: float | None = None,
    state_callback=None,
    progress_callback=None,
) -> list[ContinuationRecord]:
    """Minimize at every schedule point, warm-starting from the previous
    minimizer. Returns one record per processed point.

    resume_alpha skips every point <= that value (the initial fields are
    then expected to be the minimizer saved at resume_alpha). sink, if
    given, consumes each record as soon as it exists; state_callback
    additionally receives (alpha, phi, c, record) for exporters.
    """
    opt = opt or OptimizerConfig()
    phi, c = initial
    records: list[ContinuationRecord] = []
    for alpha in schedule:
        if resume_alpha is not None and alpha <= resume_alpha + 1e-12:
            continue
        result = minimize(phi, c, alpha, opt, callback=progress_callback)
        phi, c = result.phi, result.c
        record = _measure(alpha, result)
        records.append(record)
        if checkpoint_dir is not None:
            checkpoint_save(checkpoint_path(checkpoint_dir, alpha), alpha, phi, c)
        if sink is not None:
            sink(record)
        if state_callback is not None:
            state_callback(alpha, phi, c, record)
    return records


# ---------------------------------------------------------------------------
# checkpoint format: fixed little-endian layout, raw site-major float64 blocks
#
#   magic "HRLXCKPT" | u32 version | u32 n_points | i32 q_intent
#   | f64 spacing | f64 alpha | 3 x f64 origin | 3 x f64 vacuum
#   | u32 crc32(payload) | phi block | c block

_MAGIC = b"HRLXCKPT"
_VERSION = 1
_HEADER = struct.Struct("<8sIi d d 3d 3d I")


def checkpoint_save(path, alpha: float, phi: DirectorField, c: OneFormField, q_intent: int = 0) -> None:
    spec = phi.lattice
    phi_bytes = np.ascontiguousarray(phi.values, dtype="<f8").tobytes()
    c_bytes = np.ascontiguousarray(c.values, dtype="<f8").tobytes()
    crc = zlib.crc32(c_bytes, zlib.crc32(phi_bytes))
    header = _MAGIC + struct.pack(
        "<Ii", _VERSION, spec.n_points
    ) + struct.pack(
        "<i", q_intent
    ) + struct.pack(
        "<dd", spec.spacing, alpha
    ) + struct.pack("<3d", *spec.origin) + struct.pack(
        "<3d", *phi.vacuum
    ) + struct.pack("<I", crc)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(phi_bytes)
        fh.write(c_bytes)


@dataclass
class Checkpoint:
    alpha: float
    phi: DirectorField
    c: OneFormField
    lattice: LatticeSpec
    q_intent: int
    version: int


_HEADER_SIZE = 8 + 4 + 4 + 4 + 8 + 8 + 24 + 24 + 4


def checkpoint_load(path) -> Checkpoint:
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER_SIZE:
        raise CheckpointError(
            f"truncated header: {len(raw)} bytes, need {_HEADER_SIZE}"
        )
    magic = raw[:8]
    if magic != _MAGIC:
        raise CheckpointError(f"bad magic {magic!r} at offset 0")
    off = 8
    version, n_points = struct.unpack_from("<Ii", raw, off)
    off += 8
    (q_intent,) = struct.unpack_from("<i", raw, off)
    off += 4
    spacing, alpha = struct.unpack_from("<dd", raw, off)
    off += 16
    origin = struct.unpack_from("<3d", raw, off)
    off += 24
    vacuum = np.array(struct.unpack_from("<3d", raw, off))
    off += 24
    (crc_stored,) = struct.unpack_from("<I", raw, off)
    off += 4
    if version != _VERSION:
        raise CheckpointError(f"unsupported version {version}")

    block = n_points**3 * 3 * 8
    expected = _HEADER_SIZE + 2 * block
    if len(raw) != expected:
        raise CheckpointError(
            f"truncated payload at byte {len(raw)}, expected {expected}"
        )
    payload = raw[_HEADER_SIZE:]
    crc = zlib.crc32(payload)
    if crc != crc_stored:
        raise CheckpointError(
            f"payload checksum mismatch at offset {_HEADER_SIZE}: "
            f"stored {crc_stored:#010x}, computed {crc:#010x}"
        )
    spec = LatticeSpec(n_points, spacing, origin)
    shape = spec.shape + (3,)
    phi_vals = np.frombuffer(payload[:block], dtype="<f8").reshape(shape).copy()
    c_vals = np.frombuffer(payload[block:], dtype="<f8").reshape(shape).copy()
    phi = DirectorField(spec, phi_vals, vacuum)
    c = OneFormField(spec, c_vals)
    return Checkpoint(alpha, phi, c, spec, q_intent, version)
