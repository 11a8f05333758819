"""Flat key=value run configuration with dotted keys.

The file format is one assignment per line (lattice.n = 64), '#' comments,
blank lines ignored. Command-line overrides use the same dotted keys and
win over file values; the serialized form round-trips losslessly.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, fields

from .ansatz import AnsatzParams
from .continuation import ContinuationSchedule, default_schedule
from .lattice import LatticeSpec
from .optimizer import OptimizerConfig

__all__ = ["ConfigError", "RunConfig", "parse_config", "serialize_config", "load_config"]

THREADS_ENV_VAR = "HOPFRELAX_THREADS"


class ConfigError(ValueError):
    """Bad key, bad value, or violated constraint; message names the key."""


@dataclass
class LatticeSection:
    n: int = 64
    h: float = 0.09375


@dataclass
class AnsatzSection:
    charge: int = 1
    core_radius: float = 1.0
    sharpness: float = 2.0


@dataclass
class OptimizerSection:
    memory_depth: int = 10
    tolerance_factor: float = 0.01
    max_iterations: int = 50000
    max_step: float = 0.2


@dataclass
class ScheduleSection:
    coarse_step: float = 0.02
    refine_threshold: float = 0.9
    fine_step: float = 0.005


@dataclass
class OutputSection:
    directory: str = "out"
    vtk_every: int = 0
    csv_path: str = "records.csv"


@dataclass
class RunConfig:
    lattice: LatticeSection = field(default_factory=LatticeSection)
    ansatz: AnsatzSection = field(default_factory=AnsatzSection)
    optimizer: OptimizerSection = field(default_factory=OptimizerSection)
    schedule: ScheduleSection = field(default_factory=ScheduleSection)
    output: OutputSection = field(default_factory=OutputSection)
    threads: int = 0  # 0 = automatic; fixed-order reductions make results
    # independent of the thread count either way

    def lattice_spec(self) -> LatticeSpec:
        try:
            return LatticeSpec(self.lattice.n, self.lattice.h)
        except ValueError as exc:
            raise ConfigError(f"lattice.n / lattice.h: {exc}") from exc

    def ansatz_params(self) -> AnsatzParams:
        return AnsatzParams(
            self.ansatz.charge, self.ansatz.core_radius, self.ansatz.sharpness
        )

    def optimizer_config(self) -> OptimizerConfig:
        try:
            return OptimizerConfig(
                memory_depth=self.optimizer.memory_depth,
                grad_tolerance_factor=self.optimizer.tolerance_factor,
                max_iterations=self.optimizer.max_iterations,
                max_step=self.optimizer.max_step,
            )
        except ValueError as exc:
            raise ConfigError(f"optimizer.*: {exc}") from exc

    def continuation_schedule(self) -> ContinuationSchedule:
        try:
            return default_schedule(
                self.schedule.coarse_step,
                self.schedule.refine_threshold,
                self.schedule.fine_step,
            )
        except ValueError as exc:
            raise ConfigError(f"schedule.*: {exc}") from exc

    def resolved_threads(self) -> int:
        env = os.environ.get(THREADS_ENV_VAR)
        if env:
            try:
                value = int(env)
            except ValueError as exc:
                raise ConfigError(f"{THREADS_ENV_VAR}: not an integer: {env!r}") from exc
        else:
            value = self.threads
        if value == 0:
            value = os.cpu_count() or 1
        if value < 1:
            raise ConfigError(f"threads: must be >= 1 (or 0 for auto), got {value}")
        return value

    def validate(self) -> None:
        self.lattice_spec()
        self.optimizer_config()
        self.continuation_schedule()
        if self.ansatz.charge == 0:
            raise ConfigError("ansatz.charge: must be nonzero")
        if self.ansatz.core_radius <= 0 or self.ansatz.sharpness <= 0:
            raise ConfigError("ansatz.core_radius / ansatz.sharpness: must be positive")
        edge = (self.lattice.n - 1) * self.lattice.h
        if self.ansatz.core_radius > edge / 4:
            raise ConfigError(
                f"ansatz.core_radius: {self.ansatz.core_radius} exceeds a quarter "
                f"of the box edge {edge:.4g}"
            )
        if self.output.vtk_every < 0:
            raise ConfigError("output.vtk_every: must be >= 0")
        if self.threads < 0:
            raise ConfigError("threads: must be >= 0 (0 = auto)")


_SECTIONS = {
    "lattice": LatticeSection,
    "ansatz": AnsatzSection,
    "optimizer": OptimizerSection,
    "schedule": ScheduleSection,
    "output": OutputSection,
}


def _known_keys() -> dict[str, type]:
    keys: dict[str, type] = {"threads": int}
    for section, cls in _SECTIONS.items():
        for f in fields(cls):
            keys[f"{section}.{f.name}"] = f.type if isinstance(f.type, type) else type(
                getattr(cls(), f.name)
            )
    return keys


def _coerce(key: str, text: str, target: type):
    text = text.strip()
    try:
        if target is int:
            return int(text)
        if target is float:
            return float(text)
        return text
    except ValueError as exc:
        raise ConfigError(f"{key}: cannot parse {text!r} as {target.__name__}") from exc


def _assign(cfg: RunConfig, key: str, raw_value: str) -> None:
    known = _known_keys()
    if key not in known:
        raise ConfigError(f"unknown configuration key {key!r}")
    value = _coerce(key, raw_value, known[key])
    if key == "threads":
        cfg.threads = value
        return
    section, name = key.split(".", 1)
    setattr(getattr(cfg, section), name, value)


def parse_config(text: str, overrides: list[str] | None = None) -> RunConfig:
    """Build a RunConfig from file text plus optional 'key=value' overrides."""
    cfg = RunConfig()
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected key = value, got {line!r}")
        key, _, value = stripped.partition("=")
        _assign(cfg, key.strip(), value)
    for item in overrides or []:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not of the form key=value")
        key, _, value = item.partition("=")
        _assign(cfg, key.strip(), value)
    return cfg


def load_config(path, overrides: list[str] | None = None) -> RunConfig:
    if path is None:
        cfg = RunConfig()
        for item in overrides or []:
            if "=" not in item:
                raise ConfigError(f"override {item!r} is not of the form key=value")
            key, _, value = item.partition("=")
            _assign(cfg, key.strip(), value)
        return cfg
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read(), overrides)


def serialize_config(cfg: RunConfig) -> str:
    """One sorted key = value line per setting; parses back to equality."""
    lines = []
    for section, _ in sorted(_SECTIONS.items()):
        obj = getattr(cfg, section)
        for f in sorted(fields(obj), key=lambda f: f.name):
            value = getattr(obj, f.name)
            if isinstance(value, float):
                text = repr(value)
            else:
                text = str(value)
            lines.append(f"{section}.{f.name} = {text}")
    lines.append(f"threads = {cfg.threads}")
    return "\n".join(lines) + "\n"
