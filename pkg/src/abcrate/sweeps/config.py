"""Sweep specifications and their on-disk form.

A sweep file is flat ``key = value`` text under ``[sweep]`` and ``[system]``
section headers. The same format is emitted as the run manifest (with an
extra, parser-ignored ``[run]`` section), so a manifest can be re-parsed
into the exact spec that produced it. Unknown keys are hard errors: a
misspelled key must never silently fall back to a default.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from ..channel import ConfigError, SeedSpec, SystemConfig

__all__ = [
    "AxisSpec",
    "ConfigFileError",
    "SweepKind",
    "SweepSpec",
    "default_spec",
    "format_config",
    "override",
    "parse_config",
]


class ConfigFileError(ValueError):
    """Malformed or inconsistent sweep file; message carries path:line."""


class SweepKind(enum.Enum):
    SNR_SWEEP = "SnrSweep"
    ANTENNA_SWEEP = "AntennaSweep"
    GRID_NK = "GridNK"
    VALIDATE = "Validate"


_INT_AXES = ("N", "K")
_SCALES = ("linear", "log")


@dataclass(frozen=True)
class AxisSpec:
    """One swept coordinate: start/stop/points on a linear or log scale."""

    name: str
    start: float
    stop: float
    points: int
    scale: str = "linear"

    def __post_init__(self):
        if self.name not in ("snr_db",) + _INT_AXES:
            raise ConfigError(f"unknown axis name {self.name!r}")
        if self.scale not in _SCALES:
            raise ConfigError(
                f"axis {self.name}: scale must be one of {_SCALES}, got {self.scale!r}"
            )
        if self.points < 2:
            raise ConfigError(
                f"axis {self.name}: a sweep needs at least 2 points, got {self.points}"
            )
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise ConfigError(f"axis {self.name}: start/stop must be finite")
        if not self.stop > self.start:
            raise ConfigError(
                f"axis {self.name}: stop must exceed start, got "
                f"[{self.start}, {self.stop}]"
            )
        if self.scale == "log" and self.start <= 0.0:
            raise ConfigError(f"axis {self.name}: log scale needs start > 0")
        self.values()  # integer axes may reject rounded grids

    def values(self) -> np.ndarray:
        if self.scale == "log":
            vals = np.geomspace(self.start, self.stop, self.points)
        else:
            vals = np.linspace(self.start, self.stop, self.points)
        if self.name in _INT_AXES:
            ints = np.rint(vals).astype(int)
            if ints[0] < 1:
                raise ConfigError(f"axis {self.name}: values must be >= 1")
            if np.any(np.diff(ints) <= 0):
                raise ConfigError(
                    f"axis {self.name}: {self.points} points round to duplicate "
                    f"integers on [{self.start}, {self.stop}]"
                )
            return ints
        return vals


_DEFAULT_AXES = {
    SweepKind.SNR_SWEEP: (AxisSpec("snr_db", 0.0, 30.0, 7, "linear"),),
    SweepKind.ANTENNA_SWEEP: (AxisSpec("N", 2, 32, 5, "log"),),
    SweepKind.GRID_NK: (AxisSpec("N", 2, 64, 6, "log"), AxisSpec("K", 1, 60, 12, "linear")),
    SweepKind.VALIDATE: (),
}

_KIND_AXIS_NAMES = {
    SweepKind.SNR_SWEEP: ("snr_db",),
    SweepKind.ANTENNA_SWEEP: ("N",),
    SweepKind.GRID_NK: ("N", "K"),
    SweepKind.VALIDATE: (),
}


@dataclass(frozen=True)
class SweepSpec:
    """Fully validated description of one run."""

    kind: SweepKind
    base: SystemConfig = field(default_factory=SystemConfig)
    axes: tuple[AxisSpec, ...] = ()
    n_samples: int = 1000
    seed: SeedSpec = SeedSpec(1234)
    crn: bool = True

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(self.axes))
        want = _KIND_AXIS_NAMES[self.kind]
        got = tuple(ax.name for ax in self.axes)
        if got != want:
            raise ConfigError(
                f"{self.kind.value} requires axes {want}, got {got}"
            )
        if self.n_samples < 2:
            raise ConfigError(f"n_samples must be >= 2, got {self.n_samples}")


def default_spec(kind: SweepKind) -> SweepSpec:
    return SweepSpec(kind=kind, axes=_DEFAULT_AXES[kind])


# ---------------------------------------------------------------------------
# parsing

_SWEEP_SCALAR_KEYS = ("kind", "n_samples", "seed", "stream_index", "crn")
_AXIS_FIELDS = ("start", "stop", "points", "scale")
_AXIS_KEY_PREFIX = {"snr_db": "snr_db", "N": "n", "K": "k"}
_SYSTEM_KEYS = ("M", "N", "K", "alpha", "P", "noise_var", "var1", "varRB", "varBC")
_SYSTEM_INT_KEYS = ("M", "N", "K")


def _fail(path, lineno, msg):
    where = f"{path}:{lineno}: " if lineno else f"{path}: "
    raise ConfigFileError(where + msg)


def _scan(path, text):
    """Section -> {key: (raw value, line number)}, with line-located errors."""
    sections: dict[str, dict[str, tuple[str, int]]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip()
            if current not in ("sweep", "system", "run"):
                _fail(path, lineno, f"unknown section [{current}]")
            if current in sections:
                _fail(path, lineno, f"duplicate section [{current}]")
            sections[current] = {}
            continue
        if current is None:
            _fail(path, lineno, "key outside any [section] header")
        if "=" not in line:
            _fail(path, lineno, f"expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not key or not value:
            _fail(path, lineno, f"expected 'key = value', got {line!r}")
        if key in sections[current]:
            _fail(path, lineno, f"duplicate key {key!r} in [{current}]")
        sections[current][key] = (value, lineno)
    return sections


def _convert(path, key, raw, lineno, caster, what):
    try:
        return caster(raw)
    except ValueError:
        _fail(path, lineno, f"{key}: expected {what}, got {raw!r}")


def _as_bool(raw: str) -> bool:
    if raw.lower() in ("true", "yes", "1"):
        return True
    if raw.lower() in ("false", "no", "0"):
        return False
    raise ValueError(raw)


def parse_config(path) -> SweepSpec:
    """Read and validate a sweep file (or a previously emitted manifest)."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigFileError(f"{path}: cannot read config: {exc}") from exc

    sections = _scan(path, text)
    sweep = dict(sections.get("sweep", {}))
    system = dict(sections.get("system", {}))
    # [run] is emitted metadata; ignored so manifests re-parse to their spec

    if "kind" not in sweep:
        _fail(path, 0, "missing required key 'kind' in [sweep]")
    kind_raw, kind_line = sweep.pop("kind")
    try:
        kind = SweepKind(kind_raw)
    except ValueError:
        names = ", ".join(k.value for k in SweepKind)
        _fail(path, kind_line, f"kind: expected one of {names}, got {kind_raw!r}")

    axis_prefixes = {
        _AXIS_KEY_PREFIX[name]: name for name in _KIND_AXIS_NAMES[kind]
    }
    allowed = set(_SWEEP_SCALAR_KEYS) | {
        f"{p}_{f}" for p in axis_prefixes for f in _AXIS_FIELDS
    }
    for key, (_, lineno) in sweep.items():
        if key not in allowed:
            _fail(
                path, lineno,
                f"unknown key {key!r} in [sweep] for kind {kind.value}",
            )
    for key, (_, lineno) in system.items():
        if key not in _SYSTEM_KEYS:
            _fail(path, lineno, f"unknown key {key!r} in [system]")

    def sweep_val(key, caster, what, default):
        if key not in sweep:
            return default
        raw, lineno = sweep[key]
        return _convert(path, key, raw, lineno, caster, what)

    n_samples = sweep_val("n_samples", int, "an integer", 1000)
    master = sweep_val("seed", int, "an integer", 1234)
    stream = sweep_val("stream_index", int, "an integer", 0)
    crn = sweep_val("crn", _as_bool, "true or false", True)

    axes = []
    for name in _KIND_AXIS_NAMES[kind]:
        prefix = _AXIS_KEY_PREFIX[name]
        default = next(ax for ax in _DEFAULT_AXES[kind] if ax.name == name)
        fields = {}
        for f, caster, what in (
            ("start", float, "a number"),
            ("stop", float, "a number"),
            ("points", int, "an integer"),
        ):
            key = f"{prefix}_{f}"
            if key in sweep:
                raw, lineno = sweep[key]
                fields[f] = _convert(path, key, raw, lineno, caster, what)
            else:
                fields[f] = getattr(default, f)
        key = f"{prefix}_scale"
        if key in sweep:
            fields["scale"], _ = sweep[key]
        else:
            fields["scale"] = default.scale
        axes.append((name, fields))

    cfg_kwargs = {}
    for key in _SYSTEM_KEYS:
        if key in system:
            raw, lineno = system[key]
            caster = int if key in _SYSTEM_INT_KEYS else float
            what = "an integer" if key in _SYSTEM_INT_KEYS else "a number"
            cfg_kwargs[key] = _convert(path, key, raw, lineno, caster, what)

    try:
        base = SystemConfig(**cfg_kwargs)
        seed = SeedSpec(master, stream)
        axis_specs = tuple(AxisSpec(name, **fields) for name, fields in axes)
        return SweepSpec(
            kind=kind, base=base, axes=axis_specs,
            n_samples=n_samples, seed=seed, crn=crn,
        )
    except ConfigError as exc:
        raise ConfigFileError(f"{path}: {exc}") from exc


# ---------------------------------------------------------------------------
# emission

def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def format_config(spec: SweepSpec, run_info: dict | None = None) -> str:
    """Render a spec (plus optional [run] metadata) as a config/manifest."""
    lines = ["[sweep]", f"kind = {spec.kind.value}"]
    lines.append(f"n_samples = {spec.n_samples}")
    lines.append(f"seed = {spec.seed.master_seed}")
    lines.append(f"stream_index = {spec.seed.stream_index}")
    lines.append(f"crn = {_fmt(spec.crn)}")
    for ax in spec.axes:
        prefix = _AXIS_KEY_PREFIX[ax.name]
        lines.append(f"{prefix}_start = {_fmt(ax.start)}")
        lines.append(f"{prefix}_stop = {_fmt(ax.stop)}")
        lines.append(f"{prefix}_points = {ax.points}")
        lines.append(f"{prefix}_scale = {ax.scale}")
    lines.append("")
    lines.append("[system]")
    for key in _SYSTEM_KEYS:
        lines.append(f"{key} = {_fmt(getattr(spec.base, key))}")
    if run_info:
        lines.append("")
        lines.append("[run]")
        for key, value in run_info.items():
            lines.append(f"{key} = {_fmt(value)}")
    return "\n".join(lines) + "\n"


def override(spec: SweepSpec, *, seed=None, n_samples=None, crn=None) -> SweepSpec:
    """Apply command-line overrides on top of a parsed or default spec."""
    if seed is not None:
        spec = replace(spec, seed=SeedSpec(seed, spec.seed.stream_index))
    if n_samples is not None:
        spec = replace(spec, n_samples=n_samples)
    if crn is not None:
        spec = replace(spec, crn=crn)
    return spec
