"""Run configuration: strict YAML parsing, defaults, hashing, round-trip.

The schema is a nested key-value document; unknown keys are rejected with
their full path, duplicate keys are a parse error, and hypothesis
violations (parameters outside the theory's regime) attach warnings
without failing the parse.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field, fields, replace

import yaml

from .integrator import StepperConfig
from .params import alpha_validity_interval, make_params
from .profiles import InitialProfile


class ConfigError(Exception):
    """Configuration syntax or semantic error, with location when known."""


@dataclass(frozen=True)
class ModelConfig:
    d: int = 1
    alpha: float = 0.8
    s: float = 0.8
    a: float = 1.0


@dataclass(frozen=True)
class GridConfig:
    n: int = 128
    length: float = 32.0


@dataclass(frozen=True)
class ProfileConfig:
    kind: str = "gaussian"
    amplitude: complex = 1.0 + 0.0j
    width: float = 2.0
    power: float = 2.0
    mode: tuple[int, ...] = (1,)
    radius: float = 4.0
    truncation_tol: float = 1e-8

    def __post_init__(self) -> None:
        object.__setattr__(self, "amplitude", complex(self.amplitude))
        mode = self.mode if isinstance(self.mode, tuple) else tuple(self.mode)
        object.__setattr__(self, "mode", mode)


@dataclass(frozen=True)
class OutputConfig:
    timeseries: str = "timeseries.csv"
    sweep: str = "sweep.jsonl"
    plot_x: str = ""
    plot_y: str = ""
    plot_path: str = ""
    plot_svg: str = ""


@dataclass(frozen=True)
class SweepConfig:
    a_values: tuple[float, ...] = (0.5, 1.0, 2.0, 4.0)


@dataclass(frozen=True)
class ScatteringConfig:
    t0_values: tuple[float, ...] = (2.0, 4.0, 8.0)
    horizon_factor: float = 2.0
    tolerance: float = 1e-2


@dataclass(frozen=True)
class GNEstimateConfig:
    samples: int = 200
    seed: int = 7
    heldout: int = 100
    heldout_seed: int = 11
    refine: bool = True


@dataclass(frozen=True)
class VerifyConfig:
    refinements: int = 3


@dataclass(frozen=True)
class ThresholdConfig:
    scale_lo: float = 1e-2
    scale_hi: float = 10.0
    budget: int = 16


@dataclass(frozen=True)
class RunConfig:
    model: ModelConfig = field(default_factory=ModelConfig)
    grid: GridConfig = field(default_factory=GridConfig)
    profile: ProfileConfig = field(default_factory=ProfileConfig)
    stepper: StepperConfig = field(
        default_factory=lambda: StepperConfig(dt=0.01, t_end=2.0)
    )
    output: OutputConfig = field(default_factory=OutputConfig)
    sweep: SweepConfig = field(default_factory=SweepConfig)
    scattering: ScatteringConfig = field(default_factory=ScatteringConfig)
    gn: GNEstimateConfig = field(default_factory=GNEstimateConfig)
    verify: VerifyConfig = field(default_factory=VerifyConfig)
    threshold: ThresholdConfig = field(default_factory=ThresholdConfig)
    warnings: tuple[str, ...] = ()


_SECTION_TYPES = {
    "model": ModelConfig,
    "grid": GridConfig,
    "profile": ProfileConfig,
    "stepper": StepperConfig,
    "output": OutputConfig,
    "sweep": SweepConfig,
    "scattering": ScatteringConfig,
    "gn": GNEstimateConfig,
    "verify": VerifyConfig,
    "threshold": ThresholdConfig,
}


class _StrictLoader(yaml.SafeLoader):
    pass


def _strict_mapping(loader, node, deep=False):
    mapping = {}
    for key_node, value_node in node.value:
        key = loader.construct_object(key_node, deep=deep)
        if key in mapping:
            mark = key_node.start_mark
            raise ConfigError(
                f"duplicate key '{key}' at line {mark.line + 1}, column {mark.column + 1}"
            )
        mapping[key] = loader.construct_object(value_node, deep=deep)
    return mapping


_StrictLoader.add_constructor(
    yaml.resolver.BaseResolver.DEFAULT_MAPPING_TAG, _strict_mapping
)


def _coerce(value, target_type, path: str):
    if target_type is complex:
        if isinstance(value, (int, float)):
            return complex(value)
        if isinstance(value, (list, tuple)) and len(value) == 2:
            return complex(float(value[0]), float(value[1]))
        raise ConfigError(f"key '{path}': expected number or [re, im], got {value!r}")
    if target_type is bool:
        if isinstance(value, bool):
            return value
        raise ConfigError(f"key '{path}': expected true/false, got {value!r}")
    if target_type is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"key '{path}': expected integer, got {value!r}")
        return value
    if target_type is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"key '{path}': expected number, got {value!r}")
        return float(value)
    if target_type is str:
        if not isinstance(value, str):
            raise ConfigError(f"key '{path}': expected string, got {value!r}")
        return value
    raise ConfigError(f"key '{path}': unsupported value {value!r}")


def _coerce_field(value, f, path: str):
    t = f.type
    if t in ("tuple[float, ...]", "tuple[int, ...]"):
        elem = float if "float" in t else int
        if not isinstance(value, (list, tuple)):
            raise ConfigError(f"key '{path}': expected a list, got {value!r}")
        return tuple(_coerce(v, elem, f"{path}[{i}]") for i, v in enumerate(value))
    mapping = {"int": int, "float": float, "str": str, "bool": bool, "complex": complex}
    if t in mapping:
        return _coerce(value, mapping[t], path)
    raise ConfigError(f"key '{path}': unsupported schema type {t}")


def _build_section(default_instance, data: dict, section: str):
    known = {f.name: f for f in fields(default_instance)}
    kwargs = {}
    for key, value in data.items():
        if key not in known:
            raise ConfigError(f"unknown key '{section}.{key}'")
        kwargs[key] = _coerce_field(value, known[key], f"{section}.{key}")
    try:
        return replace(default_instance, **kwargs)
    except ValueError as exc:
        raise ConfigError(f"section '{section}': {exc}") from exc


def _hypothesis_warnings(cfg: RunConfig) -> tuple[str, ...]:
    notes = []
    m = cfg.model
    lo, hi = alpha_validity_interval(m.d)
    if not lo < m.alpha < hi:
        notes.append(
            f"global-existence hypotheses not met: alpha={m.alpha} outside "
            f"({lo:.6g}, {hi:.6g}) for d={m.d}; run is exploratory"
        )
    if m.s < m.alpha and m.s + m.alpha < 1.0:
        notes.append(
            f"small-mass hypotheses not met: s={m.s} < alpha={m.alpha} "
            f"but s+alpha={m.s + m.alpha:.6g} < 1"
        )
    if m.a == 0.0:
        notes.append("a=0: undamped equation, dissipation identities degenerate")
    return tuple(notes)


def parse_config(text: str) -> RunConfig:
    """Parse a YAML document into a fully-defaulted RunConfig.

    Raises ConfigError with line/column on syntax problems, with the key
    path on semantic ones; attaches non-fatal hypothesis warnings.
    """
    try:
        data = yaml.load(text, Loader=_StrictLoader)
    except ConfigError:
        raise
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark
        where = f" at line {mark.line + 1}, column {mark.column + 1}" if mark else ""
        raise ConfigError(f"syntax error{where}: {exc.problem}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"syntax error: {exc}") from exc

    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError("top level of the configuration must be a mapping")

    defaults = RunConfig()
    sections = {}
    for key, value in data.items():
        if key not in _SECTION_TYPES:
            raise ConfigError(f"unknown key '{key}'")
        if value is None:
            value = {}
        if not isinstance(value, dict):
            raise ConfigError(f"key '{key}': expected a mapping of settings")
        sections[key] = _build_section(getattr(defaults, key), value, key)

    cfg = RunConfig(**sections)
    cfg = RunConfig(**{**_as_section_dict(cfg), "warnings": _hypothesis_warnings(cfg)})
    _validate_semantics(cfg)
    return cfg


def _as_section_dict(cfg: RunConfig) -> dict:
    return {name: getattr(cfg, name) for name in _SECTION_TYPES}


def _validate_semantics(cfg: RunConfig) -> None:
    try:
        make_params(cfg.model.d, cfg.model.alpha, cfg.model.s, cfg.model.a)
    except ValueError as exc:
        raise ConfigError(f"section 'model': {exc}") from exc
    n = cfg.grid.n
    if n < 2 or (n & (n - 1)) != 0:
        raise ConfigError(f"key 'grid.n': must be a power of two >= 2, got {n}")
    if not cfg.grid.length > 0.0:
        raise ConfigError(f"key 'grid.length': must be positive, got {cfg.grid.length}")
    if cfg.profile.kind not in ("gaussian", "super-gaussian", "single-mode", "ring"):
        raise ConfigError(f"key 'profile.kind': unknown kind {cfg.profile.kind!r}")
    if cfg.profile.kind == "ring" and cfg.model.d != 2:
        raise ConfigError("key 'profile.kind': ring profiles require model.d = 2")


def _serialize_value(value):
    if isinstance(value, complex):
        return value.real if value.imag == 0.0 else [value.real, value.imag]
    if isinstance(value, tuple):
        return [_serialize_value(v) for v in value]
    if isinstance(value, float) and math.isinf(value):
        return ".inf" if value > 0 else "-.inf"
    return value


def serialize_config(cfg: RunConfig) -> str:
    """Canonical YAML form; parse(serialize(cfg)) == cfg field by field."""
    doc = {}
    for name in _SECTION_TYPES:
        section = getattr(cfg, name)
        doc[name] = {
            f.name: _serialize_value(getattr(section, f.name)) for f in fields(section)
        }
    return yaml.safe_dump(doc, sort_keys=True, default_flow_style=False)


def config_hash(cfg: RunConfig) -> str:
    return hashlib.sha256(serialize_config(cfg).encode()).hexdigest()[:16]


def load_config(path: str) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return parse_config(text)


def default_config() -> RunConfig:
    return parse_config("")


def build_profile(cfg: RunConfig) -> InitialProfile:
    p = cfg.profile
    return InitialProfile(
        kind=p.kind,
        amplitude=p.amplitude,
        width=p.width,
        power=p.power,
        mode=p.mode,
        radius=p.radius,
        truncation_tol=p.truncation_tol,
    )


def build_run(cfg: RunConfig):
    """Assemble (params, grid, initial field) from a parsed config."""
    from .grid import make_grid
    from .profiles import sample_profile

    params = make_params(cfg.model.d, cfg.model.alpha, cfg.model.s, cfg.model.a)
    grid = make_grid(cfg.grid.n, cfg.grid.length, cfg.model.d)
    initial = sample_profile(build_profile(cfg), grid)
    return params, grid, initial
