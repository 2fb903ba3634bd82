"""Strict JSON run configuration.

Every block is optional and falls back to the library defaults. Unknown keys
anywhere in the document are errors, as are values that break the owning
type's invariants; error messages carry the dotted path of the offending
field.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Callable

from .decision import DecisionModel, SearchBox, default_search_box, linspace_axis
from .errors import ConfigError, DomainError
from .option_value import EndState, TreatmentDiscoveryModel, VaccineModel
from .qaly import (
    VALUATION_PRESETS,
    AfterEffectParams,
    HospitalizationParams,
    IllnessCostParams,
    QalyValuation,
)
from .scenario import GeometricScenario, baseline_scenarios

FORMATS = ("table", "csv", "svg")
DEFAULT_SEED = 20200612


@dataclass(frozen=True)
class ComparisonConfig:
    initial_weekly_deaths: float = 7572.0
    easing_factor: float = 1.15
    lockdown_factor: float = 0.7
    horizon_weeks: int = 13
    lockdown_quarter_cost: float = 200e9
    mode: str = "deaths_only"

    def __post_init__(self):
        if self.mode not in ("deaths_only", "extended"):
            raise DomainError(f"mode must be 'deaths_only' or 'extended', got {self.mode!r}")
        if not self.lockdown_quarter_cost > 0:
            raise DomainError(f"lockdown_quarter_cost must be > 0, got {self.lockdown_quarter_cost!r}")
        self.scenarios()

    def scenarios(self) -> tuple[GeometricScenario, GeometricScenario]:
        d, n = self.initial_weekly_deaths, self.horizon_weeks
        return (GeometricScenario(d, self.easing_factor, n, "ease"),
                GeometricScenario(d, self.lockdown_factor, n, "lock"))


@dataclass(frozen=True)
class CapConfig:
    r0: float
    population: float
    ifr: float = 0.006
    include_overshoot: bool = True

    def __post_init__(self):
        if not (self.r0 > 0 and self.population > 0):
            raise DomainError("r0 and population must be > 0")
        if not 0 < self.ifr < 1:
            raise DomainError(f"ifr must be in (0, 1), got {self.ifr!r}")


def _default_end_states() -> tuple[EndState, ...]:
    return (
        EndState(13.0, 1.0, 0.0, 26, "suppression"),
        EndState(7572.0, 1.0, 0.0, 26, "raging"),
    )


@dataclass(frozen=True)
class OptionValueConfig:
    horizon_weeks: int = 26
    n_samples: int = 10000
    treatment: TreatmentDiscoveryModel = field(default_factory=TreatmentDiscoveryModel)
    vaccine: VaccineModel = field(default_factory=VaccineModel)
    cap: CapConfig | None = None
    end_states: tuple[EndState, ...] = field(default_factory=_default_end_states)

    def __post_init__(self):
        if self.horizon_weeks < 1:
            raise DomainError(f"horizon_weeks must be >= 1, got {self.horizon_weeks!r}")
        if self.n_samples < 1:
            raise DomainError(f"n_samples must be >= 1, got {self.n_samples!r}")
        if not self.end_states:
            raise DomainError("end_states must not be empty")
        _unique_labels(self.end_states, "end_states")


@dataclass(frozen=True)
class EpidemicConfig:
    r0_values: tuple[float, ...] = (1.5, 2.0, 2.5, 3.0)
    initial_susceptible_fraction: float = 1.0

    def __post_init__(self):
        if not self.r0_values:
            raise DomainError("r0_values must not be empty")
        if any(not r > 0 for r in self.r0_values):
            raise DomainError("r0_values must all be > 0")
        if not 0 < self.initial_susceptible_fraction <= 1:
            raise DomainError(
                f"initial_susceptible_fraction must be in (0, 1], got {self.initial_susceptible_fraction!r}"
            )


SWEEPABLE = (
    "pounds_per_qaly",
    "qalys_per_death",
    "lockdown_quarter_cost",
    "easing_factor",
    "lockdown_factor",
    "initial_weekly_deaths",
)


@dataclass(frozen=True)
class SweepConfig:
    parameter: str = "pounds_per_qaly"
    values: tuple[float, ...] = tuple(p for p, _ in VALUATION_PRESETS.values())

    def __post_init__(self):
        if self.parameter not in SWEEPABLE:
            raise DomainError(f"parameter must be one of {list(SWEEPABLE)}, got {self.parameter!r}")
        if not self.values:
            raise DomainError("values must not be empty")


def _default_decision() -> DecisionModel:
    return DecisionModel(1.0, 1.0, 1.0, 0.5, 1.05, 12)


@dataclass(frozen=True)
class RunConfig:
    scenarios: tuple[GeometricScenario, ...] = field(default_factory=lambda: tuple(baseline_scenarios()))
    valuation: QalyValuation = field(default_factory=QalyValuation)
    illness: IllnessCostParams = field(default_factory=IllnessCostParams)
    aftereffects: AfterEffectParams = field(default_factory=AfterEffectParams)
    hospitalization: HospitalizationParams = field(default_factory=HospitalizationParams)
    decision: DecisionModel = field(default_factory=_default_decision)
    search: SearchBox = field(default_factory=default_search_box)
    comparison: ComparisonConfig = field(default_factory=ComparisonConfig)
    option_value: OptionValueConfig = field(default_factory=OptionValueConfig)
    epidemic: EpidemicConfig = field(default_factory=EpidemicConfig)
    sweep: SweepConfig = field(default_factory=SweepConfig)
    seed: int = DEFAULT_SEED
    format: str = "table"

    def __post_init__(self):
        if not self.scenarios:
            raise DomainError("scenarios must not be empty")
        _unique_labels(self.scenarios, "scenarios")
        if not 0 <= self.seed < 2**64:
            raise DomainError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if self.format not in FORMATS:
            raise DomainError(f"format must be one of {list(FORMATS)}, got {self.format!r}")


def _unique_labels(items, where: str) -> None:
    labels = [x.label for x in items]
    if len(set(labels)) != len(labels):
        raise DomainError(f"{where} labels must be unique, got {labels}")


# --- parsing -----------------------------------------------------------------

_SCALARS: dict[str, tuple[type, ...]] = {
    "float": (int, float),
    "int": (int,),
    "str": (str,),
    "bool": (bool,),
}


def _scalar(value: Any, annotation: str, path: str) -> Any:
    optional = annotation.endswith("| None")
    base = annotation.replace("| None", "").strip()
    if value is None:
        if optional:
            return None
        raise ConfigError(f"{path}: must not be null")
    allowed = _SCALARS.get(base)
    if allowed is None:
        raise ConfigError(f"{path}: unsupported field type {annotation}")
    if base != "bool" and isinstance(value, bool) or not isinstance(value, allowed):
        raise ConfigError(f"{path}: expected {base}, got {type(value).__name__}")
    if base == "float":
        value = float(value)
        if not math.isfinite(value):
            raise ConfigError(f"{path}: must be finite")
    return value


def _build(
    cls,
    data: Any,
    path: str,
    converters: dict[str, Callable[[Any, str], Any]] | None = None,
    base: Callable[[], Any] | None = None,
):
    where = path or "config"
    if not isinstance(data, dict):
        raise ConfigError(f"{where}: expected an object, got {type(data).__name__}")
    converters = converters or {}
    known = {f.name: f for f in fields(cls)}
    unknown = sorted(set(data) - set(known))
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {unknown}")
    # omitted fields of a block fall back to the block's default instance
    kwargs = {} if base is None else {name: getattr(base(), name) for name in known}
    for name, value in data.items():
        sub = f"{path}.{name}" if path else name
        conv = converters.get(name)
        kwargs[name] = conv(value, sub) if conv else _scalar(value, known[name].type, sub)
    try:
        return cls(**kwargs)
    except (DomainError, TypeError) as exc:
        raise ConfigError(f"{where}: {exc}") from None


def _list_of(cls, converters=None):
    def convert(value, path):
        if not isinstance(value, list):
            raise ConfigError(f"{path}: expected a list")
        return tuple(_build(cls, item, f"{path}[{i}]", converters) for i, item in enumerate(value))
    return convert


def _numbers(kind: str):
    def convert(value, path):
        if isinstance(value, dict):
            bounds = _build(_Linspace, value, path)
            axis = linspace_axis(bounds.start, bounds.stop, bounds.num)
            if kind == "int":
                if any(x != int(x) for x in axis):
                    raise ConfigError(f"{path}: {{start, stop, num}} does not give whole numbers")
                axis = tuple(int(x) for x in axis)
            return axis
        if not isinstance(value, list):
            raise ConfigError(f"{path}: expected a list or a {{start, stop, num}} object")
        return tuple(_scalar(x, kind, f"{path}[{i}]") for i, x in enumerate(value))
    return convert


@dataclass(frozen=True)
class _Linspace:
    start: float
    stop: float
    num: int

    def __post_init__(self):
        if self.num < 1:
            raise DomainError(f"num must be >= 1, got {self.num!r}")


def _valuation(value, path):
    if isinstance(value, dict) and "preset" in value:
        rest = dict(value)
        name = rest.pop("preset")
        if name not in VALUATION_PRESETS:
            raise ConfigError(f"{path}.preset: unknown preset {name!r}; choose from {sorted(VALUATION_PRESETS)}")
        if "pounds_per_qaly" in rest:
            raise ConfigError(f"{path}: give either preset or pounds_per_qaly, not both")
        rest["pounds_per_qaly"] = VALUATION_PRESETS[name][0]
        return _build(QalyValuation, rest, path)
    return _build(QalyValuation, value, path)


def _block(cls, converters=None, base=None):
    return lambda value, path: _build(cls, value, path, converters, base)


def _optional_block(cls):
    return lambda value, path: None if value is None else _build(cls, value, path)


_CONVERTERS: dict[str, Callable[[Any, str], Any]] = {
    "scenarios": _list_of(GeometricScenario),
    "valuation": _valuation,
    "illness": _block(IllnessCostParams),
    "aftereffects": _block(AfterEffectParams),
    "hospitalization": _block(HospitalizationParams),
    "decision": _block(DecisionModel, base=_default_decision),
    "search": _block(SearchBox, {
        "lockdown_factors": _numbers("float"),
        "easing_factors": _numbers("float"),
        "horizons": _numbers("int"),
        "cost_ratios": _numbers("float"),
    }, base=default_search_box),
    "comparison": _block(ComparisonConfig),
    "option_value": _block(OptionValueConfig, {
        "treatment": _block(TreatmentDiscoveryModel),
        "vaccine": _block(VaccineModel),
        "cap": _optional_block(CapConfig),
        "end_states": _list_of(EndState),
    }),
    "epidemic": _block(EpidemicConfig, {"r0_values": _numbers("float")}),
    "sweep": _block(SweepConfig, {"values": _numbers("float")}),
}


def parse_config(data: Any) -> RunConfig:
    return _build(RunConfig, data, "", _CONVERTERS)


def load_config(path: str | Path | None) -> RunConfig:
    """Read and validate a JSON run configuration; ``None`` gives the defaults."""
    if path is None:
        return RunConfig()
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON in {path}: {exc}") from None
    return parse_config(data)


def config_to_dict(cfg: RunConfig) -> dict:
    """Plain-JSON form of ``cfg``; :func:`parse_config` reads it back unchanged."""

    def clean(obj):
        if isinstance(obj, (list, tuple)):
            return [clean(x) for x in obj]
        if isinstance(obj, dict):
            return {k: clean(v) for k, v in obj.items()}
        return obj

    return clean(asdict(cfg))


def dump_config(cfg: RunConfig) -> str:
    return json.dumps(config_to_dict(cfg), indent=2, sort_keys=True)
