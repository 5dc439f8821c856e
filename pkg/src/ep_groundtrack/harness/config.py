"""Scenario configuration and the flat ``section.key = value`` file format.

Example::

    # comment
    gps.position_sigma = 20.0
    target.repeat_ratio = 3/46
    controller.burn_mode = half

Every key must name an existing field; unknown keys and malformed values
raise ConfigError.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from ..dynamics import EnvironmentConfig, SpacecraftBody
from ..elements import OrbitalElements
from ..errors import ConfigError
from ..estimator import DEFAULT_FORGETTING, DEFAULT_P0, DEFAULT_TIME_SCALE
from ..groundtrack import DEFAULT_X_LIM
from ..sensors import GpsModel, ThrusterModel


@dataclass(frozen=True)
class OrbitConfig:
    """Initial orbit; ``variant`` says whether the elements are mean or osculating."""

    semi_major_axis: float = 6838e3
    eccentricity: float = 0.001
    inclination_deg: float = 97.28
    raan_deg: float = 0.0
    arg_periapsis_deg: float = 90.0
    true_anomaly_deg: float = 270.0
    variant: str = "mean"

    def __post_init__(self):
        if self.variant not in ("mean", "osculating"):
            raise ValueError("orbit.variant must be 'mean' or 'osculating'")
        self.elements()

    def elements(self) -> OrbitalElements:
        return OrbitalElements(
            self.semi_major_axis, self.eccentricity, math.radians(self.inclination_deg),
            math.radians(self.raan_deg) % (2 * math.pi),
            math.radians(self.arg_periapsis_deg) % (2 * math.pi),
            math.radians(self.true_anomaly_deg) % (2 * math.pi), "true", self.variant)


@dataclass(frozen=True)
class TargetConfig:
    """Repeat ratio and target longitude; ``None`` longitude means choose it
    so that the initial error equals ``initial_error``."""

    repeat_ratio: Fraction = Fraction(3, 46)
    target_longitude_deg: float | None = None
    greenwich_longitude_deg: float = 0.0
    x_lim: float = DEFAULT_X_LIM
    initial_error: float = 0.0

    def __post_init__(self):
        if not self.repeat_ratio > 0:
            raise ValueError("target.repeat_ratio must be positive")
        if not self.x_lim > 0.0:
            raise ValueError("target.x_lim must be positive")


@dataclass(frozen=True)
class EstimatorConfig:
    forgetting: float = DEFAULT_FORGETTING
    p0: tuple = DEFAULT_P0
    time_scale: float = DEFAULT_TIME_SCALE
    p_guess: float = 0.0
    covariance_reset: str = "transform"

    def __post_init__(self):
        if self.covariance_reset not in ("initial", "transform"):
            raise ValueError("estimator.covariance_reset must be 'initial' or 'transform'")
        if not 0.0 < self.forgetting <= 1.0:
            raise ValueError("estimator.forgetting must be in (0, 1]")
        if len(self.p0) != 3 or min(self.p0) <= 0.0:
            raise ValueError("estimator.p0 needs three positive entries")


@dataclass(frozen=True)
class ControllerConfig:
    """``phasing`` is 'auto' (on for half-orbit burns only), 'on' or 'off'.

    ``cap_burn`` ends a firing arc once it reaches the configured burn
    duration, even before the lower switching threshold.
    """

    warmup_days: float = 1.0
    burn_mode: str = "full"
    burn_multiple: Fraction = Fraction(1)
    phasing: str = "auto"
    f0_deg: float = 0.0
    phasing_tolerance_deg: float = 0.5
    alpha_margin: float = 0.0
    p_min: float = 1e-16
    p_max_fraction: float = 0.9
    adapt: bool = True
    cap_burn: bool = True
    y_lim: float = 1.79e-4

    def __post_init__(self):
        if self.burn_mode not in ("full", "half"):
            raise ValueError("controller.burn_mode must be 'full' or 'half'")
        if self.phasing not in ("auto", "on", "off"):
            raise ValueError("controller.phasing must be 'auto', 'on' or 'off'")
        if not self.burn_multiple > 0:
            raise ValueError("controller.burn_multiple must be positive")
        if self.warmup_days < 0.0:
            raise ValueError("controller.warmup_days must be non-negative")
        if not 0.0 < self.p_max_fraction < 1.0 or not self.p_min > 0.0:
            raise ValueError("controller p clamp must satisfy 0 < p_min, 0 < p_max_fraction < 1")

    @property
    def phasing_enabled(self) -> bool:
        if self.phasing == "auto":
            return self.burn_mode == "half"
        return self.phasing == "on"


@dataclass(frozen=True)
class DoubleIntegratorConfig:
    """Averaged-plant mode: y'' = p - k v with the exact state fed back.

    ``k = None`` derives the gain from the thruster, mass, orbit and target.
    """

    p: float = 2.23e-14
    k: float | None = None
    y_lim: float = 1.79e-4
    y0: float = 0.0
    ydot0: float = 0.0
    tick: float = 1.0
    log_every: int = 30

    def __post_init__(self):
        if not self.tick > 0.0 or self.log_every < 1:
            raise ValueError("di.tick must be positive and di.log_every >= 1")


@dataclass(frozen=True)
class SimConfig:
    duration_days: float = 30.0
    seed: int = 0
    mode: str = "full"
    tick: float = 30.0
    output: str = ""

    def __post_init__(self):
        if not self.duration_days > 0.0:
            raise ValueError("sim.duration_days must be positive")
        if self.mode not in ("full", "double-integrator"):
            raise ValueError("sim.mode must be 'full' or 'double-integrator'")
        if not self.tick > 0.0:
            raise ValueError("sim.tick must be positive")


@dataclass(frozen=True)
class ScenarioConfig:
    orbit: OrbitConfig = field(default_factory=OrbitConfig)
    body: SpacecraftBody = field(default_factory=SpacecraftBody)
    env: EnvironmentConfig = field(default_factory=EnvironmentConfig)
    gps: GpsModel = field(default_factory=GpsModel)
    thruster: ThrusterModel = field(default_factory=ThrusterModel)
    target: TargetConfig = field(default_factory=TargetConfig)
    estimator: EstimatorConfig = field(default_factory=EstimatorConfig)
    controller: ControllerConfig = field(default_factory=ControllerConfig)
    di: DoubleIntegratorConfig = field(default_factory=DoubleIntegratorConfig)
    sim: SimConfig = field(default_factory=SimConfig)

    def with_overrides(self, overrides: dict[str, str]) -> ScenarioConfig:
        return apply_overrides(self, overrides)


# --- parsing ---

_TRUE = {"true", "yes", "on", "1"}
_FALSE = {"false", "no", "off", "0"}


def _parse_value(raw: str, default, key: str):
    text = raw.strip()
    try:
        if isinstance(default, bool):
            low = text.lower()
            if low in _TRUE:
                return True
            if low in _FALSE:
                return False
            raise ValueError(f"not a boolean: {text!r}")
        if isinstance(default, Fraction):
            return Fraction(text)
        if isinstance(default, int):
            return int(text)
        if isinstance(default, float):
            return float(text)
        if isinstance(default, tuple):
            return tuple(float(v) for v in text.split(",") if v.strip())
        if default is None:
            return None if text.lower() in ("auto", "none", "") else float(text)
        return text
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"{key}: {exc}") from None


def apply_overrides(config: ScenarioConfig, overrides: dict[str, str]) -> ScenarioConfig:
    """Return ``config`` with dotted-key string values applied."""
    sections: dict[str, dict] = {}
    for key, raw in overrides.items():
        section, _, name = key.partition(".")
        if not name or section not in {f.name for f in dataclasses.fields(ScenarioConfig)}:
            raise ConfigError(f"unknown configuration key {key!r}")
        current = getattr(config, section)
        declared = {f.name: f.default for f in dataclasses.fields(current)}
        if name not in declared:
            raise ConfigError(f"unknown configuration key {key!r}")
        # the declared default fixes the type, so optional fields accept 'auto' again
        default = declared[name]
        if default is dataclasses.MISSING:
            default = getattr(current, name)
        sections.setdefault(section, {})[name] = _parse_value(raw, default, key)
    updates = {}
    for section, values in sections.items():
        try:
            updates[section] = dataclasses.replace(getattr(config, section), **values)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{section}: {exc}") from None
    return dataclasses.replace(config, **updates)


def parse_config_text(text: str) -> dict[str, str]:
    entries: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ConfigError(f"line {lineno}: expected 'section.key = value'")
        if key in entries:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        entries[key] = value.strip()
    return entries


def load_config(path, base: ScenarioConfig | None = None) -> ScenarioConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror}") from None
    return apply_overrides(base or ScenarioConfig(), parse_config_text(text))
