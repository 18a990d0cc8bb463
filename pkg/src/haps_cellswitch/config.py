"""Scenario configuration: defaults, key = value files, overrides, validation."""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass, fields

ENV_PREFIX = "HAPSSWITCH_"
# keys that may hold comma-separated lists when expanding a sweep
SWEEP_KEYS = ("lambda", "mu", "mode", "seed")
MODES = ("CSA", "A3")
ENVIRONMENTS = ("urban", "rural")
LOS_MODES = ("sampled", "blended")

# config-file key -> attribute name, where they differ
_ALIASES = {"lambda": "lam"}
_REVERSE = {v: k for k, v in _ALIASES.items()}


class ConfigError(ValueError):
    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


@dataclass(frozen=True)
class ScenarioConfig:
    area_width: float = 500.0
    area_height: float = 500.0
    n_ts: int = 100
    t_d: float = 1.0
    f_c: float = 2.5                     # GHz
    total_bandwidth: float = 50e6        # Hz
    per_ue_bandwidth: float = 200e3      # Hz
    lam: float = 0.7
    mu: int = 100
    mode: str = "CSA"
    environment: str = "urban"
    los_mode: str = "sampled"
    seed: int = 42
    haps_altitude: float = 20_000.0
    ue_height: float = 1.5
    sc_height: float = 10.0
    haps_tx_power_dbm: float = 49.0
    haps_gain_dbi: float = 43.2
    sc_tx_power_dbm: float = 33.0
    sc_gain_dbi: float = 4.0
    ue_gain_dbi: float = 0.0
    sensitivity_dbm: float = -95.0
    noise_density_dbm_hz: float = -174.0
    noise_figure_db: float = 7.0
    speed_pedestrian: float = 1.0
    speed_cycler: float = 4.0
    speed_vehicular: float = 14.0
    mode_mix: tuple = (0.25, 0.25, 0.25, 0.25)  # stationary, pedestrian, cycler, vehicular
    heading_jitter: float = 0.2          # rad, half-width of the uniform perturbation
    cascade: bool = True
    include_other_load: bool = False

    @property
    def channels_per_bs(self) -> int:
        return int(round(self.total_bandwidth / self.per_ue_bandwidth))

    @property
    def gamma(self) -> float:
        """User density in users per square meter."""
        return self.mu / (self.area_width * self.area_height)

    def replace(self, **changes) -> ScenarioConfig:
        return dataclasses.replace(self, **{_ALIASES.get(k, k): v for k, v in changes.items()})

    def to_dict(self) -> dict:
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            out[_REVERSE.get(f.name, f.name)] = list(v) if isinstance(v, tuple) else v
        return out

    def validate(self) -> ScenarioConfig:
        def bad(key, msg):
            raise ConfigError(key, msg)

        if self.area_width <= 0 or self.area_height <= 0:
            bad("area_width" if self.area_width <= 0 else "area_height", "must be positive")
        if self.n_ts < 1:
            bad("n_ts", "must be >= 1")
        if self.t_d <= 0:
            bad("t_d", "must be positive")
        if not 0 < self.f_c <= 6.0:
            bad("f_c", "only the sub-6 GHz model is implemented (0 < f_c <= 6)")
        if self.per_ue_bandwidth <= 0:
            bad("per_ue_bandwidth", "must be positive")
        ratio = self.total_bandwidth / self.per_ue_bandwidth
        if ratio < 1 or abs(ratio - round(ratio)) > 1e-9:
            bad("per_ue_bandwidth", "must divide total_bandwidth")
        if not 0.0 <= self.lam <= 1.0:
            bad("lambda", f"must lie in [0, 1], got {self.lam}")
        if self.mu < 0:
            bad("mu", "must be >= 0")
        if self.mode not in MODES:
            bad("mode", f"must be one of {MODES}")
        if self.environment not in ENVIRONMENTS:
            bad("environment", f"must be one of {ENVIRONMENTS}")
        if self.los_mode not in LOS_MODES:
            bad("los_mode", f"must be one of {LOS_MODES}")
        if not 0 <= self.seed < 2**64:
            bad("seed", "must be an unsigned 64-bit integer")
        if self.haps_altitude <= self.ue_height:
            bad("haps_altitude", "must exceed ue_height")
        if self.sc_height <= 1.0 or self.ue_height <= 1.0:
            bad("sc_height" if self.sc_height <= 1.0 else "ue_height", "must exceed 1 m")
        for key in ("speed_pedestrian", "speed_cycler", "speed_vehicular", "heading_jitter"):
            if getattr(self, key) < 0:
                bad(key, "must be non-negative")
        mix = self.mode_mix
        if len(mix) != 4 or min(mix) < 0 or abs(sum(mix) - 1.0) > 1e-9:
            bad("mode_mix", "needs four non-negative weights summing to 1")
        return self


_FIELD_TYPES = {f.name: f.type for f in fields(ScenarioConfig)}


def known_keys() -> list[str]:
    return [_REVERSE.get(name, name) for name in _FIELD_TYPES]


def coerce(key: str, text: str):
    """Convert a string value to the type of config key ``key``."""
    name = _ALIASES.get(key, key)
    if name not in _FIELD_TYPES:
        raise ConfigError(key, "unknown config key")
    kind = _FIELD_TYPES[name]
    text = text.strip()
    try:
        if kind == "bool":
            low = text.lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(text)
        if kind == "int":
            return int(text)
        if kind == "float":
            return float(text)
        if kind == "tuple":
            return tuple(float(p) for p in text.split(","))
        return text
    except ValueError:
        raise ConfigError(key, f"cannot parse {text!r} as {kind}") from None


def parse_config_text(text: str) -> dict[str, str]:
    """Read ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}", f"expected 'key = value', got {raw!r}")
        key, value = (p.strip() for p in line.split("=", 1))
        if _ALIASES.get(key, key) not in _FIELD_TYPES:
            raise ConfigError(key, "unknown config key")
        out[key] = value
    return out


def parse_override(item: str) -> tuple[str, str]:
    if "=" not in item:
        raise ConfigError(item, "override must look like key=value")
    key, value = (p.strip() for p in item.split("=", 1))
    if _ALIASES.get(key, key) not in _FIELD_TYPES:
        raise ConfigError(key, "unknown config key")
    return key, value


def env_overrides(environ=None) -> dict[str, str]:
    environ = os.environ if environ is None else environ
    out = {}
    for name, value in sorted(environ.items()):
        if name.startswith(ENV_PREFIX):
            key = name[len(ENV_PREFIX):].lower()
            if _ALIASES.get(key, key) not in _FIELD_TYPES:
                raise ConfigError(key, f"unknown config key (from ${name})")
            out[key] = value
    return out


def resolve_raw(config_text: str | None = None, overrides=(), environ=None) -> dict[str, str]:
    """Merge file < environment < explicit overrides into one raw mapping."""
    raw = parse_config_text(config_text) if config_text else {}
    raw.update(env_overrides(environ))
    for item in overrides:
        key, value = parse_override(item) if isinstance(item, str) else item
        raw[key] = value
    return raw


def build_config(raw: dict[str, str], base: ScenarioConfig | None = None) -> ScenarioConfig:
    base = ScenarioConfig() if base is None else base
    values = {key: coerce(key, value) for key, value in raw.items()}
    return base.replace(**values).validate()


def expand_grid(raw: dict[str, str], base: ScenarioConfig | None = None) -> list[ScenarioConfig]:
    """Expand comma-separated sweep keys into the cartesian product of configs.

    The grid is ordered mode, lambda, mu, seed (outermost first).
    """
    fixed = {k: v for k, v in raw.items() if k not in SWEEP_KEYS}
    axes = []
    for key in ("mode", "lambda", "mu", "seed"):
        if key in raw:
            axes.append([(key, v.strip()) for v in raw[key].split(",") if v.strip()])
    configs = [build_config(fixed, base)]
    for axis in axes:
        configs = [build_config(dict([item]), c) for c in configs for item in axis]
    return configs
