"""Scenario and channel-table configuration.

A configuration is one JSON document with two sections::

    {"scenario": {...}, "channel_tables": {"28": <table or path>, ...}}

Channel tables may be given inline or as a path to a JSON file; relative
paths resolve against the directory of the config file, then against the
package data directory.  See ``docs/config.md`` for every field.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

ALIGNMENT_MODES = ("strongest_cluster", "svd")


class ConfigError(ValueError):
    """Invalid or incomplete configuration; ``field`` names the culprit."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


def _require(cond: bool, name: str, message: str) -> None:
    if not cond:
        raise ConfigError(name, message)


@dataclass(frozen=True)
class ArrayShape:
    """Uniform planar array of ``rows x cols`` isotropic elements."""

    rows: int
    cols: int
    element_spacing_wavelengths: float = 0.5

    def __post_init__(self):
        _require(isinstance(self.rows, int) and self.rows >= 1, "rows", "must be a positive integer")
        _require(isinstance(self.cols, int) and self.cols >= 1, "cols", "must be a positive integer")
        _require(self.element_spacing_wavelengths > 0, "element_spacing_wavelengths", "must be > 0")

    @property
    def n_elements(self) -> int:
        return self.rows * self.cols

    @classmethod
    def parse(cls, text: str) -> "ArrayShape":
        """Parse ``"8x8"`` style shorthand."""
        try:
            r, c = text.lower().split("x")
            return cls(int(r), int(c))
        except ValueError:
            raise ConfigError("array", f"expected RxC, got {text!r}") from None

    def __str__(self) -> str:
        return f"{self.rows}x{self.cols}"


@dataclass(frozen=True)
class PathlossParams:
    """Log-distance law ``intercept + 10*slope*log10(d) + N(0, std^2)`` in dB."""

    intercept_db: float
    slope: float
    shadowing_std_db: float

    def __post_init__(self):
        _require(self.slope > 0, "slope", "pathloss slope must be > 0")
        _require(self.shadowing_std_db >= 0, "shadowing_std_db", "must be >= 0")


@dataclass(frozen=True)
class ChannelParams:
    """Measurement-based channel tables for one carrier frequency.

    Link-state probabilities follow

        p_out(d) = max(0, 1 - exp(-d / outage_decay_m + outage_offset))
        p_los(d) = (1 - p_out(d)) * exp(-d / los_decay_m)

    Cluster count is ``max(Poisson(cluster_rate), 1)``; unnormalized cluster
    powers are ``U**(cluster_power_exponent - 1) * 10**(-0.1*Z)`` with
    ``Z ~ N(0, cluster_shadowing_db**2)``.  Angular spreads are the means of
    the exponential distribution of per-cluster rms spreads, in degrees.
    """

    frequency_ghz: float
    los: PathlossParams
    nlos: PathlossParams
    outage_decay_m: float
    outage_offset: float
    los_decay_m: float
    cluster_rate: float
    cluster_power_exponent: float
    cluster_shadowing_db: float
    aod_azimuth_spread_deg: float
    aod_elevation_spread_deg: float
    aoa_azimuth_spread_deg: float
    aoa_elevation_spread_deg: float
    subpaths_per_cluster: int
    bs_height_m: float = 10.0
    ue_height_m: float = 1.5
    source: str = ""

    def __post_init__(self):
        _require(self.frequency_ghz > 0, "frequency_ghz", "must be > 0")
        _require(self.outage_decay_m > 0, "outage_decay_m", "must be > 0")
        _require(self.los_decay_m > 0, "los_decay_m", "must be > 0")
        _require(self.cluster_rate >= 0, "cluster_rate", "must be >= 0")
        _require(self.cluster_power_exponent >= 1, "cluster_power_exponent", "must be >= 1")
        _require(self.cluster_shadowing_db >= 0, "cluster_shadowing_db", "must be >= 0")
        for name in ("aod_azimuth_spread_deg", "aod_elevation_spread_deg",
                     "aoa_azimuth_spread_deg", "aoa_elevation_spread_deg"):
            _require(getattr(self, name) >= 0, name, "must be >= 0")
        _require(isinstance(self.subpaths_per_cluster, int) and self.subpaths_per_cluster >= 1,
                 "subpaths_per_cluster", "must be a positive integer")
        _require(self.bs_height_m >= 0 and self.ue_height_m >= 0, "height", "heights must be >= 0")

    @property
    def angular_spreads_rad(self) -> tuple[float, float, float, float]:
        """(AoD az, AoD el, AoA az, AoA el) mean rms spreads in radians."""
        return tuple(math.radians(s) for s in (
            self.aod_azimuth_spread_deg, self.aod_elevation_spread_deg,
            self.aoa_azimuth_spread_deg, self.aoa_elevation_spread_deg))

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "ChannelParams":
        d = dict(d)
        try:
            d["los"] = PathlossParams(**d["los"])
            d["nlos"] = PathlossParams(**d["nlos"])
            return cls(**d)
        except KeyError as e:
            raise ConfigError(str(e.args[0]), "missing required field") from None
        except TypeError as e:
            raise ConfigError("channel_tables", str(e)) from None

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass(frozen=True)
class ScenarioConfig:
    carrier_frequency_ghz: float = 28.0
    bandwidth_hz: float = 500e6
    tx_power_dbm: float = 30.0
    noise_figure_db: float = 7.0
    noise_psd_dbm_per_hz: float = -174.0
    lambda_bs_per_km2: float = 30.0
    lambda_ue_per_km2: float = 300.0
    bs_array: ArrayShape = ArrayShape(8, 8)
    ue_array: ArrayShape = ArrayShape(4, 4)
    region_radius_m: float = 400.0
    iterations: int = 50_000
    master_seed: int = 0
    beam_alignment: str = "strongest_cluster"
    exclude_coverage_outage: bool = True

    def __post_init__(self):
        _require(self.bandwidth_hz > 0, "bandwidth_hz", "must be > 0")
        _require(self.lambda_bs_per_km2 > 0, "lambda_bs_per_km2", "must be > 0")
        # zero UE density is allowed: only the typical UE is deployed
        _require(self.lambda_ue_per_km2 >= 0, "lambda_ue_per_km2", "must be >= 0")
        _require(self.region_radius_m > 0, "region_radius_m", "must be > 0")
        _require(isinstance(self.iterations, int) and self.iterations >= 1,
                 "iterations", "must be an integer >= 1")
        _require(isinstance(self.master_seed, int) and self.master_seed >= 0,
                 "master_seed", "must be an unsigned integer")
        _require(self.beam_alignment in ALIGNMENT_MODES, "beam_alignment",
                 f"must be one of {ALIGNMENT_MODES}")

    @property
    def noise_dbm(self) -> float:
        return noise_power_dbm(self.bandwidth_hz, self.noise_figure_db, self.noise_psd_dbm_per_hz)

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "ScenarioConfig":
        d = dict(d)
        known = {f.name for f in dataclasses.fields(cls)}
        for k in d:
            _require(k in known, k, "unknown scenario field")
        for k in ("bs_array", "ue_array"):
            if k in d and not isinstance(d[k], ArrayShape):
                d[k] = ArrayShape(**d[k]) if isinstance(d[k], Mapping) else ArrayShape.parse(d[k])
        return cls(**d)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def _freq_key(f: float) -> str:
    return f"{float(f):g}"


@dataclass(frozen=True)
class SimulationConfig:
    """A scenario plus the channel tables it may draw on."""

    scenario: ScenarioConfig
    channel_tables: Mapping[str, ChannelParams] = field(default_factory=dict)

    def __post_init__(self):
        tables = {_freq_key(k): v for k, v in self.channel_tables.items()}
        object.__setattr__(self, "channel_tables", tables)
        _require(_freq_key(self.scenario.carrier_frequency_ghz) in tables,
                 "carrier_frequency_ghz",
                 f"no channel table for frequency {self.scenario.carrier_frequency_ghz:g} GHz")

    @property
    def channel(self) -> ChannelParams:
        return self.channel_tables[_freq_key(self.scenario.carrier_frequency_ghz)]

    def replace(self, **changes) -> "SimulationConfig":
        """Copy with scenario fields overridden."""
        return SimulationConfig(dataclasses.replace(self.scenario, **changes), self.channel_tables)

    def to_dict(self) -> dict:
        return {"scenario": self.scenario.to_dict(),
                "channel_tables": {k: v.to_dict() for k, v in sorted(self.channel_tables.items())}}

    @classmethod
    def from_dict(cls, d: Mapping[str, Any], base_dir: Path | None = None) -> "SimulationConfig":
        _require("scenario" in d, "scenario", "missing required section")
        _require("channel_tables" in d, "channel_tables", "missing required section")
        scenario = ScenarioConfig.from_dict(d["scenario"])
        tables = {}
        for key, table in d["channel_tables"].items():
            if isinstance(table, str):
                table = _read_json(_resolve(table, base_dir))
            tables[_freq_key(key)] = ChannelParams.from_dict(table)
            _require(math.isclose(tables[_freq_key(key)].frequency_ghz, float(key)),
                     "frequency_ghz", f"table keyed {key} declares a different frequency")
        return cls(scenario, tables)


def noise_power_dbm(bandwidth_hz: float, noise_figure_db: float,
                    noise_psd_dbm_per_hz: float = -174.0) -> float:
    """Thermal noise power ``N0 + 10*log10(BW) + NF`` in dBm."""
    if bandwidth_hz <= 0:
        raise ValueError("bandwidth must be > 0")
    return noise_psd_dbm_per_hz + 10.0 * math.log10(bandwidth_hz) + noise_figure_db


def _data_dir() -> Path:
    return Path(str(resources.files("mmwave_inr") / "data"))


def _resolve(name: str, base_dir: Path | None) -> Path:
    p = Path(name)
    if p.is_absolute():
        return p
    if base_dir is not None and (base_dir / p).exists():
        return base_dir / p
    return _data_dir() / p


def _read_json(path: Path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ConfigError(str(path), "file not found") from None
    except json.JSONDecodeError as e:
        raise ConfigError(str(path), f"parse error: {e}") from None


def default_config_path() -> Path:
    return _data_dir() / "default.json"


def load_config(path: str | Path | None = None) -> SimulationConfig:
    """Load and validate a configuration file (the shipped default if ``None``)."""
    path = Path(path) if path is not None else default_config_path()
    return SimulationConfig.from_dict(_read_json(path), base_dir=path.parent)


def save_config(config: SimulationConfig, path: str | Path) -> None:
    """Write ``config`` with channel tables inlined."""
    with open(path, "w") as fh:
        json.dump(config.to_dict(), fh, indent=2)
