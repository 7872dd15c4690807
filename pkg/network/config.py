"""
Scenario configuration for the small-cell simulator.

This module handles:
- The validated ScenarioConfig model and its derived radio quantities
- The YAML scenario catalogue (defaults plus named scenarios)
- Resolution of catalogue entries, user files and explicit overrides
"""

import math
import os
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from errors import ConfigError
from network.consts import DEFAULT_PATHLOSS, MIN_DISTANCE_M, SBS_SBS, SBS_USER, USER_USER

load_dotenv(override=True)

CATALOGUE_PATH = Path(__file__).resolve().parent.parent / "scenario_config.yaml"

# Resolution order: defaults, then a named scenario, then a file, then explicit overrides.
PAPER_SCALE = {
    "num_sbs": 10,
    "mean_users_per_sbs": 10.0,
    "num_subframes": 4000,
    "replications": 30,
}


def db_to_linear(value_db: float) -> float:
    return 10.0 ** (value_db / 10.0)


def linear_to_db(value: float) -> float:
    return 10.0 * math.log10(value)


def dbm_to_watts(value_dbm: float) -> float:
    return db_to_linear(value_dbm) / 1000.0


class ScenarioConfig(BaseModel):
    """
    Every parameter of one simulated network.

    Powers are in watts, rates in bits, times in seconds and distances in
    meters. delta_ul / delta_dl default to half of the UL budget and 90% of
    the DL budget when omitted.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    # geometry
    area_side: float = Field(500.0, gt=0)
    num_sbs: int = Field(4, ge=0)
    mean_users_per_sbs: float = Field(5.0, ge=0)
    cell_radius: float = Field(40.0, gt=0)
    coverage_radius: float = Field(80.0, gt=0)
    sbs_positions: Optional[List[Tuple[float, float]]] = None
    num_users: Optional[int] = Field(None, ge=0)

    # radio
    bandwidth: float = Field(1e7, gt=0)
    p_max_ul: float = Field(0.1, gt=0)
    p_max_dl: float = Field(0.158489, gt=0)
    si_cancellation: float = Field(1e11, gt=0)
    noma_quota: int = Field(5, ge=1)
    noise_figure_db: float = 9.0
    thermal_noise_dbm_hz: float = -174.0
    noise_power_w: Optional[float] = Field(None, gt=0)
    sinr_cap_db: float = 30.0

    # drift-plus-penalty
    lyapunov_v: float = Field(5e7, gt=0)
    delta_ul: Optional[float] = Field(None, gt=0)
    delta_dl: Optional[float] = Field(None, gt=0)
    nu1: float = Field(0.1, gt=0, le=1)
    nu2: float = Field(0.1, gt=0, le=1)

    # traffic
    lambda_ul: float = Field(5.0, ge=0)
    lambda_dl: float = Field(5.0, ge=0)
    mean_packet_size: float = Field(1e5, gt=0)
    a_max_factor: float = Field(20.0, gt=0)
    subframe_duration: float = Field(1e-3, gt=0)
    num_subframes: int = Field(500, ge=0)
    rng_seed: int = Field(0, ge=0)

    # channel
    shadowing_std_db: float = Field(4.0, ge=0)
    penetration_loss_db: float = Field(0.0, ge=0)
    fast_fading: bool = True
    pathloss_sbs_user: Tuple[float, float] = DEFAULT_PATHLOSS[SBS_USER]
    pathloss_user_user: Tuple[float, float] = DEFAULT_PATHLOSS[USER_USER]
    pathloss_sbs_sbs: Tuple[float, float] = DEFAULT_PATHLOSS[SBS_SBS]
    min_distance: float = Field(MIN_DISTANCE_M, gt=0)

    # baselines
    fd_pair_gain_threshold: float = Field(1e-7, gt=0)
    fd_pair_on_high_gain: bool = False
    noma_gain_ratio: float = Field(2.0, ge=1)

    # solvers
    ccp_max_iterations: int = Field(50, ge=1)
    ccp_relative_tolerance: float = Field(1e-3, gt=0)
    barrier_tolerance: float = Field(1e-9, gt=0)
    sic_halving_steps: int = Field(10, ge=0)
    matching_enumeration_limit: int = Field(12, ge=1)
    matching_max_rounds: int = Field(200, ge=1)
    record_matching_trace: bool = False
    record_interference: bool = False

    # runs
    replications: int = Field(5, ge=1)
    workers: int = Field(1, ge=1)

    @model_validator(mode="before")
    @classmethod
    def fill_average_power_targets(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        data = dict(data)
        p_max_ul = data.get("p_max_ul", cls.model_fields["p_max_ul"].default)
        p_max_dl = data.get("p_max_dl", cls.model_fields["p_max_dl"].default)
        if data.get("delta_ul") is None and isinstance(p_max_ul, (int, float)):
            data["delta_ul"] = 0.5 * p_max_ul
        if data.get("delta_dl") is None and isinstance(p_max_dl, (int, float)):
            data["delta_dl"] = 0.9 * p_max_dl
        return data

    @model_validator(mode="after")
    def check_consistency(self) -> "ScenarioConfig":
        if self.delta_ul > self.p_max_ul:
            raise ValueError(f"delta_ul={self.delta_ul} exceeds p_max_ul={self.p_max_ul}")
        if self.delta_dl > self.p_max_dl:
            raise ValueError(f"delta_dl={self.delta_dl} exceeds p_max_dl={self.p_max_dl}")
        if self.sbs_positions is not None and len(self.sbs_positions) != self.num_sbs:
            raise ValueError(
                f"{len(self.sbs_positions)} SBS positions given for num_sbs={self.num_sbs}"
            )
        if self.coverage_radius < self.cell_radius:
            raise ValueError("coverage_radius must be at least cell_radius")
        return self

    @property
    def noise_power(self) -> float:
        """N0 over the whole band, in watts."""
        if self.noise_power_w is not None:
            return self.noise_power_w
        return dbm_to_watts(self.thermal_noise_dbm_hz + self.noise_figure_db) * self.bandwidth

    @property
    def rate_scale(self) -> float:
        """Bits carried per subframe by one bit/s/Hz of spectral efficiency."""
        return self.bandwidth * self.subframe_duration

    @property
    def r_max(self) -> float:
        return self.rate_scale * math.log2(1.0 + db_to_linear(self.sinr_cap_db))

    @property
    def a_max(self) -> int:
        return int(math.ceil(self.a_max_factor * self.mean_packet_size))

    @property
    def si_cancellation_db(self) -> float:
        return linear_to_db(self.si_cancellation)

    @property
    def pathloss(self) -> Dict[str, Tuple[float, float]]:
        return {
            SBS_USER: self.pathloss_sbs_user,
            USER_USER: self.pathloss_user_user,
            SBS_SBS: self.pathloss_sbs_sbs,
        }

    def with_overrides(self, **overrides: Any) -> "ScenarioConfig":
        """Return a validated copy with some fields replaced."""
        data = self.model_dump()
        # Derived defaults must follow a changed budget unless given explicitly.
        for budget, target in (("p_max_ul", "delta_ul"), ("p_max_dl", "delta_dl")):
            if budget in overrides and target not in overrides:
                data[target] = None
        data.update(overrides)
        return make_config(**data)


def make_config(**values: Any) -> ScenarioConfig:
    """Build a ScenarioConfig, reporting invalid values as ConfigError."""
    try:
        return ScenarioConfig(**values)
    except ValidationError as e:
        raise ConfigError(f"Invalid scenario configuration: {e}") from e


def _read_yaml(path: Path) -> Dict[str, Any]:
    try:
        with open(path, "r") as f:
            content = yaml.safe_load(f) or {}
    except OSError as e:
        raise ConfigError(f"Cannot read scenario file {path}: {e}") from e
    except yaml.YAMLError as e:
        raise ConfigError(f"Malformed YAML in {path}: {e}") from e
    if not isinstance(content, dict):
        raise ConfigError(f"Scenario file {path} must hold a mapping")
    return content


def catalogue_path() -> Path:
    override = os.getenv("FDNOMA_SCENARIO_FILE")
    return Path(override) if override else CATALOGUE_PATH


def load_catalogue(path: Optional[Path] = None) -> Dict[str, Any]:
    """Load the scenario catalogue, with an empty one when the file is missing."""
    path = path or catalogue_path()
    if not path.exists():
        return {"defaults": {}, "scenarios": {}}
    content = _read_yaml(path)
    return {
        "defaults": content.get("defaults") or {},
        "scenarios": content.get("scenarios") or {},
    }


def list_scenarios(path: Optional[Path] = None) -> List[str]:
    return sorted(load_catalogue(path)["scenarios"])


def load_scenario(
    name: Optional[str] = None,
    config_file: Optional[Path] = None,
    full_scale: bool = False,
    catalogue: Optional[Path] = None,
    **overrides: Any,
) -> ScenarioConfig:
    """
    Resolve a scenario from the catalogue, an optional flat key/value file
    and explicit overrides (later sources win).
    """
    entries = load_catalogue(catalogue)
    values: Dict[str, Any] = dict(entries["defaults"])

    if name is not None:
        if name not in entries["scenarios"]:
            raise ConfigError(
                f"Unknown scenario '{name}', available: {sorted(entries['scenarios'])}"
            )
        values.update(entries["scenarios"][name] or {})

    if config_file is not None:
        values.update(_read_yaml(Path(config_file)))

    if full_scale:
        values.update(PAPER_SCALE)

    if "workers" not in overrides and os.getenv("FDNOMA_WORKERS"):
        try:
            values["workers"] = int(os.environ["FDNOMA_WORKERS"])
        except ValueError as e:
            raise ConfigError(f"FDNOMA_WORKERS must be an integer: {e}") from e

    values.update({k: v for k, v in overrides.items() if v is not None})
    return make_config(**values)
