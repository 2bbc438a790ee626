"""Scenario configuration: versioned JSON schema, strict validation, defaults.

Unknown keys are rejected everywhere.  User configs are merged over the
built-in defaults, so a config file only needs the fields it changes.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import jsonschema

from .. import crew
from ..gpws import AttackSchedule, Mode2Envelope
from ..tcas import AdvisoryThresholds, FalseIntruderPlan
from ..world import RunwayModel, TerrainProfile

SCENARIOS = ("GPWS", "TCAS", "GS", "BASELINE")

CONFIG_VERSION = 1


class ConfigError(Exception):
    """Invalid scenario configuration; message carries the failing field."""


def _obj(properties: dict, required: Optional[List[str]] = None) -> dict:
    schema = {
        "type": "object",
        "properties": properties,
        "additionalProperties": False,
    }
    if required:
        schema["required"] = required
    return schema


_NUM = {"type": "number"}
_POS = {"type": "number", "exclusiveMinimum": 0}
_NONNEG = {"type": "number", "minimum": 0}
_PROB = {"type": "number", "minimum": 0, "maximum": 1}
_DIST = {
    "type": "object",
    "additionalProperties": {"type": "number", "minimum": 0, "maximum": 1},
}

SCHEMA = _obj(
    {
        "version": {"const": CONFIG_VERSION},
        "scenario": {"enum": list(SCENARIOS)},
        "trials": {"type": "integer", "minimum": 1},
        "master_seed": {"type": "integer", "minimum": 0},
        "output_dir": {"type": "string"},
        "world": _obj(
            {
                "dt_s": _POS,
                "runway": _obj(
                    {
                        "threshold_position_m": _NUM,
                        "touchdown_zone_offset_m": _NONNEG,
                        "elevation_m": _NUM,
                        "true_bearing_deg": _NUM,
                        "length_m": _POS,
                    }
                ),
                "terrain": {
                    "type": "array",
                    "minItems": 2,
                    "items": {
                        "type": "array",
                        "items": _NUM,
                        "minItems": 2,
                        "maxItems": 2,
                    },
                },
                "approach": _obj(
                    {
                        "ground_speed_kn": _POS,
                        "descent_rate_fpm": _POS,
                        "start_agl_ft": _POS,
                    }
                ),
                "cruise": _obj(
                    {"altitude_ft": _POS, "ground_speed_kn": _POS}
                ),
            }
        ),
        "attacker": _obj(
            {
                "enabled": {"type": "boolean"},
                "gpws": _obj(
                    {
                        "base_trigger_ft": _POS,
                        "increment_per_approach_ft": _NONNEG,
                        "jitter_window_ft": _NONNEG,
                        "apparent_descent_rate_mps": _POS,
                    }
                ),
                "tcas": _obj(
                    {
                        "approach_bearing_deg": _NUM,
                        "approach_speed_mps": _POS,
                        "vertical_offset_ft": _NUM,
                        "activation_floor_ft": _NONNEG,
                        "alert_budget": {"type": "integer", "minimum": 0},
                        "start_tau_s": _POS,
                        "bearing_jitter_deg": _NONNEG,
                        "speed_jitter_mps": _NONNEG,
                        "position_m": {
                            "type": "array",
                            "items": _NUM,
                            "minItems": 3,
                            "maxItems": 3,
                        },
                    }
                ),
                "gs": _obj(
                    {
                        "shift_m": _POS,
                        "tx_power_w": _POS,
                        "path_angle_deg": _POS,
                    }
                ),
            }
        ),
        "policies": _obj(
            {
                "gpws": _obj(
                    {
                        "approach_actions": {"type": "array", "items": _DIST},
                        "reaction_latency_mean_s": _NONNEG,
                        "reaction_latency_sd_s": _POS,
                    }
                ),
                "tcas": _obj(
                    {
                        "p_downgrade": _PROB,
                        "p_standby_given_downgrade": _PROB,
                        "ras_before_ta_only_mean": _POS,
                        "ras_before_ta_only_sd": _POS,
                        "extra_tas_before_standby_mean": _NONNEG,
                        "extra_tas_before_standby_sd": _POS,
                        "action_given_final_mode": {
                            "type": "object",
                            "additionalProperties": _DIST,
                        },
                    }
                ),
                "gs": _obj(
                    {
                        "p_go_around_first": _PROB,
                        "go_around_agl_mean_ft": _POS,
                        "go_around_agl_sd_ft": _POS,
                        "go_around_agl_lo_ft": _POS,
                        "go_around_agl_hi_ft": _POS,
                        "fallback_approaches": _DIST,
                    }
                ),
            }
        ),
        "tcas_system": _obj(
            {
                "tau_ta_s": _POS,
                "tau_ra_s": _POS,
                "ta_band_ft": _POS,
                "ra_band_ft": _POS,
                "max_episodes": {"type": "integer", "minimum": 1},
                "inter_episode_gap_s": _POS,
            }
        ),
        "sentinel": _obj(
            {
                "sensor_extent_m": _POS,
                "clock_jitter_ns": _NONNEG,
                "residual_threshold_m": _POS,
            }
        ),
        "output": _obj({"altitude_trace": {"type": "boolean"}}),
    },
    required=["version", "scenario"],
)


def default_config_dict(scenario: str = "GPWS") -> Dict[str, Any]:
    if scenario not in SCENARIOS:
        raise ConfigError(f"scenario: unknown scenario {scenario!r}")
    return {
        "version": CONFIG_VERSION,
        "scenario": scenario,
        "trials": 100,
        "master_seed": 20190118,
        "output_dir": "out",
        "world": {
            "dt_s": 0.1,
            "runway": {
                "threshold_position_m": 0.0,
                "touchdown_zone_offset_m": 300.0,
                "elevation_m": 100.0,
                "true_bearing_deg": 327.0,
                "length_m": 2600.0,
            },
            "terrain": [[-50000.0, 100.0], [50000.0, 100.0]],
            "approach": {
                "ground_speed_kn": 130.0,
                "descent_rate_fpm": 700.0,
                "start_agl_ft": 1500.0,
            },
            "cruise": {"altitude_ft": 12000.0, "ground_speed_kn": 230.0},
        },
        "attacker": {
            "enabled": scenario != "BASELINE",
            "gpws": {
                "base_trigger_ft": 500.0,
                "increment_per_approach_ft": 250.0,
                "jitter_window_ft": 50.0,
                "apparent_descent_rate_mps": 15.4,
            },
            "tcas": {
                "approach_bearing_deg": 45.0,
                "approach_speed_mps": 180.0,
                "vertical_offset_ft": -500.0,
                "activation_floor_ft": 2000.0,
                "alert_budget": 10,
                "start_tau_s": 50.0,
                "bearing_jitter_deg": 180.0,
                "speed_jitter_mps": 60.0,
                "position_m": [-5000.0, 8000.0, 150.0],
            },
            "gs": {"shift_m": 2050.0, "tx_power_w": 50.0, "path_angle_deg": 3.0},
        },
        "policies": {
            "gpws": {},
            "tcas": {},
            "gs": {},
        },
        "tcas_system": {
            "tau_ta_s": 48.0,
            "tau_ra_s": 30.0,
            "ta_band_ft": 1200.0,
            "ra_band_ft": 600.0,
            "max_episodes": 30,
            "inter_episode_gap_s": 20.0,
        },
        "sentinel": {
            "sensor_extent_m": 20000.0,
            "clock_jitter_ns": 100.0,
            "residual_threshold_m": 500.0,
        },
        "output": {"altitude_trace": False},
    }


def _merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    out = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


@dataclass
class ScenarioConfig:
    raw: Dict[str, Any] = field(repr=False, default_factory=dict)

    # -- convenience accessors -------------------------------------------

    @property
    def scenario(self) -> str:
        return self.raw["scenario"]

    @property
    def trials(self) -> int:
        return self.raw["trials"]

    @property
    def master_seed(self) -> int:
        return self.raw["master_seed"]

    @property
    def output_dir(self) -> str:
        return self.raw["output_dir"]

    @property
    def dt(self) -> float:
        return self.raw["world"]["dt_s"]

    @property
    def attacker_enabled(self) -> bool:
        return self.raw["attacker"]["enabled"]

    def runway(self) -> RunwayModel:
        r = self.raw["world"]["runway"]
        return RunwayModel(
            threshold_position=r["threshold_position_m"],
            touchdown_zone_offset=r["touchdown_zone_offset_m"],
            elevation=r["elevation_m"],
            true_bearing=r["true_bearing_deg"],
            length=r["length_m"],
        )

    def terrain(self) -> TerrainProfile:
        return TerrainProfile([tuple(p) for p in self.raw["world"]["terrain"]])

    def approach(self) -> Dict[str, float]:
        return self.raw["world"]["approach"]

    def cruise(self) -> Dict[str, float]:
        return self.raw["world"]["cruise"]

    def gpws_attack_schedule(self) -> AttackSchedule:
        a = self.raw["attacker"]["gpws"]
        return AttackSchedule(
            base_trigger_ft=a["base_trigger_ft"],
            increment_per_approach_ft=a["increment_per_approach_ft"],
            jitter_window_ft=a["jitter_window_ft"],
        )

    def gpws_envelope(self) -> Mode2Envelope:
        return Mode2Envelope()

    def gpws_policy(self) -> crew.GpwsPolicy:
        p = self.raw["policies"]["gpws"]
        kwargs: Dict[str, Any] = {}
        if "approach_actions" in p:
            kwargs["approach_actions"] = tuple(dict(d) for d in p["approach_actions"])
        for key in ("reaction_latency_mean_s", "reaction_latency_sd_s"):
            if key in p:
                kwargs[key] = p[key]
        return crew.GpwsPolicy(**kwargs)

    def tcas_policy(self) -> crew.TcasPolicy:
        p = dict(self.raw["policies"]["tcas"])
        return crew.TcasPolicy(**p)

    def gs_policy(self) -> crew.GsPolicy:
        p = dict(self.raw["policies"]["gs"])
        return crew.GsPolicy(**p)

    def tcas_thresholds(self) -> AdvisoryThresholds:
        s = self.raw["tcas_system"]
        return AdvisoryThresholds(
            tau_ta_s=s["tau_ta_s"],
            tau_ra_s=s["tau_ra_s"],
            ta_band_ft=s["ta_band_ft"],
            ra_band_ft=s["ra_band_ft"],
        )

    def false_intruder_plan(self) -> FalseIntruderPlan:
        a = self.raw["attacker"]["tcas"]
        return FalseIntruderPlan(
            approach_bearing=a["approach_bearing_deg"],
            approach_speed=a["approach_speed_mps"],
            vertical_offset=a["vertical_offset_ft"],
            activation_floor=a["activation_floor_ft"],
            alert_budget=a["alert_budget"],
            start_tau_s=a["start_tau_s"],
            bearing_jitter_deg=a["bearing_jitter_deg"],
            speed_jitter_mps=a["speed_jitter_mps"],
        )


def validate_config_dict(data: Dict[str, Any]) -> None:
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        msgs = []
        for err in errors:
            path = ".".join(str(p) for p in err.absolute_path) or "<root>"
            msgs.append(f"{path}: {err.message}")
        raise ConfigError("; ".join(msgs))


def make_config(data: Dict[str, Any]) -> ScenarioConfig:
    """Validate a (possibly partial) config dict and merge it over defaults."""

    if not isinstance(data, dict):
        raise ConfigError("<root>: config must be a JSON object")
    validate_config_dict(data)
    merged = _merge(default_config_dict(data.get("scenario", "GPWS")), data)
    validate_config_dict(merged)
    cfg = ScenarioConfig(raw=merged)
    # Semantic checks jsonschema cannot express.
    try:
        cfg.runway()
        cfg.terrain()
        cfg.gpws_policy()
        cfg.tcas_policy()
        cfg.gs_policy()
        cfg.false_intruder_plan()
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc
    return cfg


def load_config(path: str | Path) -> ScenarioConfig:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return make_config(data)
