"""Scenario configuration, trial execution, aggregation, costs and the CLI."""

from .config import ConfigError, ScenarioConfig, default_config_dict, load_config
from .runner import run
from .summary import summarize
from .cost import disruption_cost

__all__ = [
    "ConfigError",
    "ScenarioConfig",
    "default_config_dict",
    "load_config",
    "run",
    "summarize",
    "disruption_cost",
]
