"""Deterministic, seedable simulation of wireless interference attacks on
avionics: radio-altimeter ramp spoofing driving terrain alerts, false-intruder
injection into collision avoidance, and a displaced glideslope transmitter --
with outcome-calibrated pilot agents and signal-integrity checks."""

__version__ = "0.1.0"

__all__ = [
    "units",
    "world",
    "radalt",
    "gpws",
    "tcas",
    "ils",
    "crew",
    "sentinel",
    "harness",
]
