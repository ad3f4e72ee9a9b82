"""Flat ``key = value`` scenario files.

Example::

    # 0.02 m block under the third footfall
    step_length = 0.2
    cycle_period = 1.8
    dt = 0.005
    n_cycles = 6
    sensor_offset 0.003
    obstacle 0.27 0.53 0.02

Keys are the field names of :class:`GaitParams`, :class:`RobotGeometry`
and :class:`Scenario` plus ``sensor_offset`` / ``trigger_offset`` and
``latency_ticks``.  ``obstacle x_start x_end height [y_min y_max]`` lines
add terrain segments.  Unknown keys are rejected.
"""
from __future__ import annotations

from dataclasses import fields
from pathlib import Path

from .core import GaitParams, RobotGeometry
from .errors import ConfigError
from .simulator import Scenario
from .terrain import SensorConfig, Terrain

_GAIT_KEYS = {f.name for f in fields(GaitParams)}
_GEOM_KEYS = {f.name for f in fields(RobotGeometry) if not f.name.endswith("_com")}
_SCENARIO_KEYS = {"dt", "n_cycles", "h", "seed"}
_SENSOR_KEYS = {"sensor_offset": "trigger_offset", "trigger_offset": "trigger_offset",
                "latency_ticks": "latency_ticks"}
_INT_KEYS = {"n_cycles", "seed", "latency_ticks"}


def _number(key: str, text: str, lineno: int):
    try:
        return int(text) if key in _INT_KEYS else float(text)
    except ValueError:
        raise ConfigError(f"line {lineno}: {key} expects a number, got {text!r}") from None


def parse_scenario(text: str) -> Scenario:
    gait, geom, scen, sensor = {}, {}, {}, {}
    obstacles = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" in line:
            key, value = (s.strip() for s in line.split("=", 1))
            parts = [value]
        else:
            key, *parts = line.split()
        if key == "obstacle":
            if len(parts) not in (3, 5):
                raise ConfigError(f"line {lineno}: obstacle needs x_start x_end height [y_min y_max]")
            obstacles.append(tuple(_number(key, p, lineno) for p in parts))
            continue
        if len(parts) != 1:
            raise ConfigError(f"line {lineno}: expected one value for {key!r}")
        value = parts[0]
        if key == "lateral_coupling":
            gait[key] = value
        elif key in _GAIT_KEYS:
            gait[key] = _number(key, value, lineno)
        elif key in _GEOM_KEYS:
            geom[key] = _number(key, value, lineno)
        elif key in _SCENARIO_KEYS:
            scen[key] = _number(key, value, lineno)
        elif key in _SENSOR_KEYS:
            sensor[_SENSOR_KEYS[key]] = _number(key, value, lineno)
        else:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
    try:
        return Scenario(gait=GaitParams(**gait), geometry=RobotGeometry(**geom),
                        terrain=Terrain.from_tuples(obstacles), sensor=SensorConfig(**sensor), **scen)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def load_scenario(path: str | Path) -> Scenario:
    return parse_scenario(Path(path).read_text(encoding="utf-8"))


def dump_scenario(sc: Scenario) -> str:
    """Inverse of :func:`parse_scenario` (defaults included)."""
    lines = []
    for f in fields(GaitParams):
        lines.append(f"{f.name} = {getattr(sc.gait, f.name)!r}".replace("'", ""))
    for name in sorted(_GEOM_KEYS):
        lines.append(f"{name} = {getattr(sc.geometry, name)!r}")
    lines += [f"dt = {sc.dt!r}", f"n_cycles = {sc.n_cycles}", f"seed = {sc.seed}"]
    if sc.h is not None:
        lines.append(f"h = {sc.h!r}")
    lines.append(f"sensor_offset = {sc.sensor.trigger_offset!r}")
    lines.append(f"latency_ticks = {sc.sensor.latency_ticks}")
    for s in sc.terrain.segments:
        row = [s.x_start, s.x_end, s.height]
        if s.y_range != (float("-inf"), float("inf")):
            row += list(s.y_range)
        lines.append("obstacle " + " ".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"
