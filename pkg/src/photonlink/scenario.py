"""Scenario file loading.

A scenario file is one JSON object. Its keys are the :class:`LinkScenario`
field names (same units) plus two optional lists:

``radiance_levels``
    spectral radiances (uW cm^-2 sr^-1 um^-1) swept by ``compare``
``modulations``
    ``"DPSK"`` and/or PPM orders, e.g. ``["DPSK", 2, 4, 8, 16, 32]``

Missing fields take the :class:`LinkScenario` defaults. Unknown keys are
rejected so that a misspelled unit-bearing field cannot slip through.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass
from pathlib import Path

from photonlink.curves import parse_modulation
from photonlink.linkbudget import LinkScenario

__all__ = ["ScenarioError", "ScenarioFile", "load_scenario", "parse_scenario"]

DEFAULT_MODULATIONS = ("DPSK", 2, 4, 8, 16, 32)
DEFAULT_RADIANCE_LEVELS = (10.0, 5.0, 1.0, 0.5, 0.1)

_FIELDS = {f.name for f in dataclasses.fields(LinkScenario)}
_EXTRA = {"radiance_levels", "modulations"}


class ScenarioError(ValueError):
    """Malformed or inconsistent scenario file."""


@dataclass(frozen=True)
class ScenarioFile:
    scenario: LinkScenario
    radiance_levels: tuple[float, ...] = DEFAULT_RADIANCE_LEVELS
    modulations: tuple = DEFAULT_MODULATIONS


def _number(key, value):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"{key}: expected a number, got {value!r}")
    return float(value)


def parse_scenario(doc) -> ScenarioFile:
    if not isinstance(doc, dict):
        raise ScenarioError("scenario must be a JSON object")
    unknown = sorted(set(doc) - _FIELDS - _EXTRA)
    if unknown:
        raise ScenarioError(f"unknown scenario keys: {', '.join(unknown)}")

    fields = {}
    for key, value in doc.items():
        if key in _EXTRA:
            continue
        if key == "polarization_filtered":
            if not isinstance(value, bool):
                raise ScenarioError(f"{key}: expected true or false, got {value!r}")
            fields[key] = value
        else:
            fields[key] = _number(key, value)
    try:
        scenario = LinkScenario(**fields)
    except ValueError as exc:
        raise ScenarioError(str(exc)) from None

    levels = doc.get("radiance_levels", DEFAULT_RADIANCE_LEVELS)
    if not isinstance(levels, (list, tuple)) or not levels:
        raise ScenarioError("radiance_levels must be a non-empty list")
    levels = tuple(_number("radiance_levels", v) for v in levels)
    if any(v < 0 or not math.isfinite(v) for v in levels):
        raise ScenarioError("radiance_levels must be finite and >= 0")

    mods = doc.get("modulations", DEFAULT_MODULATIONS)
    if not isinstance(mods, (list, tuple)) or not mods:
        raise ScenarioError("modulations must be a non-empty list")
    try:
        mods = tuple(parse_modulation(m) for m in mods)
    except ValueError as exc:
        raise ScenarioError(str(exc)) from None
    return ScenarioFile(scenario, levels, mods)


def load_scenario(path) -> ScenarioFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario file {path}: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: invalid JSON: {exc}") from None
    return parse_scenario(doc)
