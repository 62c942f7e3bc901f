"""Loader Module.

Reads pair specifications from JSON::

    {
      "name": "stacked-lines",
      "base_point": [0, 0],
      "x": {"ambient_dim": 2, "intrinsic_dim": 1,
            "family": {"name": "t", "family": "geometric", "base": 2,
                       "direction": "divergent"},
            "charts": [{"params": ["x"], "coords": ["x", "1/t"], "box": [[-1, 1]]}]},
      "y": {"ambient_dim": 2, "intrinsic_dim": 1,
            "charts": [{"params": ["x"], "coords": ["x", "0"], "box": [[-1, 1]]}]},
      "schedule": {"r0": 0.25, "scales": 8, "samples": 64},
      "expected": {"b": "FAILS", "w": "HOLDS"}
    }
"""

import json
from dataclasses import fields
from logging import Logger
from typing import Any

from tametop.exceptions import ConfigError, TameTopError
from tametop.utils import get_logger
from tametop.whitney.conditions import Condition, PairSpec, SweepSettings, VerdictKind
from tametop.whitney.expr import ExprSyntaxError, parse_expression
from tametop.whitney.manifold import Chart, DiscreteFamily, ParamManifold

LOGGER: Logger = get_logger()


class InvalidPairSpec(TameTopError):
    """Raised when a pair specification does not follow the schema."""


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise InvalidPairSpec(message)


def parse_family(data: Any):
    """Reads the optional discrete family."""
    if data is None:
        return None
    _require(isinstance(data, dict) and isinstance(data.get("name"), str), "bad family")
    _require(data.get("family", "geometric") == "geometric", "only geometric families")
    try:
        return DiscreteFamily(
            data["name"], float(data.get("base", 2)), data.get("direction", "divergent")
        )
    except (TypeError, ValueError) as exc:
        raise InvalidPairSpec(f"bad family: {exc}") from exc


def parse_chart(data: Any, family_name: str = "") -> Chart:
    """Reads one chart; expressions may use the chart parameters and the family name."""
    _require(isinstance(data, dict), "chart must be an object")
    params = data.get("params")
    coords = data.get("coords")
    box = data.get("box")
    _require(isinstance(params, list) and all(isinstance(p, str) for p in params), "bad params")
    _require(isinstance(coords, list) and all(isinstance(c, str) for c in coords), "bad coords")
    _require(
        isinstance(box, list)
        and len(box) == len(params)
        and all(isinstance(side, list) and len(side) == 2 for side in box),
        "box needs one [low, high] pair per parameter",
    )
    names = params + ([family_name] if family_name else [])
    try:
        lows = tuple(float(side[0]) for side in box)
        highs = tuple(float(side[1]) for side in box)
    except (TypeError, ValueError) as exc:
        raise InvalidPairSpec(f"bad box: {exc}") from exc
    _require(all(lo < hi for lo, hi in zip(lows, highs)), "empty parameter box")
    expressions = tuple(parse_expression(text, names) for text in coords)
    return Chart(expressions, tuple(params), lows, highs)


def parse_manifold(data: Any, name: str) -> ParamManifold:
    """Reads a manifold description."""
    _require(isinstance(data, dict), f"{name} must be an object")
    family = parse_family(data.get("family"))
    charts = data.get("charts")
    _require(isinstance(charts, list) and len(charts) > 0, f"{name} needs at least one chart")
    parsed = tuple(parse_chart(chart, family.name if family else "") for chart in charts)
    try:
        return ParamManifold(
            name,
            int(data.get("ambient_dim", len(parsed[0].coords))),
            int(data.get("intrinsic_dim", len(parsed[0].params))),
            parsed,
            family,
        )
    except ValueError as exc:
        raise InvalidPairSpec(str(exc)) from exc


def parse_settings(data: Any) -> SweepSettings:
    """Reads the optional ``schedule`` block; unknown keys are rejected."""
    if data is None:
        return SweepSettings()
    _require(isinstance(data, dict), "schedule must be an object")
    known = {item.name: item.type for item in fields(SweepSettings)}
    unknown = sorted(set(data) - set(known))
    _require(not unknown, f"unknown schedule keys {unknown}")
    values = {key: (int(value) if key in ("scales", "samples", "window") else float(value))
              for key, value in data.items()}
    return SweepSettings(**values)


def parse_pair(data: Any) -> PairSpec:
    """Builds a `PairSpec` from decoded JSON.

    Raises:
        InvalidPairSpec: On schema errors, including unreadable expressions.
    """
    _require(isinstance(data, dict), "pair must be an object")
    name = data.get("name", "pair")
    try:
        x = parse_manifold(data.get("x"), "X")
        y = parse_manifold(data.get("y"), "Y")
    except ExprSyntaxError as exc:
        raise InvalidPairSpec(f"{name}: {exc}") from exc
    base = data.get("base_point")
    _require(isinstance(base, list) and len(base) == x.ambient_dim == y.ambient_dim,
             "base_point must match the ambient dimension of X and Y")
    expected = data.get("expected", {})
    _require(
        isinstance(expected, dict)
        and all(k in {c.value for c in Condition} for k in expected)
        and all(v in {kind.value for kind in VerdictKind} for v in expected.values()),
        "expected maps a|b|w to HOLDS|FAILS|INCONCLUSIVE",
    )
    return PairSpec(
        str(name),
        x,
        y,
        tuple(float(value) for value in base),
        parse_settings(data.get("schedule")),
        dict(expected),
    )


def load_pair(path: str) -> PairSpec:
    """Reads a pair from a JSON file.

    Raises:
        ConfigError: On unreadable JSON or an invalid pair, with the path.
    """
    with open(path, "r", encoding="utf-8") as file:
        try:
            data = json.load(file)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON: {exc}", path) from exc
    try:
        pair = parse_pair(data)
    except InvalidPairSpec as exc:
        raise ConfigError(str(exc), path) from exc
    LOGGER.debug(f"loaded pair {pair.name} from {path}")
    return pair
