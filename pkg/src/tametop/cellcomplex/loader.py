"""Loader Module.

Reads complexes from the JSON format::

    {"cells": [{"id": "c0", "dim": 0}, ...], "frontier": [["c0", "c1"], ...]}

where a pair ``[a, b]`` means that ``a`` lies in the frontier of ``b``.
"""

import json
from logging import Logger
from typing import Any

from tametop.cellcomplex.complex import Cell, InvalidComplex, StratComplex
from tametop.exceptions import ConfigError
from tametop.utils import get_logger

LOGGER: Logger = get_logger()


def parse_complex(data: Any, path: str = "<input>") -> StratComplex:
    """Builds a complex from decoded JSON.

    Args:
        data: The decoded document.
        path (str): Source name used in error messages.

    Returns:
        StratComplex: The (not yet validated) complex.

    Raises:
        ConfigError: If the document does not follow the schema.
    """
    if not isinstance(data, dict) or not isinstance(data.get("cells"), list):
        raise ConfigError("expected an object with a 'cells' list", path)
    cells = []
    for entry in data["cells"]:
        if not isinstance(entry, dict) or not isinstance(entry.get("id"), str):
            raise ConfigError(f"malformed cell {entry!r}", path)
        dim = entry.get("dim", 0)
        if not isinstance(dim, int) or isinstance(dim, bool):
            raise ConfigError(f"cell {entry['id']!r} has a non-integer dim", path)
        cells.append(Cell(entry["id"], dim))
    pairs = data.get("frontier", [])
    if not isinstance(pairs, list) or not all(
        isinstance(pair, list) and len(pair) == 2 and all(isinstance(c, str) for c in pair)
        for pair in pairs
    ):
        raise ConfigError("'frontier' must be a list of [low, high] id pairs", path)
    try:
        return StratComplex(cells, [tuple(pair) for pair in pairs])
    except InvalidComplex as exc:
        raise ConfigError(str(exc), path) from exc


def load_complex(path: str) -> StratComplex:
    """Reads a complex from a JSON file.

    Raises:
        ConfigError: On unreadable JSON or schema errors.
        OSError: If the file cannot be opened.
    """
    with open(path, "r", encoding="utf-8") as file:
        try:
            data = json.load(file)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON: {exc}", path) from exc
    LOGGER.debug(f"loaded complex from {path}")
    return parse_complex(data, path)


def complex_to_dict(complex_: StratComplex) -> dict:
    """The JSON form of a complex."""
    return {
        "cells": [{"id": cell.id, "dim": cell.dim} for cell in complex_.cells.values()],
        "frontier": [list(pair) for pair in complex_.pairs()],
    }
