"""Gallery Module.

Builtin pairs with their expected verdicts. The entries use the JSON pair schema of
`tametop.whitney.loader`, so ``configs/pairs`` holds the same definitions as files.
"""

import math
from copy import deepcopy

from tametop.exceptions import TameTopError
from tametop.whitney.conditions import PairSpec
from tametop.whitney.loader import parse_pair


class UnknownGallery(TameTopError):
    """Raised for a gallery name that is not builtin."""


def _line(ambient: int, box: list) -> dict:
    zeros = ["0"] * (ambient - 1)
    return {
        "ambient_dim": ambient,
        "intrinsic_dim": 1,
        "charts": [{"params": ["x"], "coords": ["x"] + zeros, "box": [box]}],
    }


def _divergent(name: str) -> dict:
    return {"name": name, "family": "geometric", "base": 2, "direction": "divergent"}


GALLERY: dict[str, dict] = {
    # curves y = exp(-t x) pile onto the segment: tilt over distance grows like t
    "exp-curves": {
        "name": "exp-curves",
        "base_point": [0.5, 0],
        "x": {
            "ambient_dim": 2,
            "intrinsic_dim": 1,
            "family": _divergent("t"),
            "charts": [{"params": ["x"], "coords": ["x", "exp(-t*x)"], "box": [[0, 1]]}],
        },
        "y": _line(2, [0, 1]),
        "expected": {"w": "FAILS"},
    },
    "stacked-lines": {
        "name": "stacked-lines",
        "base_point": [0, 0],
        "x": {
            "ambient_dim": 2,
            "intrinsic_dim": 1,
            "family": _divergent("t"),
            "charts": [{"params": ["x"], "coords": ["x", "1/t"], "box": [[-1, 1]]}],
        },
        "y": _line(2, [-1, 1]),
        "expected": {"a": "HOLDS", "b": "FAILS", "w": "HOLDS"},
    },
    "spiral": {
        "name": "spiral",
        "base_point": [0.5, 0, 0],
        "x": {
            "ambient_dim": 3,
            "intrinsic_dim": 1,
            "family": {"name": "r", "family": "geometric", "base": 2, "direction": "convergent"},
            "charts": [
                {
                    "params": ["x"],
                    "coords": ["x", "r*sin(x/r)", "r*cos(x/r)"],
                    "box": [[0, 1]],
                }
            ],
        },
        "y": _line(3, [0, 1]),
        "expected": {"a": "FAILS"},
    },
    "half-plane": {
        "name": "half-plane",
        "base_point": [0, 0],
        "x": {
            "ambient_dim": 2,
            "intrinsic_dim": 2,
            "charts": [{"params": ["x", "y"], "coords": ["x", "y"], "box": [[-1, 1], [0, 1]]}],
        },
        "y": _line(2, [-1, 1]),
        "expected": {"a": "HOLDS", "b": "HOLDS", "w": "HOLDS"},
    },
}


MARGIN: float = 10.0

# (a) on the spiral is the constant angle 1/sqrt(2) between helix and axis; a bounded (w)
# ratio only has to stay under hold_ratio times its median.
MARGIN_FLOORS: dict[tuple[str, str], float] = {
    ("spiral", "a"): 7.0,
    ("stacked-lines", "w"): 1.0,
}


def required_margin(name: str, condition: str) -> float:
    """Smallest margin the verdict of a builtin pair must reach at the final scale."""
    return MARGIN_FLOORS.get((name, condition), MARGIN)


def clears_margin(name: str, condition: str, value: float) -> bool:
    """Whether ``value`` reaches `required_margin` up to rounding."""
    floor = required_margin(name, condition)
    return value >= floor or math.isclose(value, floor, rel_tol=1e-9)


def gallery_names() -> list[str]:
    """Names of the builtin pairs."""
    return sorted(GALLERY)


def gallery_data(name: str) -> dict:
    """A copy of the JSON form of a builtin pair.

    Raises:
        UnknownGallery: For names outside `gallery_names`.
    """
    if name not in GALLERY:
        raise UnknownGallery(f"unknown gallery pair {name!r}, known: {', '.join(gallery_names())}")
    return deepcopy(GALLERY[name])


def gallery(name: str) -> PairSpec:
    """The builtin pair ``name`` with its expected verdicts.

    Raises:
        UnknownGallery: For names outside `gallery_names`.
    """
    return parse_pair(gallery_data(name))
