"""Generators Module.

Builtin sets (``nested_chain``) and the seeded random sets used by the property checks.
Random sets stay inside the exactly decidable fragment: ratios are powers of 1/2 and all
divergent chains share the offset 0.
"""

from fractions import Fraction
from typing import Optional

import numpy as np

from tametop.tame1d.intervals import Interval
from tametop.tame1d.nodes import ANCHOR, Chain, Node, Point, place
from tametop.tame1d.rational import NEG_INF, POS_INF
from tametop.tame1d.tameset import Tame1DSet, build

HALF = Fraction(1, 2)
NEST_SHRINK = Fraction(6, 7)

GRID = [Fraction(v) for v in ("-2", "-1", "-1/2", "0", "1/4", "1/2", "1", "3/2", "2")]
EXTRA_POINTS = [Fraction(v) for v in ("1/8", "3/4", "1/3", "-1/4")]
LIMITS = [Fraction(v) for v in ("0", "1/2", "1", "-1")]
OFFSETS = [Fraction(v) for v in ("1/2", "-1/2", "1/4", "-1/4", "1", "-1")]
RATIOS = [Fraction(1, 2), Fraction(1, 4)]
KINDS = ["oo", "oc", "co", "cc"]


def nested_chain_node(n: int) -> Chain:
    """Closed chain of nesting depth ``n`` whose Cantor-Bendixson rank is ``n + 1``.

    ``nested_chain(1)`` is ``{2^-k} | {0}``; ``nested_chain(n)`` places a copy of
    ``nested_chain(n-1)`` (shrunk by 6/7 to fit the template window) at every ``2^-k``.
    """
    if n < 1:
        raise ValueError(f"nesting depth must be at least 1, got {n}")
    if n == 1:
        return Chain(Fraction(0), Fraction(1), HALF, (ANCHOR,), True)
    inner = place((nested_chain_node(n - 1),), Fraction(0), NEST_SHRINK)
    return Chain(Fraction(0), Fraction(1), HALF, inner, True)


def nested_chain(n: int) -> Tame1DSet:
    """``nested_chain_node(n)`` as a set."""
    return build((), [nested_chain_node(n)])


def _pick(rng: np.random.Generator, options: list):
    return options[int(rng.integers(len(options)))]


def _random_template(rng: np.random.Generator) -> tuple[Node, ...]:
    roll = rng.random()
    if roll < 0.5:
        return (ANCHOR,)
    if roll < 0.7:
        return (Point(-HALF), ANCHOR, Point(HALF))
    side = 1 if rng.random() < 0.5 else -1
    closed = bool(rng.random() < 0.7)
    return (Chain(Fraction(0), side * HALF, _pick(rng, RATIOS), (ANCHOR,), closed),)


def random_node(rng: np.random.Generator, allow_divergent: bool = True) -> Node:
    """A random point or chain from a small grid of limits, offsets and ratios."""
    roll = rng.random()
    if roll < 0.3:
        return Point(_pick(rng, GRID + EXTRA_POINTS))
    if allow_divergent and roll < 0.4:
        side = 1 if rng.random() < 0.5 else -1
        return Chain(Fraction(0), Fraction(side), _pick(rng, RATIOS), (ANCHOR,), False, True)
    return Chain(
        _pick(rng, LIMITS),
        _pick(rng, OFFSETS),
        _pick(rng, RATIOS),
        _random_template(rng),
        bool(rng.random() < 0.5),
    )


def random_interval(rng: np.random.Generator) -> Interval:
    """A random proper interval with ends on the grid (occasionally infinite)."""
    lo, hi = sorted(rng.choice(len(GRID), size=2, replace=False))
    low, high = GRID[lo], GRID[hi]
    kind = _pick(rng, KINDS)
    if rng.random() < 0.1:
        return Interval(NEG_INF, high, False, kind[1] == "c")
    if rng.random() < 0.1:
        return Interval(low, POS_INF, kind[0] == "c", False)
    return Interval(low, high, kind[0] == "c", kind[1] == "c")


def random_set(
    rng: np.random.Generator,
    max_atoms: int = 4,
    allow_intervals: bool = True,
    allow_divergent: bool = True,
) -> Tame1DSet:
    """A seeded random tame set built from up to ``max_atoms`` atoms.

    Args:
        rng (np.random.Generator): Source of randomness.
        max_atoms (int): Maximal number of intervals, points and chains.
        allow_intervals (bool): False yields sets with empty interior.
        allow_divergent (bool): Whether unbounded chains may appear.

    Returns:
        Tame1DSet: The normalized set.
    """
    count = int(rng.integers(1, max_atoms + 1))
    intervals: list[Interval] = []
    nodes: list[Node] = []
    for _ in range(count):
        if allow_intervals and rng.random() < 0.3:
            intervals.append(random_interval(rng))
        else:
            nodes.append(random_node(rng, allow_divergent))
    return build(intervals, nodes)


def random_family(
    rng: np.random.Generator, max_sets: int = 5, max_atoms: int = 3
) -> list[Tame1DSet]:
    """Up to ``max_sets`` random sets for the stratification checks."""
    return [
        random_set(rng, max_atoms=max_atoms) for _ in range(int(rng.integers(1, max_sets + 1)))
    ]


def seeded(seed: Optional[int]) -> np.random.Generator:
    """numpy generator for a seed."""
    return np.random.default_rng(seed)
