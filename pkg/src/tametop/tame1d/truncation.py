"""Truncation Module.

Finite approximations of tame sets used as an independent oracle: every chain keeps its
first ``count`` anchors, nested templates are expanded down to ``depth`` levels, and a
chain with no depth left contributes only its limit (when included). `isolation_disagreements`
compares claimed isolated points with nearest-neighbour gaps of such a picture.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from tametop.tame1d.intervals import Interval
from tametop.tame1d.nodes import Node, Point
from tametop.tame1d.tameset import Tame1DSet


@dataclass(frozen=True)
class Truncation:
    """Finite picture of a set.

    Attributes:
        points (tuple[Fraction, ...]): Sorted distinct points.
        intervals (tuple[Interval, ...]): The interval part, unchanged.
    """

    points: tuple[Fraction, ...]
    intervals: tuple[Interval, ...]


def _expand(node: Node, depth: int, count: int, out: set) -> None:
    if isinstance(node, Point):
        out.add(node.p)
        return
    if node.limit_included:
        out.add(node.limit)
    if depth < 1:
        return
    for k in range(count):
        for child in node.copy(k):
            _expand(child, depth - 1, count, out)


def truncate_nodes(nodes: Iterable[Node], depth: int, count: int) -> tuple[Fraction, ...]:
    """Sorted points of the truncated forest."""
    found: set = set()
    for node in nodes:
        _expand(node, depth, count, found)
    return tuple(sorted(found))


def truncate(a: Tame1DSet, depth: int, count: int) -> Truncation:
    """Deterministic finite truncation.

    Args:
        a (Tame1DSet): The set.
        depth (int): Nesting levels to expand, at least 1.
        count (int): Anchors kept per chain, at least 1.

    Returns:
        Truncation: Points and intervals.
    """
    if depth < 1 or count < 1:
        raise ValueError(f"depth and count must be positive, got {depth} and {count}")
    return Truncation(truncate_nodes(a.zerodim, depth, count), a.intervals)


def isolated_within(points: Iterable[Fraction], radius_of, strict: bool = True) -> set:
    """Points with no other point closer than ``radius_of(point)``.

    Args:
        points: A finite set of points.
        radius_of: Callable giving the isolation radius of a point.
        strict (bool): Require the distance to exceed the radius (else at least).

    Returns:
        set: The isolated points.
    """
    ordered = sorted(set(points))
    isolated = set()
    for index, point in enumerate(ordered):
        radius = radius_of(point)
        gaps = []
        if index > 0:
            gaps.append(point - ordered[index - 1])
        if index + 1 < len(ordered):
            gaps.append(ordered[index + 1] - point)
        nearest = min(gaps, default=None)
        if nearest is None or nearest > radius or (not strict and nearest >= radius):
            isolated.add(point)
    return isolated


def isolation_disagreements(
    a: Tame1DSet,
    isolated: Tame1DSet,
    window: tuple[Fraction, Fraction],
    radius: Fraction,
    depth: int = 2,
    coarse: int = 3,
    fine: int = 10,
) -> list[Fraction]:
    """Points where a claimed set of isolated points and the finite picture disagree.

    Every point of ``truncate(a, depth, coarse)`` inside ``window`` is tested: it should
    belong to ``isolated`` exactly when no other point of ``truncate(a, depth, fine)``
    lies within ``radius``. The fine truncation must be deep enough that every limit
    point has a neighbour closer than ``radius``.

    Returns:
        list[Fraction]: The points where the two answers differ, empty on agreement.
    """
    low, high = window
    found = isolated_within(truncate(a, depth, fine).points, lambda _: radius)
    return [
        point
        for point in truncate(a, depth, coarse).points
        if low <= point <= high and (point in isolated) != (point in found)
    ]
