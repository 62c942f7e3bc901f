"""Tame Set Module.

`Tame1DSet` is a definable subset of the line: a normalized union of proper intervals
plus a chain forest for the zero-dimensional part. Every constructor goes through
`build`, which removes forest points covered by the intervals, closes open interval ends
that the forest fills and merges what becomes adjacent. The boolean operations here are
exact; the topological ones live in `tametop.tame1d.topology`.

Example:
    >>> from tametop.tame1d.parser import parse_set
    >>> from tametop.tame1d.tameset import equals, intersect
    >>> a = intersect(parse_set("chain(0,1,1/2)"), parse_set("interval(1/4,1,cc)"))
    >>> equals(a, parse_set("union(point(1/4), point(1/2), point(1))"))
    True
"""

from dataclasses import dataclass, field, replace
from fractions import Fraction
from logging import Logger
from typing import Any, Iterable, Optional

from tametop.exceptions import TameTopError
from tametop.tame1d import intervals as iv
from tametop.tame1d.engine import (
    DEFAULT_ENUMERATION_CAP,
    ChainEngine,
    EnumerationCapExceeded,
    Op,
)
from tametop.tame1d.intervals import Interval
from tametop.tame1d.nodes import Chain, Node, Point, is_finite_forest, prune, sort_key
from tametop.tame1d.rational import ExtRat, format_ext, is_finite
from tametop.utils import get_logger

LOGGER: Logger = get_logger()


class UnsupportedDifference(TameTopError):
    """Raised when ``A \\ B`` would punch infinitely many holes into an interval of A."""


_ENGINE = ChainEngine(DEFAULT_ENUMERATION_CAP)


def engine() -> ChainEngine:
    """The engine used by all set operations."""
    return _ENGINE


def set_enumeration_cap(cap: int) -> None:
    """Changes the enumeration cap of the shared engine.

    Args:
        cap (int): New cap, at least 1.
    """
    if cap < 1:
        raise ValueError(f"enumeration cap must be positive, got {cap}")
    _ENGINE.cap = cap


@dataclass(frozen=True)
class Tame1DSet:
    """A normalized definable subset of the line.

    Use `build` (or the parser) rather than the constructor. Structural ``==`` compares
    representations; `equals` decides equality of the sets.

    Attributes:
        intervals (tuple[Interval, ...]): Sorted, disjoint, non-adjacent proper intervals.
        zerodim (tuple[Node, ...]): Chain forest, none of it inside ``intervals``.
        coincidences (tuple[Node, ...]): Points and chains shared by the operands of the
            union that produced the set, and interval ends filled by the forest.
    """

    intervals: tuple[Interval, ...] = ()
    zerodim: tuple[Node, ...] = ()
    coincidences: tuple[Node, ...] = field(default=(), compare=False)

    def is_empty(self) -> bool:
        """True for the empty set."""
        return not self.intervals and not self.zerodim

    def has_interior(self) -> bool:
        """True when the interval part is nonempty."""
        return bool(self.intervals)

    def is_bounded(self) -> bool:
        """True when no interval end and no chain runs to infinity."""
        if any(not is_finite(item.lo) or not is_finite(item.hi) for item in self.intervals):
            return False
        return not any(isinstance(node, Chain) and node.divergent for node in self.zerodim)

    def __contains__(self, x: Any) -> bool:
        return contains(self, x)

    def __str__(self) -> str:
        parts = [
            f"interval({format_ext(item.lo)},{format_ext(item.hi)},{item.kind})"
            for item in self.intervals
        ]
        parts += [str(node) for node in self.zerodim]
        if not parts:
            return "empty"
        if len(parts) == 1:
            return parts[0]
        return f"union({', '.join(parts)})"

    def to_dict(self) -> dict:
        """Canonical JSON-ready form: interval list and chain forest."""
        return {
            "intervals": [
                {"lo": format_ext(item.lo), "hi": format_ext(item.hi), "kind": item.kind}
                for item in self.intervals
            ],
            "zerodim": [node_to_dict(node) for node in self.zerodim],
        }


EMPTY = Tame1DSet()


def node_to_dict(node: Node) -> dict:
    """JSON-ready form of a forest node."""
    if isinstance(node, Point):
        return {"point": str(node.p)}
    return {
        "chain": {
            "limit": str(node.limit),
            "c": str(node.c),
            "q": str(node.q),
            "template": [node_to_dict(child) for child in node.template],
            "closed": node.limit_included,
            "divergent": node.divergent,
        }
    }


def build(
    intervals: Iterable[Interval] = (),
    zerodim: Iterable[Node] = (),
    coincidences: Iterable[Node] = (),
) -> Tame1DSet:
    """Normalizes raw parts into a `Tame1DSet`.

    Args:
        intervals: Any intervals (degenerate ones become points).
        zerodim: Any forest nodes.
        coincidences: Records to carry along.

    Returns:
        Tame1DSet: The normalized set.
    """
    proper, points = iv.split_points(iv.normalize(intervals))
    nodes = list(zerodim) + [Point(p) for p in points]
    records = list(coincidences)
    while True:
        nodes = _ENGINE.combine(nodes, proper, (), Op.MINUS)
        grown, changed = [], False
        for item in proper:
            lo_closed, hi_closed = item.lo_closed, item.hi_closed
            if not lo_closed and is_finite(item.lo) and _ENGINE.contains((), nodes, item.lo):
                lo_closed, changed = True, True
                records.append(Point(item.lo))
            if not hi_closed and is_finite(item.hi) and _ENGINE.contains((), nodes, item.hi):
                hi_closed, changed = True, True
                records.append(Point(item.hi))
            grown.append(Interval(item.lo, item.hi, lo_closed, hi_closed))
        if not changed:
            break
        proper = iv.normalize(grown)
    return Tame1DSet(
        tuple(proper), tuple(sorted(nodes, key=sort_key)), tuple(prune(records))
    )


def from_points(points: Iterable[Fraction]) -> Tame1DSet:
    """Finite set of points."""
    return build((), [Point(Fraction(p)) for p in points])


def join(a: Tame1DSet, b: Tame1DSet) -> Tame1DSet:
    """Union without coincidence bookkeeping."""
    return build(a.intervals + b.intervals, a.zerodim + b.zerodim)


def union(a: Tame1DSet, b: Tame1DSet, logger: Optional[Logger] = None) -> Tame1DSet:
    """Normalized union; shared points and chains are recorded as coincidences.

    Args:
        a (Tame1DSet): First operand.
        b (Tame1DSet): Second operand.
        logger (Optional[Logger]): Logger; the shared one if None.

    Returns:
        Tame1DSet: ``a | b``.
    """
    logger = logger or LOGGER
    result = join(a, b)
    try:
        shared = _ENGINE.combine(b.zerodim, a.intervals, a.zerodim, Op.AND)
        shared += _ENGINE.combine(a.zerodim, b.intervals, (), Op.AND)
    except EnumerationCapExceeded as exc:
        logger.warning(f"coincidences of the union not recorded: {exc}")
        shared = []
    return replace(result, coincidences=tuple(prune(list(result.coincidences) + shared)))


def union_all(sets: Iterable[Tame1DSet]) -> Tame1DSet:
    """Union of several sets."""
    intervals: list[Interval] = []
    nodes: list[Node] = []
    for item in sets:
        intervals.extend(item.intervals)
        nodes.extend(item.zerodim)
    return build(intervals, nodes)


def intersect(a: Tame1DSet, b: Tame1DSet) -> Tame1DSet:
    """Exact intersection.

    Raises:
        EnumerationCapExceeded: Outside the decidable fragment or beyond the cap.
    """
    nodes = _ENGINE.combine(a.zerodim, b.intervals, b.zerodim, Op.AND)
    nodes += _ENGINE.combine(b.zerodim, a.intervals, (), Op.AND)
    return build(iv.intersect(a.intervals, b.intervals), nodes)


def difference(a: Tame1DSet, b: Tame1DSet) -> Tame1DSet:
    """Exact difference ``a \\ b``.

    Supported when ``b`` meets the intervals of ``a`` that survive ``b``'s own intervals
    in finitely many points, which covers every difference the topological operators
    need.

    Raises:
        UnsupportedDifference: If infinitely many holes would be needed.
        EnumerationCapExceeded: Outside the decidable fragment or beyond the cap.
    """
    proper, points = iv.split_points(iv.subtract(a.intervals, b.intervals))
    holes = _ENGINE.combine(b.zerodim, proper, (), Op.AND)
    if not is_finite_forest(holes):
        raise UnsupportedDifference(
            f"{b} has infinitely many points inside the intervals of {a}"
        )
    cut = [Interval(hole.p, hole.p, True, True) for hole in holes]
    remaining = iv.subtract(proper, cut)
    nodes = [Point(p) for p in points if not _ENGINE.contains((), b.zerodim, p)]
    nodes += _ENGINE.combine(a.zerodim, b.intervals, b.zerodim, Op.MINUS)
    return build(remaining, nodes)


def contains(a: Tame1DSet, x: ExtRat) -> bool:
    """Exact membership."""
    if isinstance(x, (int, str)):
        x = Fraction(x)
    return _ENGINE.contains(a.intervals, a.zerodim, x)


def is_subset(a: Tame1DSet, b: Tame1DSet) -> bool:
    """Exact inclusion ``a <= b``."""
    proper, points = iv.split_points(iv.subtract(a.intervals, b.intervals))
    if proper:
        return False
    if any(not _ENGINE.contains((), b.zerodim, p) for p in points):
        return False
    return not _ENGINE.combine(a.zerodim, b.intervals, b.zerodim, Op.MINUS)


def equals(a: Tame1DSet, b: Tame1DSet) -> bool:
    """Semantic equality: same intervals and mutually included forests."""
    if a.intervals != b.intervals:
        return False
    if _ENGINE.combine(a.zerodim, b.intervals, b.zerodim, Op.MINUS):
        return False
    return not _ENGINE.combine(b.zerodim, a.intervals, a.zerodim, Op.MINUS)


def is_disjoint(a: Tame1DSet, b: Tame1DSet) -> bool:
    """True when the sets do not meet."""
    return intersect(a, b).is_empty()


def coincidences(a: Tame1DSet) -> Tame1DSet:
    """The recorded coincidences as a set."""
    return build((), a.coincidences)
