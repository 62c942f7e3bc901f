"""Intervals Module.

Finite unions of intervals of the extended line. Normalized lists are sorted, pairwise
disjoint and non-adjacent; degenerate closed intervals ``[p, p]`` are allowed only as
intermediate results and are split off as points by `split_points`.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from tametop.exceptions import TameTopError
from tametop.tame1d.rational import NEG_INF, POS_INF, ExtRat, format_ext, is_finite


class InvalidInterval(TameTopError):
    """Raised when interval bounds are inconsistent (lo > hi, closed infinite end, ...)."""


@dataclass(frozen=True, order=True)
class Interval:
    """An interval with exact (possibly infinite) bounds.

    Attributes:
        lo (ExtRat): Lower bound.
        hi (ExtRat): Upper bound.
        lo_closed (bool): Whether ``lo`` belongs to the interval.
        hi_closed (bool): Whether ``hi`` belongs to the interval.
    """

    lo: ExtRat
    hi: ExtRat
    lo_closed: bool = False
    hi_closed: bool = False

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise InvalidInterval(f"empty interval: lower bound {self.lo} above {self.hi}")
        if (self.lo_closed and not is_finite(self.lo)) or (
            self.hi_closed and not is_finite(self.hi)
        ):
            raise InvalidInterval("an infinite end cannot be closed")
        if self.lo == self.hi and not (self.lo_closed and self.hi_closed):
            raise InvalidInterval(f"degenerate interval at {self.lo} must be closed")

    @property
    def is_point(self) -> bool:
        """True for a degenerate ``[p, p]``."""
        return self.lo == self.hi

    @property
    def kind(self) -> str:
        """Two-letter closedness code as used by the expression grammar (``oc`` etc)."""
        return ("c" if self.lo_closed else "o") + ("c" if self.hi_closed else "o")

    def contains(self, x: ExtRat) -> bool:
        """Exact membership test."""
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo and not self.lo_closed:
            return False
        if x == self.hi and not self.hi_closed:
            return False
        return True

    def interior(self) -> Optional["Interval"]:
        """The open interval with the same bounds, None for a point."""
        if self.is_point:
            return None
        return Interval(self.lo, self.hi)

    def closure(self) -> "Interval":
        """Closes every finite end."""
        return Interval(self.lo, self.hi, is_finite(self.lo), is_finite(self.hi))

    def __str__(self) -> str:
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{format_ext(self.lo)}, {format_ext(self.hi)}{right}"


def _meet(a: Interval, b: Interval) -> Optional[Interval]:
    if a.lo > b.lo:
        lo, lo_closed = a.lo, a.lo_closed
    elif b.lo > a.lo:
        lo, lo_closed = b.lo, b.lo_closed
    else:
        lo, lo_closed = a.lo, a.lo_closed and b.lo_closed
    if a.hi < b.hi:
        hi, hi_closed = a.hi, a.hi_closed
    elif b.hi < a.hi:
        hi, hi_closed = b.hi, b.hi_closed
    else:
        hi, hi_closed = a.hi, a.hi_closed and b.hi_closed
    if lo < hi or (lo == hi and lo_closed and hi_closed):
        return Interval(lo, hi, lo_closed, hi_closed)
    return None


def normalize(intervals: Iterable[Interval]) -> tuple[Interval, ...]:
    """Sorts and merges overlapping or adjacent intervals.

    Args:
        intervals: Any intervals, degenerate ones included.

    Returns:
        tuple[Interval, ...]: Sorted, pairwise disjoint and non-adjacent intervals.
    """
    ordered = sorted(intervals, key=lambda item: (item.lo, not item.lo_closed))
    merged: list[Interval] = []
    for current in ordered:
        if merged:
            last = merged[-1]
            touches = current.lo < last.hi or (
                current.lo == last.hi and (last.hi_closed or current.lo_closed)
            )
            if touches:
                if current.hi > last.hi:
                    hi, hi_closed = current.hi, current.hi_closed
                elif current.hi < last.hi:
                    hi, hi_closed = last.hi, last.hi_closed
                else:
                    hi, hi_closed = last.hi, last.hi_closed or current.hi_closed
                merged[-1] = Interval(last.lo, hi, last.lo_closed, hi_closed)
                continue
        merged.append(current)
    return tuple(merged)


def intersect(left: Iterable[Interval], right: Iterable[Interval]) -> tuple[Interval, ...]:
    """Normalized intersection of two interval unions (may contain degenerate intervals)."""
    right = tuple(right)
    pieces = []
    for a in left:
        for b in right:
            piece = _meet(a, b)
            if piece is not None:
                pieces.append(piece)
    return normalize(pieces)


def complement(intervals: Iterable[Interval]) -> tuple[Interval, ...]:
    """Complement in the extended line of a union of intervals."""
    gaps: list[Interval] = []
    cursor: ExtRat = NEG_INF
    cursor_closed = False
    for item in normalize(intervals):
        if cursor < item.lo or (cursor == item.lo and cursor_closed and not item.lo_closed):
            gaps.append(Interval(cursor, item.lo, cursor_closed, not item.lo_closed))
        cursor, cursor_closed = item.hi, not item.hi_closed
    if cursor < POS_INF:
        gaps.append(Interval(cursor, POS_INF, cursor_closed, False))
    return tuple(gaps)


def subtract(left: Iterable[Interval], right: Iterable[Interval]) -> tuple[Interval, ...]:
    """Normalized difference ``left \\ right``."""
    return intersect(left, complement(right))


def split_points(
    intervals: Iterable[Interval],
) -> tuple[tuple[Interval, ...], tuple[Fraction, ...]]:
    """Separates degenerate intervals from proper ones.

    Returns:
        tuple: The non-degenerate intervals and the sorted points.
    """
    proper, points = [], []
    for item in intervals:
        if item.is_point:
            points.append(item.lo)
        else:
            proper.append(item)
    return tuple(proper), tuple(sorted(points))


def contains(intervals: Iterable[Interval], x: ExtRat) -> bool:
    """True when some interval of the union contains ``x``."""
    return any(item.contains(x) for item in intervals)


def endpoints(intervals: Iterable[Interval]) -> tuple[Fraction, ...]:
    """Sorted finite endpoints of a union of intervals."""
    found = set()
    for item in intervals:
        for bound in (item.lo, item.hi):
            if is_finite(bound):
                found.add(bound)
    return tuple(sorted(found))
