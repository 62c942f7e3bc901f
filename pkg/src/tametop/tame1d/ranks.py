"""Ranks Module.

Cantor-Bendixson rank (global and pointwise), decomposition into discrete layers, the gap
``delta(X) = inf d(c, X \\ {c})``, dimension and the discrete-set classification.
Ranks are reported only for sets without interior: callers subtract the interior first.
"""

import math
from fractions import Fraction
from logging import Logger
from typing import Union

from tametop.exceptions import TameTopError
from tametop.ordinal import Ordinal
from tametop.tame1d.engine import EnumerationCapExceeded
from tametop.tame1d.nodes import Chain, Point, hull, primitive_root, refine
from tametop.tame1d.rational import NEG_INF, POS_INF, ExtRat
from tametop.tame1d.tameset import EMPTY, Tame1DSet, contains
from tametop.tame1d.topology import (
    accumulation_points,
    cb_derivative,
    interior,
    is_closed,
    isolated_points,
)
from tametop.utils import get_logger

LOGGER: Logger = get_logger()

RANK_CAP: int = 64


class HasInterior(TameTopError):
    """Raised when a rank or gap is requested for a set with nonempty interior."""


class RankExceeded(TameTopError):
    """Raised when a set has more Cantor-Bendixson layers than allowed."""


def _require_no_interior(a: Tame1DSet) -> None:
    if a.has_interior():
        raise HasInterior(f"{a} has nonempty interior; subtract interior(A) first")


def cb_layers(a: Tame1DSet) -> list[Tame1DSet]:
    """Iterated derivatives ``A, D(A), D(D(A)), ...`` up to (excluding) the empty set.

    Raises:
        HasInterior: If ``a`` has interior.
        RankExceeded: If more than `RANK_CAP` derivatives are nonempty.
    """
    _require_no_interior(a)
    layers: list[Tame1DSet] = []
    current = a
    while not current.is_empty():
        layers.append(current)
        if len(layers) > RANK_CAP:
            raise RankExceeded(f"more than {RANK_CAP} Cantor-Bendixson derivatives")
        current = cb_derivative(current)
    return layers


def cb_rank(a: Tame1DSet) -> Ordinal:
    """Least ``N`` with ``D^N(A)`` empty (0 for the empty set, 1 for discrete sets).

    Raises:
        HasInterior: If ``a`` has interior.
    """
    return Ordinal.from_int(len(cb_layers(a)))


def cb_rank_at(a: Tame1DSet, x: Union[Fraction, int]) -> Ordinal:
    """Pointwise rank: least ``k`` with ``x`` outside ``D^k(A)`` (0 when ``x`` is not in A)."""
    x = Fraction(x)
    return Ordinal.from_int(sum(1 for layer in cb_layers(a) if contains(layer, x)))


def decompose_discrete(a: Tame1DSet, n: int) -> list[Tame1DSet]:
    """Peels isolated points: ``n`` disjoint discrete sets with union ``A``.

    Args:
        a (Tame1DSet): A set without interior.
        n (int): Number of layers, at least ``cb_rank(a)``.

    Returns:
        list[Tame1DSet]: ``isol(A), isol(D A), ...`` padded with empty sets.

    Raises:
        HasInterior: If ``a`` has interior.
        RankExceeded: If ``cb_rank(a) > n``.
    """
    if n < 1:
        raise ValueError(f"number of layers must be positive, got {n}")
    layers = cb_layers(a)
    if len(layers) > n:
        raise RankExceeded(f"cb_rank {len(layers)} exceeds the requested {n} layers")
    pieces = [isolated_points(layer) for layer in layers]
    return pieces + [EMPTY] * (n - len(pieces))


def dim(a: Tame1DSet) -> Union[int, float]:
    """1 with interior, 0 for a nonempty set without interior, ``-inf`` for the empty set."""
    if a.has_interior():
        return 1
    if a.zerodim:
        return 0
    return NEG_INF


def regular_points(a: Tame1DSet) -> tuple[Tame1DSet, Tame1DSet]:
    """``(reg_0, reg_1)``: isolated points and interior."""
    return isolated_points(a), interior(a)


def classify_discrete(a: Tame1DSet) -> str:
    """One of ``pseudo-finite``, ``pseudo-N``, ``discrete`` or ``not-discrete``.

    Pseudo-finite sets are closed, bounded and discrete; pseudo-N sets are closed,
    discrete and unbounded.
    """
    if a.has_interior() or not cb_derivative(a).is_empty():
        return "not-discrete"
    if not is_closed(a):
        return "discrete"
    return "pseudo-finite" if a.is_bounded() else "pseudo-N"


def gap_delta(a: Tame1DSet) -> ExtRat:
    """``inf { d(c, A \\ {c}) : c in A }``; ``+inf`` for singletons and the empty set.

    The gap is 0 as soon as ``A`` has an accumulation point. Otherwise ``A`` is finitely
    many points plus divergent chains with point templates; divergent chains running to
    the same infinity must share their offset and have dependent ratios, and their points
    then repeat up to scaling, so a finite prefix certifies the infimum.

    Raises:
        HasInterior: If ``a`` has interior.
        EnumerationCapExceeded: For divergent chains outside that fragment.
    """
    _require_no_interior(a)
    if a.is_empty():
        return POS_INF
    if not accumulation_points(a).is_empty():
        return Fraction(0)
    points = {node.p for node in a.zerodim if isinstance(node, Point)}
    chains = [node for node in a.zerodim if isinstance(node, Chain)]
    for direction in (1, -1):
        mine = [chain for chain in chains if chain.side == direction]
        if not mine:
            continue
        points |= _divergent_prefix(mine, [c for c in chains if c.side != direction], points)
    ordered = sorted(points)
    if len(ordered) < 2:
        return POS_INF
    return min(high - low for low, high in zip(ordered, ordered[1:]))


def _divergent_prefix(chains: list[Chain], opposite: list[Chain], finite: set) -> set:
    offsets = {chain.limit for chain in chains}
    roots = {primitive_root(chain.q)[0] for chain in chains}
    if len(offsets) > 1 or len(roots) > 1:
        raise EnumerationCapExceeded(
            "divergent chains towards the same infinity need one offset and dependent ratios"
        )
    direction = chains[0].side
    offset = direction * chains[0].limit
    powers = [primitive_root(chain.q)[1] for chain in chains]
    common = math.lcm(*powers)
    pieces = [
        piece for chain, power in zip(chains, powers) for piece in refine(chain, common // power)
    ]
    ratio = pieces[0].q
    bound = offset
    for p in finite:
        bound = max(bound, direction * p)
    for chain in opposite:
        lo, hi = hull(chain)
        bound = max(bound, direction * (hi if direction > 0 else lo))
    for piece in pieces:
        bound = max(bound, offset + abs(piece.c) * (1 + (1 - ratio) / 3))
    target = offset + (bound - offset) / ratio
    collected: set = set()
    for piece in pieces:
        k = 0
        while offset + abs(piece.c) * ratio ** (-k) * (1 - (1 - ratio) / 3) <= target:
            k += 1
        for m in range(k + 2):
            collected.update(node.p for node in piece.copy(m))
    LOGGER.debug(f"gap certificate: {len(collected)} points up to {target}")
    return collected

