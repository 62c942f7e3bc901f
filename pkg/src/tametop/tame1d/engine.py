"""Engine Module.

Exact intersection and difference of chain forests against tame sets.

A chain is cut into finitely many head copies, handled one by one, and a tail that lies
in a one-sided neighbourhood of its limit (or beyond every bounded feature, for
divergent chains). Near the limit the other set is either full (an interval covers the
neighbourhood) or a finite family of chains with the same limit and side, its germs.
Germs whose ratio is multiplicatively dependent on the chain's ratio are refined to a
common ratio; the picture around every tail copy is then the same up to scaling, so the
tail result is again a chain whose template is the template combined with that constant
relative configuration. Germs with an independent ratio meet the chain in at most
finitely many points, located exactly from prime valuations.
"""

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from logging import Logger
from typing import Iterable, Optional, Union

from tametop.exceptions import TameTopError
from tametop.tame1d import intervals as iv
from tametop.tame1d.intervals import Interval
from tametop.tame1d.nodes import (
    Chain,
    Node,
    Point,
    hull,
    is_finite_forest,
    place,
    primitive_root,
    prune,
    refine,
    solve_power_equation,
)
from tametop.tame1d.rational import NEG_INF, POS_INF, ExtRat
from tametop.utils import get_logger

DEFAULT_ENUMERATION_CAP: int = 10_000

LOGGER: Logger = get_logger()


class EnumerationCapExceeded(TameTopError):
    """Raised when an exact answer would need more anchors than the enumeration cap, or
    lies outside the decidable fragment (independent ratios with nested templates,
    divergent chains with different offsets)."""


class Op(Enum):
    """Binary operation applied by `ChainEngine.combine`."""

    AND = "and"
    MINUS = "minus"


@dataclass(frozen=True)
class Full:
    """The other set covers the neighbourhood.

    Attributes:
        reach (ExtRat): Distance from the limit covered (convergent), or threshold in
            direction coordinates beyond which everything is covered (divergent).
    """

    reach: ExtRat


@dataclass(frozen=True)
class Germs:
    """The other set near the limit is a union of chains with that limit and side.

    Attributes:
        chains (tuple[Chain, ...]): The germs, limits excluded.
        reach (ExtRat): Size of the neighbourhood (convergent) or bound in direction
            coordinates (divergent) inside which only the germs are present.
    """

    chains: tuple[Chain, ...]
    reach: ExtRat


Local = Union[Full, Germs]


class ChainEngine:
    """Exact membership, intersection and difference on chain forests.

    Attributes:
        cap (int): Maximal number of anchors unrolled or enumerated for one answer.
        _logger (Logger): Logger object.
    """

    def __init__(self, cap: int = DEFAULT_ENUMERATION_CAP, logger: Optional[Logger] = None):
        """Initializes the engine.

        Args:
            cap (int): Enumeration cap (default 10^4).
            logger (Optional[Logger]): Logger; the shared one if None.
        """
        self.cap: int = cap
        self._logger: Logger = logger or LOGGER

    # --- membership -------------------------------------------------------------------

    def contains(
        self, intervals: Iterable[Interval], nodes: Iterable[Node], x: ExtRat
    ) -> bool:
        """Exact membership of ``x`` in the union of ``intervals`` and ``nodes``."""
        if iv.contains(intervals, x):
            return True
        return any(self.node_contains(node, x) for node in nodes)

    def node_contains(self, node: Node, x: ExtRat) -> bool:
        """Exact membership of ``x`` in a single node."""
        if isinstance(node, Point):
            return node.p == x
        if isinstance(x, float):
            return False
        if x == node.limit:
            return node.limit_included
        if (x > node.limit) != (node.c > 0):
            return False
        distance = abs(x - node.limit)
        for k in range(self.cap):
            radius = abs(node.c) * node.q ** (node.step * k)
            scale = node.scale(k)
            if node.divergent:
                if distance < radius - scale:
                    return False
                if distance <= radius + scale:
                    return self._in_copy(node, k, x)
            else:
                if distance > radius + scale:
                    return False
                if distance >= radius - scale:
                    return self._in_copy(node, k, x)
        raise EnumerationCapExceeded(
            f"membership of {x} in {node} needs more than {self.cap} anchors"
        )

    def _in_copy(self, chain: Chain, k: int, x: Fraction) -> bool:
        local = (x - chain.anchor(k)) / chain.scale(k)
        return any(self.node_contains(child, local) for child in chain.template)

    # --- localization -----------------------------------------------------------------

    def localize_limit(
        self, limit: Fraction, side: int, intervals: Iterable[Interval], nodes: Iterable[Node]
    ) -> Local:
        """Describes the other set in a punctured one-sided neighbourhood of ``limit``.

        Chains whose hull straddles the limit without accumulating there are unrolled
        copy by copy until they move away.
        """
        reach: ExtRat = POS_INF
        for item in intervals:
            if side > 0:
                if item.lo <= limit < item.hi:
                    return Full(item.hi - limit)
                if item.lo > limit:
                    reach = min(reach, item.lo - limit)
            else:
                if item.lo < limit <= item.hi:
                    return Full(limit - item.lo)
                if item.hi < limit:
                    reach = min(reach, limit - item.hi)

        germs: list[Chain] = []
        stack = list(nodes)
        unrolled = 0
        while stack:
            node = stack.pop()
            if isinstance(node, Point):
                offset = side * (node.p - limit)
                if offset > 0:
                    reach = min(reach, offset)
                continue
            if not node.divergent and node.limit == limit:
                if node.side == side:
                    germs.append(node.without_limit())
                continue
            lo, hi = hull(node)
            if side > 0:
                if hi <= limit:
                    continue
                if lo > limit:
                    reach = min(reach, lo - limit)
                    continue
            else:
                if lo >= limit:
                    continue
                if hi < limit:
                    reach = min(reach, limit - hi)
                    continue
            unrolled += 1
            if unrolled > self.cap:
                raise EnumerationCapExceeded(
                    f"unrolling around {limit} exceeded the cap of {self.cap} copies"
                )
            stack.extend(node.copy(0))
            stack.append(node.shifted(1))
        return Germs(tuple(germs), reach)

    def localize_infinity(
        self, direction: int, offset: Fraction, intervals: Iterable[Interval], nodes: Iterable[Node]
    ) -> Local:
        """Describes the other set far out in ``direction`` (reach in direction coordinates).

        Raises:
            EnumerationCapExceeded: If a divergent chain in the same direction has
                another offset.
        """
        bound: ExtRat = NEG_INF
        for item in intervals:
            if direction > 0:
                if item.hi == POS_INF:
                    return Full(item.lo)
                bound = max(bound, item.hi)
            else:
                if item.lo == NEG_INF:
                    return Full(-item.hi)
                bound = max(bound, -item.lo)
        germs: list[Chain] = []
        for node in nodes:
            if isinstance(node, Chain) and node.divergent and node.side == direction:
                if node.limit != offset:
                    raise EnumerationCapExceeded(
                        f"divergent chains with offsets {offset} and {node.limit} "
                        "run to the same infinity"
                    )
                germs.append(node)
                continue
            lo, hi = hull(node)
            bound = max(bound, hi if direction > 0 else -lo)
        return Germs(tuple(germs), bound)

    # --- combination ------------------------------------------------------------------

    def combine(
        self,
        nodes: Iterable[Node],
        intervals: Iterable[Interval],
        others: Iterable[Node],
        op: Op,
    ) -> list[Node]:
        """Applies ``node op (intervals | others)`` to every node.

        Args:
            nodes: Left operand, a chain forest.
            intervals: Interval part of the right operand.
            others: Chain forest of the right operand.
            op (Op): AND (intersection) or MINUS (difference).

        Returns:
            list[Node]: A chain forest for the result (not normalized).
        """
        intervals, others = tuple(intervals), tuple(others)
        result: list[Node] = []
        for node in nodes:
            result.extend(self._combine_node(node, intervals, others, op))
        return prune(result)

    def _combine_node(
        self, node: Node, intervals: tuple, others: tuple, op: Op
    ) -> list[Node]:
        if isinstance(node, Point):
            inside = self.contains(intervals, others, node.p)
            return [node] if inside == (op is Op.AND) else []

        result: list[Node] = []
        if node.limit_included and self.contains(intervals, others, node.limit) == (op is Op.AND):
            result.append(Point(node.limit))
        chain = node.without_limit()
        if chain.divergent:
            local = self.localize_infinity(chain.side, chain.limit, intervals, others)
        else:
            local = self.localize_limit(chain.limit, chain.side, intervals, others)

        head = self._head_length(chain, local.reach)
        dependent: list[Chain] = []
        if isinstance(local, Germs):
            root = primitive_root(chain.q)[0]
            independent = []
            for germ in local.chains:
                (dependent if primitive_root(germ.q)[0] == root else independent).append(germ)
            if independent:
                head = max(head, self._coincidence_horizon(chain, independent))

        self._logger.debug(f"{op.value} on {chain}: {head} head copies")
        for k in range(head):
            result.extend(self.combine(chain.copy(k), intervals, others, op))
        tail = chain.shifted(head)
        if isinstance(local, Full):
            if op is Op.AND:
                result.append(tail)
        elif not dependent:
            if op is Op.MINUS:
                result.append(tail)
        else:
            result.extend(self._combine_tail(tail, dependent, intervals, others, op))
        return result

    def _head_length(self, chain: Chain, reach: ExtRat) -> int:
        """Number of leading copies that are not inside the localized neighbourhood."""
        spread = 1 + (1 - chain.q) / 3 if not chain.divergent else 1 - (1 - chain.q) / 3
        for k in range(self.cap + 1):
            radius = abs(chain.c) * chain.q ** (chain.step * k) * spread
            if chain.divergent:
                if chain.side * chain.limit + radius > reach:
                    return k
            elif radius < reach:
                return k
        raise EnumerationCapExceeded(
            f"{chain} needs more than {self.cap} head copies to reach its germ neighbourhood"
        )

    def _coincidence_horizon(self, chain: Chain, germs: list[Chain]) -> int:
        """One past the last copy of ``chain`` meeting a germ of independent ratio."""
        if not is_finite_forest(chain.template) or not all(
            is_finite_forest(germ.template) for germ in germs
        ):
            raise EnumerationCapExceeded(
                f"{chain} meets a chain of independent ratio at {chain.limit}; "
                "exact comparison needs point templates"
            )
        horizon = 0
        step = chain.step
        for germ in germs:
            for mine in chain.template:
                alpha = chain.c + abs(chain.c) * (1 - chain.q) / 3 * mine.p
                for theirs in germ.template:
                    beta = germ.c + abs(germ.c) * (1 - germ.q) / 3 * theirs.p
                    solution = solve_power_equation(chain.q, germ.q, beta / alpha)
                    if solution is None:
                        continue
                    k, n = step * solution[0], step * solution[1]
                    if k >= 0 and n >= 0:
                        horizon = max(horizon, k + 1)
        if horizon > self.cap:
            raise EnumerationCapExceeded(f"coincidence at copy {horizon} is beyond the cap")
        return horizon

    def _combine_tail(
        self,
        tail: Chain,
        germs: list[Chain],
        intervals: tuple,
        others: tuple,
        op: Op,
    ) -> list[Node]:
        root, power = primitive_root(tail.q)
        powers = [power] + [primitive_root(germ.q)[1] for germ in germs]
        common = math.lcm(*powers)
        pieces = refine(tail, common // power)
        refined_germs = [
            piece
            for germ, germ_power in zip(germs, powers[1:])
            for piece in refine(germ, common // germ_power)
        ]
        self._logger.debug(
            f"tail of {tail} against {len(germs)} germs refined to ratio {root ** common}"
        )
        result: list[Node] = []
        for piece in pieces:
            configuration, start = self._relative_configuration(piece, refined_germs)
            for m in range(start):
                result.extend(self.combine(piece.copy(m), intervals, others, op))
            template = self.combine(piece.template, (), configuration, op)
            if template:
                result.append(piece.shifted(start).with_template(template))
        return result

    def _relative_configuration(
        self, piece: Chain, germs: list[Chain]
    ) -> tuple[tuple[Node, ...], int]:
        """Germ copies around a tail copy of ``piece``, in the copy's local coordinates.

        All chains share limit, side and ratio ``R``. A germ copy whose exponent is ``t``
        steps away sits at ``3*sgn(c)*(rho*R**t - 1)/(1 - R)`` with scale ``rho*R**t``,
        ``rho`` being the ratio of first offsets. Only copies meeting ``[-1, 1]`` matter.

        Returns:
            tuple: The configuration and the first copy index of ``piece`` from which
            every listed germ copy exists.
        """
        ratio = piece.q
        spread = Fraction(3) / (1 - ratio)
        lowest = (spread - 1) / (spread + 1)
        highest = (spread + 1) / (spread - 1)
        orientation = piece.side
        configuration: list[Node] = []
        start = 0
        for germ in germs:
            rho = germ.c / piece.c
            t = 0
            while rho * ratio**t > highest:
                t += 1
            while rho * ratio ** (t - 1) <= highest:
                t -= 1
            while rho * ratio**t >= lowest:
                factor = rho * ratio**t
                center = 3 * orientation * (factor - 1) / (1 - ratio)
                configuration.extend(place(germ.template, center, factor))
                start = max(start, -piece.step * t)
                t += 1
        if start > self.cap:
            raise EnumerationCapExceeded(f"alignment of {piece} needs {start} head copies")
        return tuple(configuration), start
