"""Nodes Module.

The zero-dimensional part of a tame subset of the line is a finite forest of nodes:

* ``Point(p)`` is the single point ``p``.
* ``Chain(limit, c, q, template)`` is a geometric sequence of anchors
  ``a_k = limit + c*q**k`` (``limit + c*q**-k`` when divergent) with a copy of
  ``template`` placed at every anchor, scaled by ``s_k = |c|*q**(+-k)*(1-q)/3``.
  Templates live in local coordinates inside ``[-1, 1]``, so the copies are pairwise
  disjoint and never reach the limit.

Divergent chains model the unbounded discrete sets; they cannot be nested in templates
and never contain their (finite) offset ``limit``.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Union

from sympy import factorint

from tametop.exceptions import TameTopError
from tametop.tame1d.rational import NEG_INF, POS_INF, ExtRat


class InvalidChain(TameTopError):
    """Raised when chain parameters violate the geometric constraints of the forest."""


@dataclass(frozen=True)
class Point:
    """A single point.

    Attributes:
        p (Fraction): Its coordinate.
    """

    p: Fraction

    def __str__(self) -> str:
        return f"point({self.p})"


@dataclass(frozen=True)
class Chain:
    """Geometric anchor sequence carrying scaled template copies.

    Attributes:
        limit (Fraction): Accumulation point (convergent) or offset (divergent).
        c (Fraction): Nonzero offset of the first anchor; its sign is the side.
        q (Fraction): Ratio in (0, 1).
        template (tuple[Node, ...]): Local copy placed at every anchor.
        limit_included (bool): Whether ``limit`` itself belongs to the set.
        divergent (bool): Anchors run to +-infinity instead of to ``limit``.
    """

    limit: Fraction
    c: Fraction
    q: Fraction
    template: tuple = field(default=(Point(Fraction(0)),))
    limit_included: bool = False
    divergent: bool = False

    def __post_init__(self) -> None:
        if not 0 < self.q < 1:
            raise InvalidChain(f"ratio {self.q} is not in (0, 1)")
        if self.c == 0:
            raise InvalidChain("first anchor offset c must be nonzero")
        if self.divergent and self.limit_included:
            raise InvalidChain("a divergent chain cannot include its offset")
        for node in self.template:
            if isinstance(node, Chain) and node.divergent:
                raise InvalidChain("templates cannot contain divergent chains")
        bounds = nodes_hull(self.template)
        if bounds is not None and (bounds[0] < -1 or bounds[1] > 1):
            raise InvalidChain(f"template hull [{bounds[0]}, {bounds[1]}] leaves [-1, 1]")

    @property
    def side(self) -> int:
        """+1 if the anchors lie above the limit, -1 below."""
        return 1 if self.c > 0 else -1

    @property
    def step(self) -> int:
        """Exponent direction: +1 for convergent, -1 for divergent chains."""
        return -1 if self.divergent else 1

    def anchor(self, k: int) -> Fraction:
        """The k-th anchor."""
        return self.limit + self.c * self.q ** (self.step * k)

    def scale(self, k: int) -> Fraction:
        """Scale of the template copy at the k-th anchor."""
        return abs(self.c) * self.q ** (self.step * k) * (1 - self.q) / 3

    def copy(self, k: int) -> tuple:
        """Template copy at the k-th anchor, in global coordinates."""
        return place(self.template, self.anchor(k), self.scale(k))

    def shifted(self, start: int) -> "Chain":
        """The chain of anchors ``k >= start``, reindexed from 0 (keeps the limit flag)."""
        return Chain(
            self.limit,
            self.c * self.q ** (self.step * start),
            self.q,
            self.template,
            self.limit_included,
            self.divergent,
        )

    def without_limit(self) -> "Chain":
        """Same anchors and copies, limit excluded."""
        return Chain(self.limit, self.c, self.q, self.template, False, self.divergent)

    def with_template(self, template: Iterable["Node"]) -> "Chain":
        """Same anchors with another template."""
        return Chain(
            self.limit, self.c, self.q, tuple(template), self.limit_included, self.divergent
        )

    def __str__(self) -> str:
        parts = [str(self.limit), str(self.c), str(self.q), _template_str(self.template)]
        if self.limit_included:
            parts.append("closed")
        if self.divergent:
            parts.append("divergent")
        return f"chain({', '.join(parts)})"


Node = Union[Point, Chain]

ANCHOR = Point(Fraction(0))


def _template_str(template: tuple) -> str:
    if template == (ANCHOR,):
        return "point"
    if not template:
        return "empty"
    if len(template) == 1:
        return str(template[0])
    return f"union({', '.join(str(node) for node in template)})"


def place(nodes: Iterable[Node], center: Fraction, scale: Fraction) -> tuple:
    """Maps local nodes through ``u -> center + scale*u`` (``scale > 0``)."""
    placed: list[Node] = []
    for node in nodes:
        if isinstance(node, Point):
            placed.append(Point(center + scale * node.p))
        else:
            placed.append(
                Chain(
                    center + scale * node.limit,
                    scale * node.c,
                    node.q,
                    node.template,
                    node.limit_included,
                    node.divergent,
                )
            )
    return tuple(placed)


def hull(node: Node) -> tuple[ExtRat, ExtRat]:
    """Smallest closed interval ``(lo, hi)`` containing the node (and its limit)."""
    if isinstance(node, Point):
        return node.p, node.p
    pad = abs(node.c) * (1 - node.q) / 3
    first = node.limit + node.c
    if node.divergent:
        if node.c > 0:
            return first - pad, POS_INF
        return NEG_INF, first + pad
    if node.c > 0:
        return node.limit, first + pad
    return first - pad, node.limit


def nodes_hull(nodes: Iterable[Node]) -> Optional[tuple[ExtRat, ExtRat]]:
    """Hull of several nodes, None when there are none."""
    bounds = [hull(node) for node in nodes]
    if not bounds:
        return None
    return min(lo for lo, _ in bounds), max(hi for _, hi in bounds)


def prune(nodes: Iterable[Node]) -> list[Node]:
    """Drops chains whose template is empty (keeping an included limit as a point) and
    exact duplicates."""
    kept: dict[Node, None] = {}
    for node in nodes:
        if isinstance(node, Chain) and not node.template:
            if node.limit_included:
                kept[Point(node.limit)] = None
            continue
        kept[node] = None
    return list(kept)


def sort_key(node: Node) -> tuple:
    """Deterministic order of nodes: by hull start, then by text."""
    return hull(node)[0], str(node)


def is_finite_forest(nodes: Iterable[Node]) -> bool:
    """True when the forest consists of points only."""
    return all(isinstance(node, Point) for node in nodes)


def depth(node: Node) -> int:
    """Nesting depth: 0 for a point, 1 + template depth for a chain."""
    if isinstance(node, Point):
        return 0
    return 1 + max((depth(child) for child in node.template), default=-1)


def _valuations(value: Fraction) -> dict[int, int]:
    exponents: dict[int, int] = {}
    for prime, power in factorint(value.numerator).items():
        exponents[prime] = exponents.get(prime, 0) + power
    for prime, power in factorint(value.denominator).items():
        exponents[prime] = exponents.get(prime, 0) - power
    return {prime: power for prime, power in exponents.items() if power}


def valuations(value: Fraction) -> dict[int, int]:
    """Prime exponent vector of a positive rational."""
    if value <= 0:
        raise ValueError(f"valuations need a positive rational, got {value}")
    return _valuations(value)


def primitive_root(q: Fraction) -> tuple[Fraction, int]:
    """Writes a positive rational ``q != 1`` as ``Q**a`` with ``a`` maximal.

    Two ratios are multiplicatively dependent exactly when their primitive roots agree.

    Returns:
        tuple[Fraction, int]: ``(Q, a)``.
    """
    exponents = valuations(q)
    power = 0
    for value in exponents.values():
        power = gcd(power, abs(value))
    root = Fraction(1)
    for prime, value in exponents.items():
        root *= Fraction(prime) ** (value // power)
    return root, power


def refine(chain: Chain, factor: int) -> tuple[Chain, ...]:
    """Splits a chain (limit excluded) into ``factor`` chains of ratio ``q**factor``.

    The j-th piece carries the anchors ``k = j + factor*m``; its template is rescaled by
    ``(1-q)/(1-q**factor)`` so that the copies stay where they were.
    """
    if factor == 1:
        return (chain.without_limit(),)
    ratio = chain.q**factor
    rescale = (1 - chain.q) / (1 - ratio)
    template = place(chain.template, Fraction(0), rescale)
    return tuple(
        Chain(
            chain.limit,
            chain.c * chain.q ** (chain.step * j),
            ratio,
            template,
            False,
            chain.divergent,
        )
        for j in range(factor)
    )


def solve_power_equation(
    q: Fraction, r: Fraction, target: Fraction
) -> Optional[tuple[int, int]]:
    """Finds integers ``(x, y)`` with ``q**x / r**y == target`` for independent ``q, r``.

    Independence makes the prime exponent vectors of ``q`` and ``r`` linearly independent,
    so there is at most one solution; it is read off two primes by Cramer's rule and
    checked on all the others.

    Returns:
        Optional[tuple[int, int]]: The solution, or None.
    """
    if target <= 0:
        return None
    vq, vr, vt = valuations(q), valuations(r), valuations(target)
    primes = sorted(set(vq) | set(vr) | set(vt))
    for index, first in enumerate(primes):
        for second in primes[index + 1 :]:
            det = -vq.get(first, 0) * vr.get(second, 0) + vq.get(second, 0) * vr.get(first, 0)
            if det == 0:
                continue
            x = Fraction(
                -vt.get(first, 0) * vr.get(second, 0) + vt.get(second, 0) * vr.get(first, 0),
                det,
            )
            y = Fraction(
                vq.get(first, 0) * vt.get(second, 0) - vq.get(second, 0) * vt.get(first, 0),
                det,
            )
            if x.denominator != 1 or y.denominator != 1:
                return None
            xi, yi = int(x), int(y)
            for prime in primes:
                if xi * vq.get(prime, 0) - yi * vr.get(prime, 0) != vt.get(prime, 0):
                    return None
            return xi, yi
    return None
