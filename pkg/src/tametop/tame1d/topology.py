"""Topology Module.

Topological operators on `Tame1DSet`: closure, interior, frontier (``cl A \\ A``),
boundary (``cl A \\ int A``), accumulation points, the Cantor-Bendixson derivative and
the locally closed calculus (``lc``/``nlc`` parts, constructible depth, decomposition
into locally closed pieces).
"""

from logging import Logger

from tametop.tame1d.nodes import Chain, Node, Point
from tametop.tame1d.tameset import (
    Tame1DSet,
    build,
    difference,
    equals,
    intersect,
)
from tametop.utils import get_logger

LOGGER: Logger = get_logger()


def _closure_node(node: Node) -> Node:
    if isinstance(node, Point):
        return node
    return Chain(
        node.limit,
        node.c,
        node.q,
        tuple(_closure_node(child) for child in node.template),
        not node.divergent,
        node.divergent,
    )


def _accumulation_nodes(node: Node) -> list[Node]:
    if isinstance(node, Point):
        return []
    inner: list[Node] = []
    for child in node.template:
        inner.extend(_accumulation_nodes(child))
    if node.divergent:
        if not inner:
            return []
        return [Chain(node.limit, node.c, node.q, tuple(inner), False, True)]
    if not inner:
        return [Point(node.limit)]
    return [Chain(node.limit, node.c, node.q, tuple(inner), True, False)]


def closure(a: Tame1DSet) -> Tame1DSet:
    """Closes every interval and includes the limit of every convergent chain."""
    return build(
        [item.closure() for item in a.intervals], [_closure_node(node) for node in a.zerodim]
    )


def accumulation_points(a: Tame1DSet) -> Tame1DSet:
    """Derived set: the points every neighbourhood of which meets ``a`` elsewhere."""
    nodes: list[Node] = []
    for node in a.zerodim:
        nodes.extend(_accumulation_nodes(node))
    return build([item.closure() for item in a.intervals], nodes)


def interior(a: Tame1DSet) -> Tame1DSet:
    """Open interiors of the (maximal) intervals."""
    return build([item.interior() for item in a.intervals])


def frontier(a: Tame1DSet) -> Tame1DSet:
    """``cl A \\ A``."""
    return difference(closure(a), a)


def boundary(a: Tame1DSet) -> Tame1DSet:
    """``cl A \\ int A``."""
    return difference(closure(a), interior(a))


def cb_derivative(a: Tame1DSet) -> Tame1DSet:
    """Cantor-Bendixson derivative: the non-isolated points of ``a``."""
    return intersect(a, accumulation_points(a))


def isolated_points(a: Tame1DSet) -> Tame1DSet:
    """``A \\ D(A)``: the isolated points of ``a``."""
    return difference(a, accumulation_points(a))


def nlc_part(a: Tame1DSet) -> Tame1DSet:
    """Points of ``a`` at which ``a`` is not locally closed: ``A`` meets ``cl(cl A \\ A)``."""
    return intersect(a, closure(frontier(a)))


def nlc_part_via_frontiers(a: Tame1DSet) -> Tame1DSet:
    """The same locus computed as ``A & frontier(frontier(A))``."""
    return intersect(a, frontier(frontier(a)))


def lc_part(a: Tame1DSet) -> Tame1DSet:
    """Points with a ball in which ``a`` agrees with its closure."""
    return difference(a, nlc_part(a))


def is_closed(a: Tame1DSet) -> bool:
    """True when the frontier is empty."""
    return frontier(a).is_empty()


def is_open(a: Tame1DSet) -> bool:
    """True when ``a`` equals its interior."""
    return equals(a, interior(a))


def is_locally_closed(a: Tame1DSet) -> bool:
    """True when ``a`` is open in its closure."""
    return nlc_part(a).is_empty()


def constructible_depth(a: Tame1DSet) -> int:
    """Least ``m`` with ``A^(m)`` empty, where ``A^(0) = A`` and ``A^(k+1) = nlc(A^(k))``.

    The empty set has depth 0, a nonempty locally closed set depth 1.
    """
    depth, current = 0, a
    while not current.is_empty():
        depth += 1
        current = nlc_part(current)
    return depth


def decompose_locally_closed(a: Tame1DSet) -> list[Tame1DSet]:
    """Pieces ``lc(A), lc(nlc A), lc(nlc nlc A), ...``: disjoint, locally closed, union ``A``."""
    pieces: list[Tame1DSet] = []
    current = a
    while not current.is_empty():
        rest = nlc_part(current)
        pieces.append(difference(current, rest))
        current = rest
    LOGGER.debug(f"{a} splits into {len(pieces)} locally closed pieces")
    return pieces

