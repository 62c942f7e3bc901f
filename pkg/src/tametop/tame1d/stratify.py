"""Stratify Module.

Weak stratification of the line compatible with a finite family of tame sets.

The family is first closed under closure, interior, frontier and the Cantor-Bendixson
derivative. With ``E`` the union of the boundaries of the generated sets, the
one-dimensional strata are ``J \\ E`` for the open intervals ``J`` cut out by all
interval ends, and the zero-dimensional strata partition ``E``: they are refined along
the generated sets, the closures of the ``J``, their own Cantor-Bendixson layers and
each other's frontiers until nothing splits any more. A separate verifier then checks
disjointness, the cover, the manifold property, compatibility and the frontier condition.
"""

from dataclasses import dataclass
from logging import Logger
from typing import Callable, Iterable, Optional

from tametop.exceptions import TameTopError
from tametop.report import CheckResult
from tametop.tame1d import intervals as iv
from tametop.tame1d.intervals import Interval
from tametop.tame1d.nodes import Point
from tametop.tame1d.rational import NEG_INF, POS_INF
from tametop.tame1d.tameset import (
    Tame1DSet,
    build,
    difference,
    equals,
    intersect,
    is_disjoint,
    is_subset,
    union_all,
)
from tametop.tame1d.topology import (
    boundary,
    cb_derivative,
    closure,
    frontier,
    interior,
    isolated_points,
)
from tametop.utils import get_logger

LOGGER: Logger = get_logger()

DEFAULT_FIXPOINT_CAP: int = 32


class FixpointCapExceeded(TameTopError):
    """Raised when the generated family or the stratum refinement does not stabilize.

    Attributes:
        generators (tuple[Tame1DSet, ...]): The generator set reached so far.
    """

    def __init__(self, message: str, generators: Iterable[Tame1DSet] = ()) -> None:
        """Initializes the exception.

        Args:
            message (str): What did not stabilize.
            generators: The offending generator set.
        """
        self.generators: tuple[Tame1DSet, ...] = tuple(generators)
        listing = "; ".join(str(item) for item in self.generators)
        super().__init__(f"{message} [generators: {listing}]" if listing else message)


class StratificationFailed(TameTopError):
    """Raised when the verifier rejects a computed stratification."""


@dataclass(frozen=True)
class Stratum:
    """One stratum.

    Attributes:
        dim (int): 0 (discrete) or 1 (open).
        points (Tame1DSet): The stratum itself when ``dim == 0``; the holes ``E & J``
            removed from ``interval`` when ``dim == 1``.
        interval (Optional[Interval]): The open interval ``J`` of a 1-dimensional stratum.
    """

    dim: int
    points: Tame1DSet
    interval: Optional[Interval] = None

    def __str__(self) -> str:
        if self.dim == 0:
            return str(self.points)
        if self.points.is_empty():
            return str(self.interval)
        return f"{self.interval} minus {self.points}"


@dataclass(frozen=True)
class LineStratification:
    """A verified weak stratification of the line.

    Attributes:
        strata (tuple[Stratum, ...]): Zero-dimensional strata first, then open ones.
        frontier_table (tuple[tuple[int, ...], ...]): For every stratum, the indices of
            the strata whose union is its frontier.
        generators (tuple[Tame1DSet, ...]): The closed generator family.
        rounds (int): Refinement rounds used.
        report (tuple[CheckResult, ...]): Verifier results.
    """

    strata: tuple[Stratum, ...]
    frontier_table: tuple[tuple[int, ...], ...]
    generators: tuple[Tame1DSet, ...]
    rounds: int
    report: tuple[CheckResult, ...] = ()

    @property
    def frontier_condition(self) -> bool:
        """True when every verifier check passed."""
        return all(result.passed for result in self.report)


_OPERATORS: tuple[Callable[[Tame1DSet], Tame1DSet], ...] = (
    closure,
    interior,
    frontier,
    cb_derivative,
)


def close_family(
    family: Iterable[Tame1DSet], cap: int = DEFAULT_FIXPOINT_CAP
) -> tuple[list[Tame1DSet], int]:
    """Closes a family under closure, interior, frontier and derivative.

    Returns:
        tuple: The generated sets and the number of rounds used.

    Raises:
        FixpointCapExceeded: If new sets still appear after ``cap`` rounds.
    """
    generated: list[Tame1DSet] = []
    for item in family:
        if not any(equals(item, known) for known in generated):
            generated.append(item)
    frontier_sets = list(generated)
    rounds = 0
    while frontier_sets:
        rounds += 1
        if rounds > cap:
            raise FixpointCapExceeded(f"family not closed after {cap} rounds", generated)
        fresh: list[Tame1DSet] = []
        for item in frontier_sets:
            for operator in _OPERATORS:
                image = operator(item)
                if not any(equals(image, known) for known in generated + fresh):
                    fresh.append(image)
        LOGGER.debug(f"generator round {rounds}: {len(fresh)} new sets")
        generated.extend(fresh)
        frontier_sets = fresh
    return generated, rounds


def interval_atoms(generators: Iterable[Tame1DSet]) -> list[Interval]:
    """Open intervals between consecutive interval ends of the generators."""
    ends: set = set()
    for item in generators:
        ends.update(iv.endpoints(item.intervals))
    cuts = [NEG_INF] + sorted(ends) + [POS_INF]
    return [Interval(lo, hi) for lo, hi in zip(cuts, cuts[1:])]


def _split(pieces: list[Tame1DSet], splitter: Tame1DSet) -> list[Tame1DSet]:
    result: list[Tame1DSet] = []
    for piece in pieces:
        inside = intersect(piece, splitter)
        outside = difference(piece, splitter)
        result.extend(part for part in (inside, outside) if not part.is_empty())
    return result


def _refine_points(
    carrier: Tame1DSet, splitters: list[Tame1DSet], cap: int, generators: list[Tame1DSet]
) -> tuple[list[Tame1DSet], int]:
    pieces = [] if carrier.is_empty() else [carrier]
    for splitter in splitters:
        pieces = _split(pieces, splitter)
    rounds = 0
    while True:
        rounds += 1
        if rounds > cap:
            raise FixpointCapExceeded(f"strata not stable after {cap} rounds", generators)
        before = len(pieces)
        layered: list[Tame1DSet] = []
        for piece in pieces:
            derived = cb_derivative(piece)
            if derived.is_empty():
                layered.append(piece)
            else:
                layered.extend([isolated_points(piece), derived])
        pieces = layered
        for piece in list(pieces):
            edge = frontier(piece)
            if not edge.is_empty():
                pieces = _split(pieces, edge)
        LOGGER.debug(f"stratum refinement round {rounds}: {len(pieces)} pieces")
        if len(pieces) == before:
            return pieces, rounds


def stratify_line(
    family: Iterable[Tame1DSet], cap: int = DEFAULT_FIXPOINT_CAP, logger: Optional[Logger] = None
) -> LineStratification:
    """Stratifies the line compatibly with ``family`` and verifies the result.

    Args:
        family: Finitely many tame sets.
        cap (int): Fixpoint cap for both the generator closure and the refinement.
        logger (Optional[Logger]): Logger; the shared one if None.

    Returns:
        LineStratification: Strata, frontier table and verifier report.

    Raises:
        FixpointCapExceeded: If a fixpoint is not reached within ``cap`` rounds.
        StratificationFailed: If the verifier rejects the result.
    """
    logger = logger or LOGGER
    family = list(family)
    generators, generator_rounds = close_family(family, cap)
    atoms = interval_atoms(generators)
    ends = [Point(p) for atom in atoms for p in iv.endpoints([atom])]
    carrier = union_all([boundary(item) for item in generators] + [build((), ends)])

    splitters = list(generators)
    for atom in atoms:
        splitters.append(build([atom]))
        splitters.append(build([atom.closure()]))
    points, refine_rounds = _refine_points(carrier, splitters, cap, generators)

    strata: list[Stratum] = [Stratum(0, piece) for piece in points]
    for atom in atoms:
        strata.append(Stratum(1, intersect(carrier, build([atom])), atom))

    table: list[tuple[int, ...]] = []
    for stratum in strata:
        edge = stratum_frontier(stratum)
        table.append(
            tuple(
                index
                for index, other in enumerate(strata)
                if other.dim == 0 and not is_disjoint(other.points, edge)
            )
        )
    result = LineStratification(
        tuple(strata), tuple(table), tuple(generators), generator_rounds + refine_rounds
    )
    report = tuple(verify_stratification(result, family))
    result = LineStratification(
        result.strata, result.frontier_table, result.generators, result.rounds, report
    )
    failed = [check.line() for check in report if not check.passed]
    if failed:
        raise StratificationFailed("; ".join(failed))
    logger.info(f"stratified {len(family)} sets into {len(strata)} strata")
    return result


def stratum_frontier(stratum: Stratum) -> Tame1DSet:
    """``cl S \\ S`` for a stratum (the holes are nowhere dense in the interval)."""
    if stratum.dim == 0:
        return frontier(stratum.points)
    ends = build((), [Point(p) for p in iv.endpoints([stratum.interval])])
    return union_all([ends, stratum.points])


def verify_stratification(
    stratification: LineStratification, family: Iterable[Tame1DSet]
) -> list[CheckResult]:
    """Independent checks of a stratification against the family it must respect.

    Returns:
        list[CheckResult]: ``disjoint``, ``cover``, ``manifold``, ``compatible`` and
        ``frontier_condition`` results.
    """
    strata = stratification.strata
    points = [(i, s) for i, s in enumerate(strata) if s.dim == 0]
    opens = [(i, s) for i, s in enumerate(strata) if s.dim == 1]
    results: list[CheckResult] = []

    witness = ""
    for index, (i, first) in enumerate(points):
        for j, second in points[index + 1 :]:
            if not witness and not is_disjoint(first.points, second.points):
                witness = f"strata {i} and {j}"
        for j, other in opens:
            inside = intersect(first.points, build([other.interval]))
            if not witness and not is_subset(inside, other.points):
                witness = f"strata {i} and {j}"
    for index, (i, first) in enumerate(opens):
        for j, second in opens[index + 1 :]:
            if not witness and iv.intersect([first.interval], [second.interval]):
                witness = f"strata {i} and {j}"
    results.append(CheckResult("disjoint", not witness, witness))

    zero = union_all([s.points for _, s in points])
    witness = ""
    uncovered = iv.complement([s.interval for _, s in opens])
    for gap in uncovered:
        if not gap.is_point or gap.lo not in zero:
            witness = f"gap {gap}"
            break
    for i, stratum in opens:
        if not witness and not is_subset(stratum.points, zero):
            witness = f"holes of stratum {i}"
    results.append(CheckResult("cover", not witness, witness))

    witness = ""
    for i, stratum in points:
        if not cb_derivative(stratum.points).is_empty():
            witness = f"stratum {i} is not discrete"
            break
    for i, stratum in opens:
        if witness:
            break
        holes = stratum.points
        inside = intersect(frontier(holes), build([stratum.interval]))
        if holes.has_interior() or not inside.is_empty():
            witness = f"stratum {i} is not open"
    results.append(CheckResult("manifold", not witness, witness))

    witness = ""
    for number, member in enumerate(family):
        for i, stratum in enumerate(strata):
            if stratum.dim == 0:
                ok = is_subset(stratum.points, member) or is_disjoint(stratum.points, member)
            else:
                inside = not iv.subtract([stratum.interval], member.intervals)
                outside = not iv.intersect([stratum.interval], member.intervals)
                stray = intersect(build((), member.zerodim), build([stratum.interval]))
                ok = (inside or outside) and (inside or is_subset(stray, stratum.points))
            if not ok:
                witness = f"set {number} cuts stratum {i}"
                break
        if witness:
            break
    results.append(CheckResult("compatible", not witness, witness))

    witness = ""
    for i, stratum in enumerate(strata):
        if stratum.dim == 0:
            edge = frontier(stratum.points)
        else:
            edge = difference(closure(build([stratum.interval])), build([stratum.interval]))
            edge = union_all([edge, stratum.points])
        covered = union_all([strata[j].points for j in stratification.frontier_table[i]])
        if not equals(edge, covered):
            witness = f"frontier of stratum {i}"
            break
    results.append(CheckResult("frontier_condition", not witness, witness))
    return results
