"""Complex Module.

Finite abstract stratified complexes. A complex is a set of cells with a dimension each
and a frontier relation ``a < b`` meaning that cell ``a`` lies in the frontier of ``b``.
A union of cells is closed in a union ``X`` exactly when it is downward closed within
``X``; this is the modeling axiom that every cell is a locally closed manifold whose
frontier is a union of cells.

Classes:
    Cell: One stratum.
    StratComplex: Cells plus the frontier relation.
"""

from dataclasses import dataclass
from itertools import combinations
from logging import Logger
from typing import Iterable, Optional

import numpy as np

from tametop.exceptions import TameTopError
from tametop.report import CheckResult
from tametop.utils import get_logger

LOGGER: Logger = get_logger()

StrataSet = frozenset


class InvalidComplex(TameTopError):
    """Raised when the frontier relation is not a strict partial order.

    Attributes:
        witness (tuple[str, ...]): The violating cell, pair or triple.
    """

    def __init__(self, message: str, witness: tuple = ()) -> None:
        """Initializes the exception.

        Args:
            message (str): Which property fails.
            witness (tuple): The offending cells.
        """
        super().__init__(f"{message}: {', '.join(witness)}" if witness else message)
        self.witness: tuple = tuple(witness)


class NotSubset(TameTopError):
    """Raised when a union of strata is not contained in the ambient union."""


class NotClosed(TameTopError):
    """Raised when a union of strata expected to be closed in the ambient union is not."""


@dataclass(frozen=True)
class Cell:
    """A stratum of the complex.

    Attributes:
        id (str): Unique name.
        dim (int): Dimension, any natural number.
    """

    id: str
    dim: int


class StratComplex:
    """A finite complex given by its cells and the frontier relation.

    The relation is stored as given; `validate` checks that it is a strict partial order.
    """

    def __init__(
        self,
        cells: Iterable[Cell],
        frontier: Iterable[tuple[str, str]] = (),
        logger: Optional[Logger] = None,
    ) -> None:
        """Initializes the complex.

        Args:
            cells: The cells; ids must be unique.
            frontier: Pairs ``(a, b)`` with ``a`` in the frontier of ``b``.
            logger (Optional[Logger]): Logger; the shared one if None.

        Raises:
            InvalidComplex: On duplicate ids, negative dimensions or unknown cells.
        """
        self.logger: Logger = logger or LOGGER
        self.cells: dict[str, Cell] = {}
        for cell in cells:
            if cell.id in self.cells:
                raise InvalidComplex("duplicate cell id", (cell.id,))
            if cell.dim < 0:
                raise InvalidComplex("negative dimension", (cell.id,))
            self.cells[cell.id] = cell
        self.below: dict[str, set] = {cid: set() for cid in self.cells}
        for low, high in frontier:
            for cid in (low, high):
                if cid not in self.cells:
                    raise InvalidComplex("frontier pair names an unknown cell", (cid,))
            self.below[high].add(low)

    def __len__(self) -> int:
        return len(self.cells)

    def __repr__(self) -> str:
        return f"StratComplex(cells={len(self.cells)}, pairs={len(self.pairs())})"

    @property
    def all_cells(self) -> StrataSet:
        """Every cell id."""
        return frozenset(self.cells)

    def pairs(self) -> list[tuple[str, str]]:
        """The frontier relation as sorted ``(low, high)`` pairs."""
        return sorted((low, high) for high, lows in self.below.items() for low in lows)

    def less(self, low: str, high: str) -> bool:
        """``low < high``."""
        return low in self.below[high]

    def dim(self, cid: str) -> int:
        """Dimension of a cell."""
        return self.cells[cid].dim

    def is_graded(self) -> bool:
        """Dimensions strictly decrease along the relation and every positive-dimensional
        cell has a frontier cell of the next lower dimension."""
        for high, lows in self.below.items():
            if any(self.dim(low) >= self.dim(high) for low in lows):
                return False
            if self.dim(high) > 0 and not any(self.dim(low) == self.dim(high) - 1 for low in lows):
                return False
        return True


def violations(complex_: StratComplex) -> list[tuple[str, tuple[str, ...]]]:
    """Every irreflexivity and transitivity violation, in a deterministic order."""
    found: list[tuple[str, tuple[str, ...]]] = []
    for cid in sorted(complex_.cells):
        if complex_.less(cid, cid):
            found.append(("irreflexivity", (cid,)))
    for low, mid in complex_.pairs():
        for high in sorted(complex_.cells):
            if complex_.less(mid, high) and not complex_.less(low, high):
                found.append(("transitivity", (low, mid, high)))
    return found


def validate(complex_: StratComplex) -> list[CheckResult]:
    """Checks that the frontier relation is a strict partial order.

    Returns:
        list[CheckResult]: ``irreflexive`` and ``transitive`` results, both passing.

    Raises:
        InvalidComplex: With the first violating cell or triple.
    """
    problems = violations(complex_)
    if problems:
        kind, witness = problems[0]
        raise InvalidComplex(f"{kind} violated ({len(problems)} violations)", witness)
    complex_.logger.debug(f"validated {complex_!r}")
    return [CheckResult("irreflexive", True), CheckResult("transitive", True)]


def _require_subset(complex_: StratComplex, y: StrataSet, x: StrataSet) -> None:
    unknown = set(y) - set(complex_.cells)
    if unknown:
        raise NotSubset(f"unknown cells {sorted(unknown)}")
    if not y <= x:
        raise NotSubset(f"{sorted(y - x)} not contained in the ambient union")


def closure_of(complex_: StratComplex, s: Iterable[str]) -> StrataSet:
    """Downward saturation of ``s``."""
    s = frozenset(s)
    return s | frozenset(low for high in s for low in complex_.below[high])


def closure_in(complex_: StratComplex, y: StrataSet, x: StrataSet) -> StrataSet:
    """Closure of ``y`` inside the subspace ``x``."""
    return closure_of(complex_, y) & frozenset(x)


def interior_in(complex_: StratComplex, y: Iterable[str], x: Iterable[str]) -> StrataSet:
    """Interior of ``y`` in ``x``: cells of ``y`` all of whose cofaces in ``x`` lie in ``y``.

    Raises:
        NotSubset: If ``y`` is not contained in ``x``.
    """
    y, x = frozenset(y), frozenset(x)
    _require_subset(complex_, y, x)
    return frozenset(
        cid for cid in y if all(high in y for high in x if complex_.less(cid, high))
    )


def is_closed_in(complex_: StratComplex, y: Iterable[str], x: Iterable[str]) -> bool:
    """``y`` is downward closed within ``x``."""
    y, x = frozenset(y), frozenset(x)
    _require_subset(complex_, y, x)
    return closure_in(complex_, y, x) == y


def is_open_in(complex_: StratComplex, y: Iterable[str], x: Iterable[str]) -> bool:
    """``x \\ y`` is closed in ``x``."""
    y, x = frozenset(y), frozenset(x)
    _require_subset(complex_, y, x)
    return is_closed_in(complex_, x - y, x)


def is_locally_closed_in(complex_: StratComplex, y: Iterable[str], x: Iterable[str]) -> bool:
    """``y`` is open in its closure within ``x``."""
    y, x = frozenset(y), frozenset(x)
    _require_subset(complex_, y, x)
    return is_open_in(complex_, y, closure_in(complex_, y, x))


def is_nowhere_dense_in(complex_: StratComplex, y: Iterable[str], x: Iterable[str]) -> bool:
    """A closed ``y`` is nowhere dense in ``x`` iff its interior in ``x`` is empty.

    Raises:
        NotClosed: If ``y`` is not closed in ``x``.
    """
    y, x = frozenset(y), frozenset(x)
    if not is_closed_in(complex_, y, x):
        raise NotClosed(f"{sorted(y)} is not closed in {sorted(x)}")
    return not interior_in(complex_, y, x)


def maximal_cells(complex_: StratComplex, x: Iterable[str]) -> StrataSet:
    """Cells of ``x`` lying in the frontier of no other cell of ``x``."""
    x = frozenset(x)
    return frozenset(low for low in x if not any(complex_.less(low, high) for high in x))


def downward_closed_subsets(complex_: StratComplex, x: Iterable[str]) -> list[StrataSet]:
    """All subsets of ``x`` closed in ``x``, by brute force over the power set."""
    members = sorted(x)
    found = []
    for size in range(len(members) + 1):
        for chosen in combinations(members, size):
            candidate = frozenset(chosen)
            if closure_in(complex_, candidate, x) == candidate:
                found.append(candidate)
    return found


def _transitive_closure(below: dict[str, set]) -> dict[str, set]:
    changed = True
    while changed:
        changed = False
        for high in below:
            extra = set().union(*(below[low] for low in below[high])) - below[high]
            if extra:
                below[high] |= extra
                changed = True
    return below


def chain_complex(length: int) -> StratComplex:
    """``c0 < c1 < ... < c{length-1}`` with dimensions 0, 1, 2, ..."""
    cells = [Cell(f"c{i}", i) for i in range(length)]
    pairs = [(f"c{i}", f"c{j}") for j in range(length) for i in range(j)]
    return StratComplex(cells, pairs)


def random_complex(rng: np.random.Generator, max_cells: int = 7) -> StratComplex:
    """A random valid complex with up to ``max_cells`` cells.

    Edges only run from lower to higher index and are transitively closed, so the
    relation is always a strict partial order. Dimensions are arbitrary.
    """
    size = int(rng.integers(1, max_cells + 1))
    ids = [f"c{i}" for i in range(size)]
    below: dict[str, set] = {cid: set() for cid in ids}
    for j in range(size):
        for i in range(j):
            if rng.random() < 0.35:
                below[ids[j]].add(ids[i])
    _transitive_closure(below)
    cells = [Cell(cid, int(rng.integers(0, 3))) for cid in ids]
    return StratComplex(cells, [(low, high) for high in ids for low in below[high]])


def graded_complex(rng: np.random.Generator, max_cells: int = 7) -> StratComplex:
    """A random complex in which dimension strictly decreases along the relation and
    every positive-dimensional cell has a frontier cell of the next lower dimension."""
    size = int(rng.integers(1, max_cells + 1))
    dims: list[int] = []
    for _ in range(size):
        top = (max(dims) + 1) if dims else 0
        dims.append(int(rng.integers(0, min(top, 3) + 1)))
    ids = [f"c{i}" for i in range(size)]
    below: dict[str, set] = {cid: set() for cid in ids}
    for j, dim in enumerate(dims):
        if dim == 0:
            continue
        lower = [i for i in range(j) if dims[i] < dim]
        next_lower = [i for i in lower if dims[i] == dim - 1]
        below[ids[j]].add(ids[next_lower[int(rng.integers(len(next_lower)))]])
        for i in lower:
            if rng.random() < 0.3:
                below[ids[j]].add(ids[i])
    _transitive_closure(below)
    cells = [Cell(cid, dim) for cid, dim in zip(ids, dims)]
    return StratComplex(cells, [(low, high) for high in ids for low in below[high]])
