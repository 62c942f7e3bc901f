"""Rank Module.

Pillay rank of unions of strata and the checker for its known inequalities.

The rank of a nonempty union ``X`` is 0 when ``X`` has no nonempty closed nowhere dense
subset, and otherwise one more than the largest rank of such a subset; the empty set gets
the sentinel `EMPTY_RANK`. In a finite complex the closed nowhere dense subsets of ``X``
are the downward closed subsets avoiding the maximal cells of ``X``, so the largest one is
``X`` minus its maximal cells, which is what `pillay_rank` recurses on.
`pillay_rank_oracle` applies the definition literally instead.
"""

from logging import Logger
from typing import Iterable, Optional, Union

import numpy as np

from tametop.cellcomplex.complex import (
    StrataSet,
    StratComplex,
    closure_in,
    downward_closed_subsets,
    interior_in,
    is_locally_closed_in,
    maximal_cells,
)
from tametop.exceptions import TameTopError
from tametop.ordinal import Ordinal, add, mul_nat
from tametop.report import CheckResult
from tametop.utils import get_logger

LOGGER: Logger = get_logger()

EMPTY_RANK: int = -1
ORACLE_LIMIT: int = 20
ORACLE_CHECK_LIMIT: int = 8
DEFAULT_SAMPLES: int = 40

Rank = Union[Ordinal, int]


class TooLarge(TameTopError):
    """Raised when the brute-force oracle is asked about too many strata."""


def _as_rank(height: int) -> Rank:
    return EMPTY_RANK if height < 0 else Ordinal.from_int(height)


def _height(complex_: StratComplex, x: StrataSet, memo: dict) -> int:
    if not x:
        return EMPTY_RANK
    if x not in memo:
        memo[x] = 1 + _height(complex_, x - maximal_cells(complex_, x), memo)
    return memo[x]


def pillay_rank(complex_: StratComplex, x: Optional[Iterable[str]] = None) -> Rank:
    """Pillay rank of a union of strata (the whole complex by default).

    Args:
        complex_ (StratComplex): A validated complex.
        x: Cell ids; every cell when None.

    Returns:
        Rank: A finite `Ordinal`, or `EMPTY_RANK` for the empty union.
    """
    x = complex_.all_cells if x is None else frozenset(x)
    return _as_rank(_height(complex_, x, {}))


def _oracle_height(complex_: StratComplex, x: StrataSet) -> int:
    if not x:
        return EMPTY_RANK
    best = EMPTY_RANK
    for y in downward_closed_subsets(complex_, x):
        if y and not interior_in(complex_, y, x):
            best = max(best, _oracle_height(complex_, y))
    return 1 + best if best > EMPTY_RANK else 0


def pillay_rank_oracle(
    complex_: StratComplex, x: Optional[Iterable[str]] = None, limit: int = ORACLE_LIMIT
) -> Rank:
    """Pillay rank by exhaustive search over every closed subset, without memoization.

    Raises:
        TooLarge: Above ``limit`` strata.
    """
    x = complex_.all_cells if x is None else frozenset(x)
    if len(x) > limit:
        raise TooLarge(f"oracle limited to {limit} strata, got {len(x)}")
    return _as_rank(_oracle_height(complex_, x))


def _fmt(cells: Iterable[str]) -> str:
    return "{" + ",".join(sorted(cells)) + "}"


class RankInequalityChecker:
    """Samples decompositions of a complex and checks the Pillay rank inequalities.

    Each check keeps the first violated instance as its witness.
    """

    def __init__(
        self,
        complex_: StratComplex,
        rng: np.random.Generator,
        samples: int = DEFAULT_SAMPLES,
        logger: Optional[Logger] = None,
    ) -> None:
        """Initializes the checker.

        Args:
            complex_ (StratComplex): A validated complex.
            rng (np.random.Generator): Source of the sampled decompositions.
            samples (int): Decompositions per check.
            logger (Optional[Logger]): Logger; the shared one if None.
        """
        self.complex = complex_
        self.rng = rng
        self.samples = samples
        self.logger: Logger = logger or LOGGER
        self.memo: dict = {}
        self.cells: list[str] = sorted(complex_.cells)

    def rank(self, x: StrataSet) -> int:
        return _height(self.complex, frozenset(x), self.memo)

    def _random_subset(self) -> StrataSet:
        return frozenset(c for c in self.cells if self.rng.random() < 0.5)

    def _random_closed(self) -> StrataSet:
        return closure_in(self.complex, self._random_subset(), self.complex.all_cells)

    def _random_partition(self, parts: int) -> list[StrataSet]:
        labels = self.rng.integers(0, parts, size=len(self.cells))
        groups = [
            frozenset(c for c, label in zip(self.cells, labels) if label == k)
            for k in range(parts)
        ]
        return [group for group in groups if group]

    def check_oracle(self) -> CheckResult:
        everything = self.complex.all_cells
        if len(everything) > ORACLE_CHECK_LIMIT:
            return CheckResult(
                "rkp_oracle", True, f"skipped above {ORACLE_CHECK_LIMIT} strata"
            )
        for x in [everything] + [self._random_subset() for _ in range(self.samples)]:
            fast, slow = self.rank(x), _oracle_height(self.complex, x)
            if fast != slow:
                return CheckResult("rkp_oracle", False, f"X={_fmt(x)}: {fast} != {slow}")
        return CheckResult("rkp_oracle", True)

    def check_monotone(self) -> CheckResult:
        for _ in range(self.samples):
            x = self._random_subset()
            y = frozenset(c for c in x if self.rng.random() < 0.5)
            if self.rank(y) > self.rank(x):
                witness = f"Y={_fmt(y)} X={_fmt(x)}: {self.rank(y)} > {self.rank(x)}"
                return CheckResult("rkp_monotone", False, witness)
        return CheckResult("rkp_monotone", True)

    def check_closed_cover(self) -> CheckResult:
        everything = self.complex.all_cells
        covers = [[everything]]
        for _ in range(self.samples):
            parts = self._random_partition(int(self.rng.integers(1, 4)))
            covers.append([closure_in(self.complex, part, everything) for part in parts])
        for cover in covers:
            expected = max(self.rank(piece) for piece in cover)
            if self.rank(everything) != expected:
                pieces = " ".join(_fmt(piece) for piece in cover)
                return CheckResult(
                    "rkp_closed_cover",
                    False,
                    f"cover {pieces}: {self.rank(everything)} != {expected}",
                )
        return CheckResult("rkp_closed_cover", True)

    def check_union(self) -> CheckResult:
        everything = self.complex.all_cells
        for _ in range(self.samples):
            closed = self._random_closed()
            opened = everything - closed
            total, rank_b, rank_a = self.rank(everything), self.rank(closed), self.rank(opened)
            if rank_a == EMPTY_RANK or rank_b == EMPTY_RANK:
                bound = max(rank_a, rank_b)
            else:
                pieces = add(Ordinal.from_int(rank_b), Ordinal.from_int(rank_a))
                bound = int(add(pieces, Ordinal.from_int(1)))
            if total > bound:
                return CheckResult(
                    "rkp_union",
                    False,
                    f"A={_fmt(opened)} B={_fmt(closed)}: {total} > {rank_b} + {rank_a} + 1",
                )
        return CheckResult("rkp_union", True)

    def _locally_closed_partitions(self) -> list[list[StrataSet]]:
        everything = self.complex.all_cells
        layers: list[StrataSet] = []
        rest = everything
        while rest:
            top = maximal_cells(self.complex, rest)
            layers.append(top)
            rest = rest - top
        found = [[frozenset([c]) for c in self.cells], layers]
        for _ in range(self.samples):
            parts = self._random_partition(int(self.rng.integers(1, 4)))
            if all(is_locally_closed_in(self.complex, part, everything) for part in parts):
                found.append(parts)
        return found

    def check_locally_closed_bound(self) -> CheckResult:
        everything = self.complex.all_cells
        if not everything:
            return CheckResult("rkp_lclosed", True)
        total = Ordinal.from_int(self.rank(everything))
        for parts in self._locally_closed_partitions():
            gamma = Ordinal.from_int(max(self.rank(part) for part in parts))
            pieces = len(parts)
            bound = add(mul_nat(gamma, pieces), Ordinal.from_int(pieces - 1))
            if total > bound:
                listing = " ".join(_fmt(part) for part in parts)
                witness = f"partition {listing}: {total} > {gamma}*{pieces} + {pieces - 1}"
                return CheckResult("rkp_lclosed", False, witness)
        return CheckResult("rkp_lclosed", True)

    def check_lomin(self) -> CheckResult:
        everything = self.complex.all_cells
        top = max((self.complex.dim(c) for c in everything), default=EMPTY_RANK)
        if self.rank(everything) != top:
            return CheckResult("rkp_lomin", False, f"rank {self.rank(everything)} != dim {top}")
        return CheckResult("rkp_lomin", True)

    def run(self) -> list[CheckResult]:
        results = [
            self.check_oracle(),
            self.check_monotone(),
            self.check_closed_cover(),
            self.check_union(),
            self.check_locally_closed_bound(),
        ]
        if self.complex.is_graded():
            results.append(self.check_lomin())
        failed = [result.name for result in results if not result.passed]
        if failed:
            self.logger.warning(f"rank inequality violations: {', '.join(failed)}")
        return results


def check_rank_inequalities(
    complex_: StratComplex, rng: np.random.Generator, samples: int = DEFAULT_SAMPLES
) -> list[CheckResult]:
    """Runs every rank inequality check on sampled decompositions of ``complex_``.

    Args:
        complex_ (StratComplex): A validated complex.
        rng (np.random.Generator): Seeded generator for the decompositions.
        samples (int): Decompositions per check.

    Returns:
        list[CheckResult]: ``rkp_oracle``, ``rkp_monotone``, ``rkp_closed_cover``,
        ``rkp_union``, ``rkp_lclosed`` and, on graded complexes, ``rkp_lomin``.
    """
    return RankInequalityChecker(complex_, rng, samples).run()
