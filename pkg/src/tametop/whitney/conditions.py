"""Conditions Module.

Numerical sweeps for Whitney's conditions (a) and (b) and Verdier's condition (w) at a
base point ``y`` of ``Y`` lying in the frontier of ``X``.

At every scale ``r`` (dyadic from ``r0``) points ``x`` of ``X`` and ``z`` of ``Y`` within
``r`` of ``y`` are drawn with a scrambled Halton sequence, and the largest value of

* (a) ``delta(T_z Y, T_x X)``,
* (b) ``delta(line(x - z), T_x X)``,
* (w) ``delta(T_z Y, T_x X) / |z - x|``

is recorded. Every ``x`` is paired with a random ``z`` and with its nearest point on
``Y``. Sheets of a discrete family are used up to ``base^k <= sheet_cap_factor / r``.
The verdict is read off the trend of the per-scale maxima.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from logging import Logger
from typing import Iterable, Mapping, Optional

import numpy as np
from scipy.optimize import least_squares
from scipy.stats import qmc

from tametop.exceptions import TameTopError
from tametop.utils import DEFAULT_SEED, get_logger
from tametop.whitney.manifold import (
    Chart,
    ParamManifold,
    RankDeficient,
    line_basis,
    subspace_distance,
    tangent_space,
)

LOGGER: Logger = get_logger()

CSV_HEADER: str = "scale,quantity_max,samples"


class EmptySample(TameTopError):
    """Raised when no admissible sample pair exists at some scale."""


class Condition(Enum):
    """The checked condition."""

    A = "a"
    B = "b"
    W = "w"


class VerdictKind(Enum):
    """Outcome of a sweep."""

    HOLDS = "HOLDS"
    FAILS = "FAILS"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class SweepSettings:
    """Schedule and thresholds.

    Attributes:
        r0 (float): Largest scale.
        scales (int): Number of dyadic scales ``r0 * 2^-i``.
        samples (int): Halton points per scale.
        tol_hold (float): (a)/(b) hold below this at the final scale.
        tol_fail (float): (a)/(b) fail when every scale stays at or above this.
        window (int): Trend window (last scales).
        hold_ratio (float): (w) holds when the window maximum is within this factor of
            the median.
        growth (float): (w) fails when the last maximum is this many times the first.
        sheet_cap_factor (float): Sheets with ``base^k <= sheet_cap_factor / r`` are used.
    """

    r0: float = 0.25
    scales: int = 8
    samples: int = 64
    tol_hold: float = 1e-2
    tol_fail: float = 1e-1
    window: int = 4
    hold_ratio: float = 2.0
    growth: float = 4.0
    sheet_cap_factor: float = 4.0

    def radius(self, index: int) -> float:
        """Scale ``r_index``."""
        return self.r0 * 2.0**-index


@dataclass(frozen=True)
class PairSpec:
    """A pair ``(X, Y)`` with a base point of ``Y``.

    Attributes:
        name (str): Label.
        x (ParamManifold): The manifold approaching ``Y``.
        y (ParamManifold): The manifold in the frontier of ``X``.
        base_point (tuple[float, ...]): ``y``.
        settings (SweepSettings): Schedule and thresholds.
        expected (Mapping[str, str]): Documented verdicts by condition letter.
    """

    name: str
    x: ParamManifold
    y: ParamManifold
    base_point: tuple[float, ...]
    settings: SweepSettings = SweepSettings()
    expected: Mapping[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class ScalePoint:
    """Result at one scale."""

    scale: float
    quantity_max: float
    samples: int


@dataclass(frozen=True)
class ScaleSweep:
    """Per-scale maxima of one condition."""

    condition: Condition
    points: tuple[ScalePoint, ...]

    @property
    def maxima(self) -> list[float]:
        return [point.quantity_max for point in self.points]

    def to_csv(self) -> str:
        """CSV with header ``scale,quantity_max,samples``."""
        rows = [CSV_HEADER]
        rows += [f"{p.scale!r},{p.quantity_max!r},{p.samples}" for p in self.points]
        return "\n".join(rows) + "\n"


@dataclass(frozen=True)
class Verdict:
    """Decision plus the evidence it rests on.

    Attributes:
        condition (Condition): Which condition.
        kind (VerdictKind): HOLDS, FAILS or INCONCLUSIVE.
        sweep (ScaleSweep): The per-scale maxima.
        final (float): Maximum at the last scale.
        growth (float): Last maximum over first maximum.
        median (float): Median of the maxima.
    """

    condition: Condition
    kind: VerdictKind
    sweep: ScaleSweep
    final: float
    growth: float
    median: float

    def line(self) -> str:
        """``verdict: <KIND>``."""
        return f"verdict: {self.kind.value}"


def decide(condition: Condition, maxima: list[float], settings: SweepSettings) -> VerdictKind:
    """Verdict rule for a list of per-scale maxima (largest scale first)."""
    window = maxima[-settings.window :]
    if condition in (Condition.A, Condition.B):
        decreasing = all(later <= earlier for earlier, later in zip(window, window[1:]))
        if maxima[-1] < settings.tol_hold and decreasing:
            return VerdictKind.HOLDS
        if all(value >= settings.tol_fail for value in maxima):
            return VerdictKind.FAILS
        return VerdictKind.INCONCLUSIVE
    if _growth(maxima) >= settings.growth:
        return VerdictKind.FAILS
    if max(window) <= settings.hold_ratio * float(np.median(maxima)):
        return VerdictKind.HOLDS
    return VerdictKind.INCONCLUSIVE


def margin(verdict: Verdict, settings: SweepSettings) -> float:
    """How far a verdict clears the threshold that decided it (``inf`` for exact zeros).

    (a)/(b) HOLDS compares ``tol_hold`` with the final maximum and FAILS compares the
    final maximum with ``tol_fail``. (w) FAILS compares the growth with ``growth`` and
    HOLDS compares ``hold_ratio`` times the median with the window maximum.
    INCONCLUSIVE has margin 0.
    """
    if verdict.kind is VerdictKind.INCONCLUSIVE:
        return 0.0
    maxima = verdict.sweep.maxima
    if verdict.condition is Condition.W:
        if verdict.kind is VerdictKind.FAILS:
            return verdict.growth / settings.growth
        peak = max(maxima[-settings.window :])
        return settings.hold_ratio * verdict.median / peak if peak > 0 else math.inf
    if verdict.kind is VerdictKind.FAILS:
        return verdict.final / settings.tol_fail
    return settings.tol_hold / verdict.final if verdict.final > 0 else math.inf


def _growth(maxima: list[float]) -> float:
    first, last = maxima[0], maxima[-1]
    if first > 0:
        return last / first
    return math.inf if last > 0 else 1.0


@dataclass(frozen=True)
class _Anchor:
    chart: Chart
    sheet: Optional[tuple[str, float]]
    center: np.ndarray
    half_width: float


def _distance(a: np.ndarray, b: np.ndarray) -> float:
    return math.hypot(*(np.asarray(a, dtype=float) - np.asarray(b, dtype=float)))


class ConditionChecker:
    """Runs the scale sweep of a pair and turns it into verdicts."""

    def __init__(
        self,
        pair: PairSpec,
        seed: int = DEFAULT_SEED,
        jobs: int = 1,
        logger: Optional[Logger] = None,
    ) -> None:
        """Initializes the checker.

        Args:
            pair (PairSpec): The pair to check.
            seed (int): Seed of the scrambled Halton sequences.
            jobs (int): Worker threads for the scales.
            logger (Optional[Logger]): Logger; the shared one if None.
        """
        self.pair = pair
        self.settings = pair.settings
        self.seed = seed
        self.jobs = max(1, jobs)
        self.logger: Logger = logger or LOGGER
        self.base = np.asarray(pair.base_point, dtype=float)

    def project(
        self, chart: Chart, sheet: Optional[tuple[str, float]], target: np.ndarray, start
    ) -> tuple[np.ndarray, float]:
        """Nearest chart parameters to ``target`` and the remaining distance.

        A least-squares solve in the parameter box is followed by one Gauss-Newton step
        on the normal equations, kept when it does not increase the distance.
        """
        lows, highs = np.array(chart.lows, dtype=float), np.array(chart.highs, dtype=float)
        margin = 1e-9 * (highs - lows)
        start = np.clip(np.asarray(start, dtype=float), lows + margin, highs - margin)
        result = least_squares(
            lambda p: chart.point(p, sheet) - target,
            start,
            jac=lambda p: chart.jacobian(p, sheet),
            bounds=(lows, highs),
            method="trf",
        )
        params = np.clip(result.x, lows, highs)
        distance = _distance(chart.point(params, sheet), target)
        jacobian = chart.jacobian(params, sheet)
        try:
            step = np.linalg.solve(
                jacobian.T @ jacobian, jacobian.T @ (chart.point(params, sheet) - target)
            )
        except np.linalg.LinAlgError:
            return params, distance
        polished = params - step
        if np.all(polished >= lows) and np.all(polished <= highs):
            polished_distance = _distance(chart.point(polished, sheet), target)
            if polished_distance <= distance:
                return polished, polished_distance
        return params, distance

    def anchors(self, manifold: ParamManifold, radius: float) -> list[_Anchor]:
        """Chart and sheet pieces passing within ``radius`` of the base point."""
        found = []
        for sheet in manifold.sheets(self.settings.sheet_cap_factor / radius):
            for chart in manifold.charts:
                center, distance = self.project(chart, sheet, self.base, chart.center())
                if distance > radius:
                    continue
                stretch = np.linalg.norm(chart.jacobian(center, sheet), 2)
                if stretch == 0:
                    continue
                found.append(_Anchor(chart, sheet, center, radius / stretch))
        return found

    def _nearest_on_y(self, point: np.ndarray, anchors: list[_Anchor]):
        best = None
        for anchor in anchors:
            params, distance = self.project(anchor.chart, anchor.sheet, point, anchor.center)
            if best is None or distance < best[0]:
                best = (distance, anchor, params)
        return best[1], best[2]

    def sample_scale(self, index: int) -> dict[Condition, ScalePoint]:
        """Maxima of the three quantities at scale ``index``.

        Raises:
            EmptySample: If no admissible pair is found.
        """
        radius = self.settings.radius(index)
        x_anchors = self.anchors(self.pair.x, radius)
        y_anchors = self.anchors(self.pair.y, radius)
        if not x_anchors or not y_anchors:
            side = "X" if not x_anchors else "Y"
            raise EmptySample(f"no point of {side} within {radius} of {self.pair.base_point}")
        kx, ky = self.pair.x.intrinsic_dim, self.pair.y.intrinsic_dim
        sampler = qmc.Halton(
            d=kx + ky + 2, scramble=True, seed=np.random.default_rng([self.seed, index])
        )
        maxima = {condition: 0.0 for condition in Condition}
        accepted = 0
        for row in sampler.random(self.settings.samples):
            anchor = x_anchors[min(int(row[0] * len(x_anchors)), len(x_anchors) - 1)]
            params = anchor.center + (2 * row[1 : 1 + kx] - 1) * anchor.half_width
            if not anchor.chart.contains(params):
                continue
            x = anchor.chart.point(params, anchor.sheet)
            if _distance(x, self.base) > radius:
                continue
            try:
                tangent_x = tangent_space(anchor.chart, params, anchor.sheet)
            except RankDeficient as exc:
                self.logger.warning(f"skipping probe of {self.pair.x.name}: {exc}")
                continue
            partners = []
            other = y_anchors[min(int(row[1 + kx] * len(y_anchors)), len(y_anchors) - 1)]
            z_params = other.center + (2 * row[2 + kx :] - 1) * other.half_width
            if other.chart.contains(z_params):
                partners.append((other, z_params))
            partners.append(self._nearest_on_y(x, y_anchors))
            for partner, z_params in partners:
                z = partner.chart.point(z_params, partner.sheet)
                length = _distance(x, z)
                if _distance(z, self.base) > radius or length == 0.0:
                    continue
                tangent_z = tangent_space(partner.chart, z_params, partner.sheet)
                tilt = subspace_distance(tangent_z, tangent_x)
                secant = subspace_distance(line_basis(x - z), tangent_x)
                maxima[Condition.A] = max(maxima[Condition.A], tilt)
                maxima[Condition.B] = max(maxima[Condition.B], secant)
                maxima[Condition.W] = max(maxima[Condition.W], tilt / length)
                accepted += 1
        if accepted == 0:
            raise EmptySample(f"no sample pair within {radius} of {self.pair.base_point}")
        self.logger.debug(f"{self.pair.name} scale {radius}: {accepted} pairs, {maxima}")
        return {c: ScalePoint(radius, value, accepted) for c, value in maxima.items()}

    def sweeps(self) -> dict[Condition, ScaleSweep]:
        """All three sweeps; scales run on ``jobs`` threads and are merged by index."""
        indices = range(self.settings.scales)
        if self.jobs > 1:
            with ThreadPoolExecutor(max_workers=self.jobs) as pool:
                results = list(pool.map(self.sample_scale, indices))
        else:
            results = [self.sample_scale(index) for index in indices]
        return {
            condition: ScaleSweep(condition, tuple(result[condition] for result in results))
            for condition in Condition
        }

    def verdict(self, sweep: ScaleSweep) -> Verdict:
        """Applies `decide` to a sweep."""
        maxima = sweep.maxima
        kind = decide(sweep.condition, maxima, self.settings)
        if kind is VerdictKind.INCONCLUSIVE:
            self.logger.warning(f"{self.pair.name}: condition {sweep.condition.value} inconclusive")
        return Verdict(
            sweep.condition, kind, sweep, maxima[-1], _growth(maxima), float(np.median(maxima))
        )


def check_condition(
    kind: Condition, pair: PairSpec, seed: int = DEFAULT_SEED, jobs: int = 1
) -> Verdict:
    """Sweeps one condition on a pair.

    Raises:
        EmptySample: If some scale has no admissible sample.
    """
    checker = ConditionChecker(pair, seed, jobs)
    return checker.verdict(checker.sweeps()[Condition(kind)])


def check_all(
    pair: PairSpec,
    seed: int = DEFAULT_SEED,
    jobs: int = 1,
    conditions: Iterable[Condition] = tuple(Condition),
) -> dict[Condition, Verdict]:
    """Sweeps several conditions on a pair from one shared sample."""
    checker = ConditionChecker(pair, seed, jobs)
    sweeps = checker.sweeps()
    return {Condition(kind): checker.verdict(sweeps[Condition(kind)]) for kind in conditions}
