"""Manifold Module.

Parametric manifolds for the Whitney checks: charts are tuples of `Expr` coordinates over
an open parameter box, optionally indexed by a discrete sheet parameter running over a
geometric sequence. Tangent spaces come from forward-mode Jacobians orthonormalized by
modified Gram-Schmidt; `subspace_distance` is the asymmetric distance between subspaces.
"""

import math
from dataclasses import dataclass
from logging import Logger
from typing import Optional, Sequence

import numpy as np

from tametop.exceptions import TameTopError
from tametop.utils import get_logger
from tametop.whitney.expr import Dual, Expr

LOGGER: Logger = get_logger()

RANK_TOLERANCE: float = 1e-12


class RankDeficient(TameTopError):
    """Raised when a chart Jacobian does not have full column rank at a probe point."""


@dataclass(frozen=True)
class DiscreteFamily:
    """Sheet parameter running over ``base^k`` (divergent) or ``base^-k`` (convergent).

    Attributes:
        name (str): Variable name used in the chart expressions.
        base (float): Ratio of the geometric sequence, greater than 1.
        direction (str): ``divergent`` or ``convergent``.
    """

    name: str
    base: float = 2.0
    direction: str = "divergent"

    def __post_init__(self) -> None:
        if self.base <= 1:
            raise ValueError(f"family base must exceed 1, got {self.base}")
        if self.direction not in ("divergent", "convergent"):
            raise ValueError(f"unknown family direction {self.direction!r}")

    def value(self, k: int) -> float:
        """The sheet parameter of sheet ``k``."""
        power = float(self.base) ** k
        return power if self.direction == "divergent" else 1.0 / power

    def indices(self, cap: float) -> range:
        """Sheets ``k`` with ``base^k <= cap``."""
        count = 0
        while float(self.base) ** count <= cap:
            count += 1
        return range(count)


@dataclass(frozen=True)
class Chart:
    """One coordinate chart.

    Attributes:
        coords (tuple[Expr, ...]): One expression per ambient coordinate.
        params (tuple[str, ...]): Parameter names.
        lows (tuple[float, ...]): Lower ends of the open parameter box.
        highs (tuple[float, ...]): Upper ends of the open parameter box.
    """

    coords: tuple[Expr, ...]
    params: tuple[str, ...]
    lows: tuple[float, ...]
    highs: tuple[float, ...]

    def _env(self, params: Sequence[float], sheet: Optional[tuple[str, float]]) -> dict:
        env = dict(zip(self.params, (float(p) for p in params)))
        if sheet is not None:
            env[sheet[0]] = sheet[1]
        return env

    def contains(self, params: Sequence[float]) -> bool:
        """``params`` lies in the open box."""
        return all(lo < p < hi for p, lo, hi in zip(params, self.lows, self.highs))

    def center(self) -> np.ndarray:
        """Midpoint of the box (finite ends assumed)."""
        return (np.array(self.lows) + np.array(self.highs)) / 2

    def point(self, params: Sequence[float], sheet: Optional[tuple[str, float]] = None):
        """The ambient point of ``params``."""
        env = self._env(params, sheet)
        return np.array([coord.evaluate(env) for coord in self.coords])

    def jacobian(
        self, params: Sequence[float], sheet: Optional[tuple[str, float]] = None
    ) -> np.ndarray:
        """``n x k`` Jacobian by forward-mode differentiation."""
        width = len(self.params)
        env = {
            name: Dual(float(value), np.eye(width)[index])
            for index, (name, value) in enumerate(zip(self.params, params))
        }
        if sheet is not None:
            env[sheet[0]] = Dual(sheet[1], np.zeros(width))
        return np.array([coord.dual(env, width).grad for coord in self.coords])


@dataclass(frozen=True)
class ParamManifold:
    """A manifold given by charts, possibly a discrete family of sheets.

    Attributes:
        name (str): Label.
        ambient_dim (int): ``n``.
        intrinsic_dim (int): ``k``.
        charts (tuple[Chart, ...]): The charts.
        family (Optional[DiscreteFamily]): Sheet parameter, if any.
    """

    name: str
    ambient_dim: int
    intrinsic_dim: int
    charts: tuple[Chart, ...]
    family: Optional[DiscreteFamily] = None

    def __post_init__(self) -> None:
        for chart in self.charts:
            if len(chart.coords) != self.ambient_dim or len(chart.params) != self.intrinsic_dim:
                raise ValueError(f"chart of {self.name} does not match its dimensions")

    def sheets(self, cap: float) -> list[Optional[tuple[str, float]]]:
        """Sheet bindings up to ``cap`` (a single unbound sheet without a family)."""
        if self.family is None:
            return [None]
        return [(self.family.name, self.family.value(k)) for k in self.family.indices(cap)]


def gram_schmidt(matrix: np.ndarray, tolerance: float = RANK_TOLERANCE) -> np.ndarray:
    """Modified Gram-Schmidt on the columns of ``matrix``.

    Raises:
        RankDeficient: If a column is (numerically) in the span of the previous ones.
    """
    columns = np.array(matrix, dtype=float)
    scale = max(np.linalg.norm(columns, axis=0).max(initial=0.0), 1.0)
    basis = []
    for index in range(columns.shape[1]):
        vector = columns[:, index].copy()
        for previous in basis:
            vector -= previous * (previous @ vector)
        norm = np.linalg.norm(vector)
        if norm <= tolerance * scale:
            raise RankDeficient(f"column {index} of the Jacobian is dependent (norm {norm:.3g})")
        basis.append(vector / norm)
    return np.column_stack(basis) if basis else np.zeros((columns.shape[0], 0))


def tangent_space(
    chart: Chart, params: Sequence[float], sheet: Optional[tuple[str, float]] = None
) -> np.ndarray:
    """Orthonormal basis (columns) of the tangent space at the image of ``params``.

    Raises:
        RankDeficient: At points where the chart is not an immersion.
    """
    return gram_schmidt(chart.jacobian(params, sheet))


def _columns(basis: np.ndarray) -> np.ndarray:
    basis = np.asarray(basis, dtype=float)
    return basis.reshape(-1, 1) if basis.ndim == 1 else basis


def subspace_distance(a: np.ndarray, b: np.ndarray) -> float:
    """``sup`` over unit ``u`` in span(a) of the distance from ``u`` to span(b).

    ``a`` and ``b`` hold orthonormal bases in their columns. The value is the square
    root of the largest eigenvalue of ``a^T (I - P_b) a``, taken as the spectral norm of
    the residual ``(I - P_b) a`` so that tiny distances do not cancel.

    Returns:
        float: A number in ``[0, 1]``.
    """
    a, b = _columns(a), _columns(b)
    if a.shape[1] == 0:
        return 0.0
    residual = a - b @ (b.T @ a) if b.shape[1] else a
    if residual.shape[1] == 1:
        return float(min(math.hypot(*residual[:, 0]), 1.0))
    return float(np.clip(np.linalg.norm(residual, 2), 0.0, 1.0))


def line_basis(vector: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the line spanned by a vector of any (nonzero) size.

    Raises:
        RankDeficient: For the zero vector.
    """
    vector = np.asarray(vector, dtype=float)
    length = math.hypot(*vector)
    if length == 0.0:
        raise RankDeficient("secant of length zero")
    return (vector / length).reshape(-1, 1)
