"""
Distance matrix value types.

A `DistanceMatrix` is the object every service passes around: a read-only,
symmetric, nonnegative float64 array with a zero diagonal. The triangle
inequality is not part of the type (cosine dissimilarities are
admitted); `metric_service.validate_metric` checks it on demand.
"""

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from numpy.typing import ArrayLike

from treefit.constants import ErrorMessages
from treefit.exceptions import DimensionError, IndexOutOfRangeError, InvalidMatrixError


def as_square_array(values: ArrayLike) -> np.ndarray:
    """Convert to a float64 2-D array and require a square shape."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionError(ErrorMessages.NOT_SQUARE.format(shape=arr.shape))
    return arr


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """Symmetric nonnegative square matrix with zero diagonal."""

    values: np.ndarray
    labels: tuple[str, ...] | None = field(default=None)

    def __post_init__(self) -> None:
        """Validate invariants and freeze a private copy of the values."""
        arr = as_square_array(self.values).copy()
        if not np.all(np.isfinite(arr)):
            raise InvalidMatrixError(ErrorMessages.NOT_FINITE)
        if np.any(np.diag(arr) != 0.0):
            raise InvalidMatrixError(ErrorMessages.NONZERO_DIAGONAL)
        if not np.array_equal(arr, arr.T):
            raise InvalidMatrixError(ErrorMessages.NOT_SYMMETRIC)
        if np.any(arr < 0.0):
            raise InvalidMatrixError(ErrorMessages.NEGATIVE_ENTRY)
        if self.labels is not None and len(self.labels) != arr.shape[0]:
            detail = f"{len(self.labels)} labels for {arr.shape[0]} points"
            raise DimensionError(detail)
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(str(x) for x in self.labels))

    @classmethod
    def from_array(
        cls,
        values: ArrayLike,
        labels: tuple[str, ...] | None = None,
        *,
        symmetrize: bool = False,
    ) -> "DistanceMatrix":
        """
        Build a matrix, optionally repairing asymmetry and the diagonal.

        With `symmetrize=True` the values become (M + M^T) / 2 with a zero
        diagonal; nonnegativity is still enforced.
        """
        arr = as_square_array(values)
        if symmetrize:
            arr = (arr + arr.T) / 2.0
            np.fill_diagonal(arr, 0.0)
        return cls(arr, labels)

    @property
    def n(self) -> int:
        """Number of points."""
        return int(self.values.shape[0])

    def label(self, index: int) -> str:
        """Original identifier of a point (`p<k>` when none was given)."""
        if self.labels is not None:
            return self.labels[index]
        return f"p{index}"

    def check_index(self, index: int) -> int:
        """Return the index if valid, raise IndexOutOfRangeError otherwise."""
        if not 0 <= int(index) < self.n:
            raise IndexOutOfRangeError(
                ErrorMessages.INDEX_OUT_OF_RANGE.format(index=index, n=self.n),
            )
        return int(index)

    def with_values(self, values: ArrayLike) -> "DistanceMatrix":
        """Same labels, new entries."""
        return DistanceMatrix(np.asarray(values, dtype=np.float64), self.labels)


@dataclass(frozen=True)
class MetricReport:
    """Outcome of a metric-axiom check."""

    is_symmetric: bool
    zero_diagonal: bool
    nonnegative: bool
    triangle_violations: int
    worst_violation: float

    @property
    def is_metric(self) -> bool:
        """True when every axiom holds."""
        return (
            self.is_symmetric
            and self.zero_diagonal
            and self.nonnegative
            and self.triangle_violations == 0
        )


class Quadruple(NamedTuple):
    """Four point indices; repeats are allowed."""

    i: int
    j: int
    k: int
    l: int  # noqa: E741
