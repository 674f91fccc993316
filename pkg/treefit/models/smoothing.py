"""
Value types of the smoothed hyperbolicity estimator.
"""

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike
from pydantic import BaseModel, ConfigDict, Field

from treefit.constants import ErrorMessages, FitDefaults
from treefit.exceptions import EmptyInputError, InvalidBatchError, InvalidMatrixError


class SmoothingParams(BaseModel):
    """Inverse temperature of the log-sum-exp smoothing."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    lam: float = Field(gt=0.0, alias="lambda")


@dataclass(frozen=True, eq=False)
class BatchSet:
    """K batches of m distinct point indices each, stored as a (K, m) array."""

    batches: np.ndarray

    def __post_init__(self) -> None:
        """Validate shape and distinctness within each batch."""
        arr = np.array(self.batches, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] == 0:
            raise EmptyInputError(ErrorMessages.EMPTY_BATCHES)
        if arr.shape[1] < FitDefaults.MIN_BATCH_SIZE:
            raise InvalidBatchError(ErrorMessages.BATCH_TOO_SMALL.format(m=arr.shape[1]))
        for index, batch in enumerate(arr):
            if np.unique(batch).size != batch.size:
                raise InvalidBatchError(ErrorMessages.BATCH_NOT_DISTINCT.format(index=index))
        arr.setflags(write=False)
        object.__setattr__(self, "batches", arr)

    @property
    def k(self) -> int:
        """Number of batches."""
        return int(self.batches.shape[0])

    @property
    def m(self) -> int:
        """Batch size."""
        return int(self.batches.shape[1])

    def validate_for(self, n: int) -> None:
        """Check that every index is a point of an n-point space."""
        if self.m > n:
            raise InvalidBatchError(ErrorMessages.BATCH_TOO_LARGE.format(m=self.m, n=n))
        if self.batches.min() < 0 or self.batches.max() >= n:
            detail = f"batch indices must lie in [0, {n})"
            raise InvalidBatchError(detail)

    def __iter__(self):  # noqa: ANN204
        """Iterate over batches as index arrays."""
        return iter(self.batches)


@dataclass(frozen=True, eq=False)
class GradientMatrix:
    """Symmetric gradient with respect to unordered matrix entries."""

    values: np.ndarray

    def __post_init__(self) -> None:
        """Validate symmetry and the zero diagonal."""
        arr = np.array(self.values, dtype=np.float64)
        if not np.array_equal(arr, arr.T):
            raise InvalidMatrixError(ErrorMessages.NOT_SYMMETRIC)
        if np.any(np.diag(arr) != 0.0):
            raise InvalidMatrixError(ErrorMessages.NONZERO_DIAGONAL)
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @classmethod
    def zeros(cls, n: int) -> "GradientMatrix":
        """All-zero gradient."""
        return cls(np.zeros((n, n)))

    @classmethod
    def from_array(cls, values: ArrayLike) -> "GradientMatrix":
        """Wrap a symmetric array."""
        return cls(np.asarray(values, dtype=np.float64))
