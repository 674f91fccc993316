"""
Optimization loop value types: configuration, Adam state and results.
"""

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from treefit.constants import ErrorMessages, FitDefaults
from treefit.exceptions import InvalidFitConfigError
from treefit.models.distance_matrix import DistanceMatrix
from treefit.models.smoothing import SmoothingParams


class FitConfig(BaseModel):
    """Hyperparameters of the fitting loop."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    mu: float = Field(default=FitDefaults.MU, ge=0.0)
    lam: float = Field(default=FitDefaults.LAMBDA, gt=0.0, alias="lambda")
    batches: int = Field(default=FitDefaults.BATCHES, ge=1)
    batch_size: int = Field(default=FitDefaults.BATCH_SIZE, ge=FitDefaults.MIN_BATCH_SIZE)
    # lr=0 はテスト用(反復が停留することを確認する)
    lr: float = Field(default=FitDefaults.LR, ge=0.0)
    max_epochs: int = Field(default=FitDefaults.MAX_EPOCHS, ge=1)
    patience: int = Field(default=FitDefaults.PATIENCE, ge=1)
    seed: int = Field(default=FitDefaults.SEED, ge=0, lt=2**64)
    weight_floor: float = Field(default=FitDefaults.WEIGHT_FLOOR, gt=0.0)
    accum_chunks: int = Field(default=FitDefaults.ACCUM_CHUNKS, ge=1)

    @property
    def smoothing(self) -> SmoothingParams:
        """Smoothing parameters derived from `lam`."""
        return SmoothingParams(lam=self.lam)

    def validate_for(self, n: int) -> None:
        """Check the size-dependent invariants (4 <= m <= n)."""
        if n < FitDefaults.MIN_BATCH_SIZE:
            detail = f"at least {FitDefaults.MIN_BATCH_SIZE} points are required"
            raise InvalidFitConfigError(ErrorMessages.FIT_CONFIG_FOR_N.format(n=n, detail=detail))
        if self.batch_size > n:
            detail = f"batch size m={self.batch_size} exceeds n"
            raise InvalidFitConfigError(ErrorMessages.FIT_CONFIG_FOR_N.format(n=n, detail=detail))


@dataclass(frozen=True, eq=False)
class AdamState:
    """Adam moments over the full symmetric matrix."""

    first_moment: np.ndarray
    second_moment: np.ndarray
    step_count: int = 0
    beta1: float = FitDefaults.BETA1
    beta2: float = FitDefaults.BETA2
    eps_hat: float = FitDefaults.EPS_HAT

    @classmethod
    def fresh(cls, n: int) -> "AdamState":
        """Zero moments, step 0."""
        return cls(np.zeros((n, n)), np.zeros((n, n)))


class ObjectiveValue(NamedTuple):
    """Loss decomposition of one objective evaluation."""

    loss: float
    fidelity: float
    delta_term: float


@dataclass(frozen=True)
class EpochRecord:
    """One row of the optimization trace."""

    epoch: int
    loss: float
    fidelity: float
    delta_term: float
    linf: float


@dataclass(frozen=True)
class FitResult:
    """Best iterate and the full trace of a fit."""

    best_matrix: DistanceMatrix
    best_loss: float
    best_epoch: int
    trace: tuple[EpochRecord, ...] = field(default=())
    stopped_early: bool = False

    @property
    def epochs_run(self) -> int:
        """Number of recorded epochs."""
        return len(self.trace)
