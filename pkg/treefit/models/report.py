"""
Report models written by the CLI.

`RunReport` is serialized with `model_dump(by_alias=True)` and validated
against `treefit/schemas/run_report.schema.json` before it is written.
"""

import math
from typing_extensions import Self

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from treefit.models.fit import FitConfig

_AGGREGATE_RTOL = 1e-9


class ConfigEcho(BaseModel):
    """Hyperparameters of the run, echoed into the report."""

    model_config = ConfigDict(populate_by_name=True)

    mu: float
    lam: float = Field(alias="lambda")
    k: int = Field(alias="K")
    m: int
    lr: float
    epochs: int
    patience: int
    seed: int
    floor: float
    accum_chunks: int

    @classmethod
    def from_config(cls, cfg: FitConfig) -> "ConfigEcho":
        """Echo a FitConfig."""
        return cls(
            mu=cfg.mu,
            lam=cfg.lam,
            k=cfg.batches,
            m=cfg.batch_size,
            lr=cfg.lr,
            epochs=cfg.max_epochs,
            patience=cfg.patience,
            seed=cfg.seed,
            floor=cfg.weight_floor,
            accum_chunks=cfg.accum_chunks,
        )


class RootResult(BaseModel):
    """Distortion of the embedding rooted at one point."""

    root: int = Field(ge=0)
    label: str
    linf: float = Field(ge=0.0)
    l1_avg: float = Field(ge=0.0)


class AggregateStats(BaseModel):
    """Mean / population std / min of per-root distortions."""

    linf_mean: float
    linf_std: float
    linf_min: float
    l1_avg_mean: float
    l1_avg_std: float
    l1_avg_min: float

    @classmethod
    def from_roots(cls, roots: list[RootResult]) -> "AggregateStats":
        """Recompute the statistics from per-root entries."""
        linf = np.array([r.linf for r in roots], dtype=np.float64)
        l1 = np.array([r.l1_avg for r in roots], dtype=np.float64)
        return cls(
            linf_mean=float(linf.mean()),
            linf_std=float(linf.std()),
            linf_min=float(linf.min()),
            l1_avg_mean=float(l1.mean()),
            l1_avg_std=float(l1.std()),
            l1_avg_min=float(l1.min()),
        )

    def matches(self, other: "AggregateStats") -> bool:
        """Field-wise comparison with a small relative tolerance."""
        return all(
            math.isclose(getattr(self, name), getattr(other, name), rel_tol=_AGGREGATE_RTOL, abs_tol=1e-15)
            for name in type(self).model_fields
        )


class RunReport(BaseModel):
    """Summary of a fit / embed / pipeline run."""

    model_config = ConfigDict(populate_by_name=True)

    command: str
    dataset_id: str
    n: int = Field(ge=1)
    config: ConfigEcho | None = None
    epochs_run: int | None = None
    best_epoch: int | None = None
    best_loss: float | None = None
    stopped_early: bool | None = None
    delta_input: float | None = None
    delta_fitted: float | None = None
    roots: list[RootResult] = Field(default_factory=list)
    aggregate: AggregateStats | None = None
    distortion_bound: float | None = None
    wall_clock_seconds: float = Field(ge=0.0)

    @model_validator(mode="after")
    def validate_aggregate(self) -> Self:
        """集計値がルートごとの結果から再計算できることを検証"""
        if self.aggregate is None:
            if self.roots:
                msg = "aggregate is required when roots are present"
                raise ValueError(msg)
            return self
        if not self.roots:
            msg = "aggregate requires at least one root result"
            raise ValueError(msg)
        if not self.aggregate.matches(AggregateStats.from_roots(self.roots)):
            msg = "aggregate statistics do not match the per-root results"
            raise ValueError(msg)
        return self


class DeltaReport(BaseModel):
    """Output of `treefit delta`."""

    model_config = ConfigDict(populate_by_name=True)

    dataset_id: str
    n: int
    mode: str
    delta: float
    relative_delta: float | None = None
    lam: float | None = Field(default=None, alias="lambda")
    k: int | None = Field(default=None, alias="K")
    m: int | None = None
    seed: int | None = None
    runs: int | None = None
    std: float | None = None
    values: list[float] | None = None


class EvalReport(BaseModel):
    """Output of `treefit eval`."""

    n: int
    linf: float
    l1_avg: float
