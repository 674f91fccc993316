"""
Fitting loop: Adam on the upper-triangular entries of the composite
objective, Floyd–Warshall projection onto metrics, and early stopping.
"""

import logging
import math
from collections.abc import Callable

import numpy as np
from numpy.typing import ArrayLike
from scipy.sparse.csgraph import floyd_warshall

from treefit.constants import ErrorMessages, FitDefaults
from treefit.exceptions import DimensionError, InvalidFitConfigError, InvalidMatrixError
from treefit.models.distance_matrix import DistanceMatrix, as_square_array
from treefit.models.fit import AdamState, EpochRecord, FitConfig, FitResult, ObjectiveValue
from treefit.models.smoothing import BatchSet, GradientMatrix
from treefit.services.metric_service import MatrixLike, distortion_linf, matrix_values
from treefit.services.smooth_delta_service import (
    delta_batched,
    delta_batched_with_gradient,
    sample_batches,
)

logger = logging.getLogger(__name__)


def _fidelity(values: np.ndarray, target: np.ndarray, mu: float) -> float:
    """μ·‖D_X − D‖_F² over the full matrix (each unordered pair counted twice)."""
    if values.shape != target.shape:
        raise DimensionError(ErrorMessages.SHAPE_MISMATCH.format(left=values.shape, right=target.shape))
    return mu * float(((target - values) ** 2).sum())


def objective(
    D: MatrixLike,
    D_X: MatrixLike,
    cfg: FitConfig,
    batches: BatchSet,
    *,
    workers: int | None = None,
) -> ObjectiveValue:
    """Loss = fidelity + batched smoothed hyperbolicity."""
    values, target = matrix_values(D), matrix_values(D_X)
    fidelity = _fidelity(values, target, cfg.mu)
    delta_term = delta_batched(values, cfg.smoothing, batches, workers=workers)
    return ObjectiveValue(loss=fidelity + delta_term, fidelity=fidelity, delta_term=delta_term)


def objective_and_gradient(
    D: MatrixLike,
    D_X: MatrixLike,
    cfg: FitConfig,
    batches: BatchSet,
    *,
    workers: int | None = None,
) -> tuple[ObjectiveValue, np.ndarray]:
    """
    Objective value and its gradient with respect to unordered entries.

    The fidelity gradient is 4μ(D − D_X): both mirrored entries of a pair
    move together.
    """
    values, target = matrix_values(D), matrix_values(D_X)
    fidelity = _fidelity(values, target, cfg.mu)
    delta_term, grad = delta_batched_with_gradient(
        values,
        cfg.smoothing,
        batches,
        chunks=cfg.accum_chunks,
        workers=workers,
    )
    grad = grad + 4.0 * cfg.mu * (values - target)
    np.fill_diagonal(grad, 0.0)
    return ObjectiveValue(fidelity + delta_term, fidelity, delta_term), grad


def adam_step(
    D: MatrixLike,
    grad: GradientMatrix | ArrayLike,
    state: AdamState,
    lr: float,
) -> tuple[np.ndarray, AdamState]:
    """
    One bias-corrected Adam update of the upper-triangular entries, mirrored.

    Returns:
        The raw updated weights (symmetric, zero diagonal, possibly
        non-metric or negative) and the new state.
    """
    values = matrix_values(D)
    g_full = grad.values if isinstance(grad, GradientMatrix) else as_square_array(grad)
    n = values.shape[0]
    iu = np.triu_indices(n, k=1)

    g = g_full[iu]
    m = state.beta1 * state.first_moment[iu] + (1.0 - state.beta1) * g
    v = state.beta2 * state.second_moment[iu] + (1.0 - state.beta2) * g * g
    t = state.step_count + 1
    m_hat = m / (1.0 - state.beta1**t)
    v_hat = v / (1.0 - state.beta2**t)
    updated = values[iu] - lr * m_hat / (np.sqrt(v_hat) + state.eps_hat)

    def mirrored(upper: np.ndarray) -> np.ndarray:
        full = np.zeros((n, n))
        full[iu] = upper
        return full + full.T

    new_state = AdamState(
        first_moment=mirrored(m),
        second_moment=mirrored(v),
        step_count=t,
        beta1=state.beta1,
        beta2=state.beta2,
        eps_hat=state.eps_hat,
    )
    return mirrored(updated), new_state


def project_metric(W: MatrixLike, floor: float = FitDefaults.WEIGHT_FLOOR) -> DistanceMatrix:
    """
    Nearest metric below the weights: all-pairs shortest paths.

    Off-diagonal entries are first clamped to at least `floor` and the
    diagonal set to 0, then Floyd–Warshall runs on the result.

    Raises:
        DimensionError: If the input is not square.
        InvalidMatrixError: If the input is not symmetric or not finite.
    """
    values = matrix_values(W)
    if not np.all(np.isfinite(values)):
        raise InvalidMatrixError(ErrorMessages.NOT_FINITE)
    if not np.array_equal(values, values.T):
        raise InvalidMatrixError(ErrorMessages.NOT_SYMMETRIC)
    clamped = np.maximum(values, floor)
    np.fill_diagonal(clamped, 0.0)
    shortest = floyd_warshall(clamped, directed=False)
    shortest = np.minimum(shortest, shortest.T)
    np.fill_diagonal(shortest, 0.0)
    labels = W.labels if isinstance(W, DistanceMatrix) else None
    return DistanceMatrix(shortest, labels)


def fit(
    D_X: DistanceMatrix,
    cfg: FitConfig,
    *,
    on_epoch: Callable[[EpochRecord], None] | None = None,
    workers: int | None = None,
) -> FitResult:
    """
    Minimize fidelity + batched smoothed hyperbolicity over metrics.

    The loop starts from the projected input. Epoch t draws fresh batches
    from a PCG64 stream seeded with `cfg.seed`, records the objective of the
    current projected iterate D_t, then takes an Adam step and projects.
    A strictly lower loss counts as an improvement unless the iterate is
    bitwise equal to the best one; the loop stops once
    `cfg.patience` consecutive epochs bring none, or after
    `cfg.max_epochs` epochs.

    Returns:
        FitResult whose `best_matrix` is the projected iterate that last
        counted as an improvement.

    Raises:
        InvalidFitConfigError: If the configuration does not fit n.
    """
    n = D_X.n
    cfg.validate_for(n)
    target = D_X.values
    current = project_metric(D_X, cfg.weight_floor).values
    master = np.random.Generator(np.random.PCG64(cfg.seed))
    state = AdamState.fresh(n)

    logger.info(
        "Fit start: n=%d mu=%s lambda=%s K=%d m=%d lr=%s epochs=%d patience=%d seed=%d",
        n,
        cfg.mu,
        cfg.lam,
        cfg.batches,
        cfg.batch_size,
        cfg.lr,
        cfg.max_epochs,
        cfg.patience,
        cfg.seed,
    )

    trace: list[EpochRecord] = []
    best_loss = math.inf
    best_values = current
    best_epoch = 0
    stale = 0
    stopped_early = False

    for epoch in range(cfg.max_epochs):
        batches = sample_batches(n, cfg.batches, cfg.batch_size, int(master.integers(0, 2**63)))
        value, grad = objective_and_gradient(current, target, cfg, batches, workers=workers)
        record = EpochRecord(
            epoch=epoch,
            loss=value.loss,
            fidelity=value.fidelity,
            delta_term=value.delta_term,
            linf=distortion_linf(current, target),
        )
        trace.append(record)
        logger.debug(
            "epoch=%d loss=%r fidelity=%r delta=%r linf=%r",
            epoch,
            record.loss,
            record.fidelity,
            record.delta_term,
            record.linf,
        )
        if on_epoch is not None:
            on_epoch(record)

        # 最良の反復と同一の行列は、バッチの引き直しで損失が下がっても改善とみなさない
        unchanged = epoch > 0 and np.array_equal(current, best_values)
        if value.loss < best_loss and not unchanged:
            best_loss, best_values, best_epoch, stale = value.loss, current, epoch, 0
        else:
            stale += 1
        if stale >= cfg.patience:
            stopped_early = True
            logger.info("Early stop at epoch %d (best epoch %d)", epoch, best_epoch)
            break

        raw, state = adam_step(current, grad, state, cfg.lr)
        current = project_metric(raw, cfg.weight_floor).values

    logger.info("Fit done: epochs=%d best_loss=%r best_epoch=%d", len(trace), best_loss, best_epoch)
    return FitResult(
        best_matrix=DistanceMatrix(best_values, D_X.labels),
        best_loss=best_loss,
        best_epoch=best_epoch,
        trace=tuple(trace),
        stopped_early=stopped_early,
    )


def distortion_bound(delta_input: float, n: int, mu: float, gap_linf: float) -> float:
    """
    Worst-case distortion constant 2δ·log2(n−2) + (1 − 2·log2(n−2)·μ)·gap.

    Raises:
        InvalidFitConfigError: If n < 4 or the gap is negative.
    """
    if n < 4:
        raise InvalidFitConfigError(ErrorMessages.N_TOO_SMALL_FOR_BOUND.format(n=n))
    if gap_linf < 0:
        raise InvalidFitConfigError(ErrorMessages.NEGATIVE_GAP.format(gap=gap_linf))
    log_term = math.log2(n - 2)
    return 2.0 * delta_input * log_term + (1.0 - 2.0 * log_term * mu) * gap_linf
