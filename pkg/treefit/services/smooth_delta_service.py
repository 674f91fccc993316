"""
Smoothed Gromov hyperbolicity.

The smoothed value of a point set S is

    (1/λ) log Σ_{(x,y,z,w) ∈ S⁴} exp(λ · (lse_min((x|y)_w, (y|z)_w) − (x|z)_w))

where lse_min is the two-term soft minimum at temperature −λ. All ordered
quadruples are summed, repeats included. The batched estimator aggregates
the values of K subsets with another log-sum-exp at temperature λ.

Quadruples are evaluated in blocks of base points whose size depends only on
the configured element budget, and partial sums are reduced in base-point
order, so values do not depend on the worker count.
"""

import logging
from collections.abc import Iterator, Sequence
from typing import NamedTuple

import numpy as np
from numpy.typing import ArrayLike
from scipy.special import expit, logsumexp

from treefit.common.parallel import block_elements, ordered_map
from treefit.constants import ErrorMessages, FitDefaults
from treefit.exceptions import (
    EmptyInputError,
    IndexOutOfRangeError,
    InvalidBatchError,
    InvalidTemperatureError,
)
from treefit.models.smoothing import BatchSet, GradientMatrix, SmoothingParams
from treefit.services.metric_service import MatrixLike, matrix_values

logger = logging.getLogger(__name__)


class BatchedRuns(NamedTuple):
    """Repeated batched estimates with independent seeds."""

    mean: float
    std: float
    values: list[float]


def lse(values: ArrayLike, lam: float) -> float:
    """
    (1/λ) log Σ exp(λ x_i), a soft maximum for λ > 0 and a soft minimum for λ < 0.

    Raises:
        EmptyInputError: If `values` is empty.
        InvalidTemperatureError: If λ = 0.
    """
    x = np.asarray(values, dtype=np.float64).ravel()
    if x.size == 0:
        raise EmptyInputError(ErrorMessages.EMPTY_VALUES)
    if lam == 0:
        raise InvalidTemperatureError(ErrorMessages.ZERO_TEMPERATURE)
    if x.size == 1:
        return float(x[0])
    return float(logsumexp(lam * x) / lam)


def _soft_min(a: np.ndarray, b: np.ndarray, lam: float) -> np.ndarray:
    return -np.logaddexp(-lam * a, -lam * b) / lam


def _base_blocks(m: int) -> Iterator[slice]:
    """Contiguous base-point ranges of at most `block_elements()` quadruples."""
    per_block = max(1, block_elements() // (m**3))
    for start in range(0, m, per_block):
        yield slice(start, min(m, start + per_block))


def _block_products(sub: np.ndarray, base: slice) -> np.ndarray:
    """P[w, x, y] = (x|y)_w for the base points in `base`."""
    return 0.5 * (sub[base, :, None] + sub[base, None, :] - sub[None, :, :])


def _block_terms(P: np.ndarray, lam: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Quadruple terms s[w, x, y, z] and the two soft-min operands."""
    a = P[:, :, :, None]  # (x|y)_w
    b = P[:, None, :, :]  # (y|z)_w
    c = P[:, :, None, :]  # (x|z)_w
    return _soft_min(a, b, lam) - c, a, b


def _log_partition(sub: np.ndarray, lam: float) -> float:
    """log Σ exp(λ s) over all ordered quadruples of `sub`."""
    parts = []
    for base in _base_blocks(sub.shape[0]):
        s, _, _ = _block_terms(_block_products(sub, base), lam)
        parts.append(logsumexp(lam * s))
    return float(logsumexp(np.asarray(parts)))


def _subset_matrix(values: np.ndarray, indices: ArrayLike) -> np.ndarray:
    idx = np.asarray(indices, dtype=np.int64)
    return values[np.ix_(idx, idx)]


def batch_value(D: MatrixLike, lam: float, batch: ArrayLike) -> float:
    """Smoothed hyperbolicity of one index subset."""
    sub = _subset_matrix(matrix_values(D), batch)
    return _log_partition(sub, lam) / lam


def batch_terms(D: MatrixLike, params: SmoothingParams, batch: ArrayLike) -> tuple[float, np.ndarray]:
    """
    Smoothed value of one batch and its gradient with respect to the batch submatrix.

    The gradient is taken with respect to unordered entries: position
    (i, j) of the returned m×m matrix collects the derivatives of both
    D[i, j] and D[j, i]. The diagonal is zero.

    Returns:
        (value, local gradient).
    """
    lam = params.lam
    sub = _subset_matrix(matrix_values(D), batch)
    m = sub.shape[0]
    log_z = _log_partition(sub, lam)

    grad = np.zeros((m, m))
    for base in _base_blocks(m):
        s, a, b = _block_terms(_block_products(sub, base), lam)
        p = np.exp(lam * s - log_z)
        sigma = expit(lam * (b - a))
        # dvalue/dP[w, u, v] for the three product slots
        g_products = (
            (p * sigma).sum(axis=3)
            + (p * (1.0 - sigma)).sum(axis=1)
            - p.sum(axis=2)
        )
        # P[w, x, y] = (A[w, x] + A[w, y] - A[x, y]) / 2
        grad[base, :] += 0.5 * g_products.sum(axis=2) + 0.5 * g_products.sum(axis=1)
        grad -= 0.5 * g_products.sum(axis=0)

    local = grad + grad.T
    np.fill_diagonal(local, 0.0)
    return log_z / lam, local


def delta_smooth(D: MatrixLike, params: SmoothingParams, subset: Sequence[int] | None = None) -> float:
    """
    Smoothed hyperbolicity over a subset (all points by default).

    Raises:
        EmptyInputError: If the subset is empty.
        IndexOutOfRangeError: If a subset index is invalid.
    """
    values = matrix_values(D)
    n = values.shape[0]
    idx = np.arange(n) if subset is None else np.asarray(subset, dtype=np.int64)
    if idx.size == 0:
        raise EmptyInputError(ErrorMessages.EMPTY_SUBSET)
    bad = idx[(idx < 0) | (idx >= n)]
    if bad.size:
        raise IndexOutOfRangeError(ErrorMessages.INDEX_OUT_OF_RANGE.format(index=int(bad[0]), n=n))
    return batch_value(values, params.lam, idx)


def _batch_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def sample_batches(n: int, k: int, m: int, seed: int) -> BatchSet:
    """
    Draw K subsets of m distinct points, each returned in ascending order.

    Raises:
        InvalidBatchError: If K < 1, m < 4 or m > n.
    """
    if k < 1:
        raise InvalidBatchError(ErrorMessages.BATCH_COUNT.format(k=k))
    if m < FitDefaults.MIN_BATCH_SIZE:
        raise InvalidBatchError(ErrorMessages.BATCH_TOO_SMALL.format(m=m))
    if m > n:
        raise InvalidBatchError(ErrorMessages.BATCH_TOO_LARGE.format(m=m, n=n))
    rng = _batch_rng(seed)
    return BatchSet(np.stack([np.sort(rng.choice(n, size=m, replace=False)) for _ in range(k)]))


def _checked(D: MatrixLike, batches: BatchSet) -> np.ndarray:
    values = matrix_values(D)
    batches.validate_for(values.shape[0])
    return values


def delta_batched(
    D: MatrixLike,
    params: SmoothingParams,
    batches: BatchSet,
    *,
    workers: int | None = None,
) -> float:
    """LSE_λ of the per-batch smoothed values."""
    values = _checked(D, batches)
    per_batch = ordered_map(lambda b: batch_value(values, params.lam, b), list(batches), workers)
    return lse(per_batch, params.lam)


def delta_batched_with_gradient(
    D: MatrixLike,
    params: SmoothingParams,
    batches: BatchSet,
    *,
    chunks: int = 1,
    workers: int | None = None,
) -> tuple[float, np.ndarray]:
    """
    Batched value and its gradient in one pass.

    Batches are processed in `chunks` sequential groups (parallel inside a
    group); all per-batch results are combined in batch order afterwards,
    so the chunk count never changes the result.

    Returns:
        (value, n×n symmetric gradient array).
    """
    values = _checked(D, batches)
    n = values.shape[0]
    groups = np.array_split(np.arange(batches.k), max(1, min(chunks, batches.k)))
    results: list[tuple[float, np.ndarray]] = []
    for group in groups:
        results.extend(
            ordered_map(lambda i: batch_terms(values, params, batches.batches[i]), list(group), workers),
        )

    local_values = np.array([v for v, _ in results])
    value = lse(local_values, params.lam)
    weights = np.exp(params.lam * (local_values - value)) if batches.k > 1 else np.ones(1)

    grad = np.zeros((n, n))
    for weight, batch, (_, local) in zip(weights, batches.batches, results, strict=True):
        grad[np.ix_(batch, batch)] += weight * local
    return value, grad


def grad_delta_batched(
    D: MatrixLike,
    params: SmoothingParams,
    batches: BatchSet,
    *,
    workers: int | None = None,
) -> GradientMatrix:
    """Gradient of `delta_batched` with respect to unordered matrix entries."""
    _, grad = delta_batched_with_gradient(D, params, batches, workers=workers)
    return GradientMatrix(grad)


def delta_batched_runs(
    D: MatrixLike,
    params: SmoothingParams,
    k: int,
    m: int,
    runs: int,
    seed: int,
    *,
    workers: int | None = None,
) -> BatchedRuns:
    """
    Repeat the batched estimate with independent batch draws.

    Run seeds come from one PCG64 stream seeded with `seed`; the spread is
    the population standard deviation.
    """
    if runs < 1:
        detail = f"runs must be positive, got {runs}"
        raise InvalidBatchError(detail)
    values = matrix_values(D)
    n = values.shape[0]
    master = _batch_rng(seed)
    estimates = []
    for _ in range(runs):
        run_seed = int(master.integers(0, 2**63))
        estimates.append(delta_batched(values, params, sample_batches(n, k, m, run_seed), workers=workers))
    arr = np.asarray(estimates)
    logger.debug("Batched runs K=%d m=%d: %s", k, m, estimates)
    return BatchedRuns(mean=float(arr.mean()), std=float(arr.std()), values=estimates)
