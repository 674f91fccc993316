"""
Metric core: validation, Gromov products, exact hyperbolicity and distortion.

All functions accept either a `DistanceMatrix` or a raw square array.
"""

import logging
from functools import lru_cache

import numpy as np
from numpy.typing import ArrayLike

from treefit.common.parallel import active_settings, ordered_map
from treefit.constants import ErrorMessages, MetricConstants
from treefit.exceptions import (
    DimensionError,
    IndexOutOfRangeError,
    MetricError,
    SizeGuardError,
)
from treefit.models.distance_matrix import (
    DistanceMatrix,
    MetricReport,
    Quadruple,
    as_square_array,
)

logger = logging.getLogger(__name__)

MatrixLike = DistanceMatrix | ArrayLike


def matrix_values(D: MatrixLike) -> np.ndarray:
    """Underlying float64 array of a matrix-like argument (square required)."""
    if isinstance(D, DistanceMatrix):
        return D.values
    return as_square_array(D)


def _check_index(n: int, index: int) -> int:
    if not 0 <= int(index) < n:
        raise IndexOutOfRangeError(ErrorMessages.INDEX_OUT_OF_RANGE.format(index=index, n=n))
    return int(index)


def _same_shape(A: MatrixLike, B: MatrixLike) -> tuple[np.ndarray, np.ndarray]:
    a, b = matrix_values(A), matrix_values(B)
    if a.shape != b.shape:
        raise DimensionError(ErrorMessages.SHAPE_MISMATCH.format(left=a.shape, right=b.shape))
    return a, b


def validate_metric(D: MatrixLike, tol: float = MetricConstants.TRIANGLE_TOL) -> MetricReport:
    """
    Check the metric axioms.

    A triangle violation is an ordered triple (i, j, k) with
    D[i, j] > D[i, k] + D[k, j] + tol; `worst_violation` is the largest
    such slack D[i, j] - D[i, k] - D[k, j] (0 when there is none).

    Args:
        D: Square matrix.
        tol: Absolute slack absorbed by the triangle checks.

    Returns:
        MetricReport with the axiom flags and violation counts.

    Raises:
        DimensionError: If the input is not square.

    """
    if tol < 0:
        raise MetricError(ErrorMessages.NEGATIVE_TOLERANCE)
    values = matrix_values(D)
    n = values.shape[0]
    violations = 0
    worst = 0.0
    for k in range(n):
        slack = values - (values[:, k, None] + values[None, k, :])
        mask = slack > tol
        count = int(mask.sum())
        if count:
            violations += count
            worst = max(worst, float(slack[mask].max()))
    return MetricReport(
        is_symmetric=bool(np.array_equal(values, values.T)),
        zero_diagonal=bool(np.all(np.diag(values) == 0.0)),
        nonnegative=bool(np.all(values >= 0.0)),
        triangle_violations=violations,
        worst_violation=worst,
    )


def gromov_product(D: MatrixLike, x: int, y: int, w: int) -> float:
    """(x|y)_w = (d(x,w) + d(y,w) - d(x,y)) / 2."""
    values = matrix_values(D)
    n = values.shape[0]
    x, y, w = (_check_index(n, i) for i in (x, y, w))
    return 0.5 * (values[x, w] + values[y, w] - values[x, y])


def gromov_product_matrix(D: MatrixLike, w: int) -> np.ndarray:
    """All Gromov products (x|y)_w for a fixed base point, as an n×n array."""
    values = matrix_values(D)
    w = _check_index(values.shape[0], w)
    return 0.5 * (values[:, w, None] + values[None, w, :] - values)


def gromov_product_tensor(values: np.ndarray) -> np.ndarray:
    """P[w, x, y] = (x|y)_w for every base point (n×n×n)."""
    return 0.5 * (values[:, :, None] + values[:, None, :] - values[None, :, :])


def four_point_delta(D: MatrixLike, q: Quadruple | tuple[int, int, int, int]) -> float:
    """
    Half the gap between the two largest pairwise sums of a quadruple.

    With l1 = D_ij + D_kl, l2 = D_ik + D_jl, l3 = D_il + D_jk the result is
    (largest - second largest) / 2, which is never negative.
    """
    values = matrix_values(D)
    n = values.shape[0]
    i, j, k, l = (_check_index(n, idx) for idx in q)  # noqa: E741
    sums = sorted(
        (values[i, j] + values[k, l], values[i, k] + values[j, l], values[i, l] + values[j, k]),
    )
    return 0.5 * float(sums[2] - sums[1])


@lru_cache(maxsize=4096)
def _suffix_pairs(n: int, start: int) -> tuple[np.ndarray, np.ndarray]:
    """All (k, l) with start <= k < l < n, lexicographic."""
    k, l = np.triu_indices(n - start, k=1)  # noqa: E741
    k = k + start
    l = l + start  # noqa: E741
    k.setflags(write=False)
    l.setflags(write=False)
    return k, l


def _max_gap_from(values: np.ndarray, i: int) -> float:
    """Largest sum gap over 4-subsets whose smallest index is i."""
    n = values.shape[0]
    best = 0.0
    for j in range(i + 1, n - 2):
        k, l = _suffix_pairs(n, j + 1)  # noqa: E741
        sums = np.stack(
            (
                values[i, j] + values[k, l],
                values[i, k] + values[j, l],
                values[i, l] + values[j, k],
            ),
        )
        sums.sort(axis=0)
        best = max(best, float((sums[2] - sums[1]).max()))
    return best


def guard_exact_size(n: int, *, override: bool = False, limit: int | None = None) -> None:
    """Refuse O(n^4) exact computations above the configured limit."""
    limit = active_settings().EXACT_DELTA_MAX_N if limit is None else limit
    if n > limit and not override:
        raise SizeGuardError(ErrorMessages.SIZE_GUARD.format(n=n, limit=limit))
    if n > limit:
        logger.warning("Exact computation on n=%d beyond the guard %d", n, limit)


def delta_exact(D: MatrixLike, *, workers: int | None = None) -> float:
    """
    Exact Gromov hyperbolicity by enumeration of unordered 4-subsets.

    Repeated indices never produce a larger gap, so the C(n, 4) distinct
    subsets suffice. Work is split by the smallest index of the subset and
    reduced with `max`, which does not depend on the worker count.

    Args:
        D: Square matrix.
        workers: Thread count (defaults to the configured value).

    Returns:
        Hyperbolicity (0 when n < 4).

    """
    values = matrix_values(D)
    n = values.shape[0]
    if n < 4:
        return 0.0
    gaps = ordered_map(lambda i: _max_gap_from(values, i), range(n - 3), workers)
    return 0.5 * max(gaps)


def delta_basepoint(D: MatrixLike) -> float:
    """
    Hyperbolicity from the base-point definition.

    max over ordered (x, y, z, w) of min{(x|y)_w, (y|z)_w} - (x|z)_w,
    evaluated one base point at a time. O(n^4); meant for small n.
    """
    values = matrix_values(D)
    n = values.shape[0]
    best = -np.inf
    for w in range(n):
        P = gromov_product_matrix(values, w)
        s = np.minimum(P[:, :, None], P[None, :, :]) - P[:, None, :]
        best = max(best, float(s.max()))
    return float(best)


def relative_delta(D: MatrixLike, *, workers: int | None = None) -> float:
    """delta_exact divided by the diameter (0 for a zero diameter)."""
    values = matrix_values(D)
    diameter = float(values.max()) if values.size else 0.0
    if diameter == 0.0:
        return 0.0
    return delta_exact(values, workers=workers) / diameter


def distortion_linf(A: MatrixLike, B: MatrixLike) -> float:
    """max over i<j of |A_ij - B_ij|."""
    a, b = _same_shape(A, B)
    n = a.shape[0]
    if n < 2:
        return 0.0
    iu = np.triu_indices(n, k=1)
    return float(np.abs(a[iu] - b[iu]).max())


def distortion_l1_avg(A: MatrixLike, B: MatrixLike) -> float:
    """Mean of |A_ij - B_ij| over the n(n-1)/2 unordered pairs."""
    a, b = _same_shape(A, B)
    n = a.shape[0]
    if n < 2:
        raise DimensionError(ErrorMessages.TOO_FEW_POINTS.format(minimum=2, n=n))
    iu = np.triu_indices(n, k=1)
    return float(np.abs(a[iu] - b[iu]).sum() / (n * (n - 1) / 2))
