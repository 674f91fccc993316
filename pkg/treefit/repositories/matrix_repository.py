"""Repository for dense CSV matrices and feature tables."""

import logging
import math
from pathlib import Path

import numpy as np

from treefit.common.format_utils import format_float
from treefit.constants import ErrorMessages, MetricConstants
from treefit.exceptions import MatrixParseError
from treefit.models.distance_matrix import DistanceMatrix
from treefit.models.graph import FeatureMatrix
from treefit.services.metric_service import MatrixLike, matrix_values

logger = logging.getLogger(__name__)


class MatrixRepository:
    """Read and write comma-separated numeric matrices."""

    def __init__(self, encoding: str = "utf-8") -> None:
        """
        Initialize the repository.

        Args:
            encoding: Text encoding of CSV files.
        """
        self.encoding = encoding

    def _parse_rows(self, path: str | Path, *, allow_negative: bool) -> np.ndarray:
        """
        Parse a rectangular numeric CSV.

        Raises:
            MatrixParseError: Empty file, ragged rows, non-numeric tokens or
                (unless allowed) negative entries.
        """
        rows: list[list[float]] = []
        expected: int | None = None
        with Path(path).open(encoding=self.encoding) as handle:
            for lineno, raw in enumerate(handle, start=1):
                line = raw.strip()
                if not line:
                    continue
                tokens = [t.strip() for t in line.split(",")]
                if expected is None:
                    expected = len(tokens)
                elif len(tokens) != expected:
                    raise MatrixParseError(
                        ErrorMessages.CSV_RAGGED.format(line=lineno, expected=expected, actual=len(tokens)),
                        lineno,
                    )
                row: list[float] = []
                for token in tokens:
                    try:
                        value = float(token)
                    except ValueError:
                        raise MatrixParseError(
                            ErrorMessages.CSV_NOT_NUMERIC.format(line=lineno, token=token),
                            lineno,
                        ) from None
                    if not math.isfinite(value):
                        raise MatrixParseError(
                            ErrorMessages.CSV_NOT_NUMERIC.format(line=lineno, token=token),
                            lineno,
                        )
                    if value < 0.0 and not allow_negative:
                        raise MatrixParseError(
                            ErrorMessages.CSV_NEGATIVE.format(line=lineno, value=value),
                            lineno,
                        )
                    row.append(value)
                rows.append(row)
        if not rows:
            raise MatrixParseError(ErrorMessages.CSV_EMPTY)
        return np.array(rows, dtype=np.float64)

    def load_dense(self, path: str | Path) -> DistanceMatrix:
        """
        Load a dense dissimilarity matrix.

        The result is always (M + M^T) / 2 with a zero diagonal; a warning is
        logged when the repair exceeds the load tolerance.
        """
        arr = self._parse_rows(path, allow_negative=False)
        rows, cols = arr.shape
        if rows != cols:
            raise MatrixParseError(ErrorMessages.CSV_NOT_SQUARE.format(rows=rows, cols=cols))

        asymmetry = float(np.abs(arr - arr.T).max())
        if asymmetry > MetricConstants.LOAD_TOL:
            logger.warning("%s: asymmetry %.3g symmetrized as (M + M^T) / 2", path, asymmetry)
        diagonal = float(np.abs(np.diag(arr)).max())
        if diagonal > MetricConstants.LOAD_TOL:
            logger.warning("%s: nonzero diagonal (max %.3g) reset to 0", path, diagonal)

        return DistanceMatrix.from_array(arr, symmetrize=True)

    def load_features(self, path: str | Path) -> FeatureMatrix:
        """Load feature rows (negative values allowed)."""
        return FeatureMatrix(self._parse_rows(path, allow_negative=True))

    def save_dense(self, D: MatrixLike, path: str | Path) -> None:
        """Write a matrix with shortest round-trip floats."""
        values = matrix_values(D)
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        lines = [",".join(format_float(x) for x in row) for row in values]
        target.write_text("\n".join(lines) + "\n", encoding=self.encoding)
        logger.info("Wrote %s (%dx%d)", target, values.shape[0], values.shape[1])
