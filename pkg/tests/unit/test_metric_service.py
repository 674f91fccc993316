"""
Unit tests for metric_service.

Covers metric validation, Gromov products, the four-point gap, exact
hyperbolicity (both definitions) and the distortion measures, following
docs/test-list/metric-core.md.
"""

import itertools
import re

import numpy as np
import pytest

from treefit.constants import ErrorMessages
from treefit.exceptions import DimensionError, IndexOutOfRangeError, InvalidMatrixError, SizeGuardError
from treefit.models.distance_matrix import DistanceMatrix, Quadruple
from treefit.services import metric_service
from tests.helpers import C4, D1, D2, make_cycle, make_euclidean, make_grid, make_matrix, make_tree


class TestDistanceMatrix:
    """Test the DistanceMatrix invariants."""

    def test_valid_matrix_is_frozen_copy(self):
        """Test that the stored values are a read-only copy."""
        # Arrange
        source = C4.copy()

        # Act
        D = DistanceMatrix(source)
        source[0, 1] = 99.0

        # Assert
        assert D.values[0, 1] == 1.0
        assert not D.values.flags.writeable
        assert D.n == 4
        assert D.label(2) == "p2"

    @pytest.mark.parametrize(
        ("values", "message"),
        [
            ([[0.0, 1.0], [2.0, 0.0]], ErrorMessages.NOT_SYMMETRIC),
            ([[1.0, 1.0], [1.0, 0.0]], ErrorMessages.NONZERO_DIAGONAL),
            ([[0.0, -1.0], [-1.0, 0.0]], ErrorMessages.NEGATIVE_ENTRY),
            ([[0.0, np.inf], [np.inf, 0.0]], ErrorMessages.NOT_FINITE),
        ],
    )
    def test_invariant_violations_raise(self, values, message):
        """Test that each broken invariant is reported."""
        with pytest.raises(InvalidMatrixError, match=message):
            DistanceMatrix(np.array(values))

    def test_non_square_raises_dimension_error(self):
        """Test that a rectangular array is rejected."""
        with pytest.raises(DimensionError, match="must be square"):
            DistanceMatrix(np.zeros((2, 3)))

    def test_from_array_symmetrizes(self):
        """Test that symmetrize averages M and M^T and clears the diagonal."""
        # Act
        D = DistanceMatrix.from_array([[0.5, 1.0], [3.0, 0.0]], symmetrize=True)

        # Assert
        np.testing.assert_array_equal(D.values, [[0.0, 2.0], [2.0, 0.0]])


class TestValidateMetric:
    """Test cases for validate_metric."""

    def test_c4_is_metric(self):
        """Test that the unit 4-cycle passes every check."""
        report = metric_service.validate_metric(C4)
        assert report.is_metric
        assert report.triangle_violations == 0
        assert report.worst_violation == 0.0

    def test_triangle_violation_is_counted(self):
        """Test the violation count and worst slack of a broken triangle."""
        # Arrange: D[0,2] = 5 > D[0,1] + D[1,2] = 2 (counted for (0,2) and (2,0))
        values = np.array([[0.0, 1.0, 5.0], [1.0, 0.0, 1.0], [5.0, 1.0, 0.0]])

        # Act
        report = metric_service.validate_metric(values)

        # Assert
        assert not report.is_metric
        assert report.triangle_violations == 2
        assert report.worst_violation == pytest.approx(3.0)

    def test_asymmetric_array_is_reported(self):
        """Test that raw arrays with broken axioms are reported, not rejected."""
        report = metric_service.validate_metric([[0.0, 1.0], [2.0, 1.0]])
        assert not report.is_symmetric
        assert not report.zero_diagonal

    def test_negative_tolerance_rejected(self):
        """Test that a negative tolerance is an error."""
        with pytest.raises(Exception, match=ErrorMessages.NEGATIVE_TOLERANCE):
            metric_service.validate_metric(C4, tol=-1.0)


class TestGromovProduct:
    """Test cases for the Gromov products."""

    def test_product_on_c4(self):
        """Test (x|y)_w on the unit 4-cycle."""
        # (1|3)_0 = (1 + 1 - 2) / 2 = 0, (1|2)_0 = (1 + 2 - 1) / 2 = 1
        assert metric_service.gromov_product(C4, 1, 3, 0) == 0.0
        assert metric_service.gromov_product(C4, 1, 2, 0) == 1.0

    def test_product_with_base_point_is_zero(self):
        """Test that (x|w)_w = 0 and (x|x)_w = d(x, w)."""
        D = make_euclidean(6, seed=1)
        P = metric_service.gromov_product_matrix(D, 2)
        np.testing.assert_allclose(P[:, 2], 0.0, atol=1e-12)
        np.testing.assert_allclose(np.diag(P), D.values[:, 2])

    def test_matrix_agrees_with_scalar(self):
        """Test that the matrix form matches the scalar product entrywise."""
        D = make_euclidean(5, seed=2)
        P = metric_service.gromov_product_matrix(D, 4)
        for x, y in itertools.product(range(5), repeat=2):
            assert P[x, y] == pytest.approx(metric_service.gromov_product(D, x, y, 4))

    def test_index_out_of_range(self):
        """Test that an invalid point index raises."""
        message = re.escape(ErrorMessages.INDEX_OUT_OF_RANGE.format(index=4, n=4))
        with pytest.raises(IndexOutOfRangeError, match=message):
            metric_service.gromov_product(C4, 0, 1, 4)


class TestFourPointDelta:
    """Test cases for four_point_delta."""

    def test_c4_quadruple(self):
        """Test that the sums 2, 4, 2 give a gap of 1."""
        assert metric_service.four_point_delta(C4, Quadruple(0, 1, 2, 3)) == 1.0

    def test_d1_quadruple(self):
        """Test the half gap of the sums 2.1, 2.0, 2.2."""
        assert metric_service.four_point_delta(D1, (0, 1, 2, 3)) == pytest.approx(0.05, abs=1e-12)

    def test_repeated_index_on_tree_is_zero(self):
        """Test that quadruples with repeats vanish on a tree metric."""
        D = make_tree(8, seed=3)
        for q in [(0, 0, 1, 2), (3, 4, 3, 5), (7, 7, 7, 7)]:
            assert metric_service.four_point_delta(D, q) == pytest.approx(0.0, abs=1e-12)

    def test_order_invariance(self):
        """Test that permuting the quadruple does not change the gap."""
        D = make_euclidean(4, seed=5)
        values = {
            round(metric_service.four_point_delta(D, q), 12) for q in itertools.permutations(range(4))
        }
        assert len(values) == 1


class TestDeltaExact:
    """Test cases for delta_exact."""

    def test_c4(self):
        """Test the unit 4-cycle value."""
        assert metric_service.delta_exact(C4) == 1.0

    @pytest.mark.parametrize("values", [D1, D2])
    def test_non_convex_pair(self, values):
        """Test both 4-point matrices of the non-convex pair."""
        assert metric_service.delta_exact(values) == pytest.approx(0.05, abs=1e-12)

    def test_random_trees_are_zero(self):
        """Test that random weighted trees have zero hyperbolicity."""
        for seed in range(50):
            n = 5 + seed % 36
            assert metric_service.delta_exact(make_tree(n, seed=seed)) == pytest.approx(0.0, abs=1e-9)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_fewer_than_four_points(self, n):
        """Test that n < 4 gives 0."""
        assert metric_service.delta_exact(np.zeros((n, n))) == 0.0

    def test_agrees_with_base_point_definition(self):
        """Test the four-point form against the base-point brute force."""
        for seed in range(5):
            D = make_euclidean(6, seed=seed)
            assert metric_service.delta_exact(D) == pytest.approx(metric_service.delta_basepoint(D), abs=1e-9)
        assert metric_service.delta_basepoint(C4) == pytest.approx(1.0)

    def test_matches_brute_force_over_all_quadruples(self):
        """Test against the maximum of four_point_delta over ordered quadruples."""
        D = make_euclidean(6, seed=11)
        brute = max(metric_service.four_point_delta(D, q) for q in itertools.product(range(6), repeat=4))
        assert metric_service.delta_exact(D) == pytest.approx(brute, abs=1e-12)

    def test_worker_count_does_not_change_result(self):
        """Test that the value is identical for 1 and 4 workers."""
        D = make_euclidean(12, seed=7)
        assert metric_service.delta_exact(D, workers=1) == metric_service.delta_exact(D, workers=4)

    @pytest.mark.parametrize("seed", range(5))
    def test_invariant_under_relabeling(self, seed):
        """Test that permuting rows and columns together keeps the value."""
        # Arrange
        D = make_euclidean(9, seed=seed).values
        order = np.random.default_rng(seed).permutation(9)

        # Act
        permuted = metric_service.delta_exact(D[np.ix_(order, order)])

        # Assert
        assert permuted == pytest.approx(metric_service.delta_exact(D), abs=1e-12)

    @pytest.mark.parametrize("scale", [0.5, 2.0, 10.0])
    @pytest.mark.parametrize("values", [C4, D1, make_euclidean(8, seed=3).values, make_cycle(7).values])
    def test_scales_with_distances(self, values, scale):
        """Test that multiplying every distance by c multiplies the value by c."""
        expected = scale * metric_service.delta_exact(values)
        assert metric_service.delta_exact(scale * values) == pytest.approx(expected, rel=1e-12, abs=1e-15)

    def test_grid_and_cycle_values(self):
        """Test that the 2x2 grid and the 4-cycle coincide."""
        assert metric_service.delta_exact(make_grid(2, 2)) == 1.0
        assert metric_service.delta_exact(make_cycle(4)) == 1.0


class TestSizeGuard:
    """Test cases for guard_exact_size."""

    def test_refuses_above_limit(self):
        """Test that n above the limit raises SizeGuardError."""
        message = re.escape(ErrorMessages.SIZE_GUARD.format(n=11, limit=10))
        with pytest.raises(SizeGuardError, match=message):
            metric_service.guard_exact_size(11, limit=10)

    def test_override_allows(self):
        """Test that the override flag lets the computation proceed."""
        metric_service.guard_exact_size(11, override=True, limit=10)

    def test_exit_code_is_three(self):
        """Test the exit code carried by the guard error."""
        assert SizeGuardError.exit_code == 3


class TestRelativeDelta:
    """Test cases for relative_delta."""

    def test_c4(self):
        """Test delta / diameter on the unit 4-cycle."""
        assert metric_service.relative_delta(C4) == 0.5

    def test_zero_diameter(self):
        """Test that a zero matrix gives 0."""
        assert metric_service.relative_delta(np.zeros((4, 4))) == 0.0


class TestDistortion:
    """Test cases for distortion_linf and distortion_l1_avg."""

    def test_identical_matrices(self):
        """Test that A = B gives zero distortion."""
        assert metric_service.distortion_linf(C4, C4) == 0.0
        assert metric_service.distortion_l1_avg(C4, C4) == 0.0

    def test_known_values(self):
        """Test linf and average l1 on a hand-computed pair."""
        # Arrange: differences 1 (pair 0-1), 0, 0, 0, 0, 2 (pair 2-3)
        B = C4.copy()
        B[0, 1] = B[1, 0] = 2.0
        B[2, 3] = B[3, 2] = 3.0

        # Act & Assert
        assert metric_service.distortion_linf(C4, B) == 2.0
        assert metric_service.distortion_l1_avg(C4, B) == pytest.approx(3.0 / 6.0)

    def test_single_point(self):
        """Test that linf is 0 and l1 average is undefined for n = 1."""
        assert metric_service.distortion_linf(np.zeros((1, 1)), np.zeros((1, 1))) == 0.0
        with pytest.raises(DimensionError):
            metric_service.distortion_l1_avg(np.zeros((1, 1)), np.zeros((1, 1)))

    def test_shape_mismatch(self):
        """Test that different shapes raise DimensionError."""
        with pytest.raises(DimensionError, match="same shape"):
            metric_service.distortion_linf(C4, make_matrix(np.zeros((3, 3))))
