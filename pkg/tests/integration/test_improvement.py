"""
Fit-then-embed against the plain Gromov embedding on small ER graphs.
"""

import numpy as np
import pytest

from treefit.models.fit import FitConfig
from treefit.services import metric_service, optimizer_service, tree_embed_service
from tests.helpers import make_er

SEEDS = range(10)


def best_root_distortion(reference, matrix, roots) -> float:
    """Smallest l-infinity distortion over the embeddings of `matrix` at `roots`."""
    return min(
        metric_service.distortion_linf(reference, tree_embed_service.gromov_tree_metric(matrix, root)) for root in roots
    )


@pytest.mark.slow
class TestFitImprovesEmbedding:
    """Fitting before embedding should not lose to embedding the input directly."""

    def test_fit_beats_plain_embedding(self):
        """Test median distortion and hyperbolicity over ten seeded graphs."""
        # Arrange
        baseline, fitted, reduced = [], [], 0

        # Act
        for seed in SEEDS:
            D = make_er(30, 0.15, seed=seed)
            roots = tree_embed_service.sample_roots(D.n, 10, seed)
            cfg = FitConfig(
                mu=0.1,
                lam=10.0,
                batches=8,
                batch_size=8,
                lr=0.01,
                max_epochs=300,
                patience=50,
                seed=seed,
            )
            result = optimizer_service.fit(D, cfg)
            baseline.append(best_root_distortion(D, D, roots))
            fitted.append(best_root_distortion(D, result.best_matrix, roots))
            if metric_service.delta_exact(result.best_matrix) < metric_service.delta_exact(D):
                reduced += 1

        # Assert
        assert np.median(fitted) <= np.median(baseline)
        assert reduced >= 7
