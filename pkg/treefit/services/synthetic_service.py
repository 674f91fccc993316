"""
Seeded synthetic graph generators.

Every generator owns a `numpy.random.Generator(PCG64(seed))`, so edge lists
are reproducible across runs and platforms.
"""

import logging

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from treefit.constants import ErrorMessages, GeneratorConstants
from treefit.exceptions import ConnectivityError, InvalidGeneratorParamsError
from treefit.models.graph import Graph, SbmSpec

logger = logging.getLogger(__name__)


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _invalid(detail: str) -> InvalidGeneratorParamsError:
    return InvalidGeneratorParamsError(ErrorMessages.GENERATOR_PARAM.format(detail=detail))


def gen_tree(
    n: int,
    seed: int = 0,
    weight_range: tuple[float, float] = GeneratorConstants.DEFAULT_WEIGHT_RANGE,
) -> Graph:
    """
    Random labeled tree by random parent attachment.

    Node i (i >= 1) attaches to a uniform parent in [0, i); weights are
    uniform in `weight_range` (constant when lo == hi).
    """
    lo, hi = weight_range
    if n < 1:
        raise _invalid(f"tree needs n >= 1, got {n}")
    if lo <= 0.0 or hi < lo:
        raise _invalid(f"weight range must satisfy 0 < lo <= hi, got ({lo}, {hi})")

    rng = _rng(seed)
    if n == 1:
        return Graph(node_count=1)
    parents = rng.integers(0, np.arange(1, n))
    weights = rng.uniform(lo, hi, size=n - 1) if hi > lo else np.full(n - 1, lo)
    edges = tuple((int(p), child, float(w)) for child, (p, w) in enumerate(zip(parents, weights, strict=True), start=1))
    return Graph(node_count=n, edges=edges)


def gen_cycle(n: int) -> Graph:
    """Unit-weight cycle 0-1-...-(n-1)-0."""
    if n < 3:
        raise _invalid(f"cycle needs n >= 3, got {n}")
    return Graph(node_count=n, edges=tuple((i, (i + 1) % n, 1.0) for i in range(n)))


def gen_grid(rows: int, cols: int) -> Graph:
    """Unit-weight rows×cols grid; node (r, c) has id r*cols + c."""
    if rows < 1 or cols < 1:
        raise _invalid(f"grid dimensions must be positive, got {rows}x{cols}")
    edges: list[tuple[int, int, float]] = []
    for r in range(rows):
        for c in range(cols):
            node = r * cols + c
            if c + 1 < cols:
                edges.append((node, node + 1, 1.0))
            if r + 1 < rows:
                edges.append((node, node + cols, 1.0))
    return Graph(node_count=rows * cols, edges=tuple(edges))


def _sample_connected(n: int, probability: np.ndarray | float, rng: np.random.Generator, name: str) -> Graph:
    """
    Rejection-sample upper-triangle pairs (lexicographic order) until connected.

    Raises:
        ConnectivityError: If no sample is connected within the resample cap.
    """
    if n == 1:
        return Graph(node_count=1)
    rows, cols = np.triu_indices(n, k=1)
    for attempt in range(1, GeneratorConstants.MAX_RESAMPLES + 1):
        mask = rng.random(rows.size) < probability
        u, v = rows[mask], cols[mask]
        adjacency = coo_matrix((np.ones(u.size), (u, v)), shape=(n, n))
        count, _ = connected_components(adjacency, directed=False)
        if count == 1:
            logger.debug("%s: connected sample after %d attempt(s)", name, attempt)
            return Graph(
                node_count=n,
                edges=tuple((int(a), int(b), 1.0) for a, b in zip(u, v, strict=True)),
            )
    raise ConnectivityError(ErrorMessages.NOT_CONNECTED.format(attempts=GeneratorConstants.MAX_RESAMPLES))


def gen_er(n: int, p: float, seed: int = 0) -> Graph:
    """Connected Erdős–Rényi G(n, p) sample."""
    if n < 1:
        raise _invalid(f"n must be >= 1, got {n}")
    if not 0.0 < p <= 1.0:
        raise _invalid(f"p must lie in (0, 1], got {p}")
    return _sample_connected(n, p, _rng(seed), "er")


def gen_sbm(spec: SbmSpec) -> tuple[Graph, np.ndarray]:
    """
    Connected stochastic block model sample.

    Returns:
        The graph and the block index of every node (blocks are contiguous
        index ranges in the order of `spec.block_sizes`).
    """
    blocks = np.repeat(np.arange(len(spec.block_sizes)), spec.block_sizes)
    rows, cols = np.triu_indices(blocks.size, k=1)
    probability = np.where(blocks[rows] == blocks[cols], spec.p_in, spec.p_out)
    graph = _sample_connected(blocks.size, probability, _rng(spec.seed), "sbm")
    return graph, blocks
