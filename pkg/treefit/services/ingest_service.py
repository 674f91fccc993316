"""
Data ingestion: connected components, shortest-path metrics, cosine
dissimilarities, and the loaders that turn an input file into a
`DistanceMatrix`.
"""

import logging
from pathlib import Path

import numpy as np
from numpy.typing import ArrayLike
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

from treefit.common.parallel import ordered_map, resolve_workers
from treefit.constants import ErrorMessages, InputFormats
from treefit.exceptions import (
    DisconnectedGraphError,
    EmptyGraphError,
    IngestError,
    ZeroNormRowError,
)
from treefit.models.distance_matrix import DistanceMatrix
from treefit.models.graph import FeatureMatrix, Graph
from treefit.repositories.graph_repository import GraphRepository
from treefit.repositories.matrix_repository import MatrixRepository

logger = logging.getLogger(__name__)

PATH_METHODS = ("auto", "bfs", "dijkstra")


def load_edge_list(path: str | Path) -> Graph:
    """Parse an edge-list file (see `GraphRepository.load`)."""
    return GraphRepository().load(path)


def load_dense_csv(path: str | Path) -> DistanceMatrix:
    """Parse a dense CSV matrix (see `MatrixRepository.load_dense`)."""
    return MatrixRepository().load_dense(path)


def load_features_csv(path: str | Path) -> FeatureMatrix:
    """Parse a CSV feature table."""
    return MatrixRepository().load_features(path)


def largest_component(G: Graph) -> Graph:
    """
    Subgraph induced by the largest connected component.

    Ties are broken by the smallest original index contained. Indices are
    remapped contiguously in ascending original order; labels are preserved
    (unlabeled graphs get their original indices as labels when nodes are
    dropped).

    Raises:
        EmptyGraphError: If the graph has no nodes.
    """
    if G.node_count == 0:
        raise EmptyGraphError(ErrorMessages.EMPTY_GRAPH)

    count, component = connected_components(G.to_csr(), directed=False)
    if count == 1:
        return G

    sizes = np.bincount(component, minlength=count)
    first_index = np.full(count, G.node_count, dtype=np.int64)
    np.minimum.at(first_index, component, np.arange(G.node_count))
    # 最大サイズ → 最小インデックスの順で選択
    chosen = min(np.flatnonzero(sizes == sizes.max()), key=lambda c: first_index[c])

    keep = np.flatnonzero(component == chosen)
    remap = {int(old): new for new, old in enumerate(keep)}
    edges = tuple(
        (remap[u], remap[v], w) for u, v, w in G.edges if u in remap and v in remap
    )
    labels = tuple(G.label(int(old)) for old in keep)
    logger.info(
        "Largest component keeps %d of %d nodes (%d components)",
        keep.size,
        G.node_count,
        count,
    )
    return Graph(node_count=int(keep.size), edges=edges, labels=labels)


def _bfs_distances(adjacency: csr_matrix, sources: np.ndarray) -> np.ndarray:
    """Hop distances from each source, expanded one layer at a time."""
    n = adjacency.shape[0]
    dist = np.full((sources.size, n), np.inf)
    frontier = np.zeros((n, sources.size), dtype=np.float64)
    frontier[sources, np.arange(sources.size)] = 1.0
    reached = frontier.astype(bool)
    dist[np.arange(sources.size), sources] = 0.0
    level = 0
    while frontier.any():
        level += 1
        expanded = (adjacency @ frontier) > 0.0
        new = expanded & ~reached
        reached |= new
        dist[new.T] = level
        frontier = new.astype(np.float64)
    return dist


def all_pairs_shortest_paths(
    G: Graph,
    *,
    method: str = "auto",
    workers: int | None = None,
) -> DistanceMatrix:
    """
    Shortest-path distance matrix of a connected graph.

    "auto" uses layerwise breadth-first search for unit-weight graphs and
    Dijkstra per source otherwise. Sources are split into contiguous chunks
    processed in parallel and assembled in order.

    Raises:
        EmptyGraphError: If the graph has no nodes.
        DisconnectedGraphError: If some pair is unreachable (the message
            names the first such pair).
    """
    if method not in PATH_METHODS:
        raise IngestError(ErrorMessages.UNKNOWN_PATH_METHOD.format(method=method))
    if G.node_count == 0:
        raise EmptyGraphError(ErrorMessages.EMPTY_GRAPH)
    if method == "auto":
        method = "bfs" if G.is_unit_weight else "dijkstra"
    if method == "bfs" and not G.is_unit_weight:
        raise IngestError(ErrorMessages.BFS_NEEDS_UNIT_WEIGHTS)

    n = G.node_count
    adjacency = G.to_csr()
    workers = resolve_workers() if workers is None else workers
    chunks = np.array_split(np.arange(n), max(1, min(workers, n)))

    if method == "bfs":
        def run(sources: np.ndarray) -> np.ndarray:
            return _bfs_distances(adjacency, sources)
    else:
        def run(sources: np.ndarray) -> np.ndarray:
            return shortest_path(adjacency, method="D", directed=False, indices=sources)

    dist = np.vstack(ordered_map(run, chunks, workers))

    unreachable = np.argwhere(np.isinf(dist))
    if unreachable.size:
        i, j = (int(x) for x in unreachable[0])
        pair = (G.label(i), G.label(j))
        raise DisconnectedGraphError(ErrorMessages.DISCONNECTED.format(u=pair[0], v=pair[1]), pair)

    # 始点ごとの丸め誤差の差を除去して厳密に対称化
    dist = np.minimum(dist, dist.T)
    np.fill_diagonal(dist, 0.0)
    return DistanceMatrix(dist, G.labels)


def cosine_dissimilarity(F: FeatureMatrix | ArrayLike) -> DistanceMatrix:
    """
    1 - cosine similarity between feature rows.

    The result is symmetric with a zero diagonal and entries in [0, 2]; it
    may violate the triangle inequality.

    Raises:
        ZeroNormRowError: If a row has zero norm.
    """
    values = F.values if isinstance(F, FeatureMatrix) else np.asarray(F, dtype=np.float64)
    norms = np.linalg.norm(values, axis=1)
    zero_rows = np.flatnonzero(norms == 0.0)
    if zero_rows.size:
        raise ZeroNormRowError(ErrorMessages.ZERO_NORM_ROW.format(row=int(zero_rows[0])))
    unit = values / norms[:, None]
    dissimilarity = np.clip(1.0 - unit @ unit.T, 0.0, 2.0)
    dissimilarity = (dissimilarity + dissimilarity.T) / 2.0
    np.fill_diagonal(dissimilarity, 0.0)
    labels = F.labels if isinstance(F, FeatureMatrix) else None
    return DistanceMatrix(dissimilarity, labels)


def load_metric(path: str | Path, fmt: str | None = None) -> DistanceMatrix:
    """
    Load any supported input as a distance matrix.

    Edge lists go through the largest component and shortest paths, dense
    CSV files are read as matrices, and feature tables become cosine
    dissimilarities. The format is inferred from the extension when omitted.
    """
    fmt = fmt or InputFormats.infer(str(path))
    if fmt == InputFormats.EDGES:
        graph = largest_component(load_edge_list(path))
        return all_pairs_shortest_paths(graph)
    if fmt == InputFormats.MATRIX:
        return load_dense_csv(path)
    if fmt == InputFormats.FEATURES:
        return cosine_dissimilarity(load_features_csv(path))
    detail = f"unknown input format {fmt!r}"
    raise IngestError(detail)
