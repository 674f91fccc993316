"""
Simple test helpers for creating test data.

This module provides straightforward helper functions for building
matrices, graphs and files without complex abstractions. Each function has
a clear, single purpose and is easy to understand.
"""

import json
from collections import defaultdict
from pathlib import Path

import numpy as np
from click.testing import Result

from treefit.models.distance_matrix import DistanceMatrix
from treefit.models.graph import Graph
from treefit.services import ingest_service, synthetic_service

# Unit 4-cycle 0-1-2-3-0
C4 = np.array(
    [
        [0.0, 1.0, 2.0, 1.0],
        [1.0, 0.0, 1.0, 2.0],
        [2.0, 1.0, 0.0, 1.0],
        [1.0, 2.0, 1.0, 0.0],
    ],
)

# Two 4-point metrics on either side of a non-convex kink of the hyperbolicity
D1 = np.array(
    [
        [0.0, 1.1, 1.0, 1.2],
        [1.1, 0.0, 1.0, 1.0],
        [1.0, 1.0, 0.0, 1.0],
        [1.2, 1.0, 1.0, 0.0],
    ],
)
D2 = np.array(
    [
        [0.0, 1.0, 1.0, 1.2],
        [1.0, 0.0, 1.0, 1.1],
        [1.0, 1.0, 0.0, 1.0],
        [1.2, 1.1, 1.0, 0.0],
    ],
)

# Star with three leaves of lengths 1, 2, 3 around a Steiner center:
# the Gromov embedding at any point reproduces it with one Steiner node.
TRIPOD = np.array(
    [
        [0.0, 3.0, 4.0],
        [3.0, 0.0, 5.0],
        [4.0, 5.0, 0.0],
    ],
)


def make_matrix(values: np.ndarray | list, labels: tuple[str, ...] | None = None) -> DistanceMatrix:
    """
    Create a DistanceMatrix for testing.

    Args:
        values: Square symmetric entries.
        labels: Optional point labels.

    Returns:
        DistanceMatrix: Validated matrix.
    """
    return DistanceMatrix(np.asarray(values, dtype=np.float64), labels)


def graph_metric(graph: Graph) -> DistanceMatrix:
    """Shortest-path metric of a connected graph."""
    return ingest_service.all_pairs_shortest_paths(graph, workers=1)


def make_cycle(n: int) -> DistanceMatrix:
    """Unit n-cycle metric."""
    return graph_metric(synthetic_service.gen_cycle(n))


def make_grid(rows: int, cols: int) -> DistanceMatrix:
    """Unit grid metric."""
    return graph_metric(synthetic_service.gen_grid(rows, cols))


def make_tree(n: int, seed: int = 0, weight_range: tuple[float, float] = (0.5, 2.0)) -> DistanceMatrix:
    """Path metric of a random weighted tree."""
    return graph_metric(synthetic_service.gen_tree(n, seed, weight_range))


def make_er(n: int, p: float, seed: int = 0) -> DistanceMatrix:
    """Shortest-path metric of a connected Erdős–Rényi sample."""
    return graph_metric(synthetic_service.gen_er(n, p, seed))


def make_euclidean(n: int, seed: int = 0, dim: int = 2) -> DistanceMatrix:
    """Euclidean distances of random points (a metric that is not a tree metric)."""
    rng = np.random.default_rng(seed)
    points = rng.uniform(0.0, 10.0, size=(n, dim))
    diff = points[:, None, :] - points[None, :, :]
    values = np.sqrt((diff**2).sum(axis=2))
    values = (values + values.T) / 2.0
    np.fill_diagonal(values, 0.0)
    return DistanceMatrix(values)


def make_features(n: int, seed: int = 0, dim: int = 5) -> np.ndarray:
    """Standard normal feature rows."""
    return np.random.default_rng(seed).standard_normal((n, dim))


def make_cosine(n: int, seed: int = 0, dim: int = 5) -> DistanceMatrix:
    """Cosine dissimilarity of random features (usually breaks the triangle inequality)."""
    return ingest_service.cosine_dissimilarity(make_features(n, seed, dim))


def make_integer_metric(n: int, seed: int = 0) -> DistanceMatrix:
    """Shortest paths of random integer weights (every entry is an integer)."""
    rng = np.random.default_rng(seed)
    weights = rng.integers(1, 6, size=(n, n)).astype(np.float64)
    weights = np.minimum(weights, weights.T)
    np.fill_diagonal(weights, 0.0)
    for k in range(n):
        weights = np.minimum(weights, weights[:, k, None] + weights[None, k, :])
    return DistanceMatrix(weights)


def write_edges(path: Path, lines: list[str]) -> Path:
    """Write an edge-list file."""
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def write_matrix(path: Path, D: DistanceMatrix | np.ndarray) -> Path:
    """Write a dense CSV matrix with round-trip floats."""
    values = D.values if isinstance(D, DistanceMatrix) else np.asarray(D, dtype=np.float64)
    path.write_text("\n".join(",".join(repr(float(x)) for x in row) for row in values) + "\n", encoding="utf-8")
    return path


def read_matrix(path: Path) -> np.ndarray:
    """Read a dense CSV matrix."""
    rows = [line.split(",") for line in path.read_text(encoding="utf-8").splitlines() if line]
    return np.array(rows, dtype=np.float64)


def error_of(result: Result) -> dict:
    """The JSON error object a failed command wrote to stderr."""
    for line in result.stderr.splitlines():
        if line.startswith('{"error"'):
            return json.loads(line)["error"]
    msg = f"no JSON error in stderr: {result.stderr!r}"
    raise AssertionError(msg)


def central_difference(f, values: np.ndarray, i: int, j: int, h: float = 1e-5) -> float:
    """Derivative of f along the symmetric pair (i, j)."""
    plus = values.copy()
    minus = values.copy()
    plus[i, j] += h
    plus[j, i] += h
    minus[i, j] -= h
    minus[j, i] -= h
    return (f(plus) - f(minus)) / (2.0 * h)


def parse_newick(text: str) -> tuple[dict[int, list[tuple[int, float]]], dict[str, int]]:
    """
    Minimal Newick reader.

    Returns:
        Adjacency (node -> [(neighbor, length)]) and label -> node.
    """
    text = text.strip()
    assert text.endswith(";")
    pos = 0
    adjacency: dict[int, list[tuple[int, float]]] = defaultdict(list)
    labels: dict[str, int] = {}
    counter = [0]

    def read_label() -> str:
        nonlocal pos
        if text[pos] == "'":
            end = pos + 1
            out = []
            while True:
                if text[end] == "'" and end + 1 < len(text) and text[end + 1] == "'":
                    out.append("'")
                    end += 2
                elif text[end] == "'":
                    break
                else:
                    out.append(text[end])
                    end += 1
            pos = end + 1
            return "".join(out)
        start = pos
        while text[pos] not in ",():;":
            pos += 1
        return text[start:pos]

    def read_subtree() -> int:
        nonlocal pos
        node = counter[0]
        counter[0] += 1
        if text[pos] == "(":
            pos += 1
            while True:
                child = read_subtree()
                assert text[pos] == ":"
                pos += 1
                start = pos
                while text[pos] not in ",)":
                    pos += 1
                length = float(text[start:pos])
                adjacency[node].append((child, length))
                adjacency[child].append((node, length))
                if text[pos] == ",":
                    pos += 1
                    continue
                pos += 1
                break
        label = read_label()
        if label:
            labels[label] = node
        return node

    read_subtree()
    assert text[pos] == ";"
    return dict(adjacency), labels


def newick_distances(text: str, order: list[str]) -> np.ndarray:
    """Path lengths between the labeled nodes of a Newick tree, in `order`."""
    adjacency, labels = parse_newick(text)
    nodes = [labels[name] for name in order]
    out = np.zeros((len(nodes), len(nodes)))
    for a, source in enumerate(nodes):
        dist = {source: 0.0}
        stack = [source]
        while stack:
            v = stack.pop()
            for u, length in adjacency.get(v, []):
                if u not in dist:
                    dist[u] = dist[v] + length
                    stack.append(u)
        for b, target in enumerate(nodes):
            out[a, b] = dist[target]
    return out
