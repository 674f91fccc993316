"""
Gromov tree embedding through single-linkage clustering.

For a base point w with radius M = max_x d(x, w), the dissimilarity
d_G(x, y) = M − (x|y)_w is closed under minimax paths (single linkage),
giving an ultrametric u. M − u is the Gromov product of a tree metric at w,
and the tree distance is d_T(x, y) = d(x, w) + d(y, w) − 2(M − u(x, y)).
"""

import logging
from collections.abc import Sequence

import numpy as np
from scipy.cluster.hierarchy import cophenet, linkage
from scipy.spatial.distance import squareform

from treefit.common.format_utils import format_branch, format_float
from treefit.constants import ErrorMessages, MetricConstants
from treefit.exceptions import EmbeddingError, NotRealizableError
from treefit.models.distance_matrix import DistanceMatrix
from treefit.models.tree import Dendrogram, TreeEdge, TreeStructure
from treefit.services.metric_service import MatrixLike, gromov_product_matrix, matrix_values

logger = logging.getLogger(__name__)

_NEWICK_RESERVED = set(" \t()[]':;,")


def _labels_of(D: MatrixLike) -> tuple[str, ...] | None:
    return D.labels if isinstance(D, DistanceMatrix) else None


def root_gromov_matrix(D: MatrixLike, w: int) -> np.ndarray:
    """n×n matrix of Gromov products (x|y)_w."""
    return gromov_product_matrix(D, w)


def _linkage(values: np.ndarray) -> np.ndarray:
    return linkage(squareform(values, checks=False), method="single")


def single_linkage(M: MatrixLike) -> Dendrogram:
    """Single-linkage dendrogram of a dissimilarity matrix."""
    values = DistanceMatrix(matrix_values(M)).values
    n = values.shape[0]
    if n < 2:
        return Dendrogram(leaf_count=max(n, 1))
    Z = _linkage(values)
    merges = tuple((int(row[0]), int(row[1]), float(row[2])) for row in Z)
    return Dendrogram(leaf_count=n, merges=merges)


def slhc_ultrametric(G_matrix: MatrixLike) -> DistanceMatrix:
    """
    Minimax-path (subdominant ultrametric) closure of a dissimilarity.

    u(x, y) is the smallest possible largest step over x–y paths, read off
    the single-linkage merge heights.
    """
    source = G_matrix if isinstance(G_matrix, DistanceMatrix) else DistanceMatrix(matrix_values(G_matrix))
    n = source.n
    if n < 2:
        return DistanceMatrix(np.zeros((n, n)), source.labels)
    ultra = squareform(cophenet(_linkage(source.values)))
    np.fill_diagonal(ultra, 0.0)
    return DistanceMatrix(ultra, source.labels)


def _radius_and_products(values: np.ndarray, w: int) -> tuple[np.ndarray, float, np.ndarray]:
    g = gromov_product_matrix(values, w)
    radius = values[:, w]
    return radius, float(radius.max()), g


def _clamped_products(values: np.ndarray, w: int) -> tuple[np.ndarray, float, np.ndarray]:
    """
    Gromov products at w clipped to [0, min(d(x, w), d(y, w))].

    Products of a metric already lie in that range; a dissimilarity that
    breaks the triangle inequality can leave it.
    """
    radius, top, g = _radius_and_products(values, w)
    return radius, top, np.clip(g, 0.0, np.minimum(radius[:, None], radius[None, :]))


def gromov_tree_metric(D: MatrixLike, w: int) -> DistanceMatrix:
    """
    Tree metric of the Gromov embedding rooted at w.

    Distances to w are preserved exactly. For a metric input no distance
    grows; any symmetric dissimilarity still yields a tree metric.

    Raises:
        IndexOutOfRangeError: If w is not a point.
    """
    values = matrix_values(D)
    radius, top, g = _clamped_products(values, w)
    n = values.shape[0]
    if n == 1:
        return DistanceMatrix(np.zeros((1, 1)), _labels_of(D))

    d_g = top - g
    np.fill_diagonal(d_g, 0.0)
    u = slhc_ultrametric(d_g).values
    tree_products = top - u
    d_t = np.maximum(radius[:, None] + radius[None, :] - 2.0 * tree_products, 0.0)
    np.fill_diagonal(d_t, 0.0)
    return DistanceMatrix(d_t, _labels_of(D))


def gromov_tree_metric_maxmin(D: MatrixLike, w: int) -> DistanceMatrix:
    """
    Same tree metric from the max–min chain formula.

    The tree Gromov product is the largest, over chains x = y0, ..., yk = y,
    of the smallest consecutive product (y_i | y_{i+1})_w, computed as a
    (max, min) closure.
    """
    values = matrix_values(D)
    radius, _, closure = _clamped_products(values, w)
    closure = closure.copy()
    for k in range(values.shape[0]):
        closure = np.maximum(closure, np.minimum(closure[:, k, None], closure[None, k, :]))
    d_t = np.maximum(radius[:, None] + radius[None, :] - 2.0 * closure, 0.0)
    np.fill_diagonal(d_t, 0.0)
    return DistanceMatrix(d_t, _labels_of(D))


def _contract_zero_edges(parent: dict[int, tuple[int, float]], point_count: int, zero_tol: float) -> None:
    """
    Remove zero-length edges that touch a Steiner node, in place.

    A Steiner child merges into its parent; a point child takes the place
    of its Steiner parent. Edges between two points are kept.
    """
    changed = True
    while changed:
        changed = False
        for child in sorted(parent):
            up, weight = parent[child]
            if weight > zero_tol:
                continue
            if child >= point_count:
                for node, (p, wt) in list(parent.items()):
                    if p == child:
                        parent[node] = (up, wt)
                del parent[child]
            elif up >= point_count:
                for node, (p, wt) in list(parent.items()):
                    if p == up and node != child:
                        parent[node] = (child, wt)
                parent[child] = parent.pop(up)
            else:
                continue
            changed = True
            break


def reconstruct_tree(d_T: MatrixLike, w: int) -> TreeStructure:
    """
    Explicit weighted tree realizing a Gromov tree metric, rooted at w.

    Steiner nodes sit at the merge heights of the single-linkage dendrogram
    of M − (x|y)_w over the points other than w; zero-length edges touching
    Steiner nodes are contracted and Steiner ids are renumbered in order.

    Raises:
        NotRealizableError: If M − (x|y)_w is not an ultrametric within
            tolerance or a branch length is clearly negative.
    """
    values = matrix_values(d_T)
    labels = _labels_of(d_T)
    n = values.shape[0]
    radius, top, g = _radius_and_products(values, w)
    if n == 1:
        return TreeStructure(point_count=1, node_count=1, root=0, labels=labels)

    ultra_input = top - g
    np.fill_diagonal(ultra_input, 0.0)
    scale = max(1.0, top)
    if ultra_input.min() < -MetricConstants.ULTRAMETRIC_TOL * scale:
        detail = "Gromov products exceed the radius"
        raise NotRealizableError(ErrorMessages.NOT_REALIZABLE.format(detail=detail))
    ultra_input = np.maximum(ultra_input, 0.0)
    closure = slhc_ultrametric(ultra_input).values
    deviation = float(np.abs(closure - ultra_input).max())
    if deviation > MetricConstants.ULTRAMETRIC_TOL * scale:
        detail = f"ultrametric check failed by {deviation:.3g}"
        raise NotRealizableError(ErrorMessages.NOT_REALIZABLE.format(detail=detail))

    others = [x for x in range(n) if x != w]
    depth: dict[int, float] = {x: float(radius[x]) for x in others}
    cluster_node = {i: x for i, x in enumerate(others)}
    parent: dict[int, tuple[int, float]] = {}
    next_steiner = n

    if len(others) > 1:
        sub = ultra_input[np.ix_(others, others)]
        for i, (left, right, height) in enumerate(single_linkage(sub).merges):
            steiner = next_steiner
            next_steiner += 1
            depth[steiner] = top - height
            cluster_node[len(others) + i] = steiner
            for child_cluster in (left, right):
                child = cluster_node[child_cluster]
                parent[child] = (steiner, depth[child] - depth[steiner])
        top_node = cluster_node[2 * len(others) - 2]
    else:
        top_node = others[0]
    parent[top_node] = (w, depth[top_node])

    for child, (up, weight) in parent.items():
        if weight < -MetricConstants.BRANCH_TOL * scale:
            detail = f"negative branch length {weight:.3g} above node {child}"
            raise NotRealizableError(ErrorMessages.NOT_REALIZABLE.format(detail=detail))
        parent[child] = (up, max(weight, 0.0))

    _contract_zero_edges(parent, n, zero_tol=1e-12 * scale)

    steiner_ids = sorted({node for node in parent if node >= n} | {p for p, _ in parent.values() if p >= n})
    renumber = {old: n + k for k, old in enumerate(steiner_ids)}

    def rename(node: int) -> int:
        return renumber.get(node, node)

    edges: list[TreeEdge] = sorted(
        (rename(up), rename(child), weight) for child, (up, weight) in parent.items()
    )
    tree = TreeStructure(
        point_count=n,
        node_count=n + len(steiner_ids),
        root=w,
        edges=tuple(edges),
        labels=labels,
    )
    tree.validate()
    logger.debug("Reconstructed tree rooted at %d: %d Steiner nodes", w, len(steiner_ids))
    return tree


def _preorder(tree: TreeStructure) -> list[int]:
    kids = tree.children()
    order: list[int] = []
    stack = [tree.root]
    while stack:
        v = stack.pop()
        order.append(v)
        stack.extend(c for c, _ in reversed(kids[v]))
    return order


def tree_metric_of(T: TreeStructure) -> DistanceMatrix:
    """
    Path lengths between the input points of a tree.

    Rows are filled in preorder: a node's row is its parent's row shifted by
    the edge weight, minus twice the weight inside its own subtree (a
    contiguous preorder range).

    Raises:
        MalformedTreeError: If the tree is not a connected rooted tree.
    """
    T.validate()
    order = _preorder(T)
    position = {v: i for i, v in enumerate(order)}
    parents = T.parents()

    size = dict.fromkeys(order, 1)
    for v in reversed(order[1:]):
        size[parents[v][0]] += size[v]

    count = len(order)
    depth = np.zeros(count)
    for v in order[1:]:
        up, weight = parents[v]
        depth[position[v]] = depth[position[up]] + weight

    dist = np.zeros((count, count))
    dist[0] = depth
    for v in order[1:]:
        up, weight = parents[v]
        row = dist[position[up]] + weight
        start = position[v]
        row[start : start + size[v]] -= 2.0 * weight
        dist[start] = row

    points = [position[x] for x in range(T.point_count)]
    values = dist[np.ix_(points, points)]
    values = np.maximum((values + values.T) / 2.0, 0.0)
    np.fill_diagonal(values, 0.0)
    return DistanceMatrix(values, T.labels)


def _newick_label(label: str | None) -> str:
    if label is None:
        return ""
    if _NEWICK_RESERVED.intersection(label):
        return "'" + label.replace("'", "''") + "'"
    return label


def to_newick(T: TreeStructure, precision: int = 6) -> str:
    """
    Newick text rooted at the tree root.

    Children are ordered by node id, points carry their labels, Steiner
    nodes are unlabeled, and branch lengths use `precision` significant
    digits.
    """
    T.validate()
    kids = T.children()
    rendered: dict[int, str] = {}
    for v in reversed(_preorder(T)):
        label = _newick_label(T.node_label(v))
        if kids[v]:
            inner = ",".join(f"{rendered.pop(c)}:{format_branch(wt, precision)}" for c, wt in kids[v])
            rendered[v] = f"({inner}){label}"
        else:
            rendered[v] = label
    return rendered[T.root] + ";"


def to_edge_list(T: TreeStructure) -> str:
    """Tab-separated "parent child weight" table with p<k>/s<k> node ids."""
    T.validate()
    lines = ["parent\tchild\tweight"]
    for parent, child, weight in sorted(T.edges):
        lines.append(f"{T.node_id(parent)}\t{T.node_id(child)}\t{format_float(weight)}")
    return "\n".join(lines) + "\n"


def sample_roots(n: int, count: int, seed: int) -> list[int]:
    """
    Sorted random root set (every point when count >= n).

    Raises:
        EmbeddingError: If count < 1 or n < 1.
    """
    if n < 1 or count < 1:
        detail = f"cannot sample {count} roots from {n} points"
        raise EmbeddingError(detail)
    if count >= n:
        return list(range(n))
    rng = np.random.Generator(np.random.PCG64(seed))
    return sorted(int(x) for x in rng.choice(n, size=count, replace=False))


def validate_roots(n: int, roots: Sequence[int]) -> list[int]:
    """Check explicit root ids, returning them as ints in the given order."""
    out = []
    for root in roots:
        if not 0 <= int(root) < n:
            raise EmbeddingError(ErrorMessages.INVALID_ROOT.format(root=root, n=n))
        out.append(int(root))
    return out


def embed(D: MatrixLike, w: int) -> tuple[DistanceMatrix, TreeStructure]:
    """Tree metric and explicit tree of the embedding rooted at w."""
    d_t = gromov_tree_metric(D, w)
    return d_t, reconstruct_tree(d_t, w)

