"""
Dendrogram and explicit tree types produced by the Gromov embedding.
"""

from collections import deque
from dataclasses import dataclass, field

from treefit.constants import ErrorMessages
from treefit.exceptions import MalformedTreeError

Merge = tuple[int, int, float]
TreeEdge = tuple[int, int, float]


@dataclass(frozen=True)
class Dendrogram:
    """
    Single-linkage merge history.

    Clusters 0..n-1 are the leaves; merge i creates cluster n + i from
    `left` and `right` at `height`.
    """

    leaf_count: int
    merges: tuple[Merge, ...] = ()

    def __post_init__(self) -> None:
        """Validate merge count and monotone heights."""
        n = self.leaf_count
        if n < 1:
            detail = "a dendrogram needs at least one leaf"
            raise MalformedTreeError(ErrorMessages.MALFORMED_TREE.format(detail=detail))
        if len(self.merges) != n - 1:
            detail = f"expected {n - 1} merges, got {len(self.merges)}"
            raise MalformedTreeError(ErrorMessages.MALFORMED_TREE.format(detail=detail))
        heights = [0.0] * n
        for i, (left, right, height) in enumerate(self.merges):
            if not (0 <= left < n + i and 0 <= right < n + i):
                detail = f"merge {i} references an unknown cluster"
                raise MalformedTreeError(ErrorMessages.MALFORMED_TREE.format(detail=detail))
            if height < max(heights[left], heights[right]):
                detail = f"merge {i} height decreases along a root path"
                raise MalformedTreeError(ErrorMessages.MALFORMED_TREE.format(detail=detail))
            heights.append(float(height))

    def members(self, cluster: int) -> list[int]:
        """Leaves under a cluster id, in ascending order."""
        n = self.leaf_count
        out: list[int] = []
        stack = [cluster]
        while stack:
            c = stack.pop()
            if c < n:
                out.append(c)
            else:
                left, right, _ = self.merges[c - n]
                stack.extend((left, right))
        return sorted(out)


@dataclass(frozen=True)
class TreeStructure:
    """
    Rooted weighted tree.

    Nodes 0..point_count-1 are the input points, higher ids are Steiner
    nodes. Edges are (parent, child, weight). Validation is explicit
    (`validate`) so that malformed trees can still be represented and
    rejected by the consumers.
    """

    point_count: int
    node_count: int
    root: int
    edges: tuple[TreeEdge, ...] = ()
    labels: tuple[str, ...] | None = field(default=None)

    def node_id(self, node: int) -> str:
        """`p<k>` for points, `s<k>` for Steiner nodes."""
        if node < self.point_count:
            return f"p{node}"
        return f"s{node - self.point_count}"

    def node_label(self, node: int) -> str | None:
        """Original label of a point (its id when unlabeled); None for Steiner nodes."""
        if node >= self.point_count:
            return None
        if self.labels is not None:
            return self.labels[node]
        return self.node_id(node)

    def parents(self) -> dict[int, tuple[int, float]]:
        """Map child -> (parent, weight)."""
        return {child: (parent, weight) for parent, child, weight in self.edges}

    def children(self) -> dict[int, list[tuple[int, float]]]:
        """Child lists ordered by node id."""
        out: dict[int, list[tuple[int, float]]] = {v: [] for v in range(self.node_count)}
        for parent, child, weight in self.edges:
            out[parent].append((child, weight))
        for kids in out.values():
            kids.sort()
        return out

    def validate(self) -> None:
        """Raise MalformedTreeError unless this is a connected rooted tree."""

        def fail(detail: str) -> None:
            raise MalformedTreeError(ErrorMessages.MALFORMED_TREE.format(detail=detail))

        if self.point_count < 1 or self.node_count < self.point_count:
            fail("node counts are inconsistent")
        if not 0 <= self.root < self.node_count:
            fail(f"root {self.root} is not a node")
        if len(self.edges) != self.node_count - 1:
            fail(f"expected {self.node_count - 1} edges, got {len(self.edges)}")
        if self.labels is not None and len(self.labels) != self.point_count:
            fail("label count does not match point count")
        parent_of: dict[int, int] = {}
        for parent, child, weight in self.edges:
            if not (0 <= parent < self.node_count and 0 <= child < self.node_count):
                fail(f"edge ({parent}, {child}) references an unknown node")
            if weight < 0.0:
                fail(f"edge ({parent}, {child}) has negative weight {weight}")
            if child == self.root or child in parent_of:
                fail(f"node {child} has more than one parent")
            parent_of[child] = parent
        # 根からの到達可能性で連結性と非巡回性を同時に確認
        kids = self.children()
        seen = {self.root}
        queue = deque([self.root])
        while queue:
            v = queue.popleft()
            for c, _ in kids[v]:
                if c in seen:
                    fail("cycle detected")
                seen.add(c)
                queue.append(c)
        if len(seen) != self.node_count:
            fail("tree is not connected")
