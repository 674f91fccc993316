"""
Graph, feature matrix and stochastic block model value types.
"""

from dataclasses import dataclass, field
from typing_extensions import Self

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from scipy.sparse import coo_matrix, csr_matrix

from treefit.constants import ErrorMessages
from treefit.exceptions import ZeroNormRowError

Edge = tuple[int, int, float]


@dataclass(frozen=True)
class Graph:
    """
    Weighted undirected graph on nodes 0..node_count-1.

    Edges are stored once per unordered pair with the endpoint order they were
    given in; labels map dense indices back to the original identifiers.
    """

    node_count: int
    edges: tuple[Edge, ...] = ()
    labels: tuple[str, ...] | None = field(default=None)

    def __post_init__(self) -> None:
        """Validate edge invariants (no self-loops, duplicates or bad weights)."""
        if self.node_count < 0:
            msg = f"node_count must be nonnegative, got {self.node_count}"
            raise ValueError(msg)
        seen: set[tuple[int, int]] = set()
        normalized: list[Edge] = []
        for u, v, w in self.edges:
            u, v, w = int(u), int(v), float(w)
            if not (0 <= u < self.node_count and 0 <= v < self.node_count) or u == v:
                raise ValueError(
                    ErrorMessages.INVALID_EDGE.format(u=u, v=v, n=self.node_count),
                )
            if not w > 0.0:
                msg = f"Edge ({u}, {v}) weight must be positive, got {w}"
                raise ValueError(msg)
            key = (min(u, v), max(u, v))
            if key in seen:
                msg = f"Duplicate edge ({u}, {v})"
                raise ValueError(msg)
            seen.add(key)
            normalized.append((u, v, w))
        object.__setattr__(self, "edges", tuple(normalized))
        if self.labels is not None:
            if len(self.labels) != self.node_count:
                msg = f"{len(self.labels)} labels for {self.node_count} nodes"
                raise ValueError(msg)
            object.__setattr__(self, "labels", tuple(str(x) for x in self.labels))

    def label(self, index: int) -> str:
        """Original identifier of a node (its index when unlabeled)."""
        if self.labels is not None:
            return self.labels[index]
        return str(index)

    @property
    def is_unit_weight(self) -> bool:
        """True when every edge has weight exactly 1."""
        return all(w == 1.0 for _, _, w in self.edges)

    def edge_set(self) -> set[tuple[int, int]]:
        """Unordered edge pairs as (min, max) tuples."""
        return {(min(u, v), max(u, v)) for u, v, _ in self.edges}

    def degrees(self) -> np.ndarray:
        """Degree of every node."""
        deg = np.zeros(self.node_count, dtype=np.int64)
        for u, v, _ in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def to_csr(self) -> csr_matrix:
        """Symmetric sparse adjacency matrix with edge weights."""
        n = self.node_count
        if not self.edges:
            return csr_matrix((n, n), dtype=np.float64)
        rows = [u for u, v, _ in self.edges] + [v for u, v, _ in self.edges]
        cols = [v for u, v, _ in self.edges] + [u for u, v, _ in self.edges]
        data = [w for _, _, w in self.edges] * 2
        return coo_matrix((data, (rows, cols)), shape=(n, n)).tocsr()


@dataclass(frozen=True, eq=False)
class FeatureMatrix:
    """Rows of real features; every row must have a nonzero norm."""

    values: np.ndarray
    labels: tuple[str, ...] | None = field(default=None)

    def __post_init__(self) -> None:
        """Validate shape and nonzero rows."""
        arr = np.array(self.values, dtype=np.float64)
        if arr.ndim != 2:
            msg = f"Feature matrix must be 2-D, got shape {arr.shape}"
            raise ValueError(msg)
        norms = np.linalg.norm(arr, axis=1)
        zero_rows = np.flatnonzero(norms == 0.0)
        if zero_rows.size:
            raise ZeroNormRowError(ErrorMessages.ZERO_NORM_ROW.format(row=int(zero_rows[0])))
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def n(self) -> int:
        """Number of rows."""
        return int(self.values.shape[0])

    @property
    def d(self) -> int:
        """Feature dimension."""
        return int(self.values.shape[1])


class SbmSpec(BaseModel):
    """Stochastic block model parameters."""

    model_config = ConfigDict(frozen=True)

    block_sizes: list[int] = Field(min_length=1)
    p_in: float = Field(ge=0.0, le=1.0)
    p_out: float = Field(ge=0.0, le=1.0)
    seed: int = Field(default=0, ge=0, lt=2**64)

    @field_validator("block_sizes")
    @classmethod
    def validate_block_sizes(cls, v: list[int]) -> list[int]:
        """ブロックサイズが正であることを検証"""
        if any(size <= 0 for size in v):
            msg = "block sizes must be positive"
            raise ValueError(msg)
        return v

    @model_validator(mode="after")
    def validate_probabilities(self) -> Self:
        """p_out <= p_in であることを検証"""
        if self.p_out > self.p_in:
            msg = "p_out must not exceed p_in"
            raise ValueError(msg)
        return self

    @property
    def node_count(self) -> int:
        """Total number of nodes."""
        return sum(self.block_sizes)
