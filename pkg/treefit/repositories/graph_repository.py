"""Repository for edge-list files."""

import logging
import math
from collections.abc import Sequence
from pathlib import Path

from treefit.common.format_utils import format_float
from treefit.constants import ErrorMessages
from treefit.exceptions import EdgeListParseError
from treefit.models.graph import Edge, Graph

logger = logging.getLogger(__name__)


class GraphRepository:
    """Read and write whitespace-separated edge lists ("u v [w]" per line)."""

    def __init__(self, encoding: str = "utf-8") -> None:
        """
        Initialize the repository.

        Args:
            encoding: Text encoding of edge-list files.
        """
        self.encoding = encoding

    def load(self, path: str | Path) -> Graph:
        """
        Parse an edge list.

        Node tokens are arbitrary strings mapped to dense indices in
        first-seen order; '#' starts a comment and blank lines are ignored.

        Raises:
            EdgeListParseError: On malformed lines, bad weights, self-loops
                or duplicate edges (the message names the line number).
        """
        index_of: dict[str, int] = {}
        edges: list[Edge] = []
        seen: dict[tuple[int, int], int] = {}

        with Path(path).open(encoding=self.encoding) as handle:
            for lineno, raw in enumerate(handle, start=1):
                content = raw.split("#", 1)[0]
                tokens = content.split()
                if not tokens:
                    continue
                if len(tokens) not in (2, 3):
                    raise EdgeListParseError(
                        ErrorMessages.EDGE_PARSE_ERROR.format(line=lineno, content=raw.rstrip("\n")),
                        lineno,
                    )
                u_token, v_token = tokens[0], tokens[1]
                weight = 1.0
                if len(tokens) == 3:
                    try:
                        weight = float(tokens[2])
                    except ValueError:
                        raise EdgeListParseError(
                            ErrorMessages.EDGE_BAD_WEIGHT.format(line=lineno, token=tokens[2]),
                            lineno,
                        ) from None
                    if not math.isfinite(weight):
                        raise EdgeListParseError(
                            ErrorMessages.EDGE_BAD_WEIGHT.format(line=lineno, token=tokens[2]),
                            lineno,
                        )
                    if weight <= 0.0:
                        raise EdgeListParseError(
                            ErrorMessages.EDGE_NONPOSITIVE_WEIGHT.format(line=lineno, weight=weight),
                            lineno,
                        )
                if u_token == v_token:
                    raise EdgeListParseError(
                        ErrorMessages.EDGE_SELF_LOOP.format(line=lineno, node=u_token),
                        lineno,
                    )

                u = index_of.setdefault(u_token, len(index_of))
                v = index_of.setdefault(v_token, len(index_of))
                key = (min(u, v), max(u, v))
                if key in seen:
                    raise EdgeListParseError(
                        ErrorMessages.EDGE_DUPLICATE.format(line=lineno, u=u_token, v=v_token),
                        lineno,
                    )
                seen[key] = lineno
                edges.append((u, v, weight))

        logger.debug("Loaded edge list %s: %d nodes, %d edges", path, len(index_of), len(edges))
        return Graph(node_count=len(index_of), edges=tuple(edges), labels=tuple(index_of))

    def save(self, graph: Graph, path: str | Path) -> None:
        """
        Write a graph as an edge list.

        Unit-weight graphs are written as "u v" lines, others as "u v w"
        with shortest round-trip weights.
        """
        unit = graph.is_unit_weight
        lines = []
        for u, v, w in graph.edges:
            if unit:
                lines.append(f"{graph.label(u)} {graph.label(v)}")
            else:
                lines.append(f"{graph.label(u)} {graph.label(v)} {format_float(w)}")
        self._write_lines(path, lines)

    def save_blocks(self, graph: Graph, blocks: Sequence[int], path: str | Path) -> None:
        """Write the block assignment sidecar ("node block" per line)."""
        lines = [f"{graph.label(node)} {int(block)}" for node, block in enumerate(blocks)]
        self._write_lines(path, lines)

    def _write_lines(self, path: str | Path, lines: list[str]) -> None:
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        text = "\n".join(lines) + ("\n" if lines else "")
        target.write_text(text, encoding=self.encoding)
        logger.info("Wrote %s (%d lines)", target, len(lines))
