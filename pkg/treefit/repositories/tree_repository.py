"""Repository for tree exports (Newick and TSV edge tables)."""

import logging
from pathlib import Path

from treefit.models.tree import TreeStructure
from treefit.services.tree_embed_service import to_edge_list, to_newick

logger = logging.getLogger(__name__)


class TreeRepository:
    """Write reconstructed trees to disk."""

    def __init__(self, precision: int = 6, encoding: str = "utf-8") -> None:
        """
        Initialize the repository.

        Args:
            precision: Significant digits of Newick branch lengths.
            encoding: Text encoding of written files.
        """
        self.precision = precision
        self.encoding = encoding

    def save_newick(self, tree: TreeStructure, path: str | Path) -> None:
        """Write the Newick text followed by a newline."""
        self._write(path, to_newick(tree, self.precision) + "\n")

    def save_edges(self, tree: TreeStructure, path: str | Path) -> None:
        """Write the TSV edge table."""
        self._write(path, to_edge_list(tree))

    def _write(self, path: str | Path, text: str) -> None:
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text, encoding=self.encoding)
        logger.info("Wrote %s", target)
