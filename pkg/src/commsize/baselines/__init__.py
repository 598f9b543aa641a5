"""Disjoint baseline detectors and an adapter for externally computed covers."""

from pathlib import Path

from ..cover import Cover, read_cover
from ..graph import Graph
from .fast_greedy import fast_greedy
from .label_propagation import label_propagation
from .louvain import louvain


def import_cover(path: str | Path, g: Graph) -> Cover:
    """Load a cover produced elsewhere (Infomap, leading eigenvector, ground truth)."""
    return read_cover(path, g)


__all__ = ["fast_greedy", "import_cover", "label_propagation", "louvain"]
