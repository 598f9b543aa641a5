"""Size-aware community detection and evaluation.

Clique augmentation (CAA), label propagation, Louvain and CNM detectors, and
quality metrics grouped by Dunbar size class.
"""

from .caa import CaaParams, detect, filter_overlapping_cliques, grow_community
from .cliques import brute_force_maximal_cliques, maximal_cliques
from .cover import Community, Cover, Partition, read_cover, write_cover
from .graph import (
    DirectedEdgeList,
    EmptyGraphError,
    Graph,
    GraphLoadError,
    degree_distribution,
    load_directed,
    load_undirected,
    mutualize,
)
from .metrics import (
    MetricReport,
    SizeClass,
    conductance,
    desirable_coverage,
    evaluate,
    extended_modularity,
    internal_density,
    partial_modularity_by_class,
    size_distribution,
    tpr,
    transitivity,
)

__version__ = "0.1.0"
