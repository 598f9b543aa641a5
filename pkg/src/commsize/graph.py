"""Undirected graph storage, SNAP edge-list ingestion and preprocessing."""

from __future__ import annotations

import gzip
import logging
from collections.abc import Hashable, Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from pathlib import Path

logger = logging.getLogger(__name__)


class GraphLoadError(ValueError):
    """Raised when an edge-list file cannot be parsed."""

    def __init__(self, message: str, path: str | None = None, line_no: int | None = None):
        where = ""
        if path is not None:
            where = f"{path}:"
            if line_no is not None:
                where += f"{line_no}:"
            where += " "
        super().__init__(where + message)
        self.path = path
        self.line_no = line_no


class EmptyGraphError(GraphLoadError):
    """Raised when a loaded graph ends up with no edges."""


@dataclass
class LoadStats:
    lines: int = 0
    comments: int = 0
    self_loops: int = 0
    duplicates: int = 0


class Graph:
    """Immutable simple undirected graph over dense node ids ``0..n-1``.

    Neighbour lists are kept sorted. ``labels[i]`` is the original id of
    dense node ``i``; when no labels are given the dense ids are their own
    labels.
    """

    __slots__ = ("_adj", "_adj_sets", "_m", "_labels", "_index", "stats")

    def __init__(
        self,
        adjacency: Sequence[Sequence[int]],
        labels: Sequence[Hashable] | None = None,
        stats: LoadStats | None = None,
    ):
        adj = tuple(tuple(sorted(set(nbrs))) for nbrs in adjacency)
        n = len(adj)
        half = 0
        for v, nbrs in enumerate(adj):
            if nbrs and (nbrs[0] < 0 or nbrs[-1] >= n):
                raise ValueError(f"neighbour of node {v} out of range")
            half += len(nbrs)
        self._adj = adj
        self._adj_sets: tuple[frozenset[int], ...] | None = None
        self._m = half // 2
        if labels is not None:
            if len(labels) != n:
                raise ValueError("label count does not match node count")
            self._labels = tuple(labels)
            self._index = {lab: i for i, lab in enumerate(self._labels)}
            if len(self._index) != n:
                raise ValueError("labels are not unique")
        else:
            self._labels = None
            self._index = None
        self.stats = stats or LoadStats()
        sets = self.adj_sets
        for v, nbrs in enumerate(adj):
            if v in sets[v]:
                raise ValueError(f"self-loop on node {v}")
            for w in nbrs:
                if v not in sets[w]:
                    raise ValueError("adjacency is not symmetric")

    @classmethod
    def from_edges(
        cls,
        edges: Iterable[tuple[int, int]],
        n: int | None = None,
        labels: Sequence[Hashable] | None = None,
    ) -> Graph:
        """Build from dense-id pairs; self-loops and duplicates are dropped."""
        pairs = list(edges)
        if n is None:
            n = 1 + max((max(u, v) for u, v in pairs), default=-1)
        adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in pairs:
            if u != v:
                adj[u].add(v)
                adj[v].add(u)
        return cls(adj, labels=labels)

    @classmethod
    def from_labeled_edges(cls, edges: Iterable[tuple[Hashable, Hashable]]) -> Graph:
        """Build from pairs of arbitrary hashable ids, densified in first-seen order."""
        index: dict[Hashable, int] = {}
        adj: list[set[int]] = []
        for a, b in edges:
            for x in (a, b):
                if x not in index:
                    index[x] = len(adj)
                    adj.append(set())
            u, v = index[a], index[b]
            if u != v:
                adj[u].add(v)
                adj[v].add(u)
        return cls(adj, labels=list(index))

    @property
    def n(self) -> int:
        return len(self._adj)

    node_count = n

    @property
    def m(self) -> int:
        return self._m

    edge_count = m

    @property
    def adj(self) -> tuple[tuple[int, ...], ...]:
        return self._adj

    @property
    def adj_sets(self) -> tuple[frozenset[int], ...]:
        if self._adj_sets is None:
            self._adj_sets = tuple(frozenset(nbrs) for nbrs in self._adj)
        return self._adj_sets

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    @property
    def degrees(self) -> list[int]:
        return [len(nbrs) for nbrs in self._adj]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj_sets[u]

    def edges(self) -> Iterator[tuple[int, int]]:
        """Yield every edge once as ``(u, v)`` with ``u < v``."""
        for u, nbrs in enumerate(self._adj):
            for v in nbrs:
                if v > u:
                    yield u, v

    @property
    def labels(self) -> tuple[Hashable, ...]:
        if self._labels is None:
            return tuple(range(self.n))
        return self._labels

    def label(self, v: int) -> Hashable:
        return v if self._labels is None else self._labels[v]

    def node_id(self, label: Hashable) -> int:
        """Dense id for an original label; raises ``KeyError`` if unknown."""
        if self._index is None:
            if isinstance(label, int) and 0 <= label < self.n:
                return label
            raise KeyError(label)
        return self._index[label]

    def has_label(self, label: Hashable) -> bool:
        if self._index is None:
            return isinstance(label, int) and 0 <= label < self.n
        return label in self._index

    def subgraph(self, nodes: Iterable[int]) -> Graph:
        """Induced subgraph, relabelled densely; labels carry the original labels."""
        keep = sorted(set(nodes))
        pos = {v: i for i, v in enumerate(keep)}
        adj = [[pos[w] for w in self._adj[v] if w in pos] for v in keep]
        return Graph(adj, labels=[self.label(v) for v in keep])

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


@dataclass
class DirectedEdgeList:
    """Raw directed follower-style edges over original ids."""

    edges: list[tuple[Hashable, Hashable]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.edges)


def open_text(path: Path):
    if path.suffix == ".gz":
        return gzip.open(path, "rt", encoding="utf-8")
    return open(path, encoding="utf-8")


def _iter_pairs(path: Path, stats: LoadStats) -> Iterator[tuple[Hashable, Hashable]]:
    with open_text(path) as fh:
        for line_no, raw in enumerate(fh, start=1):
            stats.lines += 1
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                stats.comments += 1
                continue
            parts = line.split()
            if len(parts) < 2:
                raise GraphLoadError(f"expected two node ids, got {line!r}", str(path), line_no)
            a, b = parts[0], parts[1]
            try:
                yield int(a), int(b)
            except ValueError:
                raise GraphLoadError(f"non-integer node id in {line!r}", str(path), line_no) from None


def load_undirected(path: str | Path, format: str = "edges") -> Graph:
    """Load a SNAP-style undirected edge list.

    ``format`` is ``"edges"`` for plain undirected lists or ``"directed-edges"``
    to read a directed list and keep only mutual edges (see :func:`mutualize`).
    Ids are densified in first-seen order. Self-loops and duplicate edges are
    dropped and counted in ``graph.stats``.
    """
    path = Path(path)
    if format == "directed-edges":
        return mutualize(load_directed(path))
    if format != "edges":
        raise ValueError(f"unknown edge-list format {format!r}")
    if not path.exists():
        raise GraphLoadError("file not found", str(path))

    stats = LoadStats()
    index: dict[int, int] = {}
    adj: list[set[int]] = []
    for a, b in _iter_pairs(path, stats):
        u = index.get(a)
        if u is None:
            u = index[a] = len(adj)
            adj.append(set())
        v = index.get(b)
        if v is None:
            v = index[b] = len(adj)
            adj.append(set())
        if u == v:
            stats.self_loops += 1
            continue
        nbrs = adj[u]
        if v in nbrs:
            stats.duplicates += 1
            continue
        nbrs.add(v)
        adj[v].add(u)

    g = Graph(adj, labels=list(index), stats=stats)
    if g.m == 0:
        raise EmptyGraphError(f"graph has no edges ({g.n} nodes)", str(path))
    if stats.self_loops or stats.duplicates:
        logger.info(
            "%s: dropped %d self-loops and %d duplicate edges",
            path, stats.self_loops, stats.duplicates,
        )
    return g


def load_directed(path: str | Path) -> DirectedEdgeList:
    """Read a directed edge list; direction is first id -> second id."""
    path = Path(path)
    if not path.exists():
        raise GraphLoadError("file not found", str(path))
    stats = LoadStats()
    return DirectedEdgeList(list(_iter_pairs(path, stats)))


def mutualize(directed: DirectedEdgeList | Iterable[tuple[Hashable, Hashable]]) -> Graph:
    """Undirected graph keeping only reciprocated edges, isolated nodes removed.

    Order of operations: deduplicate arcs, keep pairs present in both
    directions, then drop nodes left with degree 0.
    """
    arcs = directed.edges if isinstance(directed, DirectedEdgeList) else directed
    seen: set[tuple[Hashable, Hashable]] = set()
    for a, b in arcs:
        if a != b:
            seen.add((a, b))
    mutual = [(a, b) for a, b in seen if (b, a) in seen and _key(a) < _key(b)]
    # sort for a reproducible dense numbering
    mutual.sort(key=lambda e: (_key(e[0]), _key(e[1])))
    if not mutual:
        logger.warning("mutualize: no reciprocated edges, result is empty")
        return Graph([], labels=[])
    return Graph.from_labeled_edges(mutual)


def _key(x: Hashable) -> tuple[int, object]:
    # ints sort before strings so mixed-id files still order deterministically
    return (0, x) if isinstance(x, int) else (1, str(x))


def degree_distribution(g: Graph) -> list[tuple[int, int]]:
    """``(rank, degree)`` pairs, degrees descending, rank starting at 1."""
    if g.n == 0:
        raise ValueError("degree distribution of an empty graph")
    return list(enumerate(sorted(g.degrees, reverse=True), start=1))


def write_degree_distribution(g: Graph, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("rank,degree\n")
        for rank, deg in degree_distribution(g):
            fh.write(f"{rank},{deg}\n")
