"""Community quality metrics stratified by Dunbar size class."""

from __future__ import annotations

import enum
import json
import math
from collections.abc import Iterable
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .cover import Community, Cover
from .graph import Graph

REPORT_SCHEMA_VERSION = 1

DESIRABLE_MIN = 4
DESIRABLE_MAX = 150


class SizeClass(str, enum.Enum):
    UNDERSIZED = "undersized"
    CLOSE_FRIEND = "close_friend"
    CASUAL_FRIEND = "casual_friend"
    ACQUAINTANCE = "acquaintance"
    JUST_A_FACE = "just_a_face"

    @property
    def bounds(self) -> tuple[int, int | None]:
        return _CLASS_BOUNDS[self]

    @property
    def range_label(self) -> str:
        lo, hi = self.bounds
        return f"{lo}-{hi}" if hi is not None else f"{lo}+"

    @classmethod
    def of(cls, size: int) -> SizeClass:
        if size < 1:
            raise ValueError(f"community size must be positive, got {size}")
        if size <= 3:
            return cls.UNDERSIZED
        if size <= 50:
            return cls.CLOSE_FRIEND
        if size <= 150:
            return cls.CASUAL_FRIEND
        if size <= 500:
            return cls.ACQUAINTANCE
        return cls.JUST_A_FACE


_CLASS_BOUNDS = {
    SizeClass.UNDERSIZED: (1, 3),
    SizeClass.CLOSE_FRIEND: (4, 50),
    SizeClass.CASUAL_FRIEND: (51, 150),
    SizeClass.ACQUAINTANCE: (151, 500),
    SizeClass.JUST_A_FACE: (501, None),
}


class SocialCircle(str, enum.Enum):
    """Finer six-circle grouping; the first three collapse into CLOSE_FRIEND."""

    UNDERSIZED = "undersized"
    SUPPORT_CLIQUE = "support_clique"
    SYMPATHY_GROUP = "sympathy_group"
    CLOSE_FRIEND = "close_friend"
    CASUAL_FRIEND = "casual_friend"
    ACQUAINTANCE = "acquaintance"
    JUST_A_FACE = "just_a_face"
    BEYOND = "beyond"

    @classmethod
    def of(cls, size: int) -> SocialCircle:
        if size < 1:
            raise ValueError(f"community size must be positive, got {size}")
        for hi, circle in (
            (3, cls.UNDERSIZED), (5, cls.SUPPORT_CLIQUE), (15, cls.SYMPATHY_GROUP),
            (50, cls.CLOSE_FRIEND), (150, cls.CASUAL_FRIEND), (500, cls.ACQUAINTANCE),
            (1500, cls.JUST_A_FACE),
        ):
            if size <= hi:
                return circle
        return cls.BEYOND

    def size_class(self) -> SizeClass:
        return {
            SocialCircle.UNDERSIZED: SizeClass.UNDERSIZED,
            SocialCircle.SUPPORT_CLIQUE: SizeClass.CLOSE_FRIEND,
            SocialCircle.SYMPATHY_GROUP: SizeClass.CLOSE_FRIEND,
            SocialCircle.CLOSE_FRIEND: SizeClass.CLOSE_FRIEND,
            SocialCircle.CASUAL_FRIEND: SizeClass.CASUAL_FRIEND,
            SocialCircle.ACQUAINTANCE: SizeClass.ACQUAINTANCE,
            SocialCircle.JUST_A_FACE: SizeClass.JUST_A_FACE,
            SocialCircle.BEYOND: SizeClass.JUST_A_FACE,
        }[self]


def is_desirable(size: int) -> bool:
    return DESIRABLE_MIN <= size <= DESIRABLE_MAX


class UndefinedMetricError(ValueError):
    pass


def _nodes(c: Community | Iterable[int]) -> frozenset[int]:
    return c.nodes if isinstance(c, Community) else frozenset(c)


# --- modularity -------------------------------------------------------------

def _community_modularity_terms(g: Graph, nodes: frozenset[int], membership: list[int]) -> float:
    """Inner double sum of the overlap-weighted modularity for one community, unnormalised."""
    adj = g.adj
    two_m = 2 * g.m
    edge_term = 0.0
    degree_term = 0.0
    for v in nodes:
        inv_v = 1.0 / membership[v]
        degree_term += len(adj[v]) * inv_v
        for w in adj[v]:
            if w in nodes:
                edge_term += inv_v / membership[w]
    return edge_term - degree_term * degree_term / two_m


def community_modularity(g: Graph, cover: Cover) -> list[float]:
    """Each community's share of the extended modularity, in cover order."""
    if g.m == 0:
        raise UndefinedMetricError("modularity is undefined on a graph with no edges")
    two_m = 2 * g.m
    return [
        _community_modularity_terms(g, c.nodes, cover.membership) / two_m
        for c in cover.communities
    ]


def extended_modularity(g: Graph, cover: Cover) -> float:
    """Overlap-aware modularity; node pairs weighted by ``1 / (O_v * O_w)``.

    Reduces to Newman modularity when the cover is a partition. Uncovered
    nodes contribute nothing.
    """
    return math.fsum(community_modularity(g, cover))


def partial_modularity_by_class(g: Graph, cover: Cover) -> dict[SizeClass, float]:
    parts = {sc: [] for sc in SizeClass}
    for c, q in zip(cover.communities, community_modularity(g, cover)):
        parts[SizeClass.of(len(c))].append(q)
    return {sc: math.fsum(qs) for sc, qs in parts.items()}


# --- per-community structure ---------------------------------------------------

@dataclass
class _Induced:
    size: int
    internal_edges: int
    boundary_edges: int
    volume: int
    in_triangle: int      # members on at least one internal triangle
    closed: int           # sum over members of internal edges among their internal neighbours (3 x triangles)
    triads: int           # sum over members of C(internal degree, 2)


def _induced(g: Graph, nodes: frozenset[int]) -> _Induced:
    adj = g.adj
    adj_sets = g.adj_sets
    inner: dict[int, list[int]] = {}
    volume = 0
    twice_internal = 0
    for v in nodes:
        nb = [w for w in adj[v] if w in nodes]
        inner[v] = nb
        volume += len(adj[v])
        twice_internal += len(nb)
    in_triangle = 0
    closed = 0
    triads = 0
    for v, nb in inner.items():
        d = len(nb)
        triads += d * (d - 1) // 2
        if d < 2:
            continue
        nb_set = set(nb)
        links = 0
        for w in nb:
            # neighbours of w inside nodes that are also neighbours of v
            links += len(nb_set & adj_sets[w])
        links //= 2
        closed += links
        if links:
            in_triangle += 1
    internal = twice_internal // 2
    return _Induced(
        size=len(nodes),
        internal_edges=internal,
        boundary_edges=volume - twice_internal,
        volume=volume,
        in_triangle=in_triangle,
        closed=closed,
        triads=triads,
    )


def _tpr(s: _Induced) -> float:
    return s.in_triangle / s.size


def _conductance(s: _Induced) -> float | None:
    return s.boundary_edges / s.volume if s.volume else None


def _density(s: _Induced) -> float | None:
    if s.size < 2:
        return None
    return s.internal_edges / (s.size * (s.size - 1) // 2)


def _transitivity(s: _Induced) -> float | None:
    return s.closed / s.triads if s.triads else None


def tpr(g: Graph, c: Community | Iterable[int]) -> float:
    """Share of members lying on a triangle whose three corners are all members."""
    nodes = _nodes(c)
    if not nodes:
        raise UndefinedMetricError("triangle participation of an empty community")
    return _tpr(_induced(g, nodes))


def conductance(g: Graph, c: Community | Iterable[int]) -> float:
    """Boundary edges over the members' total (whole-graph) degree."""
    value = _conductance(_induced(g, _nodes(c)))
    if value is None:
        raise UndefinedMetricError("conductance is undefined for zero total degree")
    return value


def internal_density(g: Graph, c: Community | Iterable[int]) -> float:
    value = _density(_induced(g, _nodes(c)))
    if value is None:
        raise UndefinedMetricError("internal density needs at least two members")
    return value


def transitivity(g: Graph, c: Community | Iterable[int]) -> float:
    """Global clustering of the induced subgraph: 3 x triangles / connected triples."""
    nodes = _nodes(c)
    value = _transitivity(_induced(g, nodes)) if len(nodes) >= 3 else None
    if value is None:
        raise UndefinedMetricError("transitivity needs at least one connected triple")
    return value


# --- cover-level summaries -------------------------------------------------------

def desirable_coverage(g: Graph, cover: Cover) -> float:
    """Fraction of graph nodes in at least one community of size 4..150."""
    if g.n == 0:
        return 0.0
    hit: set[int] = set()
    for c in cover.communities:
        if is_desirable(len(c)):
            hit.update(c.nodes)
    return len(hit) / g.n


@dataclass
class SizeDistribution:
    counts: dict[SizeClass, int]
    largest: int
    largest_ratio: float

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def desirable(self) -> int:
        return self.counts[SizeClass.CLOSE_FRIEND] + self.counts[SizeClass.CASUAL_FRIEND]

    @property
    def desirable_share(self) -> float:
        """Share of communities (not nodes) whose size is 4..150."""
        return self.desirable / self.total if self.total else 0.0


def size_distribution(cover: Cover, node_count: int | None = None) -> SizeDistribution:
    counts = {sc: 0 for sc in SizeClass}
    for s in cover.sizes:
        counts[SizeClass.of(s)] += 1
    largest = max(cover.sizes, default=0)
    n = cover.n if node_count is None else node_count
    return SizeDistribution(counts, largest, largest / n if n else 0.0)


# --- full report --------------------------------------------------------------------

@dataclass
class CommunityRow:
    index: int
    size: int
    size_class: SizeClass
    tpr: float
    conductance: float | None
    internal_density: float | None
    transitivity: float | None
    modularity: float | None


METRIC_FIELDS = ("tpr", "conductance", "internal_density", "transitivity")


@dataclass
class ClassSummary:
    count: int = 0
    partial_modularity: float | None = 0.0
    means: dict[str, float | None] = field(default_factory=dict)
    excluded: dict[str, int] = field(default_factory=dict)


@dataclass
class MetricReport:
    node_count: int
    edge_count: int
    community_count: int
    covered_nodes: int
    extended_modularity: float | None
    desirable_coverage: float
    largest_size: int
    largest_ratio: float
    classes: dict[SizeClass, ClassSummary]
    rows: list[CommunityRow]
    errors: list[str] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "schema_version": REPORT_SCHEMA_VERSION,
            "node_count": self.node_count,
            "edge_count": self.edge_count,
            "community_count": self.community_count,
            "covered_nodes": self.covered_nodes,
            "extended_modularity": self.extended_modularity,
            "desirable_coverage": self.desirable_coverage,
            "largest_size": self.largest_size,
            "largest_ratio": self.largest_ratio,
            "classes": {
                sc.value: {"range": sc.range_label, **asdict(summary)}
                for sc, summary in self.classes.items()
            },
            "errors": self.errors,
        }

    def write_json(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json_dict(), fh, indent=2, sort_keys=False)
            fh.write("\n")

    def write_csv(self, path: str | Path) -> None:
        header = ("community", "size", "size_class", *METRIC_FIELDS, "modularity")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(",".join(header) + "\n")
            for r in self.rows:
                vals = (r.tpr, r.conductance, r.internal_density, r.transitivity, r.modularity)
                fh.write(",".join([str(r.index), str(r.size), r.size_class.value,
                                   *("" if x is None else repr(x) for x in vals)]) + "\n")


def _mean(values: list[float]) -> float | None:
    return math.fsum(values) / len(values) if values else None


def evaluate(g: Graph, cover: Cover) -> MetricReport:
    """Compute every metric per community and aggregate per size class.

    Class means are unweighted over the communities in the class; undefined
    values are left out of the mean and counted in ``excluded``. An edgeless
    graph yields ``extended_modularity=None`` and an entry in ``errors``.
    """
    errors: list[str] = []
    try:
        shares: list[float | None] = list(community_modularity(g, cover))
    except UndefinedMetricError as exc:
        errors.append(str(exc))
        shares = [None] * len(cover)

    rows: list[CommunityRow] = []
    for i, (c, q) in enumerate(zip(cover.communities, shares)):
        s = _induced(g, c.nodes)
        rows.append(CommunityRow(
            index=i,
            size=s.size,
            size_class=SizeClass.of(s.size),
            tpr=_tpr(s),
            conductance=_conductance(s),
            internal_density=_density(s),
            transitivity=_transitivity(s) if s.size >= 3 else None,
            modularity=q,
        ))

    classes: dict[SizeClass, ClassSummary] = {}
    for sc in SizeClass:
        members = [r for r in rows if r.size_class is sc]
        summary = ClassSummary(count=len(members))
        summary.partial_modularity = (
            None if errors else math.fsum(r.modularity for r in members)  # type: ignore[misc]
        )
        for name in METRIC_FIELDS:
            vals = [getattr(r, name) for r in members]
            defined = [v for v in vals if v is not None]
            summary.means[name] = _mean(defined)
            summary.excluded[name] = len(vals) - len(defined)
        classes[sc] = summary

    dist = size_distribution(cover, g.n)
    total_q = None if errors else math.fsum(shares)  # type: ignore[arg-type]
    return MetricReport(
        node_count=g.n,
        edge_count=g.m,
        community_count=len(cover),
        covered_nodes=cover.covered,
        extended_modularity=total_q,
        desirable_coverage=desirable_coverage(g, cover),
        largest_size=dist.largest,
        largest_ratio=dist.largest_ratio,
        classes=classes,
        rows=rows,
        errors=errors,
    )
