"""Communities, covers and partitions, plus the one-community-per-line file format."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from pathlib import Path

from .graph import Graph, open_text


class CoverFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Community:
    nodes: frozenset[int]
    seed: tuple[int, ...] | None = None

    def __post_init__(self):
        if not self.nodes:
            raise ValueError("community must be non-empty")
        if self.seed is not None and not self.nodes.issuperset(self.seed):
            raise ValueError("seed clique must be contained in the community")

    def __len__(self) -> int:
        return len(self.nodes)

    def __iter__(self):
        return iter(self.nodes)

    def __contains__(self, v: object) -> bool:
        return v in self.nodes

    def sorted_nodes(self) -> list[int]:
        return sorted(self.nodes)


def canonical_key(nodes: Iterable[int]) -> tuple[int, tuple[int, ...]]:
    """Sort key: larger sets first, ties broken lexicographically on sorted ids."""
    members = tuple(sorted(nodes))
    return (-len(members), members)


class Cover:
    """A collection of possibly overlapping communities over ``n`` nodes.

    ``membership[v]`` is the number of communities containing ``v``; zero
    means the node is uncovered.
    """

    def __init__(self, n: int, communities: Iterable[Community | Iterable[int]] = ()):
        self.n = n
        comms: list[Community] = []
        membership = [0] * n
        for c in communities:
            if not isinstance(c, Community):
                c = Community(frozenset(c))
            for v in c.nodes:
                if not 0 <= v < n:
                    raise ValueError(f"community member {v} is not a node of the graph")
                membership[v] += 1
            comms.append(c)
        self.communities: list[Community] = comms
        self.membership: list[int] = membership

    def __len__(self) -> int:
        return len(self.communities)

    def __iter__(self):
        return iter(self.communities)

    def __getitem__(self, i: int) -> Community:
        return self.communities[i]

    @property
    def sizes(self) -> list[int]:
        return [len(c) for c in self.communities]

    @property
    def covered(self) -> int:
        return sum(1 for o in self.membership if o > 0)

    def is_partition(self) -> bool:
        return all(o == 1 for o in self.membership)

    def node_sets(self) -> list[frozenset[int]]:
        return [c.nodes for c in self.communities]

    def __repr__(self) -> str:
        return f"Cover(n={self.n}, communities={len(self.communities)})"


@dataclass
class Partition:
    """Total assignment of every node to exactly one community, ids dense ``0..k-1``."""

    labels: list[int]
    converged: bool = True
    iterations: int = 0
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        self.labels = densify_labels(self.labels)

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def community_count(self) -> int:
        return 1 + max(self.labels, default=-1)

    def groups(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.community_count)]
        for v, c in enumerate(self.labels):
            out[c].append(v)
        return out

    def to_cover(self) -> Cover:
        return Cover(self.n, (Community(frozenset(g)) for g in self.groups()))


def densify_labels(labels: Sequence[int]) -> list[int]:
    """Renumber labels to ``0..k-1`` in order of first appearance."""
    remap: dict[int, int] = {}
    return [remap.setdefault(lab, len(remap)) for lab in labels]


def write_cover(cover: Cover, g: Graph, path: str | Path) -> None:
    """One community per line, space-separated original node ids in dense-id order."""
    with open(path, "w", encoding="utf-8") as fh:
        for c in cover.communities:
            fh.write(" ".join(str(g.label(v)) for v in c.sorted_nodes()))
            fh.write("\n")


def read_cover(path: str | Path, g: Graph) -> Cover:
    """Read a one-community-per-line file, resolving ids through the graph's labels.

    Blank and ``#`` lines are skipped; repeated ids within a line count once.
    Raises :class:`CoverFormatError` on an empty file or on ids the graph
    does not know (all offenders are listed).
    """
    path = Path(path)
    communities: list[Community] = []
    unknown: list[str] = []
    with open_text(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            members: set[int] = set()
            for tok in line.split():
                try:
                    lab: object = int(tok)
                except ValueError:
                    lab = tok
                if g.has_label(lab):
                    members.add(g.node_id(lab))
                else:
                    unknown.append(tok)
            if members:
                communities.append(Community(frozenset(members)))
    if unknown:
        shown = ", ".join(dict.fromkeys(unknown))
        raise CoverFormatError(f"{path}: unknown node ids: {shown}")
    if not communities:
        raise CoverFormatError(f"{path}: no communities in file")
    return Cover(g.n, communities)
