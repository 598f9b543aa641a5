"""Two-phase Louvain modularity optimisation (local moving + aggregation)."""

from __future__ import annotations

import random

from ..cover import Partition, densify_labels
from ..graph import Graph

MIN_GAIN = 1e-7


class _Level:
    """Weighted graph at one aggregation level.

    ``adj[i]`` maps neighbour -> edge weight (no self entries); ``loops[i]``
    is the ordered-pair weight inside super-node ``i``; ``strength[i]`` is its
    total degree including the internal part.
    """

    __slots__ = ("adj", "loops", "strength")

    def __init__(self, adj: list[dict[int, float]], loops: list[float]):
        self.adj = adj
        self.loops = loops
        self.strength = [loops[i] + sum(adj[i].values()) for i in range(len(adj))]

    @classmethod
    def from_graph(cls, g: Graph) -> _Level:
        return cls([{w: 1.0 for w in nbrs} for nbrs in g.adj], [0.0] * g.n)

    def modularity(self, comm: list[int], m2: float) -> float:
        inside: dict[int, float] = {}
        tot: dict[int, float] = {}
        for i, c in enumerate(comm):
            tot[c] = tot.get(c, 0.0) + self.strength[i]
            w_in = self.loops[i]
            for j, w in self.adj[i].items():
                if comm[j] == c:
                    w_in += w
            inside[c] = inside.get(c, 0.0) + w_in
        return sum(inside[c] / m2 - (tot[c] / m2) ** 2 for c in tot)

    def aggregate(self, comm: list[int]) -> _Level:
        k = 1 + max(comm)
        adj: list[dict[int, float]] = [{} for _ in range(k)]
        loops = [0.0] * k
        for i, ci in enumerate(comm):
            loops[ci] += self.loops[i]
            row = adj[ci]
            for j, w in self.adj[i].items():
                cj = comm[j]
                if cj == ci:
                    loops[ci] += w
                else:
                    row[cj] = row.get(cj, 0.0) + w
        return _Level(adj, loops)


def _one_level(level: _Level, m2: float, rng: random.Random) -> tuple[list[int], bool]:
    n = len(level.adj)
    comm = list(range(n))
    tot = level.strength[:]
    moved_any = False
    cur_q = level.modularity(comm, m2)
    while True:
        moved = False
        order = list(range(n))
        rng.shuffle(order)
        for i in order:
            k_i = level.strength[i]
            own = comm[i]
            links: dict[int, float] = {}
            for j, w in level.adj[i].items():
                cj = comm[j]
                links[cj] = links.get(cj, 0.0) + w
            tot[own] -= k_i
            best = own
            best_gain = links.get(own, 0.0) - tot[own] * k_i / m2
            for c, w in links.items():
                gain = w - tot[c] * k_i / m2
                if gain > best_gain:
                    best, best_gain = c, gain
            tot[best] += k_i
            if best != own:
                comm[i] = best
                moved = True
        if not moved:
            break
        new_q = level.modularity(comm, m2)
        moved_any = True
        if new_q - cur_q < MIN_GAIN:
            break
        cur_q = new_q
    return densify_labels(comm), moved_any


def louvain(g: Graph, seed: int | None = None) -> Partition:
    """Louvain community detection with a seeded node order in every pass.

    Levels are aggregated until a level improves modularity by less than
    ``1e-7``; that last level's moves are then discarded.
    """
    rng = random.Random(seed)
    membership = list(range(g.n))
    if g.m == 0:
        return Partition(membership, iterations=0)
    m2 = 2.0 * g.m
    level = _Level.from_graph(g)
    q = level.modularity(list(range(g.n)), m2)
    levels = 0
    while True:
        comm, moved = _one_level(level, m2, rng)
        if not moved:
            break
        new_q = level.modularity(comm, m2)
        if new_q - q < MIN_GAIN:
            break
        levels += 1
        q = new_q
        membership = [comm[c] for c in membership]
        level = level.aggregate(comm)
    return Partition(membership, iterations=levels, extra={"modularity": q})
