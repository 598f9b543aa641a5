"""Clique Augmentation: seed communities from maximal cliques and grow them.

Pipeline: enumerate maximal cliques, drop seeds that overlap an already kept
(larger) seed by more than ``overlap`` of the smaller one, then grow each
remaining seed by admitting every outside neighbour whose edge count into
the community reaches ``(|C| - 1) * grow``. Growth proceeds in rounds with the
threshold frozen at the round's starting size, until a round admits nobody.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

from .cliques import Clique, maximal_cliques
from .cover import Community, Cover, canonical_key
from .graph import Graph

logger = logging.getLogger(__name__)


def _exact(x: float) -> Fraction:
    # 0.7 means 7/10, not the nearest binary double
    return Fraction(str(x))


@dataclass(frozen=True)
class CaaParams:
    grow: float = 0.7
    overlap: float = 0.0
    min_clique_size: int = 3

    def __post_init__(self):
        if not 0.0 <= self.grow <= 1.0:
            raise ValueError(f"growing threshold must lie in [0, 1], got {self.grow}")
        if not 0.0 <= self.overlap <= 1.0:
            raise ValueError(f"overlapping threshold must lie in [0, 1], got {self.overlap}")
        if self.min_clique_size < 2:
            raise ValueError(f"min_clique_size must be >= 2, got {self.min_clique_size}")


def filter_overlapping_cliques(cliques: Sequence[Iterable[int]], overlap: float) -> list[Clique]:
    """Scan cliques in canonical order, keeping each one whose overlap with
    every kept clique is at most ``overlap * min(|c|, |r|)``.

    Input that is not already canonically ordered is sorted first. Equality
    with the bound keeps the candidate, so ``overlap=1`` keeps everything.
    """
    ordered = sorted((tuple(sorted(c)) for c in cliques), key=canonical_key)
    frac = _exact(overlap)
    num, den = frac.numerator, frac.denominator
    kept: list[Clique] = []
    # node -> indices of kept cliques containing it
    owners: dict[int, list[int]] = defaultdict(list)
    for c in ordered:
        if num == 0:
            ok = not any(v in owners for v in c)
        else:
            shared: dict[int, int] = defaultdict(int)
            for v in c:
                for r in owners.get(v, ()):
                    shared[r] += 1
            size_c = len(c)
            ok = all(
                k * den <= num * min(size_c, len(kept[r])) for r, k in shared.items()
            )
        if ok:
            idx = len(kept)
            kept.append(c)
            for v in c:
                owners[v].append(idx)
    return kept


def growth_round(g: Graph, community: set[int] | frozenset[int], grow: float) -> set[int]:
    """Outside nodes admitted by one round from the given community state."""
    frac = _exact(grow)
    need = (len(community) - 1) * frac.numerator
    den = frac.denominator
    adj = g.adj
    counts: dict[int, int] = defaultdict(int)
    for v in community:
        for w in adj[v]:
            if w not in community:
                counts[w] += 1
    return {u for u, k in counts.items() if k * den >= need}


def grow_community(g: Graph, seed: Iterable[int], grow: float) -> Community:
    """Grow ``seed`` to the fixpoint of the batch admission rule."""
    seed_t = tuple(sorted(seed))
    frac = _exact(grow)
    num, den = frac.numerator, frac.denominator
    adj = g.adj
    members: set[int] = set(seed_t)
    # edges from each outside neighbour into the current community
    incoming: dict[int, int] = defaultdict(int)
    for v in seed_t:
        for w in adj[v]:
            if w not in members:
                incoming[w] += 1
    while True:
        need = (len(members) - 1) * num
        batch = [u for u, k in incoming.items() if k * den >= need]
        if not batch:
            break
        for u in batch:
            members.add(u)
            del incoming[u]
        for u in batch:
            for w in adj[u]:
                if w not in members:
                    incoming[w] += 1
    return Community(frozenset(members), seed=seed_t)


def detect(g: Graph, params: CaaParams | None = None, workers: int = 1) -> Cover:
    """Run the full clique-augmentation pipeline and return the resulting cover.

    Communities whose node sets coincide are kept once (the first by seed
    order). Output is in canonical order.
    """
    params = params or CaaParams()
    cliques = maximal_cliques(g, params.min_clique_size, workers=workers)
    seeds = filter_overlapping_cliques(cliques, params.overlap)
    logger.info("caa: %d maximal cliques, %d seeds after overlap filter", len(cliques), len(seeds))
    seen: set[frozenset[int]] = set()
    grown: list[Community] = []
    for s in seeds:
        c = grow_community(g, s, params.grow)
        if c.nodes in seen:
            continue
        seen.add(c.nodes)
        grown.append(c)
    grown.sort(key=lambda c: canonical_key(c.nodes))
    return Cover(g.n, grown)
