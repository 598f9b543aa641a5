from __future__ import annotations

import random
from collections import Counter

from ..cover import Partition
from ..graph import Graph


def _majority(labels: list[int], nbrs: tuple[int, ...]) -> list[int]:
    counts = Counter(labels[w] for w in nbrs)
    best = max(counts.values())
    return sorted(lab for lab, c in counts.items() if c == best)


def label_propagation(g: Graph, seed: int | None = None, max_sweeps: int = 100) -> Partition:
    """Asynchronous label propagation.

    Every node starts with its own label. Each sweep visits the nodes in a
    fresh random order and sets each node's label to the most frequent label
    among its neighbours. A node whose current label is already among the
    most frequent keeps it; otherwise ties are broken uniformly at random.
    Stops once every
    node already carries one of its neighbourhood-majority labels, or after
    ``max_sweeps`` sweeps (``converged`` is then False).
    """
    rng = random.Random(seed)
    adj = g.adj
    labels = list(range(g.n))
    active = [v for v in range(g.n) if adj[v]]
    converged = False
    sweeps = 0
    while sweeps < max_sweeps:
        sweeps += 1
        order = active[:]
        rng.shuffle(order)
        for v in order:
            tied = _majority(labels, adj[v])
            if labels[v] in tied:
                continue
            labels[v] = tied[0] if len(tied) == 1 else rng.choice(tied)
        if all(labels[v] in _majority(labels, adj[v]) for v in active):
            converged = True
            break
    return Partition(labels, converged=converged, iterations=sweeps)
