"""Clauset-Newman-Moore greedy modularity agglomeration."""

from __future__ import annotations

import heapq

from ..cover import Partition
from ..graph import Graph

# gains at or below this are treated as zero; exact ties must not merge on rounding noise
MIN_GAIN = 1e-12


def fast_greedy(g: Graph) -> Partition:
    """Merge the adjacent community pair with the largest modularity gain
    until no merge has a positive gain.

    Ties on the gain go to the lexicographically smallest ``(i, j)`` pair of
    community ids; the merged community keeps the smaller id. Only adjacent
    communities are ever merged, so components are handled independently.
    """
    n = g.n
    if g.m == 0:
        return Partition(list(range(n)), extra={"merges": 0})
    m2 = 2.0 * g.m
    a = [d / m2 for d in g.degrees]
    dq: list[dict[int, float]] = [{} for _ in range(n)]
    heap: list[tuple[float, int, int]] = []
    for u, v in g.edges():
        val = 2.0 * (1.0 / m2 - a[u] * a[v])
        dq[u][v] = val
        dq[v][u] = val
        heap.append((-val, u, v))
    heapq.heapify(heap)
    alive = [True] * n
    parent = list(range(n))
    q = -sum(x * x for x in a)
    merges = 0

    while heap:
        neg, i, j = heapq.heappop(heap)
        if not (alive[i] and alive[j]) or dq[i].get(j) != -neg:
            continue
        if -neg <= MIN_GAIN:
            break
        q += -neg
        merges += 1
        di, dj = dq[i], dq[j]
        del di[j]
        del dj[i]
        for k in set(di) | set(dj):
            if k in di and k in dj:
                val = di[k] + dj[k]
            elif k in di:
                val = di[k] - 2.0 * a[j] * a[k]
            else:
                val = dj[k] - 2.0 * a[i] * a[k]
            di[k] = val
            dk = dq[k]
            dk[i] = val
            dk.pop(j, None)
            heapq.heappush(heap, (-val, min(i, k), max(i, k)))
        dq[j] = {}
        a[i] += a[j]
        a[j] = 0.0
        alive[j] = False
        parent[j] = i

    def root(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    return Partition([root(v) for v in range(n)], extra={"merges": merges, "modularity": q})
