"""Maximal clique enumeration.

Bron-Kerbosch with Tomita pivoting inside a degeneracy ordering of the outer
loop, so each vertex only branches over its later-ordered neighbours. Cliques
are returned as sorted tuples of dense node ids in canonical order (size
descending, then lexicographic).
"""

from __future__ import annotations

import multiprocessing
from collections.abc import Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .cover import canonical_key
from .graph import Graph

Clique = tuple[int, ...]

BRUTE_FORCE_LIMIT = 20


class GraphTooLargeError(ValueError):
    pass


def degeneracy_ordering(g: Graph) -> tuple[list[int], list[int]]:
    """Return ``(order, core)``: a smallest-last vertex order and core numbers.

    Bucket-queue implementation (Matula & Beck), linear in ``n + m``.
    """
    n = g.n
    deg = g.degrees
    max_deg = max(deg, default=0)
    buckets: list[set[int]] = [set() for _ in range(max_deg + 1)]
    for v, d in enumerate(deg):
        buckets[d].add(v)
    removed = [False] * n
    order: list[int] = []
    core = [0] * n
    k = 0
    lo = 0
    adj = g.adj
    for _ in range(n):
        while not buckets[lo]:
            lo += 1
        v = buckets[lo].pop()
        k = max(k, lo)
        core[v] = k
        removed[v] = True
        order.append(v)
        for w in adj[v]:
            if not removed[w]:
                d = deg[w]
                buckets[d].discard(w)
                deg[w] = d - 1
                buckets[d - 1].add(w)
                if d - 1 < lo:
                    lo = d - 1
    return order, core


def _expand(adj_sets, R: list[int], P: set[int], X: set[int], min_size: int, out: list[Clique]) -> None:
    if not P:
        if not X and len(R) >= min_size:
            out.append(tuple(sorted(R)))
        return
    if len(R) + len(P) < min_size:
        return
    # Tomita pivot: the vertex of P | X with most neighbours in P
    best = -1
    pivot = -1
    for u in P:
        c = len(P & adj_sets[u])
        if c > best:
            best, pivot = c, u
    for u in X:
        c = len(P & adj_sets[u])
        if c > best:
            best, pivot = c, u
    for v in list(P - adj_sets[pivot]):
        nv = adj_sets[v]
        R.append(v)
        _expand(adj_sets, R, P & nv, X & nv, min_size, out)
        R.pop()
        P.discard(v)
        X.add(v)
        if len(R) + len(P) < min_size:
            return


def _cliques_from_roots(adj_sets, position, roots: Iterable[int], min_size: int) -> list[Clique]:
    out: list[Clique] = []
    for v in roots:
        pv = position[v]
        later = set()
        earlier = set()
        for w in adj_sets[v]:
            (later if position[w] > pv else earlier).add(w)
        if 1 + len(later) < min_size:
            continue
        _expand(adj_sets, [v], later, earlier, min_size, out)
    return out


_worker_state: tuple | None = None


def _init_worker(adj_sets, position, min_size) -> None:
    global _worker_state
    _worker_state = (adj_sets, position, min_size)


def _worker_run(roots: list[int]) -> list[Clique]:
    adj_sets, position, min_size = _worker_state  # type: ignore[misc]
    return _cliques_from_roots(adj_sets, position, roots, min_size)


def maximal_cliques(g: Graph, min_size: int = 3, workers: int = 1) -> list[Clique]:
    """All maximal cliques of ``g`` with at least ``min_size`` members.

    Each maximal clique is reported exactly once, as a sorted tuple, and the
    list is in canonical order. With ``workers > 1`` the outer vertices are
    split across forked processes; the merged output is identical.
    """
    if min_size < 1:
        raise ValueError("min_size must be >= 1")
    order, core = degeneracy_ordering(g)
    position = [0] * g.n
    for i, v in enumerate(order):
        position[v] = i
    # a clique of size s needs every member to have core number >= s - 1
    roots = [v for v in order if core[v] + 1 >= min_size]
    adj_sets = g.adj_sets

    if workers > 1 and len(roots) > 1000:
        # round-robin so high-core vertices are spread across chunks
        chunks = [roots[i::workers * 4] for i in range(workers * 4)]
        ctx = multiprocessing.get_context("fork")
        found: list[Clique] = []
        with ProcessPoolExecutor(
            max_workers=workers, mp_context=ctx,
            initializer=_init_worker, initargs=(adj_sets, position, min_size),
        ) as pool:
            for part in pool.map(_worker_run, chunks):
                found.extend(part)
    else:
        found = _cliques_from_roots(adj_sets, position, roots, min_size)
    found.sort(key=canonical_key)
    return found


def brute_force_maximal_cliques(g: Graph) -> list[Clique]:
    """Exhaustive subset search for maximal cliques; test oracle for small graphs."""
    n = g.n
    if n > BRUTE_FORCE_LIMIT:
        raise GraphTooLargeError(f"brute force refused: {n} nodes > {BRUTE_FORCE_LIMIT}")
    nbr_mask = [0] * n
    for u, v in g.edges():
        nbr_mask[u] |= 1 << v
        nbr_mask[v] |= 1 << u
    members_of = [[v for v in range(n) if s >> v & 1] for s in range(1 << n)] if n <= 12 else None

    def members(s: int) -> list[int]:
        if members_of is not None:
            return members_of[s]
        return [v for v in range(n) if s >> v & 1]

    out: list[Clique] = []
    for s in range(1, 1 << n):
        vs = members(s)
        if any((s & ~(1 << v)) & ~nbr_mask[v] for v in vs):
            continue
        # maximal iff no outside vertex is adjacent to every member
        if any(not (s >> u & 1) and (s & nbr_mask[u]) == s for u in range(n)):
            continue
        out.append(tuple(vs))
    out.sort(key=canonical_key)
    return out


def write_cliques(cliques: Sequence[Clique], g: Graph, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for c in cliques:
            fh.write(" ".join(str(g.label(v)) for v in c))
            fh.write("\n")
