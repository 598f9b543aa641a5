import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from commsize.baselines import fast_greedy, import_cover, label_propagation, louvain
from commsize.cover import CoverFormatError, Partition
from commsize.graph import Graph
from conftest import two_cliques_bridged
from oracles import (
    best_partitions,
    classic_modularity,
    clique_edges,
    partition_modularity_fast,
    set_partitions,
)

TWO_CLIQUES = [0] * 5 + [1] * 5


def ring_of_cliques(count=4, k=5):
    edges = []
    for i in range(count):
        edges += clique_edges(range(i * k, (i + 1) * k))
        edges.append(((i + 1) * k - 1, ((i + 1) * k) % (count * k)))
    return edges


def blocks_of(labels):
    out = {}
    for v, c in enumerate(labels):
        out.setdefault(c, set()).add(v)
    return frozenset(frozenset(b) for b in out.values())


# --- label propagation --------------------------------------------------------


def test_lpa_edgeless():
    g = Graph.from_edges([], n=6)
    p = label_propagation(g, seed=1)
    assert p.labels == list(range(6))
    assert p.community_count == 6
    assert p.converged


@pytest.mark.parametrize("seed", range(10))
def test_lpa_k4_single_community(seed):
    g = Graph.from_edges(clique_edges(range(4)))
    assert label_propagation(g, seed=seed).labels == [0, 0, 0, 0]


def test_lpa_bridged_k5_outcomes(bridged_k5):
    # a stable labelling is either the two cliques or (rarely) one shared label
    outcomes = {tuple(label_propagation(bridged_k5, seed=s).labels) for s in range(100)}
    assert tuple(TWO_CLIQUES) in outcomes
    assert outcomes <= {tuple(TWO_CLIQUES), (0,) * 10}


def test_lpa_deterministic_given_seed():
    nxg = nx.powerlaw_cluster_graph(300, 3, 0.4, seed=2)
    g = Graph.from_edges(nxg.edges(), n=300)
    assert label_propagation(g, seed=7).labels == label_propagation(g, seed=7).labels


def test_lpa_converged_state_is_stable():
    nxg = nx.powerlaw_cluster_graph(300, 3, 0.4, seed=2)
    g = Graph.from_edges(nxg.edges(), n=300)
    p = label_propagation(g, seed=3)
    assert p.converged
    for v in range(g.n):
        counts = {}
        for w in g.neighbors(v):
            counts[p.labels[w]] = counts.get(p.labels[w], 0) + 1
        assert counts[p.labels[v]] == max(counts.values())


def test_lpa_sweep_guard():
    nxg = nx.powerlaw_cluster_graph(500, 3, 0.1, seed=4)
    g = Graph.from_edges(nxg.edges(), n=500)
    p = label_propagation(g, seed=0, max_sweeps=1)
    assert p.iterations == 1
    assert p.converged in (True, False)


# --- louvain -------------------------------------------------------------------


@pytest.mark.parametrize("seed", range(5))
def test_louvain_bridged_k5(bridged_k5, seed):
    assert louvain(bridged_k5, seed=seed).labels == TWO_CLIQUES


def test_louvain_k6():
    g = Graph.from_edges(clique_edges(range(6)))
    assert louvain(g, seed=0).labels == [0] * 6


def test_louvain_ring_of_four_k5():
    edges = ring_of_cliques()
    g = Graph.from_edges(edges)
    cliques = [list(range(i * 5, i * 5 + 5)) for i in range(4)]
    # the best of all clique-level merges is no merge at all
    scored = []
    for p in set_partitions(range(4)):
        blocks = [sum((cliques[i] for i in b), []) for b in p]
        scored.append((partition_modularity_fast(20, edges, blocks), len(p)))
    assert max(scored)[1] == 4
    for seed in range(5):
        got = louvain(g, seed=seed)
        assert blocks_of(got.labels) == frozenset(frozenset(c) for c in cliques)


def test_louvain_edgeless():
    g = Graph.from_edges([], n=3)
    assert louvain(g).labels == [0, 1, 2]


def test_louvain_reported_modularity():
    nxg = nx.powerlaw_cluster_graph(200, 3, 0.5, seed=8)
    edges = list(nxg.edges())
    g = Graph.from_edges(edges, n=200)
    p = louvain(g, seed=1)
    assert p.extra["modularity"] == pytest.approx(classic_modularity(200, edges, p.labels), abs=1e-9)


def test_louvain_close_to_networkx():
    nxg = nx.powerlaw_cluster_graph(600, 3, 0.5, seed=11)
    edges = list(nxg.edges())
    g = Graph.from_edges(edges, n=600)
    ours = classic_modularity(600, edges, louvain(g, seed=0).labels)
    ref = nx.community.modularity(nxg, nx.community.louvain_communities(nxg, seed=0))
    assert ours == pytest.approx(ref, abs=0.03)


# --- fast greedy ------------------------------------------------------------------


def test_fast_greedy_bridged_k5(bridged_k5):
    assert fast_greedy(bridged_k5).labels == TWO_CLIQUES


def test_fast_greedy_single_edge():
    assert fast_greedy(Graph.from_edges([(0, 1)])).labels == [0, 0]


def test_fast_greedy_triangle_pendant(triangle_pendant):
    edges = list(triangle_pendant.edges())
    best, winners = best_partitions(4, edges)
    # the optimum is shared by the whole graph and {0,1},{2,3}; no merge from
    # the latter has a positive gain, so the agglomeration stops there
    assert best == pytest.approx(0.0, abs=1e-12)
    assert len(winners) == 2
    p = fast_greedy(triangle_pendant)
    assert blocks_of(p.labels) in winners
    assert blocks_of(p.labels) == frozenset({frozenset({0, 1}), frozenset({2, 3})})


def test_fast_greedy_components_independent():
    edges = clique_edges(range(4)) + clique_edges(range(4, 8))
    p = fast_greedy(Graph.from_edges(edges, n=9))
    assert blocks_of(p.labels) == frozenset(
        {frozenset(range(4)), frozenset(range(4, 8)), frozenset({8})}
    )


def test_fast_greedy_matches_networkx_modularity():
    nxg = nx.powerlaw_cluster_graph(400, 3, 0.5, seed=21)
    edges = list(nxg.edges())
    g = Graph.from_edges(edges, n=400)
    p = fast_greedy(g)
    ours = classic_modularity(400, edges, p.labels)
    assert p.extra["modularity"] == pytest.approx(ours, abs=1e-9)
    ref = nx.community.modularity(nxg, nx.community.greedy_modularity_communities(nxg))
    assert ours == pytest.approx(ref, abs=0.02)


# --- shared properties --------------------------------------------------------------


@st.composite
def graphs(draw):
    n = draw(st.integers(2, 25))
    p = draw(st.sampled_from([0.1, 0.2, 0.35, 0.5]))
    rng = random.Random(draw(st.integers(0, 10_000)))
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return n, edges


@given(graphs(), st.integers(0, 50))
@settings(max_examples=100, deadline=None)
def test_partitions_dominate_trivial_ones(data, seed):
    n, edges = data
    if not edges:
        return
    g = Graph.from_edges(edges, n=n)
    q_single = classic_modularity(n, edges, list(range(n)))
    q_whole = classic_modularity(n, edges, [0] * n)
    for part in (louvain(g, seed=seed), fast_greedy(g)):
        assert sorted(set(part.labels)) == list(range(part.community_count))
        cover = part.to_cover()
        assert cover.is_partition()
        q = classic_modularity(n, edges, part.labels)
        assert q >= q_single - 1e-12
        assert q >= q_whole - 1e-12
    lpa = label_propagation(g, seed=seed)
    assert lpa.to_cover().is_partition()
    assert lpa.iterations <= 100


def test_partition_densifies():
    p = Partition([7, 7, 3, 9])
    assert p.labels == [0, 0, 1, 2]
    assert p.groups() == [[0, 1], [2], [3]]


# --- import adapter --------------------------------------------------------------------


def test_import_cover(tmp_path):
    g = Graph.from_edges([(0, 1), (1, 2), (2, 3), (3, 4)])
    path = tmp_path / "c.txt"
    path.write_text("0 1 2\n2 3 4\n")
    cover = import_cover(path, g)
    assert len(cover) == 2
    assert cover.membership[2] == 2
    assert cover.membership == [1, 1, 2, 1, 1]


def test_import_cover_uncovered_nodes(tmp_path):
    g = Graph.from_edges([(0, 1), (1, 2), (2, 3)])
    path = tmp_path / "c.txt"
    path.write_text("0\t1\n")
    assert import_cover(path, g).membership == [1, 1, 0, 0]


def test_import_cover_original_labels(tmp_path):
    g = Graph.from_labeled_edges([(100, 200), (200, 300)])
    path = tmp_path / "c.txt"
    path.write_text("300 200\n")
    cover = import_cover(path, g)
    assert cover[0].nodes == frozenset({g.node_id(200), g.node_id(300)})


def test_import_cover_unknown_ids(tmp_path):
    g = Graph.from_edges([(0, 1)])
    path = tmp_path / "c.txt"
    path.write_text("0 999999\n1 42\n")
    with pytest.raises(CoverFormatError, match="999999") as exc:
        import_cover(path, g)
    assert "42" in str(exc.value)


def test_import_cover_empty(tmp_path):
    g = Graph.from_edges([(0, 1)])
    path = tmp_path / "c.txt"
    path.write_text("\n")
    with pytest.raises(CoverFormatError):
        import_cover(path, g)


def test_bridged_fixture_shape():
    g = Graph.from_edges(two_cliques_bridged(5))
    assert (g.n, g.m) == (10, 21)
