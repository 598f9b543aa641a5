import gzip
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from commsize.graph import (
    DirectedEdgeList,
    EmptyGraphError,
    Graph,
    GraphLoadError,
    degree_distribution,
    load_directed,
    load_undirected,
    mutualize,
    write_degree_distribution,
)


def write(tmp_path, text, name="g.txt"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_load_triangle(tmp_path):
    g = load_undirected(write(tmp_path, "0 1\n1 2\n2 0\n"))
    assert (g.n, g.m) == (3, 3)
    assert sorted(g.edges()) == [(0, 1), (0, 2), (1, 2)]


def test_load_comments_duplicates_self_loops(tmp_path):
    text = "# Directed graph: x\n# FromNodeId\tToNodeId\n10\t20\n20\t10\n20 30\n30 30\n\n"
    g = load_undirected(write(tmp_path, text))
    assert (g.n, g.m) == (3, 2)
    assert g.stats.comments == 2
    assert g.stats.duplicates == 1
    assert g.stats.self_loops == 1
    assert g.labels == (10, 20, 30)
    assert g.node_id(30) == 2


def test_self_loop_only_is_empty(tmp_path):
    with pytest.raises(EmptyGraphError):
        load_undirected(write(tmp_path, "0 0\n"))


def test_bad_line_reports_line_number(tmp_path):
    p = write(tmp_path, "0 1\n# c\n1 x\n")
    with pytest.raises(GraphLoadError) as exc:
        load_undirected(p)
    assert exc.value.line_no == 3
    assert ":3:" in str(exc.value)


def test_single_token_line(tmp_path):
    with pytest.raises(GraphLoadError, match=":2:"):
        load_undirected(write(tmp_path, "0 1\n7\n"))


def test_missing_file(tmp_path):
    with pytest.raises(GraphLoadError):
        load_undirected(tmp_path / "nope.txt")


def test_gzip(tmp_path):
    p = tmp_path / "g.txt.gz"
    with gzip.open(p, "wt") as fh:
        fh.write("1 2\n2 3\n")
    assert load_undirected(p).m == 2


def test_directed_format_mutualizes(tmp_path):
    g = load_undirected(write(tmp_path, "1 2\n2 1\n1 3\n"), format="directed-edges")
    assert (g.n, g.m) == (2, 1)
    assert set(g.labels) == {1, 2}


def test_unknown_format(tmp_path):
    with pytest.raises(ValueError):
        load_undirected(write(tmp_path, "0 1\n"), format="csv")


def test_mutualize_drops_one_way():
    g = mutualize(DirectedEdgeList([("a", "b"), ("b", "a"), ("a", "c")]))
    assert g.m == 1 and g.n == 2
    assert set(g.labels) == {"a", "b"}


def test_mutualize_path():
    g = mutualize([("a", "b"), ("b", "a"), ("b", "c"), ("c", "b")])
    assert g.m == 2
    b = g.node_id("b")
    assert g.degree(b) == 2


def test_mutualize_four_cycle():
    ring = [(0, 1), (1, 2), (2, 3), (3, 0)]
    arcs = ring + [(v, u) for u, v in ring]
    g = mutualize(arcs)
    assert (g.n, g.m) == (4, 4)
    arcset = set(arcs)
    # every retained edge is reciprocated in the input
    for u, v in g.edges():
        a, b = g.label(u), g.label(v)
        assert (a, b) in arcset and (b, a) in arcset


def test_mutualize_empty_warns(caplog):
    g = mutualize([(1, 2)])
    assert g.n == 0
    assert "no reciprocated" in caplog.text


def test_load_directed(tmp_path):
    d = load_directed(write(tmp_path, "1 2\n1 2\n2 1\n"))
    assert len(d) == 3


def test_degree_distribution_star():
    g = Graph.from_edges([(0, 1), (0, 2), (0, 3)])
    assert degree_distribution(g) == [(1, 3), (2, 1), (3, 1), (4, 1)]


def test_degree_distribution_triangle(triangle):
    assert degree_distribution(triangle) == [(1, 2), (2, 2), (3, 2)]


def test_degree_distribution_csv(tmp_path, triangle):
    p = tmp_path / "d.csv"
    write_degree_distribution(triangle, p)
    assert p.read_text() == "rank,degree\n1,2\n2,2\n3,2\n"


def test_graph_rejects_asymmetric():
    with pytest.raises(ValueError):
        Graph([[1], []])


def test_graph_rejects_self_loop():
    with pytest.raises(ValueError):
        Graph([[0]])


def test_subgraph_keeps_labels(tmp_path):
    g = load_undirected(write(tmp_path, "5 6\n6 7\n7 5\n7 8\n"))
    sub = g.subgraph([g.node_id(5), g.node_id(6), g.node_id(7)])
    assert sub.m == 3
    assert set(sub.labels) == {5, 6, 7}


edge_lists = st.lists(
    st.tuples(st.integers(0, 40), st.integers(0, 40)), min_size=1, max_size=120
)


@given(edge_lists)
@settings(max_examples=150, deadline=None)
def test_graph_invariants(edges):
    g = Graph.from_labeled_edges(edges)
    assert sum(g.degrees) == 2 * g.m
    for v in range(g.n):
        nbrs = g.neighbors(v)
        assert list(nbrs) == sorted(set(nbrs))
        assert v not in nbrs
        for w in nbrs:
            assert v in g.neighbors(w)
    # dense relabelling round-trips
    assert sorted(g.node_id(lab) for lab in g.labels) == list(range(g.n))
    for v in range(g.n):
        assert g.node_id(g.label(v)) == v
    expected = {frozenset(e) for e in edges if e[0] != e[1]}
    assert {frozenset((g.label(u), g.label(v))) for u, v in g.edges()} == expected


@given(edge_lists)
@settings(max_examples=150, deadline=None)
def test_load_roundtrip_and_degree_sum(tmp_path_factory, edges):
    p = tmp_path_factory.mktemp("h") / "e.txt"
    p.write_text("".join(f"{a} {b}\n" for a, b in edges))
    if all(a == b for a, b in edges):
        with pytest.raises(EmptyGraphError):
            load_undirected(p)
        return
    g = load_undirected(p)
    assert sum(g.degrees) == 2 * g.m
    dist = degree_distribution(g)
    assert len(dist) == g.n
    degs = [d for _, d in dist]
    assert degs == sorted(degs, reverse=True)


@given(st.lists(st.tuples(st.integers(0, 15), st.integers(0, 15)), max_size=80))
@settings(max_examples=150, deadline=None)
def test_mutualize_idempotent(arcs):
    g = mutualize(arcs)
    sym = [(g.label(u), g.label(v)) for u, v in g.edges()]
    sym += [(b, a) for a, b in sym]
    h = mutualize(sym)
    key = lambda gr: {frozenset((gr.label(u), gr.label(v))) for u, v in gr.edges()}
    assert key(h) == key(g)
    assert set(h.labels) == set(g.labels)
    arcset = set(arcs)
    for a, b in (tuple(e) for e in key(g)):
        assert (a, b) in arcset and (b, a) in arcset
    assert all(d > 0 for d in g.degrees)
