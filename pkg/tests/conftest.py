from __future__ import annotations

import os
from pathlib import Path

import pytest

from commsize.graph import Graph
from oracles import clique_edges

_ACCEPTANCE: list[tuple[str, bool, str]] = []


def record_criterion(name: str, passed: bool, detail: str = "") -> None:
    _ACCEPTANCE.append((name, passed, detail))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _ACCEPTANCE:
        line = f"{'PASS' if passed else 'FAIL'}  {name}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)


def two_cliques_bridged(k: int) -> list[tuple[int, int]]:
    """Two K_k on 0..k-1 and k..2k-1, joined by the edge (k-1, k)."""
    return clique_edges(range(k)) + clique_edges(range(k, 2 * k)) + [(k - 1, k)]


@pytest.fixture
def bridged_k5() -> Graph:
    return Graph.from_edges(two_cliques_bridged(5))


@pytest.fixture
def bridged_k4() -> Graph:
    return Graph.from_edges(two_cliques_bridged(4))


@pytest.fixture
def triangle() -> Graph:
    return Graph.from_edges([(0, 1), (1, 2), (2, 0)])


@pytest.fixture
def triangle_pendant() -> Graph:
    return Graph.from_edges([(0, 1), (0, 2), (1, 2), (2, 3)])


def dblp_dir() -> Path:
    return Path(os.environ.get("COMMSIZE_DBLP_DIR", Path(__file__).resolve().parent.parent / "data" / "dblp"))
