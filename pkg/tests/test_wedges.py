import asyncio
import itertools
import threading
import tracemalloc

import pytest

from conftest import SMALL_GRAPHS, er_graphs
from stcpivot.exceptions import ResourceLimitExceeded
from stcpivot.graph import Graph
from stcpivot.wedges import (
    DEFAULT_WEDGE_CAP,
    OpenWedge,
    build_gallai,
    build_hypergraph,
    enumerate_wedges,
    enumerate_wedges_parallel,
    iter_wedges,
    wedge_count,
    wedges_per_center,
)


def brute_force_wedges(graph):
    found = set()

    for i, j, k in itertools.permutations(range(graph.n), 3):
        if i < j and graph.is_edge(i, k) and graph.is_edge(j, k) and not graph.is_edge(i, j):
            found.add(OpenWedge(i, j, k))

    return found


def test_examples(k3, path3, star4):
    assert list(iter_wedges(k3)) == []
    assert list(iter_wedges(path3)) == [OpenWedge(0, 2, 1)]
    assert list(iter_wedges(star4)) == [
        OpenWedge(1, 2, 0),
        OpenWedge(1, 3, 0),
        OpenWedge(2, 3, 0),
    ]


def test_enumerate_wedges_visits_in_stream_order(star4):
    seen = []

    assert enumerate_wedges(star4, seen.append) == 3
    assert seen == list(iter_wedges(star4))


@pytest.mark.parametrize(
    "graph, expected",
    [
        (Graph.from_edges(5, itertools.combinations(range(5), 2)), 0),
        (Graph.from_edges(5, [(0, 1), (0, 2), (0, 3), (0, 4)]), 6),
        (Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)]), 2),
    ],
)
def test_wedge_count(graph, expected):
    assert wedge_count(graph) == expected


@pytest.mark.parametrize("graph", SMALL_GRAPHS + er_graphs(5, 25, 0.2), ids=lambda g: g.name)
def test_stream_matches_brute_force(graph):
    wedges = list(iter_wedges(graph))

    assert set(wedges) == brute_force_wedges(graph)
    assert len(wedges) == len(set(wedges)) == wedge_count(graph)
    assert sum(wedges_per_center(graph)) == len(wedges)


@pytest.mark.parametrize("graph", er_graphs(3, 40, 0.15), ids=lambda g: g.name)
def test_parallel_enumeration_visits_the_same_set(graph):
    lock = threading.Lock()
    seen = []

    def visitor(wedge):
        with lock:
            seen.append(wedge)

    count = asyncio.run(enumerate_wedges_parallel(graph, visitor, workers=3))

    assert count == len(seen) == wedge_count(graph)
    assert set(seen) == set(iter_wedges(graph))


def test_gallai_examples(k3, path3, star4):
    gallai = build_gallai(path3)
    assert gallai.nodes == ((0, 1), (1, 2))
    assert gallai.edges == ((0, 1),)

    gallai = build_gallai(star4)
    assert len(gallai.nodes) == 3
    assert {frozenset(e) for e in gallai.edges} == {
        frozenset((0, 1)),
        frozenset((0, 2)),
        frozenset((1, 2)),
    }

    gallai = build_gallai(k3)
    assert (len(gallai.nodes), len(gallai.edges)) == (3, 0)


@pytest.mark.parametrize("graph", SMALL_GRAPHS[::3], ids=lambda g: g.name)
def test_materialized_views_agree(graph):
    gallai = build_gallai(graph)
    hypergraph = build_hypergraph(graph)

    assert len(gallai.nodes) == graph.m
    assert len(gallai.edges) == len(hypergraph.hyperedges) == wedge_count(graph)
    assert hypergraph.node_count == graph.n * (graph.n - 1) // 2
    assert all(len(h) == 3 for h in hypergraph.hyperedges)


def test_materialization_cap(star4):
    with pytest.raises(ResourceLimitExceeded) as info:
        build_gallai(star4, cap=2)

    assert (info.value.size, info.value.cap) == (3, 2)

    with pytest.raises(ResourceLimitExceeded):
        build_hypergraph(star4, cap=0)


def test_wedge_count_on_a_large_star_stays_small_in_memory():
    leaves = 20_000
    star = Graph.from_edges(leaves + 1, [(0, v) for v in range(1, leaves + 1)], name="star")

    tracemalloc.start()

    try:
        count = wedge_count(star)
        _, peak = tracemalloc.get_traced_memory()
    finally:
        tracemalloc.stop()

    assert count == leaves * (leaves - 1) // 2
    assert peak < 16 * 2**20

    with pytest.raises(ResourceLimitExceeded) as info:
        build_gallai(star)

    assert (info.value.size, info.value.cap) == (count, DEFAULT_WEDGE_CAP)
