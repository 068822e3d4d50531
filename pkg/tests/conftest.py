import os
import pathlib

import networkx as nx
import pytest

from stcpivot.graph import Graph


def from_networkx(nx_graph: nx.Graph, name: str = "graph") -> Graph:
    nodes = sorted(nx_graph.nodes())
    index = {u: i for i, u in enumerate(nodes)}

    return Graph.from_edges(
        len(nodes), [(index[u], index[v]) for u, v in nx_graph.edges()], name=name
    )


def atlas(max_nodes: int, *, min_nodes: int = 1, step: int = 1):
    graphs = [
        (i, g)
        for i, g in enumerate(nx.graph_atlas_g())
        if min_nodes <= g.number_of_nodes() <= max_nodes
    ]

    return [from_networkx(g, name=f"atlas-{i}") for i, g in graphs[::step]]


# every graph on at most 6 nodes, and a deterministic sample of those on 7
SMALL_GRAPHS = atlas(6)
SEVEN_NODE_GRAPHS = atlas(7, min_nodes=7, step=7)
ORACLE_GRAPHS = SMALL_GRAPHS + SEVEN_NODE_GRAPHS


def er_graphs(count: int, n: int, p: float):
    return [
        from_networkx(nx.gnp_random_graph(n, p, seed=seed), name=f"er-{n}-{seed}")
        for seed in range(count)
    ]


@pytest.fixture
def path3() -> Graph:
    return Graph.from_edges(3, [(0, 1), (1, 2)], name="path3")


@pytest.fixture
def star4() -> Graph:
    return Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)], name="star4")


@pytest.fixture
def k3() -> Graph:
    return Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)], name="K3")


@pytest.fixture
def graph_files(tmp_path: pathlib.Path) -> pathlib.Path:
    """
    A directory with `path3.txt`, `star4.txt` and `K3.txt` edge lists.
    """
    (tmp_path / "path3.txt").write_text("1 2\n2 3\n")
    (tmp_path / "star4.txt").write_text("# star\n1 2\n1 3\n1 4\n")
    (tmp_path / "K3.txt").write_text("1 2\n2 3\n1 3\n")

    return tmp_path


@pytest.fixture
def data_dir() -> pathlib.Path:
    """
    The directory named by `STCPIVOT_DATA`, skips the test when unset.
    """
    value = os.environ.get("STCPIVOT_DATA")

    if not value:
        pytest.skip("STCPIVOT_DATA is not set")

    return pathlib.Path(value)
