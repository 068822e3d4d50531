import math


import numpy as np
import pytest

from conftest import SMALL_GRAPHS, er_graphs
from stcpivot.algorithms import mfp_instance_cd, mfp_instance_ce
from stcpivot.exceptions import ClusteringSizeMismatch, InvalidPivotInstance
from stcpivot.graph import Clustering, Graph
from stcpivot.labeling import match_cd, match_ce
from stcpivot.pivot import (
    CANNOT_LINK,
    INFEASIBLE,
    ObjectiveKind,
    PivotInstance,
    check_pivot_conditions,
    eval_objective,
    is_feasible,
    pivot_deterministic,
    pivot_random,
)

CE = ObjectiveKind.CLUSTER_EDITING
CD = ObjectiveKind.CLUSTER_DELETION


def assert_pivot_shaped(derived: Graph, clustering: Clustering):
    """
    Every cluster is a node plus some of its derived-graph neighbors.
    """
    assert clustering.n == derived.n

    for cluster in clustering.clusters():
        assert any(
            all(derived.is_edge(p, u) for u in cluster if u != p) for p in cluster
        )


@pytest.mark.parametrize("seed", range(10))
def test_pivot_random_examples(seed):
    assert pivot_random(Graph.from_edges(3, []), seed) == Clustering([0, 1, 2])
    assert pivot_random(Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)]), seed).k == 1

    clustering = pivot_random(Graph.from_edges(3, [(0, 2)]), seed)
    assert sorted(clustering.clusters()) == [[0, 2], [1]]


@pytest.mark.parametrize("graph", er_graphs(5, 30, 0.2), ids=lambda g: g.name)
def test_pivot_random_is_seeded(graph):
    assert pivot_random(graph, 3) == pivot_random(graph, 3)
    assert_pivot_shaped(graph, pivot_random(graph, 3))


def test_weights():
    assert CE.weights(True) == CD.weights(True) == (1.0, 0.0)
    assert CE.weights(False) == (0.0, 1.0)
    assert CD.weights(False) == (0.0, CANNOT_LINK)


def test_cd_instance_rejects_cannot_link_derived_edges(path3):
    with pytest.raises(InvalidPivotInstance):
        PivotInstance(path3, CD, Graph.from_edges(3, [(0, 2)]), {})


def test_pivot_deterministic_empty_derived_graph(star4):
    instance = PivotInstance(star4, CE, Graph.from_edges(4, []), {(0, 1): 1.0})

    assert pivot_deterministic(instance) == Clustering.singletons(4)


def test_pivot_deterministic_mfp_ce_path(path3):
    instance = mfp_instance_ce(path3, match_ce(path3))

    assert list(instance.derived.edges()) == [(0, 2)]
    assert instance.total_budget() == 3

    clustering = pivot_deterministic(instance)

    assert clustering.clusters() == [[0, 2], [1]]
    assert eval_objective(path3, clustering, CE) == 3


def test_pivot_deterministic_mfp_cd_star(star4):
    labeling = match_cd(star4)

    assert labeling.weak_edges == {(0, 1), (0, 2)}

    instance = mfp_instance_cd(star4, labeling)
    clustering = pivot_deterministic(instance)

    assert clustering.clusters() == [[0, 3], [1], [2]]
    assert eval_objective(star4, clustering, CD) == 2


def test_pivot_deterministic_without_budget_fails(path3):
    instance = PivotInstance(path3, CE, path3, {})

    with pytest.raises(InvalidPivotInstance) as info:
        pivot_deterministic(instance)

    assert info.value.remaining == 3


def test_conditions_fail_without_budget(path3):
    report = check_pivot_conditions(PivotInstance(path3, CE, path3, {}), 2)

    assert not report
    assert [(v.condition, v.nodes) for v in report.violations] == [(2, (0, 2, 1))]


def test_conditions_report_is_capped():
    graph = Graph.from_edges(6, [(0, u) for u in range(1, 6)])
    report = check_pivot_conditions(PivotInstance(graph, CE, graph, {}), 2, limit=4)

    assert not report.passed
    assert len(report.violations) == 4


@pytest.mark.parametrize("graph", SMALL_GRAPHS + er_graphs(10, 30, 0.2), ids=lambda g: g.name)
def test_mfp_instances_meet_conditions(graph):
    for instance in (
        mfp_instance_cd(graph, match_cd(graph)),
        mfp_instance_ce(graph, match_ce(graph)),
    ):
        report = check_pivot_conditions(instance, 2)

        assert report.passed, report.violations[:5]


@pytest.mark.parametrize(
    "graph", SMALL_GRAPHS + er_graphs(10, 30, 0.2) + er_graphs(5, 60, 0.1), ids=lambda g: g.name
)
def test_deterministic_pivoting_bound(graph):
    for instance in (
        mfp_instance_cd(graph, match_cd(graph)),
        mfp_instance_ce(graph, match_ce(graph)),
    ):
        clustering = pivot_deterministic(instance)
        cost = eval_objective(graph, clustering, instance.kind)

        assert_pivot_shaped(instance.derived, clustering)
        assert is_feasible(cost)
        assert cost <= 2 * instance.total_budget()


MFP_INSTANCES = {
    "cd": lambda graph: mfp_instance_cd(graph, match_cd(graph)),
    "ce": lambda graph: mfp_instance_ce(graph, match_ce(graph)),
}


@pytest.mark.parametrize("flavor", sorted(MFP_INSTANCES))
@pytest.mark.parametrize("graph", er_graphs(50, 40, 0.2), ids=lambda g: g.name)
def test_randomized_pivoting_bound_in_expectation(graph, flavor):
    # budgets are 1 per flipped pair, so the bound is 2 |E_W| (cd) or 2 (|E'| + |E_W|) (ce)
    instance = MFP_INSTANCES[flavor](graph)
    costs = np.array(
        [
            eval_objective(graph, pivot_random(instance.derived, seed), instance.kind)
            for seed in range(200)
        ]
    )
    error = costs.std(ddof=1) / math.sqrt(len(costs))

    assert np.isfinite(costs).all()
    assert costs.mean() <= 2 * instance.total_budget() + 3 * error


@pytest.mark.parametrize("graph", SMALL_GRAPHS[::4], ids=lambda g: g.name)
def test_cd_pivoting_is_always_feasible(graph):
    instance = mfp_instance_cd(graph, match_cd(graph))

    for seed in range(5):
        assert is_feasible(eval_objective(graph, pivot_random(instance.derived, seed), CD))


def test_eval_objective_examples(path3, star4, k3):
    one = Clustering([0, 0, 0])

    assert eval_objective(path3, one, CE) == 1
    assert eval_objective(path3, one, CD) == INFEASIBLE
    assert eval_objective(k3, one, CD) == 0

    for graph in (path3, star4, k3):
        for kind in (CE, CD):
            assert eval_objective(graph, Clustering.singletons(graph.n), kind) == graph.m


@pytest.mark.parametrize("graph", SMALL_GRAPHS[::7], ids=lambda g: g.name)
def test_eval_objective_matches_pair_count(graph):
    clustering = Clustering(np.arange(graph.n) % 2)
    labels = clustering.assignment
    expected = sum(
        graph.is_edge(u, v) != (labels[u] == labels[v])
        for u in range(graph.n)
        for v in range(u + 1, graph.n)
    )

    assert eval_objective(graph, clustering, CE) == expected


def test_eval_objective_size_mismatch(path3):
    with pytest.raises(ClusteringSizeMismatch):
        eval_objective(path3, Clustering([0, 0]), CE)
