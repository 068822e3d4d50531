import networkx as nx
import numpy as np
import pytest

from conftest import SMALL_GRAPHS, er_graphs, from_networkx
from stcpivot.algorithms import (
    CSV_COLUMNS,
    AlgoReport,
    FractionalSolution,
    RoundOn,
    approximation_ratio,
    aposteriori_ratio,
    lp_instance_stc,
    lp_instance_stcplus,
    lp_round_stc,
    lp_round_stc_det,
    lp_round_stcplus,
    lp_round_stcplus_det,
    mfp_cd,
    mfp_cd_det,
    mfp_ce,
    mfp_ce_det,
    read_fractional_solution,
)
from stcpivot.exceptions import (
    InfeasibleClustering,
    InfeasibleFractionalSolution,
    MissingFractionalValue,
    ParsingError,
    RatioUndefined,
)
from stcpivot.graph import Clustering, Graph
from stcpivot.labeling import Flavor, match_cd, match_ce
from stcpivot.pivot import (
    ObjectiveKind,
    check_pivot_conditions,
    eval_objective,
    is_feasible,
    non_clique_clusters,
)

CE = ObjectiveKind.CLUSTER_EDITING
CD = ObjectiveKind.CLUSTER_DELETION


def test_mfp_cd_examples(star4, k3):
    report, clustering = mfp_cd(star4, reps=20, seed=7)

    assert (report.lb, report.ub, report.ratio) == (1, 2, 2.0)
    assert clustering.clusters() == [[0, 3], [1], [2]]

    report, clustering = mfp_cd(k3, reps=5, seed=7)

    assert (report.lb, report.ub, report.ratio) == (0, 0, 1.0)
    assert clustering.k == 1


def test_mfp_ce_examples(path3):
    report, _ = mfp_ce(path3, reps=10, seed=1)
    assert (report.lb, report.ub) == (1, 3)
    assert report.algorithm == "mfp-ce"

    report, clustering = mfp_ce(path3, reps=50, seed=1, round_on=RoundOn.ORIGINAL)
    assert (report.lb, report.ub) == (1, 1)
    assert clustering.k == 1
    assert report.algorithm == "pivot"


def test_deterministic_examples(path3, star4, k3):
    assert mfp_cd_det(star4).report.ub == 2
    assert mfp_ce_det(path3).report.ub == 3

    for algorithm in (mfp_cd_det, mfp_ce_det):
        report, _ = algorithm(k3)
        assert (report.lb, report.ub, report.seed, report.reps) == (0, 0, None, 1)


def test_reports_are_reproducible():
    graph = er_graphs(1, 40, 0.15)[0]
    first, second = mfp_ce(graph, reps=10, seed=3), mfp_ce(graph, reps=10, seed=3)

    assert first.clustering == second.clustering
    assert first.report.ub == second.report.ub
    assert first.report.seed == 3


@pytest.mark.parametrize("graph", SMALL_GRAPHS + er_graphs(5, 40, 0.15), ids=lambda g: g.name)
def test_mfp_sandwich(graph):
    cd = mfp_cd(graph, reps=3, seed=0)
    ce = mfp_ce(graph, reps=3, seed=0)
    cd_det = mfp_cd_det(graph)
    ce_det = mfp_ce_det(graph)

    for report, _ in (cd, ce, cd_det, ce_det):
        assert report.lb <= report.ub
        assert report.status == "ok"

    assert is_feasible(eval_objective(graph, cd.clustering, CD))
    assert is_feasible(eval_objective(graph, cd_det.clustering, CD))
    assert cd_det.report.ub <= 2 * len(match_cd(graph).weak_edges)
    assert ce_det.report.ub <= 2 * match_ce(graph).size


def stc_solution(graph, seeds=(0, 1, 2)) -> FractionalSolution:
    """
    The average of a few greedy STC labelings, a feasible fractional point.
    """
    weights = {e: 0.0 for e in graph.edges()}

    for seed in seeds:
        for edge in match_cd(graph, seed).weak_edges:
            weights[edge] += 1 / len(seeds)

    return FractionalSolution(Flavor.STC, weights)


def stcplus_solution(graph, seeds=(0, 1, 2)) -> FractionalSolution:
    values = {e: 0.0 for e in graph.edges()}

    for seed in seeds:
        labeling = match_ce(graph, seed)

        for edge in labeling.weak_edges:
            values[edge] += 1 / len(seeds)

        for pair in labeling.added_pairs:
            values[pair] = values.get(pair, 1.0) - 1 / len(seeds)

    return FractionalSolution(Flavor.STC_PLUS, values)


def test_lp_round_stc_examples(path3, k3):
    report, clustering = lp_round_stc(k3, FractionalSolution(Flavor.STC, dict.fromkeys(k3.edges(), 0.0)))
    assert (report.lb, report.ub, clustering.k) == (0, 0, 1)

    report, clustering = lp_round_stc(
        path3, FractionalSolution(Flavor.STC, {(0, 1): 1.0, (1, 2): 0.0}), reps=5
    )
    assert (report.lb, report.ub) == (1, 1)
    assert sorted(clustering.clusters()) == [[0], [1, 2]]

    report, clustering = lp_round_stc(
        path3, FractionalSolution(Flavor.STC, {(0, 1): 0.5, (1, 2): 0.5}), reps=5
    )
    assert (report.lb, report.ub, clustering.k) == (1, 2, 3)


def test_lp_round_stcplus_examples(path3, k3):
    report, clustering = lp_round_stcplus(
        k3, FractionalSolution(Flavor.STC_PLUS, dict.fromkeys(k3.edges(), 0.0))
    )
    assert (report.lb, report.ub, clustering.k) == (0, 0, 1)

    solution = FractionalSolution(Flavor.STC_PLUS, {(0, 1): 0.0, (1, 2): 0.0, (0, 2): 0.0})
    report, clustering = lp_round_stcplus(path3, solution, reps=5)
    assert (report.lb, report.ub, clustering.k) == (1, 1, 1)

    solution = FractionalSolution(Flavor.STC_PLUS, {(0, 1): 0.5, (1, 2): 0.5, (0, 2): 1.0})
    report, clustering = lp_round_stcplus(path3, solution, reps=5)
    assert (report.lb, report.ub, clustering.k) == (1, 2, 3)


def test_lp_rounding_rejects_bad_solutions(path3):
    with pytest.raises(MissingFractionalValue):
        lp_round_stc(path3, FractionalSolution(Flavor.STC, {(0, 1): 1.0}))

    with pytest.raises(InfeasibleFractionalSolution):
        lp_round_stc(path3, FractionalSolution(Flavor.STC, {(0, 1): 0.4, (1, 2): 0.5}))

    with pytest.raises(InfeasibleFractionalSolution):
        lp_round_stcplus(path3, FractionalSolution(Flavor.STC_PLUS, {(0, 1): 0.0, (1, 2): 0.0}))

    with pytest.raises(InfeasibleFractionalSolution):
        lp_round_stcplus(path3, FractionalSolution(Flavor.STC, {(0, 1): 1.0, (1, 2): 1.0}))


def test_lp_rounding_accepts_float_noise(path3):
    solution = FractionalSolution(Flavor.STC, {(0, 1): 0.5 - 1e-12, (1, 2): 0.5})
    report, _ = lp_round_stc(path3, solution, reps=2)

    assert report.lb == pytest.approx(1.0)


@pytest.mark.parametrize("graph", SMALL_GRAPHS[::2] + er_graphs(5, 30, 0.2), ids=lambda g: g.name)
def test_lp_instances_meet_conditions(graph):
    for instance in (
        lp_instance_stc(graph, stc_solution(graph)),
        lp_instance_stcplus(graph, stcplus_solution(graph)),
    ):
        report = check_pivot_conditions(instance, 4)

        assert report.passed, report.violations[:5]


@pytest.mark.parametrize("graph", SMALL_GRAPHS[::2] + er_graphs(5, 30, 0.2), ids=lambda g: g.name)
def test_deterministic_lp_rounding_bound(graph):
    for rounding, solution in (
        (lp_round_stc_det, stc_solution(graph)),
        (lp_round_stcplus_det, stcplus_solution(graph)),
    ):
        report, _ = rounding(graph, solution)

        assert report.ub <= 4 * report.lb + 1e-9


def test_cd_lp_rounding_is_feasible():
    for graph in er_graphs(5, 30, 0.2):
        _, clustering = lp_round_stc(graph, stc_solution(graph), reps=5)

        assert is_feasible(eval_objective(graph, clustering, CD))


def random_graphs(count: int, *, max_nodes: int, seed: int = 0):
    """
    `count` seeded ER graphs with 2 to `max_nodes` nodes and average degree about 2 to 12.
    """
    rng = np.random.default_rng(seed)

    for index in range(count):
        n = int(rng.integers(2, max_nodes + 1))
        p = min(1.0, float(rng.uniform(2, 12)) / max(n - 1, 1))

        yield from_networkx(nx.gnp_random_graph(n, p, seed=index), name=f"random-{index}")


@pytest.mark.slow
def test_cd_clusterings_are_cliques_on_random_graphs():
    for graph in random_graphs(1000, max_nodes=200):
        for name, run in (
            ("mfp-cd", lambda g: mfp_cd(g, reps=1, seed=0)),
            ("mfp-cd-det", mfp_cd_det),
            ("lp-stc", lambda g: lp_round_stc(g, stc_solution(g), reps=1, seed=0)),
        ):
            report, clustering = run(graph)

            assert is_feasible(eval_objective(graph, clustering, CD)), (name, graph.name)
            assert non_clique_clusters(graph, clustering) == [], (name, graph.name)
            assert report.status != "infeasible"


def test_suboptimal_lp_is_flagged(path3):
    report, _ = lp_round_stc(path3, FractionalSolution(Flavor.STC, {(0, 1): 1.0, (1, 2): 0.4}))

    assert (report.lb, report.ub) == (pytest.approx(1.4), 1)
    assert report.status == "suboptimal-lp"


def test_read_fractional_solution(tmp_path):
    graph = Graph.from_edges(3, [(0, 1), (1, 2)], labels=[10, 20, 30])
    path = tmp_path / "sol.frac"
    path.write_text("STC+\n# x values\n20 10 1/2\n20 30 0.5\n10 30 1\n")

    solution = read_fractional_solution(path, graph)

    assert solution.flavor is Flavor.STC_PLUS
    assert solution.values == {(0, 1): 0.5, (1, 2): 0.5, (0, 2): 1.0}
    assert lp_round_stcplus(graph, solution, reps=2).report.lb == 1

    path.write_text("STC\n10 30 0.5\n")
    with pytest.raises(InfeasibleFractionalSolution):
        read_fractional_solution(path, graph)

    path.write_text("STC\n10 20 1.5\n")
    with pytest.raises(InfeasibleFractionalSolution):
        read_fractional_solution(path, graph)

    path.write_text("LP\n10 20 1\n")
    with pytest.raises(ParsingError):
        read_fractional_solution(path, graph)

    path.write_text("STC\n10 99 1\n")
    with pytest.raises(ParsingError):
        read_fractional_solution(path, graph)


def test_approximation_ratio():
    assert approximation_ratio(0, 0) == 1.0
    assert approximation_ratio(2, 3) == 1.5

    with pytest.raises(RatioUndefined):
        approximation_ratio(0, 1)


def test_aposteriori_ratio_examples(path3, star4):
    assert aposteriori_ratio(path3, Clustering([0, 0, 0]), CE, 1) == 1.0
    assert aposteriori_ratio(star4, Clustering([0, 0, 1, 2]), CD, 1) == 2.0

    with pytest.raises(InfeasibleClustering):
        aposteriori_ratio(path3, Clustering([0, 0, 0]), CD, 1)

    with pytest.raises(RatioUndefined):
        aposteriori_ratio(path3, Clustering([0, 1, 2]), CE, 0)


def test_report_row():
    report = AlgoReport(
        graph="g",
        n=4,
        m=3,
        algorithm="mfp-cd",
        lb=1,
        ub=2,
        lb_seconds=0.000123456,
        round_seconds=1.23456,
        seed=7,
        reps=100,
    )
    row = report.as_row()

    assert tuple(row) == CSV_COLUMNS
    assert row["ratio"] == "2.0"
    assert (row["lb"], row["ub"]) == ("1", "2")
    assert (row["lb_seconds"], row["round_seconds"]) == ("0.000123", "1.23")
    assert row["status"] == "ok"

    report.lb = 0.75
    assert report.as_row()["lb"] == "0.75"
