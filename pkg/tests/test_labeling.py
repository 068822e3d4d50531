import pytest

from conftest import ORACLE_GRAPHS, SMALL_GRAPHS, er_graphs
from stcpivot.graph import Graph
from stcpivot.labeling import (
    Flavor,
    StcLabeling,
    check_stc_feasible,
    is_well_formed,
    match_cd,
    match_ce,
    write_labeling,
)
from stcpivot.oracle import opt_labeling
from stcpivot.wedges import iter_wedges


def test_match_cd_examples(k3, path3, star4):
    labeling = match_cd(star4)
    assert (labeling.matching_size, len(labeling.weak_edges)) == (1, 2)

    labeling = match_cd(path3)
    assert labeling.matching_size == 1
    assert labeling.weak_edges == {(0, 1), (1, 2)}
    assert labeling.flavor is Flavor.STC
    assert labeling.added_pairs == frozenset()

    assert match_cd(k3).matching_size == 0
    assert match_cd(k3).weak_edges == frozenset()


def test_match_ce_examples(k3, path3, star4):
    labeling = match_ce(path3)
    assert labeling.matching_size == 1
    assert labeling.weak_edges == {(0, 1), (1, 2)}
    assert labeling.added_pairs == {(0, 2)}
    assert labeling.flavor is Flavor.STC_PLUS

    assert match_ce(star4).matching_size == 1
    assert match_ce(k3).matching_size == 0


def test_check_stc_feasible_examples(path3, star4):
    assert check_stc_feasible(path3, StcLabeling(Flavor.STC, frozenset({(0, 1)})))
    assert not check_stc_feasible(path3, StcLabeling(Flavor.STC, frozenset()))
    assert not check_stc_feasible(star4, StcLabeling(Flavor.STC, frozenset({(0, 1)})))
    assert check_stc_feasible(
        path3, StcLabeling(Flavor.STC_PLUS, frozenset(), frozenset({(0, 2)}))
    )


@pytest.mark.parametrize("graph", SMALL_GRAPHS + er_graphs(5, 30, 0.2), ids=lambda g: g.name)
def test_matchings_are_maximal(graph):
    cd, ce = match_cd(graph), match_ce(graph)

    assert check_stc_feasible(graph, cd) and check_stc_feasible(graph, ce)
    assert is_well_formed(graph, cd) and is_well_formed(graph, ce)
    assert len(cd.weak_edges) == 2 * cd.matching_size
    assert ce.size == 3 * ce.matching_size

    # matched wedges are edge-disjoint (cd) and pair-disjoint (ce)
    cd_edges = [e for w in cd.matching for e in w.edges()]
    ce_pairs = [p for w in ce.matching for p in w.pairs()]
    assert len(cd_edges) == len(set(cd_edges))
    assert len(ce_pairs) == len(set(ce_pairs))

    for wedge in iter_wedges(graph):
        assert any(e in cd.weak_edges for e in wedge.edges())
        assert any(p in ce.flipped for p in wedge.pairs())


@pytest.mark.parametrize("graph", er_graphs(3, 30, 0.2), ids=lambda g: g.name)
@pytest.mark.parametrize("order_seed", [0, 1, 17])
def test_matching_is_deterministic(graph, order_seed):
    assert match_cd(graph, order_seed) == match_cd(graph, order_seed)
    assert match_ce(graph, order_seed) == match_ce(graph, order_seed)
    assert check_stc_feasible(graph, match_cd(graph, order_seed))


@pytest.mark.parametrize("graph", ORACLE_GRAPHS, ids=lambda g: g.name)
def test_covers_approximate_optimal_labelings(graph):
    cd, ce = match_cd(graph), match_ce(graph)
    opt_stc = opt_labeling(graph, Flavor.STC).opt_value
    opt_plus = opt_labeling(graph, Flavor.STC_PLUS).opt_value

    assert cd.matching_size <= opt_stc <= len(cd.weak_edges) <= 2 * opt_stc
    assert ce.matching_size <= opt_plus <= ce.size <= 3 * opt_plus


def test_write_labeling(tmp_path):
    graph = Graph.from_edges(3, [(0, 1), (1, 2)], labels=[10, 20, 30])
    path = tmp_path / "lab.txt"
    write_labeling(match_ce(graph), graph, path)

    assert path.read_text().splitlines() == ["STC+ 1", "W 10 20", "W 20 30", "A 10 30"]
