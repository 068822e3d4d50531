"""
End-to-end clustering algorithms. Each returns an `AlgoResult`: a report row
sandwiching the optimum between a lower bound and the cost of the returned clustering.

Match-flip-pivot algorithms take their lower bound from a greedy wedge
matching, LP roundings from a fractional solution computed elsewhere.
"""

from __future__ import annotations

import dataclasses
import enum
import logging
import pathlib
import time
import typing

import numpy as np

from stcpivot.exceptions import (
    InfeasibleClustering,
    InfeasibleFractionalSolution,
    MissingFractionalValue,
    ParsingError,
    RatioUndefined,
)
from stcpivot.graph import Clustering, Graph, Pair, PathLike, canonical, has_edge
from stcpivot.labeling import Flavor, StcLabeling, match_cd, match_ce
from stcpivot.pivot import (
    INFEASIBLE,
    ObjectiveKind,
    PivotInstance,
    eval_objective,
    non_clique_clusters,
    pivot_deterministic,
    pivot_random,
)
from stcpivot.registry import AlgorithmRegistry
from stcpivot.utils.parser import iter_data_lines, parse_line
from stcpivot.wedges import iter_wedges

logger = logging.getLogger(__name__)

DEFAULT_REPS = 100
LP_TOLERANCE = 1e-9

CSV_COLUMNS = (
    "graph",
    "n",
    "m",
    "algorithm",
    "lb",
    "ub",
    "ratio",
    "lb_seconds",
    "round_seconds",
    "seed",
    "reps",
    "status",
)


def approximation_ratio(lb: float, ub: float) -> float:
    """
    `ub / lb`, and 1 when both are 0 (the graph is already a union of cliques).

    :raise RatioUndefined: If `lb` is 0 and `ub` is positive.
    """
    if lb <= 0:
        if ub <= 0:
            return 1.0

        raise RatioUndefined(lb=lb, ub=ub)

    return ub / lb


def format_number(value: float) -> str:
    if isinstance(value, (int, np.integer)) or float(value).is_integer():
        return str(int(value))

    return f"{value:.6g}"


def format_seconds(seconds: float) -> str:
    return f"{seconds:.3g}"


@dataclasses.dataclass
class AlgoReport:
    graph: str
    n: int
    m: int
    algorithm: str
    lb: float
    ub: float
    lb_seconds: float
    round_seconds: float
    seed: typing.Optional[int]
    reps: int
    status: str = "ok"

    @property
    def ratio(self) -> float:
        return approximation_ratio(self.lb, self.ub)

    def as_row(self) -> typing.Dict[str, str]:
        """
        The report as a CSV row, keyed by `CSV_COLUMNS`.
        """
        return {
            "graph": self.graph,
            "n": str(self.n),
            "m": str(self.m),
            "algorithm": self.algorithm,
            "lb": format_number(self.lb),
            "ub": format_number(self.ub),
            "ratio": repr(round(self.ratio, 6)),
            "lb_seconds": format_seconds(self.lb_seconds),
            "round_seconds": format_seconds(self.round_seconds),
            "seed": "-" if self.seed is None else str(self.seed),
            "reps": str(self.reps),
            "status": self.status,
        }


class AlgoResult(typing.NamedTuple):
    report: AlgoReport
    clustering: Clustering


class RoundOn(enum.Enum):
    """
    The graph match-flip-pivot for cluster editing pivots on.
    """

    DERIVED = "derived"
    ORIGINAL = "original"


@dataclasses.dataclass(frozen=True)
class FractionalSolution:
    """
    LP values per pair. `Flavor.STC` holds `z` on edges only, `Flavor.STC_PLUS`
    holds `x` on edges and on any non-edge it covers (absent non-edges are at `x = 1`).
    """

    flavor: Flavor
    values: typing.Mapping[Pair, float]

    def value(self, u: int, v: int, default: typing.Optional[float] = None) -> typing.Optional[float]:
        return self.values.get(canonical(u, v), default)


def read_fractional_solution(path: PathLike, graph: Graph) -> FractionalSolution:
    """
    Reads a `STC` or `STC+` header line, then `u v value` lines with original labels.

    :raise ParsingError: On a bad header, a malformed line or an unknown label.
    :raise InfeasibleFractionalSolution: On a value outside `[0, 1]`, or a
        `STC` value on a non-edge.
    """
    path = pathlib.Path(path)
    index = graph.label_index
    values: typing.Dict[Pair, float] = {}
    flavor = None

    with path.open() as stream:
        for line_number, line in iter_data_lines(stream):
            if flavor is None:
                try:
                    flavor = Flavor(line.split()[0].upper())
                except ValueError:
                    raise ParsingError(
                        line, reason="expected STC or STC+", path=str(path), line_number=line_number
                    )

                continue

            a, b, value = parse_line(
                (int, int, float), line, path=str(path), line_number=line_number
            )

            if a not in index or b not in index or a == b:
                raise ParsingError(
                    line, reason="not a pair of graph nodes", path=str(path), line_number=line_number
                )

            u, v = canonical(index[a], index[b])

            if not -LP_TOLERANCE <= value <= 1 + LP_TOLERANCE:
                raise InfeasibleFractionalSolution(f"value {value} is outside [0, 1]", pairs=((a, b),))

            if flavor is Flavor.STC and not has_edge(graph.adjacency, u, v):
                raise InfeasibleFractionalSolution("STC value on a non-edge", pairs=((a, b),))

            values[u, v] = min(max(value, 0.0), 1.0)

    if flavor is None:
        raise ParsingError(str(path), reason="empty solution file", path=str(path))

    return FractionalSolution(flavor, values)


def validate_fractional_solution(graph: Graph, solution: FractionalSolution):
    """
    Every edge needs a value, and every open wedge `(i, j; k)` its constraint:
    `z_ik + z_jk >= 1` for `STC`, `x_ij <= x_ik + x_jk` for `STC+`, up to `LP_TOLERANCE`.

    :raise MissingFractionalValue: If an edge has no value.
    :raise InfeasibleFractionalSolution: On the first violated wedge.
    """
    values = solution.values

    for edge in graph.edges():
        if edge not in values:
            raise MissingFractionalValue(edge)

    for i, j, k in iter_wedges(graph):
        side = values[canonical(i, k)] + values[canonical(j, k)]

        if solution.flavor is Flavor.STC:
            if side < 1 - LP_TOLERANCE:
                raise InfeasibleFractionalSolution(
                    "z_ik + z_jk < 1 on an open wedge", pairs=(canonical(i, k), canonical(j, k))
                )

        elif values.get((i, j), 1.0) > side + LP_TOLERANCE:
            raise InfeasibleFractionalSolution(
                "x_ij > x_ik + x_jk on an open wedge",
                pairs=((i, j), canonical(i, k), canonical(j, k)),
            )


def mfp_instance_cd(graph: Graph, labeling: StcLabeling) -> PivotInstance:
    """
    Cluster deletion weights, budget 1 on weak edges, pivoting on the strong edges.
    """
    derived = Graph.from_edges(
        graph.n, (e for e in graph.edges() if e not in labeling.weak_edges), name=graph.name
    )

    return PivotInstance(
        graph, ObjectiveKind.CLUSTER_DELETION, derived, dict.fromkeys(labeling.weak_edges, 1.0)
    )


def mfp_instance_ce(graph: Graph, labeling: StcLabeling) -> PivotInstance:
    """
    Cluster editing weights, budget 1 on weak edges and added pairs, pivoting on
    the strong edges and the added pairs.
    """
    strong = (e for e in graph.edges() if e not in labeling.weak_edges)
    derived = Graph.from_edges(graph.n, (*strong, *labeling.added_pairs), name=graph.name)

    return PivotInstance(
        graph, ObjectiveKind.CLUSTER_EDITING, derived, dict.fromkeys(labeling.flipped, 1.0)
    )


def lp_instance_stc(graph: Graph, solution: FractionalSolution) -> PivotInstance:
    """
    Cluster deletion weights, budget `z` on edges, pivoting on edges with `z < 1/2`.

    :raise InfeasibleFractionalSolution: If the solution is not `STC` or not feasible.
    """
    _expect_flavor(solution, Flavor.STC)
    validate_fractional_solution(graph, solution)

    budgets = {e: solution.values[e] for e in graph.edges()}
    derived = Graph.from_edges(
        graph.n, (e for e, z in budgets.items() if z < 0.5), name=graph.name
    )

    return PivotInstance(graph, ObjectiveKind.CLUSTER_DELETION, derived, budgets)


def lp_instance_stcplus(graph: Graph, solution: FractionalSolution) -> PivotInstance:
    """
    Cluster editing weights, budget `x` on edges and `1 - x` on the non-edges the
    solution covers, pivoting on pairs with `x < 1/2`.

    :raise InfeasibleFractionalSolution: If the solution is not `STC+` or not feasible.
    """
    _expect_flavor(solution, Flavor.STC_PLUS)
    validate_fractional_solution(graph, solution)

    adjacency = graph.adjacency
    budgets = {
        pair: x if has_edge(adjacency, *pair) else 1.0 - x
        for pair, x in solution.values.items()
    }
    derived = Graph.from_edges(
        graph.n, (pair for pair, x in solution.values.items() if x < 0.5), name=graph.name
    )

    return PivotInstance(graph, ObjectiveKind.CLUSTER_EDITING, derived, budgets)


def _expect_flavor(solution: FractionalSolution, flavor: Flavor):
    if solution.flavor is not flavor:
        raise InfeasibleFractionalSolution(
            f"got a {solution.flavor.value} solution, expected {flavor.value}"
        )


def best_of_pivots(
    graph: Graph,
    derived: Graph,
    kind: ObjectiveKind,
    *,
    reps: int = DEFAULT_REPS,
    seed: typing.Optional[int] = None,
) -> typing.Tuple[Clustering, float, int]:
    """
    Runs `pivot_random` on `derived` with `reps` independent seeds spawned from
    `seed`, and keeps the cheapest clustering of `graph` (the first one on ties).

    :return: The best clustering, its cost and the root seed used.
    """
    if reps < 1:
        raise ValueError(f"reps must be at least 1, got {reps}.")

    root = np.random.SeedSequence(seed)
    best, best_cost = None, INFEASIBLE

    for child in root.spawn(reps):
        clustering = pivot_random(derived, child)
        cost = eval_objective(graph, clustering, kind)

        if best is None or cost < best_cost:
            best, best_cost = clustering, cost

    return best, best_cost, root.entropy


def _report(
    graph: Graph,
    algorithm: str,
    *,
    lb: float,
    ub: float,
    lb_seconds: float,
    round_seconds: float,
    seed: typing.Optional[int],
    reps: int,
) -> AlgoReport:
    status = "ok"

    if ub == INFEASIBLE:
        status = "infeasible"
        logger.error("%s returned an infeasible clustering on %r.", algorithm, graph)

    elif lb > ub + LP_TOLERANCE:
        # a feasible but non-optimal fractional solution can exceed the optimum
        status = "suboptimal-lp"
        logger.warning("%s on %r: lower bound %s exceeds cost %s.", algorithm, graph, lb, ub)

    logger.info("%s on %r: lb=%s ub=%s.", algorithm, graph, format_number(lb), format_number(ub))

    return AlgoReport(
        graph=graph.name,
        n=graph.n,
        m=graph.m,
        algorithm=algorithm,
        lb=lb,
        ub=ub,
        lb_seconds=lb_seconds,
        round_seconds=round_seconds,
        seed=seed,
        reps=reps,
        status=status,
    )


def mfp_cd(
    graph: Graph,
    *,
    reps: int = DEFAULT_REPS,
    seed: typing.Optional[int] = None,
    order_seed: int = 0,
) -> AlgoResult:
    """
    Match-flip-pivot for cluster deletion: weak edges of a greedy STC labeling are
    deleted and Pivot runs `reps` times on the strong edges. A 4-approximation in
    expectation for a single repetition.
    """
    start = time.perf_counter()
    labeling = match_cd(graph, order_seed)
    instance = mfp_instance_cd(graph, labeling)
    lb_seconds = time.perf_counter() - start

    start = time.perf_counter()
    clustering, cost, root = best_of_pivots(
        graph, instance.derived, ObjectiveKind.CLUSTER_DELETION, reps=reps, seed=seed
    )

    return AlgoResult(
        _report(
            graph,
            "mfp-cd",
            lb=labeling.matching_size,
            ub=cost,
            lb_seconds=lb_seconds,
            round_seconds=time.perf_counter() - start,
            seed=root,
            reps=reps,
        ),
        clustering,
    )


def mfp_ce(
    graph: Graph,
    *,
    reps: int = DEFAULT_REPS,
    seed: typing.Optional[int] = None,
    order_seed: int = 0,
    round_on: RoundOn = RoundOn.DERIVED,
) -> AlgoResult:
    """
    Match-flip-pivot for cluster editing. With `RoundOn.DERIVED`, Pivot runs on
    the strong edges plus the added pairs of a greedy STC+ labeling (a
    6-approximation in expectation); with `RoundOn.ORIGINAL` it runs on the graph
    itself and the labeling only provides the lower bound.
    """
    start = time.perf_counter()
    labeling = match_ce(graph, order_seed)
    derived = graph if round_on is RoundOn.ORIGINAL else mfp_instance_ce(graph, labeling).derived
    lb_seconds = time.perf_counter() - start

    start = time.perf_counter()
    clustering, cost, root = best_of_pivots(
        graph, derived, ObjectiveKind.CLUSTER_EDITING, reps=reps, seed=seed
    )

    return AlgoResult(
        _report(
            graph,
            "pivot" if round_on is RoundOn.ORIGINAL else "mfp-ce",
            lb=labeling.matching_size,
            ub=cost,
            lb_seconds=lb_seconds,
            round_seconds=time.perf_counter() - start,
            seed=root,
            reps=reps,
        ),
        clustering,
    )


def _deterministic(
    graph: Graph, algorithm: str, instance: PivotInstance, lb: float, lb_seconds: float
) -> AlgoResult:
    start = time.perf_counter()
    clustering = pivot_deterministic(instance)
    cost = eval_objective(graph, clustering, instance.kind)

    return AlgoResult(
        _report(
            graph,
            algorithm,
            lb=lb,
            ub=cost,
            lb_seconds=lb_seconds,
            round_seconds=time.perf_counter() - start,
            seed=None,
            reps=1,
        ),
        clustering,
    )


def mfp_cd_det(graph: Graph, *, order_seed: int = 0) -> AlgoResult:
    """
    Match-flip-pivot for cluster deletion rounded deterministically, costs at most `2 |E_W|`.
    """
    start = time.perf_counter()
    labeling = match_cd(graph, order_seed)
    instance = mfp_instance_cd(graph, labeling)

    return _deterministic(
        graph, "mfp-cd-det", instance, labeling.matching_size, time.perf_counter() - start
    )


def mfp_ce_det(graph: Graph, *, order_seed: int = 0) -> AlgoResult:
    """
    Match-flip-pivot for cluster editing rounded deterministically, costs at most `2 (|E'| + |E_W|)`.
    """
    start = time.perf_counter()
    labeling = match_ce(graph, order_seed)
    instance = mfp_instance_ce(graph, labeling)

    return _deterministic(
        graph, "mfp-ce-det", instance, labeling.matching_size, time.perf_counter() - start
    )


def _lp_round(
    graph: Graph,
    algorithm: str,
    instance: PivotInstance,
    lb_seconds: float,
    *,
    reps: int,
    seed: typing.Optional[int],
) -> AlgoResult:
    start = time.perf_counter()
    clustering, cost, root = best_of_pivots(
        graph, instance.derived, instance.kind, reps=reps, seed=seed
    )

    return AlgoResult(
        _report(
            graph,
            algorithm,
            lb=instance.total_budget(),
            ub=cost,
            lb_seconds=lb_seconds,
            round_seconds=time.perf_counter() - start,
            seed=root,
            reps=reps,
        ),
        clustering,
    )


def lp_round_stc(
    graph: Graph,
    solution: FractionalSolution,
    *,
    reps: int = DEFAULT_REPS,
    seed: typing.Optional[int] = None,
) -> AlgoResult:
    """
    Rounds a minSTC LP solution: Pivot on the edges with `z < 1/2`. The lower
    bound is the fractional objective, the clustering is always a cluster deletion.

    :raise MissingFractionalValue: If an edge has no value.
    :raise InfeasibleFractionalSolution: If a wedge constraint is violated.
    """
    start = time.perf_counter()
    instance = lp_instance_stc(graph, solution)

    return _lp_round(
        graph, "lp-stc", instance, time.perf_counter() - start, reps=reps, seed=seed
    )


def lp_round_stcplus(
    graph: Graph,
    solution: FractionalSolution,
    *,
    reps: int = DEFAULT_REPS,
    seed: typing.Optional[int] = None,
) -> AlgoResult:
    """
    Rounds a minSTC+ LP solution: Pivot on the pairs with `x < 1/2`, scored as cluster editing.

    :raise MissingFractionalValue: If an edge has no value.
    :raise InfeasibleFractionalSolution: If a wedge constraint is violated.
    """
    start = time.perf_counter()
    instance = lp_instance_stcplus(graph, solution)

    return _lp_round(
        graph, "lp-stc+", instance, time.perf_counter() - start, reps=reps, seed=seed
    )


def lp_round_stc_det(graph: Graph, solution: FractionalSolution) -> AlgoResult:
    start = time.perf_counter()
    instance = lp_instance_stc(graph, solution)

    return _deterministic(
        graph, "lp-stc-det", instance, instance.total_budget(), time.perf_counter() - start
    )


def lp_round_stcplus_det(graph: Graph, solution: FractionalSolution) -> AlgoResult:
    start = time.perf_counter()
    instance = lp_instance_stcplus(graph, solution)

    return _deterministic(
        graph, "lp-stc+-det", instance, instance.total_budget(), time.perf_counter() - start
    )


def aposteriori_ratio(
    graph: Graph, clustering: Clustering, kind: ObjectiveKind, lb: float
) -> float:
    """
    Scores a clustering from any source against a lower bound.

    :raise InfeasibleClustering: If `kind` is cluster deletion and a cluster is not a clique.
    :raise RatioUndefined: If `lb` is 0 and the cost is positive.
    """
    cost = eval_objective(graph, clustering, kind)

    if cost == INFEASIBLE:
        raise InfeasibleClustering(non_clique_clusters(graph, clustering)[0])

    return approximation_ratio(lb, cost)


registry = AlgorithmRegistry()


@registry.as_algorithm(name="mfp-cd", objective=ObjectiveKind.CLUSTER_DELETION)
def _run_mfp_cd(graph, *, reps=DEFAULT_REPS, seed=None, order_seed=0, solution=None):
    return mfp_cd(graph, reps=reps, seed=seed, order_seed=order_seed)


@registry.as_algorithm(name="mfp-ce", objective=ObjectiveKind.CLUSTER_EDITING)
def _run_mfp_ce(graph, *, reps=DEFAULT_REPS, seed=None, order_seed=0, solution=None):
    return mfp_ce(graph, reps=reps, seed=seed, order_seed=order_seed)


@registry.as_algorithm(
    name="mfp-cd-det", objective=ObjectiveKind.CLUSTER_DELETION, deterministic=True
)
def _run_mfp_cd_det(graph, *, reps=None, seed=None, order_seed=0, solution=None):
    return mfp_cd_det(graph, order_seed=order_seed)


@registry.as_algorithm(
    name="mfp-ce-det", objective=ObjectiveKind.CLUSTER_EDITING, deterministic=True
)
def _run_mfp_ce_det(graph, *, reps=None, seed=None, order_seed=0, solution=None):
    return mfp_ce_det(graph, order_seed=order_seed)


@registry.as_algorithm(name="pivot", objective=ObjectiveKind.CLUSTER_EDITING)
def _run_pivot(graph, *, reps=DEFAULT_REPS, seed=None, order_seed=0, solution=None):
    return mfp_ce(graph, reps=reps, seed=seed, order_seed=order_seed, round_on=RoundOn.ORIGINAL)


@registry.as_algorithm(
    name="lp-stc", objective=ObjectiveKind.CLUSTER_DELETION, needs_solution=Flavor.STC
)
def _run_lp_stc(graph, *, reps=DEFAULT_REPS, seed=None, order_seed=0, solution=None):
    return lp_round_stc(graph, solution, reps=reps, seed=seed)


@registry.as_algorithm(
    name="lp-stc+", objective=ObjectiveKind.CLUSTER_EDITING, needs_solution=Flavor.STC_PLUS
)
def _run_lp_stcplus(graph, *, reps=DEFAULT_REPS, seed=None, order_seed=0, solution=None):
    return lp_round_stcplus(graph, solution, reps=reps, seed=seed)


@registry.as_algorithm(
    name="lp-stc-det",
    objective=ObjectiveKind.CLUSTER_DELETION,
    needs_solution=Flavor.STC,
    deterministic=True,
)
def _run_lp_stc_det(graph, *, reps=None, seed=None, order_seed=0, solution=None):
    return lp_round_stc_det(graph, solution)


@registry.as_algorithm(
    name="lp-stc+-det",
    objective=ObjectiveKind.CLUSTER_EDITING,
    needs_solution=Flavor.STC_PLUS,
    deterministic=True,
)
def _run_lp_stcplus_det(graph, *, reps=None, seed=None, order_seed=0, solution=None):
    return lp_round_stcplus_det(graph, solution)
