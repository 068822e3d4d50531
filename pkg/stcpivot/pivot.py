from __future__ import annotations

import dataclasses
import enum
import heapq
import itertools
import logging
import math
import typing

import numpy as np

from stcpivot.exceptions import ClusteringSizeMismatch, InvalidPivotInstance
from stcpivot.graph import Clustering, Graph, Pair, canonical, has_edge
from stcpivot.utils.checker import check, check_all
from stcpivot.wedges import iter_wedges

logger = logging.getLogger(__name__)

# w- of a non-edge under cluster deletion; compared against, never summed
CANNOT_LINK = math.inf

# objective value of a clustering that co-clusters a cannot-link pair
INFEASIBLE = math.inf

TOLERANCE = 1e-9

MAX_VIOLATIONS = 100

Seed = typing.Union[int, np.random.SeedSequence, np.random.Generator, None]


class ObjectiveKind(enum.Enum):
    CLUSTER_EDITING = "ce"
    CLUSTER_DELETION = "cd"

    def weights(self, is_edge: bool) -> typing.Tuple[float, float]:
        """
        `(w+, w-)` of a pair: `(1, 0)` on edges, `(0, 1)` or `(0, CANNOT_LINK)` on non-edges.
        """
        if is_edge:
            return 1.0, 0.0

        return (0.0, 1.0) if self is ObjectiveKind.CLUSTER_EDITING else (0.0, CANNOT_LINK)


@dataclasses.dataclass(frozen=True)
class PivotInstance:
    """
    Weights (from `graph` and `kind`), budgets and the derived graph `derived`
    that pivoting runs on. Pairs missing from `budgets` have budget 0.
    """

    graph: Graph
    kind: ObjectiveKind
    derived: Graph
    budgets: typing.Mapping[Pair, float]

    def __post_init__(self):
        check(
            self.derived.n == self.graph.n,
            error=InvalidPivotInstance(
                f"derived graph has {self.derived.n} nodes, graph has {self.graph.n}"
            ),
        )
        check_all(
            self.budgets.items(),
            lambda item: item[1] >= 0,
            error=lambda item: InvalidPivotInstance(f"budget {item[1]} of {item[0]} is negative"),
        )

        if self.kind is ObjectiveKind.CLUSTER_DELETION:
            adjacency = self.graph.adjacency
            check_all(
                self.derived.edges(),
                lambda pair: has_edge(adjacency, *pair),
                error=lambda pair: InvalidPivotInstance(
                    f"derived edge {pair} is a cannot-link pair"
                ),
            )

    @property
    def n(self) -> int:
        return self.graph.n

    def weights(self, u: int, v: int) -> typing.Tuple[float, float]:
        return self.kind.weights(has_edge(self.graph.adjacency, u, v))

    def budget(self, u: int, v: int) -> float:
        return self.budgets.get(canonical(u, v), 0.0)

    def total_budget(self) -> float:
        return math.fsum(self.budgets.values())


def pivot_random(derived: Graph, seed: Seed = None) -> Clustering:
    """
    Pivot: repeatedly picks a uniformly random unclustered node and clusters it
    with its unclustered neighbors in `derived`.

    :param derived: The graph pivoting follows.
    :param seed: Anything `numpy.random.default_rng` accepts.
    """
    rng = np.random.default_rng(seed)
    adjacency = derived.adjacency
    assignment = [-1] * derived.n
    cid = 0

    for p in rng.permutation(derived.n).tolist():
        if assignment[p] >= 0:
            continue

        assignment[p] = cid

        for v in adjacency[p]:
            if assignment[v] < 0:
                assignment[v] = cid

        cid += 1

    return Clustering(assignment)


class _DetPivotState:
    """
    Remaining nodes and their remaining derived-graph neighborhoods.
    """

    def __init__(self, instance: PivotInstance):
        self.instance = instance
        self.neighbors: typing.List[typing.Set[int]] = [
            set(nbrs) for nbrs in instance.derived.adjacency
        ]
        self.alive = [True] * instance.n

    def ratio(self, k: int) -> float:
        """
        `P_k`: weight of the mistakes pivoting on `k` makes among other remaining
        pairs, over their budget. `0/0` is 0, a positive weight over no budget is
        infinite, and so is co-clustering a cannot-link pair.
        """
        instance = self.instance
        neighbors = self.neighbors
        around = neighbors[k]
        mistakes = 0.0
        budget = 0.0

        # T_k+: derived edges leaving the cluster of k
        for i in around:
            for j in neighbors[i]:
                if j != k and j not in around:
                    mistakes += instance.weights(i, j)[0]
                    budget += instance.budget(i, j)

        # T_k-: non-derived pairs inside the cluster of k
        for i, j in itertools.combinations(around, 2):
            if j in neighbors[i]:
                continue

            w_minus = instance.weights(i, j)[1]

            if w_minus == CANNOT_LINK:
                return math.inf

            mistakes += w_minus
            budget += instance.budget(i, j)

        if mistakes <= 0:
            return 0.0

        if budget <= 0:
            return math.inf

        return mistakes / budget

    def within_two(self, nodes: typing.Iterable[int]) -> typing.Set[int]:
        reached: typing.Set[int] = set()

        for s in nodes:
            for u in self.neighbors[s]:
                reached.add(u)
                reached.update(self.neighbors[u])

        return reached

    def remove(self, cluster: typing.Iterable[int]):
        for s in cluster:
            self.alive[s] = False

            for u in self.neighbors[s]:
                self.neighbors[u].discard(s)

        for s in cluster:
            self.neighbors[s] = set()


def pivot_deterministic(instance: PivotInstance) -> Clustering:
    """
    Deterministic pivoting: each round pivots on the remaining node with the
    smallest `P_k` (ties to the smallest id), clusters it with its remaining
    derived-graph neighbors and recurses on the rest.

    `P_k` only changes for nodes within two hops of a removed cluster, so only
    those are recomputed between rounds.

    :raise InvalidPivotInstance: If every remaining node has an infinite `P_k`.
    """
    state = _DetPivotState(instance)
    version = [0] * instance.n
    heap = [(state.ratio(k), k, 0) for k in range(instance.n)]
    heapq.heapify(heap)
    assignment = [-1] * instance.n
    remaining = instance.n
    cid = 0

    while remaining:
        ratio, pivot, stamp = heapq.heappop(heap)

        if not state.alive[pivot] or stamp != version[pivot]:
            continue

        if ratio == math.inf:
            raise InvalidPivotInstance(
                "no pivot can charge its mistakes to budget", remaining=remaining
            )

        cluster = [pivot, *sorted(state.neighbors[pivot])]

        for u in cluster:
            assignment[u] = cid

        touched = state.within_two(cluster)
        state.remove(cluster)
        remaining -= len(cluster)
        cid += 1

        for k in touched:
            if state.alive[k]:
                version[k] += 1
                heapq.heappush(heap, (state.ratio(k), k, version[k]))

        logger.debug("DetPivot on %d with P=%.4g, %d nodes left.", pivot, ratio, remaining)

    return Clustering(assignment)


class Violation(typing.NamedTuple):
    """
    `condition` is 1 (pair) or 2 (open wedge of the derived graph, center last).
    """

    condition: int
    nodes: typing.Tuple[int, ...]
    lhs: float
    rhs: float


@dataclasses.dataclass(frozen=True)
class ConditionReport:
    passed: bool
    violations: typing.Tuple[Violation, ...]

    def __bool__(self) -> bool:
        return self.passed


def check_pivot_conditions(
    instance: PivotInstance, alpha: float, *, limit: int = MAX_VIOLATIONS
) -> ConditionReport:
    """
    Checks the two conditions under which pivoting on the derived graph costs at
    most `alpha` times the total budget:

    1. a derived edge has `w- <= alpha b`, any other pair has `w+ <= alpha b`;
    2. every open wedge `(i, j; k)` of the derived graph has
       `w+_ik + w+_jk + w-_ij <= alpha (b_ik + b_jk + b_ij)`.

    :param limit: How many violations are reported.
    """
    graph, derived = instance.graph, instance.derived
    adjacency = derived.adjacency
    violations: typing.List[Violation] = []
    failed = False

    def fail(condition: int, nodes: tuple, lhs: float, rhs: float) -> bool:
        nonlocal failed
        failed = True

        if len(violations) < limit:
            violations.append(Violation(condition, nodes, lhs, rhs))

        return len(violations) >= limit

    for u, v in derived.edges():
        w_minus = instance.weights(u, v)[1]
        rhs = alpha * instance.budget(u, v)

        if w_minus == CANNOT_LINK or w_minus > rhs + TOLERANCE:
            if fail(1, (u, v), w_minus, rhs):
                return ConditionReport(False, tuple(violations))

    # only edges of the graph have w+ > 0
    for u, v in graph.edges():
        if has_edge(adjacency, u, v):
            continue

        rhs = alpha * instance.budget(u, v)

        if 1.0 > rhs + TOLERANCE:
            if fail(1, (u, v), 1.0, rhs):
                return ConditionReport(False, tuple(violations))

    for wedge in iter_wedges(derived):
        i, j, k = wedge
        w_minus = instance.weights(i, j)[1]
        rhs = alpha * (instance.budget(i, k) + instance.budget(j, k) + instance.budget(i, j))

        if w_minus == CANNOT_LINK:
            lhs = CANNOT_LINK
        else:
            lhs = instance.weights(i, k)[0] + instance.weights(j, k)[0] + w_minus

        if lhs == CANNOT_LINK or lhs > rhs + TOLERANCE:
            if fail(2, (i, j, k), lhs, rhs):
                break

    return ConditionReport(not failed, tuple(violations))


def eval_objective(graph: Graph, clustering: Clustering, kind: ObjectiveKind) -> float:
    """
    Cluster editing: edges cut plus non-adjacent co-clustered pairs.
    Cluster deletion: edges cut, or `INFEASIBLE` if a cluster is not a clique.

    Co-clustered non-edges are counted per cluster, never over all pairs.

    :raise ClusteringSizeMismatch: If the clustering is not over the graph's nodes.
    """
    cut, missing = _disagreements(graph, clustering)

    if kind is ObjectiveKind.CLUSTER_EDITING:
        return int(cut + missing.sum())

    return int(cut) if not missing.any() else INFEASIBLE


def non_clique_clusters(graph: Graph, clustering: Clustering) -> typing.List[int]:
    """
    Ids of the clusters that are not cliques of `graph`.
    """
    _, missing = _disagreements(graph, clustering)

    return np.flatnonzero(missing).tolist()


def _disagreements(graph: Graph, clustering: Clustering) -> typing.Tuple[int, np.ndarray]:
    if clustering.n != graph.n:
        raise ClusteringSizeMismatch(expected=graph.n, got=clustering.n)

    labels = clustering.assignment
    edges = graph.edge_array()
    inside = labels[edges[:, 0]] == labels[edges[:, 1]]
    sizes = np.bincount(labels, minlength=clustering.k)
    internal = np.bincount(labels[edges[inside, 0]], minlength=clustering.k)

    return int((~inside).sum()), sizes * (sizes - 1) // 2 - internal


def is_feasible(cost: float) -> bool:
    return cost != INFEASIBLE
