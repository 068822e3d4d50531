"""
Exact optima on small graphs, used as ground truth.

Clusterings are found by enumerating every set partition as a restricted growth
string and scoring them in vectorized chunks. Labelings are found by an
iterative deepening search for a minimum set of pairs hitting every open wedge.
Only pairs that occur in some open wedge are candidates: a pair in no wedge
appears in no STC constraint, so removing it from a feasible labeling keeps it
feasible and an optimum never labels it.
"""

from __future__ import annotations

import dataclasses
import enum
import itertools
import logging
import typing

import numpy as np

from stcpivot.exceptions import OracleCapExceeded
from stcpivot.graph import Clustering, Graph, Pair
from stcpivot.labeling import Flavor, StcLabeling, check_stc_feasible, match_cd, match_ce
from stcpivot.pivot import ObjectiveKind
from stcpivot.wedges import iter_wedges

logger = logging.getLogger(__name__)

DEFAULT_ORACLE_CAP = 10
DEFAULT_LABELING_CAP = 24

# partitions scored per numpy batch
CHUNK_SIZE = 1 << 15


class Problem(enum.Enum):
    CLUSTER_EDITING = "ce"
    CLUSTER_DELETION = "cd"
    STC = "stc"
    STC_PLUS = "stc+"

    @property
    def objective(self) -> typing.Optional[ObjectiveKind]:
        return {
            Problem.CLUSTER_EDITING: ObjectiveKind.CLUSTER_EDITING,
            Problem.CLUSTER_DELETION: ObjectiveKind.CLUSTER_DELETION,
        }.get(self)

    @property
    def flavor(self) -> typing.Optional[Flavor]:
        return {Problem.STC: Flavor.STC, Problem.STC_PLUS: Flavor.STC_PLUS}.get(self)


@dataclasses.dataclass(frozen=True)
class OracleResult:
    problem: Problem
    opt_value: int
    witness: typing.Union[Clustering, StcLabeling]


def restricted_growth_strings(n: int) -> typing.Iterator[typing.Tuple[int, ...]]:
    """
    Every set partition of `0..n-1` exactly once, as `a` with `a[0] = 0` and
    `a[i] <= 1 + max(a[:i])`, in lexicographic order. There are Bell(n) of them.
    """
    if n == 0:
        yield ()
        return

    a = [0] * n
    # prefix[i] = max(a[: i + 1])
    prefix = [0] * n

    while True:
        yield tuple(a)

        i = n - 1

        while i > 0 and a[i] > prefix[i - 1]:
            i -= 1

        if i == 0:
            return

        a[i] += 1
        prefix[i] = max(prefix[i - 1], a[i])

        for j in range(i + 1, n):
            a[j] = 0
            prefix[j] = prefix[i]


def opt_clustering(
    graph: Graph, kind: ObjectiveKind, *, cap: int = DEFAULT_ORACLE_CAP
) -> OracleResult:
    """
    Minimum cluster editing or cluster deletion cost over all partitions, ties
    to the first partition in enumeration order.

    :param cap: Largest node count accepted.

    :raise OracleCapExceeded: If the graph has more than `cap` nodes.
    """
    n = graph.n

    if n > cap:
        raise OracleCapExceeded("clustering", size=n, cap=cap)

    us, vs = np.triu_indices(n, k=1)
    is_edge = graph.csr.toarray().astype(bool)[us, vs]
    partitions = restricted_growth_strings(n)
    best_cost, best = None, None

    while True:
        chunk = np.array(list(itertools.islice(partitions, CHUNK_SIZE)), dtype=np.int8)

        if not len(chunk):
            break

        chunk = chunk.reshape(len(chunk), n)
        together = chunk[:, us] == chunk[:, vs]
        cut = (~together & is_edge).sum(axis=1)
        missing = (together & ~is_edge).sum(axis=1)

        if kind is ObjectiveKind.CLUSTER_EDITING:
            costs = cut + missing
        else:
            costs = np.where(missing > 0, np.iinfo(np.int64).max, cut)

        idx = int(np.argmin(costs))

        if best_cost is None or costs[idx] < best_cost:
            best_cost, best = int(costs[idx]), chunk[idx].copy()

    logger.debug("Exact %s on %r: %d.", kind.value, graph, best_cost)

    return OracleResult(
        Problem.CLUSTER_EDITING if kind is ObjectiveKind.CLUSTER_EDITING else Problem.CLUSTER_DELETION,
        best_cost,
        Clustering(best),
    )


def wedge_candidates(
    graph: Graph, flavor: Flavor
) -> typing.Tuple[typing.List[Pair], typing.List[int]]:
    """
    The pairs that occur in open wedges and may be labeled, and one bitmask over
    them per wedge: its two edges, plus its missing pair for `Flavor.STC_PLUS`.
    """
    index: typing.Dict[Pair, int] = {}
    masks: typing.List[int] = []

    for wedge in iter_wedges(graph):
        pairs = wedge.edges() if flavor is Flavor.STC else wedge.pairs()
        mask = 0

        for pair in pairs:
            mask |= 1 << index.setdefault(pair, len(index))

        masks.append(mask)

    return list(index), masks


def _hitting_set(masks: typing.Sequence[int], depth: int, chosen: int = 0) -> typing.Optional[int]:
    uncovered = next((mask for mask in masks if not mask & chosen), None)

    if uncovered is None:
        return chosen

    if depth == 0:
        return None

    bits = uncovered

    while bits:
        low = bits & -bits
        found = _hitting_set(masks, depth - 1, chosen | low)

        if found is not None:
            return found

        bits ^= low

    return None


def opt_labeling(
    graph: Graph, flavor: Flavor, *, cap: int = DEFAULT_LABELING_CAP
) -> OracleResult:
    """
    Minimum `|E_W|` (or `|E_W| + |E'|` for `Flavor.STC_PLUS`) over feasible labelings.

    :param cap: Largest number of candidate pairs accepted.

    :raise OracleCapExceeded: If more than `cap` pairs occur in open wedges.
    """
    candidates, masks = wedge_candidates(graph, flavor)

    if len(candidates) > cap:
        raise OracleCapExceeded("labeling", size=len(candidates), cap=cap)

    # disjoint matched wedges need distinct labeled pairs
    matching = match_cd(graph) if flavor is Flavor.STC else match_ce(graph)
    depth = matching.matching_size

    while True:
        chosen = _hitting_set(masks, depth)

        if chosen is not None:
            break

        depth += 1

    picked = [pair for bit, pair in enumerate(candidates) if chosen >> bit & 1]
    edges = set(graph.edges())
    labeling = StcLabeling(
        flavor,
        frozenset(p for p in picked if p in edges),
        frozenset(p for p in picked if p not in edges),
    )

    assert check_stc_feasible(graph, labeling)

    logger.debug("Exact %s labeling on %r: %d.", flavor.value, graph, labeling.size)

    return OracleResult(
        Problem.STC if flavor is Flavor.STC else Problem.STC_PLUS, labeling.size, labeling
    )


def solve(graph: Graph, problem: Problem, *, cap: typing.Optional[int] = None) -> OracleResult:
    """
    Dispatches to `opt_clustering()` or `opt_labeling()`, with their default caps unless `cap` is given.
    """
    if problem.objective is not None:
        cap = DEFAULT_ORACLE_CAP if cap is None else cap

        return opt_clustering(graph, problem.objective, cap=cap)

    cap = DEFAULT_LABELING_CAP if cap is None else cap

    return opt_labeling(graph, problem.flavor, cap=cap)
