"""
Open wedges `(i, j; k)`: `k` adjacent to both `i` and `j`, `i` and `j` not adjacent.

Wedges are streamed in a fixed order (centers ascending, then neighbor pairs in
lexicographic order) and only materialized as Gallai graphs or wedge
hypergraphs for diagnostics.
"""

from __future__ import annotations

import asyncio
import bisect
import concurrent.futures
import dataclasses
import logging
import typing

import numpy as np

from stcpivot.exceptions import ResourceLimitExceeded
from stcpivot.graph import Graph, Pair, canonical, has_edge

logger = logging.getLogger(__name__)

DEFAULT_WEDGE_CAP = 10**8


class OpenWedge(typing.NamedTuple):
    """
    `i < j` are the non-adjacent ends, `k` the center.
    """

    i: int
    j: int
    k: int

    def pairs(self) -> typing.Tuple[Pair, Pair, Pair]:
        """
        The node pairs `(i, j)`, `(i, k)`, `(j, k)`, canonical.
        """
        return (self.i, self.j), canonical(self.i, self.k), canonical(self.j, self.k)

    def edges(self) -> typing.Tuple[Pair, Pair]:
        """
        The two edges of the wedge, canonical.
        """
        return canonical(self.i, self.k), canonical(self.j, self.k)


def wedges_at(graph: Graph, k: int) -> typing.Iterator[OpenWedge]:
    """
    Wedges centered at `k`, in lexicographic order of `(i, j)`.
    """
    adjacency = graph.adjacency
    nbrs = adjacency[k]

    for a, i in enumerate(nbrs):
        for j in nbrs[a + 1 :]:
            if not has_edge(adjacency, i, j):
                yield OpenWedge(i, j, k)


def iter_wedges(
    graph: Graph, *, centers: typing.Optional[typing.Iterable[int]] = None
) -> typing.Iterator[OpenWedge]:
    """
    All open wedges, centers ascending unless `centers` gives another order.
    """
    for k in range(graph.n) if centers is None else centers:
        yield from wedges_at(graph, k)


def enumerate_wedges(graph: Graph, visitor: typing.Callable[[OpenWedge], typing.Any]) -> int:
    """
    Invokes `visitor` once per open wedge, in deterministic order.

    :return: The number of wedges.
    """
    count = 0

    for wedge in iter_wedges(graph):
        visitor(wedge)
        count += 1

    return count


async def enumerate_wedges_parallel(
    graph: Graph,
    visitor: typing.Callable[[OpenWedge], typing.Any],
    *,
    workers: int = 4,
) -> int:
    """
    Enumerates wedges with centers split across `workers` threads.
    Every wedge is visited exactly once but the order is not fixed, so
    `visitor` must be safe to call concurrently.

    :return: The number of wedges.
    """
    loop = asyncio.get_running_loop()
    shards = [list(range(graph.n))[w::workers] for w in range(workers)]

    def run(shard: typing.Sequence[int]) -> int:
        count = 0

        for k in shard:
            for wedge in wedges_at(graph, k):
                visitor(wedge)
                count += 1

        return count

    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
        counts = await asyncio.gather(
            *(loop.run_in_executor(pool, run, shard) for shard in shards if shard)
        )

    return sum(counts)


def _shared_neighbors(first: typing.Sequence[int], second: typing.Sequence[int]) -> int:
    """
    Size of the intersection of two sorted adjacency tuples, by binary search
    of the shorter one's entries in the longer.
    """
    if len(first) > len(second):
        first, second = second, first

    shared = 0

    for w in first:
        idx = bisect.bisect_left(second, w)
        shared += idx < len(second) and second[idx] == w

    return shared


def wedges_per_center(graph: Graph) -> np.ndarray:
    """
    `|W_k|` for every center: `C(d_k, 2)` minus the triangles through `k`.
    Triangles are counted along edges, in `O(m)` memory.
    """
    adjacency = graph.adjacency
    corners = [0] * graph.n

    for u, v in graph.edges():
        shared = _shared_neighbors(adjacency[u], adjacency[v])
        corners[u] += shared
        corners[v] += shared

    degrees = np.fromiter(map(len, adjacency), dtype=np.int64, count=graph.n)

    # each triangle through k is seen from both of its edges at k
    return degrees * (degrees - 1) // 2 - np.asarray(corners, dtype=np.int64) // 2


def wedge_count(graph: Graph) -> int:
    """
    `|W|` without enumerating or materializing wedges.
    """
    return int(wedges_per_center(graph).sum())


@dataclasses.dataclass(frozen=True)
class GallaiGraph:
    """
    One node per edge of the source graph (index into `nodes`), one edge per open wedge.
    """

    nodes: typing.Tuple[Pair, ...]
    edges: typing.Tuple[typing.Tuple[int, int], ...]

    def index(self) -> typing.Dict[Pair, int]:
        return {pair: idx for idx, pair in enumerate(self.nodes)}


@dataclasses.dataclass(frozen=True)
class WedgeHypergraph:
    """
    Pair-nodes are every unordered pair of the source graph (there are
    `n (n - 1) / 2`, they are not stored), one 3-pair hyperedge per open wedge.
    """

    n: int
    hyperedges: typing.Tuple[typing.FrozenSet[Pair], ...]

    @property
    def node_count(self) -> int:
        return self.n * (self.n - 1) // 2


def _check_cap(what: str, graph: Graph, cap: int) -> int:
    count = wedge_count(graph)

    if count > cap:
        raise ResourceLimitExceeded(what, size=count, cap=cap)

    return count


def build_gallai(graph: Graph, *, cap: int = DEFAULT_WEDGE_CAP) -> GallaiGraph:
    """
    Materializes the Gallai graph. Meant for diagnostics on small instances.

    :raise ResourceLimitExceeded: If the graph has more than `cap` open wedges.
    """
    count = _check_cap("the Gallai graph", graph, cap)
    nodes = tuple(graph.edges())
    index = {pair: idx for idx, pair in enumerate(nodes)}
    edges = tuple(
        (index[canonical(w.i, w.k)], index[canonical(w.j, w.k)]) for w in iter_wedges(graph)
    )

    logger.debug("Gallai graph of %r: %d nodes, %d edges.", graph, len(nodes), count)

    return GallaiGraph(nodes=nodes, edges=edges)


def build_hypergraph(graph: Graph, *, cap: int = DEFAULT_WEDGE_CAP) -> WedgeHypergraph:
    """
    Materializes the open wedge hypergraph. Meant for diagnostics on small instances.

    :raise ResourceLimitExceeded: If the graph has more than `cap` open wedges.
    """
    _check_cap("the open wedge hypergraph", graph, cap)

    return WedgeHypergraph(
        n=graph.n, hyperedges=tuple(frozenset(w.pairs()) for w in iter_wedges(graph))
    )

