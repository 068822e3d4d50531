from __future__ import annotations

import dataclasses
import enum
import logging
import pathlib
import typing

import numpy as np

from stcpivot.graph import Graph, Pair, PathLike, has_edge
from stcpivot.wedges import OpenWedge, iter_wedges

logger = logging.getLogger(__name__)


class Flavor(enum.Enum):
    STC = "STC"
    STC_PLUS = "STC+"


@dataclasses.dataclass(frozen=True)
class StcLabeling:
    """
    A strong triadic closure labeling and the wedge matching that produced it.

    `weak_edges` are edges labeled weak, `added_pairs` are non-edges added as weak
    edges (always empty for `Flavor.STC`).
    """

    flavor: Flavor
    weak_edges: typing.FrozenSet[Pair]
    added_pairs: typing.FrozenSet[Pair] = frozenset()
    matching: typing.Tuple[OpenWedge, ...] = ()

    @property
    def matching_size(self) -> int:
        """
        Number of matched wedges, a lower bound on the clustering objective.
        """
        return len(self.matching)

    @property
    def size(self) -> int:
        """
        `|E_W| + |E'|`.
        """
        return len(self.weak_edges) + len(self.added_pairs)

    @property
    def flipped(self) -> typing.FrozenSet[Pair]:
        return self.weak_edges | self.added_pairs


def center_order(n: int, order_seed: int = 0) -> typing.Sequence[int]:
    """
    Centers ascending for `order_seed == 0`, a seeded permutation otherwise.
    """
    if order_seed == 0:
        return range(n)

    return np.random.default_rng(order_seed).permutation(n).tolist()


def _key(u: int, v: int, n: int) -> int:
    return u * n + v if u < v else v * n + u


def match_cd(graph: Graph, order_seed: int = 0) -> StcLabeling:
    """
    Greedy maximal matching in the Gallai graph over the wedge stream.

    A wedge is matched iff neither of its two edges is covered yet; both its edges
    then become weak. Wedges are visited in stream order, skipping those already
    blocked, which gives the same matching as visiting every wedge.

    :param order_seed: 0 for natural center order, anything else shuffles centers.
    """
    n = graph.n
    adjacency = graph.adjacency
    covered: typing.Set[int] = set()
    matching: typing.List[OpenWedge] = []

    for k in center_order(n, order_seed):
        free = [i for i in adjacency[k] if _key(i, k, n) not in covered]

        for a, i in enumerate(free):
            if _key(i, k, n) in covered:
                continue

            for j in free[a + 1 :]:
                if _key(j, k, n) in covered or has_edge(adjacency, i, j):
                    continue

                covered.add(_key(i, k, n))
                covered.add(_key(j, k, n))
                matching.append(OpenWedge(i, j, k))

                break

    weak = frozenset(edge for wedge in matching for edge in wedge.edges())

    logger.debug("match_cd on %r: %d wedges matched.", graph, len(matching))

    return StcLabeling(Flavor.STC, weak, frozenset(), tuple(matching))


def match_ce(graph: Graph, order_seed: int = 0) -> StcLabeling:
    """
    Greedy maximal matching in the open wedge hypergraph over the wedge stream.

    A wedge is matched iff none of its three pairs is covered; its edges become
    weak and its missing pair is added.

    :param order_seed: 0 for natural center order, anything else shuffles centers.
    """
    n = graph.n
    adjacency = graph.adjacency
    covered: typing.Set[int] = set()
    matching: typing.List[OpenWedge] = []

    for k in center_order(n, order_seed):
        free = [i for i in adjacency[k] if _key(i, k, n) not in covered]

        for a, i in enumerate(free):
            if _key(i, k, n) in covered:
                continue

            for j in free[a + 1 :]:
                if (
                    _key(j, k, n) in covered
                    or _key(i, j, n) in covered
                    or has_edge(adjacency, i, j)
                ):
                    continue

                covered.update((_key(i, k, n), _key(j, k, n), _key(i, j, n)))
                matching.append(OpenWedge(i, j, k))

                break

    weak = frozenset(edge for wedge in matching for edge in wedge.edges())
    added = frozenset((wedge.i, wedge.j) for wedge in matching)

    logger.debug("match_ce on %r: %d wedges matched.", graph, len(matching))

    return StcLabeling(Flavor.STC_PLUS, weak, added, tuple(matching))


def check_stc_feasible(graph: Graph, labeling: StcLabeling) -> bool:
    """
    Scans every wedge: each needs a weak edge, or for `Flavor.STC_PLUS` an added pair.
    """
    weak = labeling.weak_edges
    added = labeling.added_pairs if labeling.flavor is Flavor.STC_PLUS else frozenset()

    for wedge in iter_wedges(graph):
        a, b = wedge.edges()

        if a not in weak and b not in weak and (wedge.i, wedge.j) not in added:
            return False

    return True


def is_well_formed(graph: Graph, labeling: StcLabeling) -> bool:
    """
    `E_W` is a subset of the edges, `E'` contains only non-edges.
    """
    adjacency = graph.adjacency

    return all(has_edge(adjacency, u, v) for u, v in labeling.weak_edges) and not any(
        has_edge(adjacency, u, v) for u, v in labeling.added_pairs
    )


def write_labeling(labeling: StcLabeling, graph: Graph, path: PathLike):
    """
    Writes `flavor matching_size`, then one `W u v` or `A u v` line per pair, with original labels.
    """
    labels = graph.labels

    with pathlib.Path(path).open("w") as stream:
        stream.write(f"{labeling.flavor.value} {labeling.matching_size}\n")

        for tag, pairs in (("W", labeling.weak_edges), ("A", labeling.added_pairs)):
            for u, v in sorted(pairs):
                stream.write(f"{tag} {labels[u]} {labels[v]}\n")
