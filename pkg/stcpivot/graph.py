from __future__ import annotations

import bisect
import enum
import logging
import pathlib
import typing

import numpy as np
import scipy.io
import scipy.sparse

from stcpivot.exceptions import (
    ClusteringSizeMismatch,
    EmptyGraph,
    NodeOutOfRange,
    ParsingError,
)
from stcpivot.utils.parser import iter_data_lines, parse_line

logger = logging.getLogger(__name__)

Pair = typing.Tuple[int, int]
PathLike = typing.Union[str, pathlib.Path]


def canonical(u: int, v: int) -> Pair:
    """
    The unordered pair `{u, v}` as a tuple with the smaller id first.
    """
    return (u, v) if u < v else (v, u)


class GraphFormat(enum.Enum):
    EDGE_LIST = "edge-list"
    MATRIX_MARKET = "matrix-market"

    @classmethod
    def from_path(cls, path: PathLike) -> GraphFormat:
        if pathlib.Path(path).suffix.lower() == ".mtx":
            return cls.MATRIX_MARKET

        return cls.EDGE_LIST


class Graph:
    """
    Immutable simple undirected graph on nodes `0..n-1`.

    Adjacency is kept twice: as a scipy CSR pattern (vectorized counting) and as
    sorted tuples (cheap per-node iteration and `bisect` membership).
    """

    def __init__(
        self,
        csr: scipy.sparse.csr_matrix,
        *,
        labels: typing.Optional[typing.Sequence[typing.Any]] = None,
        name: str = "graph",
    ):
        """
        Initialises a graph from a square sparse matrix.
        Use `Graph.from_edges()` or `load_graph()` instead of calling this directly.

        :param csr: Any square sparse matrix. Directions, values, self-loops and
            duplicates are dropped.
        :param labels: Original label of each node, defaults to the node id.
        :param name: Graph name, reported in benchmark rows.
        """
        n = csr.shape[0]

        if csr.shape != (n, n):
            raise ValueError(f"Adjacency must be square, got shape {csr.shape}.")

        pattern = scipy.sparse.csr_matrix(csr, copy=True)
        pattern.sum_duplicates()
        pattern.data = np.ones(pattern.data.size, dtype=np.int8)
        pattern = pattern.maximum(pattern.T)
        pattern = (
            scipy.sparse.triu(pattern, k=1) + scipy.sparse.tril(pattern, k=-1)
        ).tocsr()
        pattern.sort_indices()

        self.name = name
        self._csr = pattern
        self._adjacency: typing.Tuple[typing.Tuple[int, ...], ...] = tuple(
            tuple(pattern.indices[pattern.indptr[u] : pattern.indptr[u + 1]].tolist())
            for u in range(n)
        )
        self.labels: typing.Tuple[typing.Any, ...] = (
            tuple(labels) if labels is not None else tuple(range(n))
        )

        if len(self.labels) != n:
            raise ValueError(f"Got {len(self.labels)} labels for {n} nodes.")

        self._label_index: typing.Optional[typing.Dict[typing.Any, int]] = None
        self._edge_array: typing.Optional[np.ndarray] = None

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: typing.Iterable[Pair],
        *,
        labels: typing.Optional[typing.Sequence[typing.Any]] = None,
        name: str = "graph",
    ) -> Graph:
        """
        Builds a graph on `n` nodes from node-id pairs.

        :raise NodeOutOfRange: If a pair references a node outside `0..n-1`.
        """
        pairs = np.array(list(edges), dtype=np.int64).reshape(-1, 2)

        if pairs.size and (pairs.min() < 0 or pairs.max() >= n):
            bad = int(pairs.max() if pairs.max() >= n else pairs.min())
            raise NodeOutOfRange(bad, n=n)

        csr = scipy.sparse.coo_matrix(
            (np.ones(len(pairs), dtype=bool), (pairs[:, 0], pairs[:, 1])),
            shape=(n, n),
        ).tocsr()

        return cls(csr, labels=labels, name=name)

    @property
    def n(self) -> int:
        return len(self._adjacency)

    @property
    def m(self) -> int:
        return self._csr.nnz // 2

    @property
    def adjacency(self) -> typing.Tuple[typing.Tuple[int, ...], ...]:
        """
        Per-node neighbor tuples, strictly increasing.
        """
        return self._adjacency

    @property
    def csr(self) -> scipy.sparse.csr_matrix:
        """
        Symmetric 0/1 adjacency matrix. Do not mutate.
        """
        return self._csr

    @property
    def label_index(self) -> typing.Dict[typing.Any, int]:
        """
        Original label to node id.
        """
        if self._label_index is None:
            self._label_index = {label: u for u, label in enumerate(self.labels)}

        return self._label_index

    def neighbors(self, u: int) -> typing.Tuple[int, ...]:
        self._check_node(u)

        return self._adjacency[u]

    def degree(self, u: int) -> int:
        return len(self.neighbors(u))

    def is_edge(self, u: int, v: int) -> bool:
        """
        Tests `{u, v}` for membership by binary search on the shorter adjacency.

        :raise NodeOutOfRange: If `u` or `v` is not a node.
        """
        self._check_node(u)
        self._check_node(v)

        return has_edge(self._adjacency, u, v)

    def edges(self) -> typing.Iterator[Pair]:
        """
        Iterates edges as `(u, v)` with `u < v`, sorted.
        """
        for u, nbrs in enumerate(self._adjacency):
            for v in nbrs[bisect.bisect_right(nbrs, u) :]:
                yield u, v

    def edge_array(self) -> np.ndarray:
        """
        The read-only `(m, 2)` array of edges with `u < v`, sorted.
        """
        if self._edge_array is None:
            upper = scipy.sparse.triu(self._csr, k=1).tocoo()
            pairs = np.column_stack((upper.row, upper.col)).astype(np.int64)
            self._edge_array = pairs[np.lexsort((pairs[:, 1], pairs[:, 0]))]
            self._edge_array.setflags(write=False)

        return self._edge_array

    def _check_node(self, u: int):
        if not 0 <= u < len(self._adjacency):
            raise NodeOutOfRange(u, n=self.n, graph=self)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented

        if self.n != other.n or self.m != other.m:
            return False

        if set(self.labels) != set(other.labels):
            return False

        mine = {frozenset((self.labels[u], self.labels[v])) for u, v in self.edges()}
        theirs = {
            frozenset((other.labels[u], other.labels[v])) for u, v in other.edges()
        }

        return mine == theirs

    def __repr__(self) -> str:
        return f"<Graph {self.name!r} n={self.n} m={self.m}>"


def has_edge(adjacency: typing.Sequence[typing.Sequence[int]], u: int, v: int) -> bool:
    """
    Membership test on sorted adjacency tuples, no range check.
    """
    if u == v:
        return False

    if len(adjacency[u]) <= len(adjacency[v]):
        nbrs, target = adjacency[u], v
    else:
        nbrs, target = adjacency[v], u

    idx = bisect.bisect_left(nbrs, target)

    return idx < len(nbrs) and nbrs[idx] == target


class Clustering:
    """
    A partition of `0..n-1`. Cluster ids are `0..k-1` in order of first appearance.
    """

    def __init__(self, assignment: typing.Sequence[int]):
        labels = np.asarray(assignment, dtype=np.int64).reshape(-1)

        if labels.size:
            _, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
            rank = np.empty(len(first), dtype=np.int64)
            rank[np.argsort(first)] = np.arange(len(first))
            labels = rank[inverse.reshape(-1)]

        self._assignment = labels
        self._assignment.setflags(write=False)

    @classmethod
    def from_clusters(cls, clusters: typing.Iterable[typing.Iterable[int]], n: int) -> Clustering:
        """
        Builds a clustering from explicit node groups.

        :raise ClusteringSizeMismatch: If the groups do not partition `0..n-1`.
        """
        assignment = np.full(n, -1, dtype=np.int64)
        seen = 0

        for cid, cluster in enumerate(clusters):
            for u in cluster:
                if not 0 <= u < n or assignment[u] != -1:
                    raise ClusteringSizeMismatch(expected=n, got=seen + 1)

                assignment[u] = cid
                seen += 1

        if seen != n:
            raise ClusteringSizeMismatch(expected=n, got=seen)

        return cls(assignment)

    @classmethod
    def singletons(cls, n: int) -> Clustering:
        return cls(np.arange(n))

    @property
    def assignment(self) -> np.ndarray:
        """
        Read-only array, node to cluster id.
        """
        return self._assignment

    @property
    def n(self) -> int:
        return int(self._assignment.size)

    @property
    def k(self) -> int:
        return int(self._assignment.max()) + 1 if self._assignment.size else 0

    def clusters(self) -> typing.List[typing.List[int]]:
        """
        Node groups ordered by cluster id, nodes ascending inside each group.
        """
        groups: typing.List[typing.List[int]] = [[] for _ in range(self.k)]

        for u, cid in enumerate(self._assignment.tolist()):
            groups[cid].append(u)

        return groups

    def cluster_of(self, u: int) -> int:
        return int(self._assignment[u])

    def __len__(self) -> int:
        return self.k

    def __eq__(self, other) -> bool:
        if not isinstance(other, Clustering):
            return NotImplemented

        return np.array_equal(self._assignment, other._assignment)

    def __repr__(self) -> str:
        return f"<Clustering n={self.n} k={self.k}>"


def load_graph(
    path: PathLike,
    file_format: typing.Optional[GraphFormat] = None,
    *,
    name: typing.Optional[str] = None,
) -> Graph:
    """
    Loads and standardizes a graph: directions, weights, self-loops and parallel
    edges are dropped, labels are remapped to `0..n-1` by first appearance.

    :param path: The file to read.
    :param file_format: Edge-list or matrix-market, guessed from the suffix by default.
    :param name: Graph name, the file stem by default.

    :raise ParsingError: On a malformed line or a non-integer node label.
    :raise EmptyGraph: If the file defines no node.
    """
    path = pathlib.Path(path)
    file_format = file_format or GraphFormat.from_path(path)
    name = name or path.stem

    if file_format is GraphFormat.MATRIX_MARKET:
        labels, sources, targets = _read_matrix_market(path)
    else:
        labels, sources, targets = _read_edge_list(path)

    if not labels:
        raise EmptyGraph(str(path))

    n = len(labels)
    csr = scipy.sparse.coo_matrix(
        (np.ones(len(sources), dtype=bool), (sources, targets)), shape=(n, n)
    ).tocsr()
    graph = Graph(csr, labels=labels, name=name)

    logger.debug("Loaded %r from %s (%s).", graph, path, file_format.value)

    return graph


def _read_edge_list(path: pathlib.Path):
    index: typing.Dict[int, int] = {}
    sources: typing.List[int] = []
    targets: typing.List[int] = []

    with path.open() as stream:
        for line_number, line in iter_data_lines(stream, comments="#%"):
            u, v = parse_line(
                (int, int), line, path=str(path), line_number=line_number, allow_extra=True
            )
            sources.append(index.setdefault(u, len(index)))
            targets.append(index.setdefault(v, len(index)))

    return list(index), sources, targets


def _read_matrix_market(path: pathlib.Path):
    if not path.is_file():
        raise FileNotFoundError(str(path))

    try:
        rows, cols, _, fmt, field, symmetry = scipy.io.mminfo(str(path))
    except (ValueError, IndexError) as e:
        raise ParsingError(str(path), reason=f"invalid matrix-market header ({e})", path=str(path))

    if fmt != "coordinate" or field not in ("pattern", "real", "integer"):
        raise ParsingError(
            f"{fmt} {field}", reason="only coordinate pattern/real headers", path=str(path)
        )

    if symmetry not in ("symmetric", "general"):
        raise ParsingError(symmetry, reason="only symmetric/general headers", path=str(path))

    if rows != cols:
        raise ParsingError(f"{rows}x{cols}", reason="adjacency must be square", path=str(path))

    try:
        coo = scipy.sparse.coo_matrix(scipy.io.mmread(str(path)))
    except (ValueError, IndexError) as e:
        raise ParsingError(str(path), reason=f"invalid matrix-market body ({e})", path=str(path))

    # header ids are 1-based; first appearance over entries, then untouched header nodes
    order = np.column_stack((coo.row, coo.col)).reshape(-1)
    _, first = np.unique(order, return_index=True)
    seen = order[np.sort(first)]
    rest = np.setdiff1d(np.arange(rows), seen, assume_unique=True)
    ids = np.concatenate((seen, rest)).astype(np.int64)
    remap = np.empty(rows, dtype=np.int64)
    remap[ids] = np.arange(rows)

    return (ids + 1).tolist(), remap[coo.row], remap[coo.col]


def write_edge_list(graph: Graph, path: PathLike):
    """
    Writes one `label label` line per edge, under a `# n m` comment.
    """
    with pathlib.Path(path).open("w") as stream:
        stream.write(f"# {graph.n} {graph.m}\n")

        for u, v in graph.edges():
            stream.write(f"{graph.labels[u]} {graph.labels[v]}\n")


def write_clustering(clustering: Clustering, path: PathLike):
    """
    Writes the cluster id of node `r` on line `r`.
    """
    with pathlib.Path(path).open("w") as stream:
        stream.writelines(f"{cid}\n" for cid in clustering.assignment.tolist())


def read_clustering(path: PathLike, *, n: typing.Optional[int] = None) -> Clustering:
    """
    Reads a clustering written by `write_clustering()` or an external tool.

    :param n: Expected node count.

    :raise ParsingError: On a non-integer cluster id.
    :raise ClusteringSizeMismatch: If `n` is given and the line count differs.
    """
    with pathlib.Path(path).open() as stream:
        ids = [
            parse_line((int,), line, path=str(path), line_number=line_number)[0]
            for line_number, line in iter_data_lines(stream)
        ]

    if n is not None and len(ids) != n:
        raise ClusteringSizeMismatch(expected=n, got=len(ids))

    return Clustering(ids)
