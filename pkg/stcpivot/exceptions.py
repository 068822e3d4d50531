"""
All specific package's exceptions.
Cannot type hint custom classes due to circular import.
"""

from __future__ import annotations

from typing import Any, Optional


class StcPivotException(Exception):
    """
    Base exception.
    """

    def __reduce__(self):
        # subclasses take keyword-only arguments, bench workers send them back pickled
        return _restore, (self.__class__, self.args, self.__dict__)


def _restore(cls, args: tuple, state: dict) -> StcPivotException:
    error = cls.__new__(cls)
    error.args = args
    error.__dict__.update(state)

    return error


class GraphException(StcPivotException):
    """
    Base graph exception.
    """

    def __init__(self, message: str, graph=None):
        self.graph = graph
        super().__init__(message)


class SolutionException(StcPivotException):
    """
    Base exception for clusterings, labelings and fractional solutions.
    """

    pass


class AlgorithmException(StcPivotException):
    """
    Base algorithm exception.
    """

    def __init__(self, message: str, algorithm=None):
        self.algorithm = algorithm
        super().__init__(message)


class ParsingError(StcPivotException):
    """
    Raised when a line of an input file cannot be parsed.
    """

    def __init__(
        self,
        value: Any,
        *,
        reason: str,
        path: Optional[str] = None,
        line_number: Optional[int] = None,
    ):
        self.value = value
        self.reason = reason
        self.path = path
        self.line_number = line_number

        where = f"{path or '<stream>'}"

        if line_number is not None:
            where += f":{line_number}"

        super().__init__(f"{where}: cannot parse {value!r}: {reason}.")


class EmptyGraph(GraphException):
    """
    Raised when a loaded graph has no node.
    """

    def __init__(self, path: Optional[str] = None):
        self.path = path
        super().__init__(f"Graph {(path or 'unknown source')!r} has no node.")


class NodeOutOfRange(GraphException):
    """
    Raised when a node id is not in `0..n-1`.
    """

    def __init__(self, node: int, *, n: int, graph=None):
        self.node = node
        self.n = n
        super().__init__(f"Node {node!r} is out of range [0, {n}).", graph)


class ResourceLimitExceeded(GraphException):
    """
    Raised when a materialization would exceed its configured cap.
    """

    def __init__(self, what: str, *, size: int, cap: int):
        self.what = what
        self.size = size
        self.cap = cap
        super().__init__(f"Materializing {what} needs {size} items, cap is {cap}.")


class ClusteringSizeMismatch(SolutionException):
    """
    Raised when a clustering does not cover exactly the nodes of a graph.
    """

    def __init__(self, *, expected: int, got: int):
        self.expected = expected
        self.got = got
        super().__init__(f"Clustering has {got} nodes, graph has {expected}.")


class InfeasibleClustering(SolutionException):
    """
    Raised when a cluster deletion clustering has a non-clique cluster.
    """

    def __init__(self, cluster: int):
        self.cluster = cluster
        super().__init__(
            f"Cluster {cluster} is not a clique, clustering is infeasible for cluster deletion."
        )


class InfeasibleFractionalSolution(SolutionException):
    """
    Raised when a fractional solution violates a wedge constraint or its bounds.
    """

    def __init__(self, reason: str, *, pairs: tuple = ()):
        self.reason = reason
        self.pairs = pairs
        super().__init__(f"Infeasible fractional solution: {reason} (pairs {pairs}).")


class MissingFractionalValue(SolutionException):
    """
    Raised when a fractional solution has no value for an edge of the graph.
    """

    def __init__(self, pair: tuple):
        self.pair = pair
        super().__init__(f"Fractional solution has no value for edge {pair}.")


class RatioUndefined(SolutionException):
    """
    Raised when an approximation ratio is requested with a zero lower bound and a positive cost.
    """

    def __init__(self, *, lb: float, ub: float):
        self.lb = lb
        self.ub = ub
        super().__init__(f"Ratio is undefined for lb={lb!r} and ub={ub!r}.")


class InvalidPivotInstance(AlgorithmException):
    """
    Raised when a pivot instance is malformed, or when deterministic pivoting
    finds no pivot whose mistakes fit its budget.
    """

    def __init__(self, reason: str, *, remaining: Optional[int] = None):
        self.reason = reason
        self.remaining = remaining
        super().__init__(f"Invalid pivot instance: {reason}.")


class OracleCapExceeded(AlgorithmException):
    """
    Raised when an exact oracle is called on an instance above its cap.
    """

    def __init__(self, what: str, *, size: int, cap: int):
        self.what = what
        self.size = size
        self.cap = cap
        super().__init__(f"Exact {what} needs size {size}, oracle cap is {cap}.")


class AlgorithmNotFound(AlgorithmException):
    """
    Raised when an unknown algorithm id is requested.
    """

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"Algorithm {self.name!r} cannot be found.")


class AlgorithmAlreadyExists(AlgorithmException):
    """
    Raised when an algorithm id is registered twice.
    """

    def __init__(self, algorithm):
        super().__init__(
            f"Algorithm {algorithm.algorithm_id!r} already exists.", algorithm
        )


class MissingFractionalSolution(AlgorithmException):
    """
    Raised when an LP rounding algorithm is run without a fractional solution.
    """

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"Algorithm {name!r} needs a fractional solution file.")


class WorkerDied(AlgorithmException):
    """
    Raised when a bench worker process exits without reporting a result.
    """

    def __init__(self, *, exitcode: Optional[int]):
        self.exitcode = exitcode
        super().__init__(f"Worker process exited with code {exitcode} before reporting.")
