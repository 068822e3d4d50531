from __future__ import annotations

import logging
import typing

from stcpivot.exceptions import (
    AlgorithmAlreadyExists,
    AlgorithmNotFound,
    MissingFractionalSolution,
)

logger = logging.getLogger(__name__)


class Algorithm:
    """
    Do not manually initialise this class. Use instead `AlgorithmRegistry.create_algorithm()`.

    Wraps a clustering function `(graph, *, reps, seed, order_seed, solution)`
    under a unique id, with what it needs to run.
    """

    def __init__(
        self,
        function: typing.Callable,
        *,
        registry,
        name: str = None,
        objective=None,
        needs_solution=None,
        deterministic: bool = False,
    ):
        """
        Initialises an algorithm.

        :param function: The function that runs the algorithm.
        :param registry: The registry the algorithm belongs to.
        :param name: The algorithm id, the function name with dashes by default. Must be unique in the registry.
        :param objective: The `ObjectiveKind` its clusterings are scored with.
        :param needs_solution: The `Flavor` of fractional solution it rounds, `None` if it needs none.
        :param deterministic: Whether `reps` and `seed` are ignored.

        :raise AlgorithmAlreadyExists: If the id is not unique in the registry.
        """
        self.algorithm_id = name or function.__name__.replace("_", "-")

        if registry.get_algorithm(self.algorithm_id, case_sensitive=False):
            raise AlgorithmAlreadyExists(registry.get_algorithm(self.algorithm_id))

        self.registry = registry
        self.objective = objective
        self.needs_solution = needs_solution
        self.deterministic = deterministic

        self._function = function
        self.__doc__ = function.__doc__

    def __call__(self, graph, *, solution=None, **options):
        """
        Runs the algorithm on `graph`.

        :param solution: The fractional solution, required by LP roundings.
        :param options: `reps`, `seed` and `order_seed`.

        :raise MissingFractionalSolution: If the algorithm rounds a fractional solution and none is given.
        """
        if self.needs_solution is not None and solution is None:
            raise MissingFractionalSolution(self.algorithm_id)

        logger.debug("Running %s on %r.", self.algorithm_id, graph)

        return self._function(graph, solution=solution, **options)

    def __repr__(self) -> str:
        return f"<Algorithm {self.algorithm_id!r}>"


class AlgorithmRegistry:
    """
    The registry stores algorithms by id, for the command line and the bench.
    """

    def __init__(self):
        self._algorithms: typing.List[Algorithm] = []

    @property
    def algorithms(self) -> typing.Tuple[Algorithm, ...]:
        """
        Returns all registered algorithms, in registration order.
        """
        return tuple(self._algorithms)

    @property
    def names(self) -> typing.Tuple[str, ...]:
        return tuple(a.algorithm_id for a in self._algorithms)

    def as_algorithm(
        self, *, name: str = None, **options
    ) -> typing.Callable[[typing.Callable], Algorithm]:
        """
        A decorator which registers a function as an algorithm of this registry.

        :param name: The algorithm id. Function's name by default.
        :param options: `Algorithm` options.

        :return: The algorithm.
        """

        def decorator(function: typing.Callable) -> Algorithm:
            return self.create_algorithm(function, name=name, **options)

        return decorator

    def create_algorithm(
        self, function: typing.Callable, *, name: str = None, **options
    ) -> Algorithm:
        """
        Registers a function as an algorithm.

        :return: The algorithm.
        """
        algorithm = Algorithm(function, registry=self, name=name, **options)
        self._algorithms.append(algorithm)

        return algorithm

    def get_algorithm(
        self, name: str, *, case_sensitive: bool = True
    ) -> typing.Optional[Algorithm]:
        """
        Get an algorithm by its id.

        :param name: The algorithm id.
        :param case_sensitive: Is case sensitive.

        :return: An algorithm if found.
        """

        def checker(algorithm: Algorithm) -> bool:
            if case_sensitive:
                return algorithm.algorithm_id == name

            return algorithm.algorithm_id.casefold() == name.casefold()

        return next(filter(checker, self._algorithms), None)

    def run(self, _name: str, graph, *, _case_sensitive: bool = True, **options):
        """
        Runs an algorithm by its id.

        :raise AlgorithmNotFound: If no algorithm was found.
        """
        algorithm = self.get_algorithm(_name, case_sensitive=_case_sensitive)

        if algorithm is None:
            raise AlgorithmNotFound(_name)

        return algorithm(graph, **options)
