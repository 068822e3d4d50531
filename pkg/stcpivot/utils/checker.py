import typing

T = typing.TypeVar("T")


def check(condition: bool, *, error: Exception) -> None:
    """
    Raises `error` unless `condition` holds.
    """
    if not condition:
        raise error


def check_all(
    items: typing.Iterable[T],
    predicate: typing.Callable[[T], bool],
    *,
    error: typing.Callable[[T], Exception],
) -> None:
    """
    Raises `error(item)` for the first item failing `predicate`.
    """
    for item in items:
        if not predicate(item):
            raise error(item)
