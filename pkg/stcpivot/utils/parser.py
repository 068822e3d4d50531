from __future__ import annotations

import typing

from fractions import Fraction

from stcpivot.exceptions import ParsingError

# the builtins types a text token can be parsed into
__parsable_builtins__ = {str, int, float}


def parse_token(
    cls: type,
    value: str,
    *,
    path: typing.Optional[str] = None,
    line_number: typing.Optional[int] = None,
) -> typing.Any:
    """
    Parses one token of a text file into `cls`.

    Floats also accept fractions written as `p/q`, solvers sometimes emit them.

    :raise ParsingError: If the token cannot be parsed.
    """
    if cls not in __parsable_builtins__:
        raise TypeError(f"Cannot parse tokens into {cls}.")

    try:
        if cls is float and "/" in value:
            return float(Fraction(value))

        return cls(value)

    except (ValueError, ZeroDivisionError):
        raise ParsingError(
            value,
            reason=f"expected {cls.__name__}",
            path=path,
            line_number=line_number,
        )


def parse_line(
    types: typing.Sequence[type],
    line: str,
    *,
    path: typing.Optional[str] = None,
    line_number: typing.Optional[int] = None,
    allow_extra: bool = False,
) -> tuple:
    """
    Splits a line on whitespace and parses the leading tokens with `types`.

    :param types: One type per expected token.
    :param line: The raw line.
    :param allow_extra: Are trailing tokens ignored instead of rejected.

    :raise ParsingError: If the line has the wrong token count or a token cannot be parsed.
    :return: The parsed tokens.
    """
    tokens = line.split()

    if len(tokens) < len(types) or (not allow_extra and len(tokens) > len(types)):
        raise ParsingError(
            line.strip(),
            reason=f"expected {len(types)} tokens, got {len(tokens)}",
            path=path,
            line_number=line_number,
        )

    return tuple(
        parse_token(t, token, path=path, line_number=line_number)
        for t, token in zip(types, tokens)
    )


def iter_data_lines(
    stream: typing.Iterable[str], *, comments: str = "#"
) -> typing.Iterator[typing.Tuple[int, str]]:
    """
    Yields `(line_number, line)` for non-blank lines that are not comments.
    Line numbers start at 1.
    """
    for line_number, line in enumerate(stream, start=1):
        stripped = line.strip()

        if not stripped or stripped[0] in comments:
            continue

        yield line_number, stripped
