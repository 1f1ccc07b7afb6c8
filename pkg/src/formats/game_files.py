"""
NSGAME and NSSTRAT text formats

    NSGAME 1
    questions <n1> <n2>
    answers <m1> <m2>
    pi
    <q1> <q2> <prob>
    R
    <q1> <q2> <a1> <a2> <payoff>

Strategy files start with NSSTRAT 1, share the questions/answers lines and
list entries <q1> <q2> <a1> <a2> <prob>. Omitted entries are 0.
"""
from fractions import Fraction
from typing import Dict, Optional, Tuple, Union

from src.games.game_core import validate_game
from src.models.game import Game, GameTables, Strategy
from src.utils.errors import FormatError
from src.utils.rationals import format_rational

from .parsing import (
    PathLike,
    build_model,
    check_arity,
    expect_header,
    iter_lines,
    parse_index,
    parse_int,
    parse_rational,
    read_text,
    write_text,
)


def _read_dimensions(lines, source: Optional[str]) -> Tuple[int, int, int, int]:
    dims = {}
    for keyword in ("questions", "answers"):
        try:
            number, tokens = next(lines)
        except StopIteration:
            raise FormatError(f"missing '{keyword}' line", source=source)
        if tokens[0] != keyword:
            raise FormatError(f"expected '{keyword}', got {tokens[0]!r}", line=number, source=source)
        check_arity(tokens, 3, number, source)
        dims[keyword] = (parse_int(tokens[1], number, source), parse_int(tokens[2], number, source))
    return dims["questions"] + dims["answers"]


def parse_game_tables(text: str, source: Optional[str] = None) -> GameTables:
    lines = iter_lines(text, source)
    expect_header(lines, "NSGAME", source)
    n1, n2, m1, m2 = _read_dimensions(lines, source)

    pi: Dict[Tuple[int, int], Fraction] = {}
    payoff: Dict[Tuple[int, int, int, int], Fraction] = {}
    section = None
    for number, tokens in lines:
        if tokens == ["pi"]:
            section = "pi"
            continue
        if tokens == ["R"]:
            section = "R"
            continue
        if section == "pi":
            check_arity(tokens, 3, number, source)
            key = (
                parse_index(tokens[0], n1, "q1", number, source),
                parse_index(tokens[1], n2, "q2", number, source),
            )
            table, value = pi, tokens[2]
        elif section == "R":
            check_arity(tokens, 5, number, source)
            key = (
                parse_index(tokens[0], n1, "q1", number, source),
                parse_index(tokens[1], n2, "q2", number, source),
                parse_index(tokens[2], m1, "a1", number, source),
                parse_index(tokens[3], m2, "a2", number, source),
            )
            table, value = payoff, tokens[4]
        else:
            raise FormatError(f"entry before a 'pi' or 'R' section: {' '.join(tokens)!r}", line=number, source=source)
        if key in table:
            raise FormatError(f"duplicate entry for {key}", line=number, source=source)
        table[key] = parse_rational(value, number, source)

    return build_model(
        GameTables, source, q1_count=n1, q2_count=n2, a1_count=m1, a2_count=m2, pi=pi, payoff=payoff
    )


def parse_game(text: str, source: Optional[str] = None) -> Game:
    """Parse and validate; zero-marginal questions are pruned"""
    return validate_game(parse_game_tables(text, source))


def format_game(game: Union[Game, GameTables]) -> str:
    lines = [
        "NSGAME 1",
        f"questions {game.q1_count} {game.q2_count}",
        f"answers {game.a1_count} {game.a2_count}",
        "pi",
    ]
    lines += [f"{q1} {q2} {format_rational(v)}" for (q1, q2), v in sorted(game.pi.items()) if v]
    lines.append("R")
    lines += [
        f"{q1} {q2} {a1} {a2} {format_rational(v)}"
        for (q1, q2, a1, a2), v in sorted(game.payoff.items()) if v
    ]
    return "\n".join(lines) + "\n"


def parse_strategy(text: str, source: Optional[str] = None) -> Strategy:
    lines = iter_lines(text, source)
    expect_header(lines, "NSSTRAT", source)
    n1, n2, m1, m2 = _read_dimensions(lines, source)
    table: Dict[Tuple[int, int, int, int], Fraction] = {}
    for number, tokens in lines:
        check_arity(tokens, 5, number, source)
        key = (
            parse_index(tokens[0], n1, "q1", number, source),
            parse_index(tokens[1], n2, "q2", number, source),
            parse_index(tokens[2], m1, "a1", number, source),
            parse_index(tokens[3], m2, "a2", number, source),
        )
        if key in table:
            raise FormatError(f"duplicate entry for {key}", line=number, source=source)
        table[key] = parse_rational(tokens[4], number, source)
    return build_model(Strategy, source, q1_count=n1, q2_count=n2, a1_count=m1, a2_count=m2, p=table)


def format_strategy(strategy: Strategy) -> str:
    lines = [
        "NSSTRAT 1",
        f"questions {strategy.q1_count} {strategy.q2_count}",
        f"answers {strategy.a1_count} {strategy.a2_count}",
    ]
    lines += [
        f"{q1} {q2} {a1} {a2} {format_rational(v)}"
        for (q1, q2, a1, a2), v in sorted(strategy.p.items()) if v
    ]
    return "\n".join(lines) + "\n"


def read_game(path: PathLike) -> Game:
    return parse_game(read_text(path), source=str(path))


def read_strategy(path: PathLike) -> Strategy:
    return parse_strategy(read_text(path), source=str(path))


def write_game(path: PathLike, game: Union[Game, GameTables]) -> None:
    write_text(path, format_game(game))


def write_strategy(path: PathLike, strategy: Strategy) -> None:
    write_text(path, format_strategy(strategy))
