"""
Shared helpers for the line-oriented text formats
"""
import hashlib
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterator, List, Optional, Tuple, Type, TypeVar, Union

from pydantic import BaseModel, ValidationError

from src.utils.errors import FormatError

PathLike = Union[str, Path]
Model = TypeVar("Model", bound=BaseModel)


def iter_lines(text: str, source: Optional[str] = None) -> Iterator[Tuple[int, List[str]]]:
    """(1-based line number, tokens) for every non-blank line; '#' starts a comment"""
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].strip()
        if content:
            yield number, content.split()


def expect_header(lines: Iterator[Tuple[int, List[str]]], magic: str, source: Optional[str]) -> None:
    try:
        number, tokens = next(lines)
    except StopIteration:
        raise FormatError(f"empty file, expected '{magic} 1'", source=source)
    if tokens != [magic, "1"]:
        raise FormatError(f"expected header '{magic} 1', got {' '.join(tokens)!r}", line=number, source=source)


def parse_int(token: str, line: int, source: Optional[str], minimum: int = 0) -> int:
    try:
        value = int(token)
    except ValueError:
        raise FormatError(f"expected an integer, got {token!r}", line=line, source=source)
    if value < minimum:
        raise FormatError(f"expected an integer >= {minimum}, got {value}", line=line, source=source)
    return value


def parse_rational(token: str, line: int, source: Optional[str]) -> Fraction:
    """num/den, integers and decimals, all converted exactly"""
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise FormatError(f"expected a rational or decimal, got {token!r}", line=line, source=source)


def parse_index(token: str, bound: int, what: str, line: int, source: Optional[str]) -> int:
    value = parse_int(token, line, source)
    if value >= bound:
        raise FormatError(f"{what} index {value} out of range 0..{bound - 1}", line=line, source=source)
    return value


def check_arity(tokens: List[str], count: int, line: int, source: Optional[str]) -> None:
    if len(tokens) != count:
        raise FormatError(
            f"'{tokens[0]}' expects {count - 1} fields, got {len(tokens) - 1}", line=line, source=source
        )


def read_text(path: PathLike) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise FormatError(f"not UTF-8 text ({e.reason} at byte {e.start})", source=str(path))


def build_model(model: Type[Model], source: Optional[str], **fields: Any) -> Model:
    """Construct a parsed model; field validation failures become FormatError"""
    try:
        return model(**fields)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(part) for part in error['loc']) or 'value'}: {error['msg']}" for error in e.errors()
        )
        raise FormatError(problems, source=source)


def write_text(path: PathLike, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def digest(text: str) -> str:
    """Short content hash recorded in run reports"""
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]
