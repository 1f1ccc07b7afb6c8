"""
MPC instance text format

    MPC 1
    dims <M1> <M2> <N>
    A <i> <j> <val>
    b <i> <val>
    C <i> <j> <val>
    d <i> <val>

Sparse; omitted entries are 0.
"""
from fractions import Fraction
from typing import Dict, Optional, Tuple

from src.models.mpc import MPCInstance
from src.utils.errors import FormatError
from src.utils.rationals import ZERO, format_rational

from .parsing import (
    build_model,
    check_arity,
    expect_header,
    iter_lines,
    parse_index,
    parse_int,
    parse_rational,
)


def parse_mpc(text: str, source: Optional[str] = None) -> MPCInstance:
    lines = iter_lines(text, source)
    expect_header(lines, "MPC", source)
    try:
        number, tokens = next(lines)
    except StopIteration:
        raise FormatError("missing 'dims' line", source=source)
    if tokens[0] != "dims":
        raise FormatError(f"expected 'dims', got {tokens[0]!r}", line=number, source=source)
    check_arity(tokens, 4, number, source)
    m1, m2, n = (parse_int(t, number, source) for t in tokens[1:])

    matrices: Dict[str, Dict[Tuple[int, int], Fraction]] = {"A": {}, "C": {}}
    vectors: Dict[str, Dict[int, Fraction]] = {"b": {}, "d": {}}
    rows_of = {"A": m1, "b": m1, "C": m2, "d": m2}
    for number, tokens in lines:
        keyword = tokens[0]
        if keyword in matrices:
            check_arity(tokens, 4, number, source)
            key = (
                parse_index(tokens[1], rows_of[keyword], f"{keyword} row", number, source),
                parse_index(tokens[2], n, "column", number, source),
            )
            table = matrices[keyword]
        elif keyword in vectors:
            check_arity(tokens, 3, number, source)
            key = parse_index(tokens[1], rows_of[keyword], f"{keyword} row", number, source)
            table = vectors[keyword]
        else:
            raise FormatError(f"unknown keyword {keyword!r}", line=number, source=source)
        if key in table:
            raise FormatError(f"duplicate {keyword} entry {key}", line=number, source=source)
        table[key] = parse_rational(tokens[-1], number, source)

    return build_model(
        MPCInstance,
        source,
        n_packing=m1,
        n_covering=m2,
        n_columns=n,
        A=tuple((i, j, v) for (i, j), v in sorted(matrices["A"].items()) if v),
        b=tuple(vectors["b"].get(i, ZERO) for i in range(m1)),
        C=tuple((i, j, v) for (i, j), v in sorted(matrices["C"].items()) if v),
        d=tuple(vectors["d"].get(i, ZERO) for i in range(m2)),
    )


def format_mpc(instance: MPCInstance) -> str:
    lines = ["MPC 1", f"dims {instance.n_packing} {instance.n_covering} {instance.n_columns}"]
    lines += [f"A {i} {j} {format_rational(v)}" for i, j, v in instance.A]
    lines += [f"b {i} {format_rational(v)}" for i, v in enumerate(instance.b) if v]
    lines += [f"C {i} {j} {format_rational(v)}" for i, j, v in instance.C]
    lines += [f"d {i} {format_rational(v)}" for i, v in enumerate(instance.d) if v]
    return "\n".join(lines) + "\n"

