"""
Text LP format used by dump-lp and solve-lp

    min|max
    var <name> [free]
    obj <coef> <var> <coef> <var> ...
    row <= | = | >= <rhs> : <coef> <var> ...

Variables are nonnegative unless marked free. Rows of a parsed program lose
their block structure and are numbered row[0], row[1], ...
"""
from fractions import Fraction
from typing import Dict, List, Optional

from src.models.linear_program import Constraint, LinearProgram, LPStage, Relation, Sense, Variable
from src.utils.errors import FormatError
from src.utils.rationals import format_rational

from .parsing import build_model, iter_lines, parse_rational


def _terms(coefficients: Dict[str, Fraction]) -> str:
    return " ".join(f"{format_rational(coef)} {var}" for var, coef in coefficients.items() if coef)


def format_lp(lp: LinearProgram) -> str:
    lines = [lp.sense.value]
    lines += [f"var {var.name} free" if var.free else f"var {var.name}" for var in lp.variables]
    lines.append(f"obj {_terms(lp.objective)}".rstrip())
    for row in lp.constraints:
        lines.append(f"row {row.relation.value} {format_rational(row.rhs)} : {_terms(row.coefficients)}".rstrip())
    return "\n".join(lines) + "\n"


def _parse_terms(tokens: List[str], declared: Dict[str, Variable], line: int, source: Optional[str]) -> Dict[str, Fraction]:
    if len(tokens) % 2:
        raise FormatError("terms must come in <coef> <var> pairs", line=line, source=source)
    terms: Dict[str, Fraction] = {}
    for coef_token, var in zip(tokens[::2], tokens[1::2]):
        if var not in declared:
            raise FormatError(f"undeclared variable {var!r}", line=line, source=source)
        terms[var] = terms.get(var, Fraction(0)) + parse_rational(coef_token, line, source)
    return terms


def parse_lp(text: str, source: Optional[str] = None) -> LinearProgram:
    lines = iter_lines(text, source)
    try:
        number, tokens = next(lines)
    except StopIteration:
        raise FormatError("empty file, expected 'min' or 'max'", source=source)
    if tokens not in (["min"], ["max"]):
        raise FormatError(f"expected 'min' or 'max', got {' '.join(tokens)!r}", line=number, source=source)
    sense = Sense(tokens[0])

    variables: Dict[str, Variable] = {}
    objective: Optional[Dict[str, Fraction]] = None
    rows: List[Constraint] = []
    for number, tokens in lines:
        keyword = tokens[0]
        if keyword == "var":
            if len(tokens) not in (2, 3) or (len(tokens) == 3 and tokens[2] != "free"):
                raise FormatError("expected 'var <name> [free]'", line=number, source=source)
            if tokens[1] in variables:
                raise FormatError(f"variable {tokens[1]!r} declared twice", line=number, source=source)
            variables[tokens[1]] = Variable(block=tokens[1], free=len(tokens) == 3)
        elif keyword == "obj":
            if objective is not None:
                raise FormatError("second 'obj' line", line=number, source=source)
            objective = _parse_terms(tokens[1:], variables, number, source)
        elif keyword == "row":
            if len(tokens) < 4 or tokens[3] != ":":
                raise FormatError("expected 'row <relation> <rhs> : <terms>'", line=number, source=source)
            try:
                relation = Relation(tokens[1])
            except ValueError:
                raise FormatError(f"unknown relation {tokens[1]!r}", line=number, source=source)
            rows.append(Constraint(
                block="row",
                index=(len(rows),),
                coefficients=_parse_terms(tokens[4:], variables, number, source),
                relation=relation,
                rhs=parse_rational(tokens[2], number, source),
            ))
        else:
            raise FormatError(f"unknown keyword {keyword!r}", line=number, source=source)

    return build_model(
        LinearProgram,
        source,
        stage=LPStage.EXTERNAL,
        sense=sense,
        variables=tuple(variables.values()),
        objective=objective or {},
        constraints=tuple(rows),
    )

