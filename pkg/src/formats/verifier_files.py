"""
NSVERIFIER text format

    NSVERIFIER 1
    randbits <l>
    answers <m1> <m2>
    questions <n1> <n2>        # optional
    map <r> <q1> <q2>
    acc <r> <a1> <a2>          # listed triples accept, omitted reject
"""
from pathlib import Path
from typing import Dict, Optional, Set, Tuple

from src.models.verifier import VerifierSpec
from src.utils.errors import FormatError

from .parsing import PathLike, build_model, check_arity, expect_header, iter_lines, parse_int, read_text


def parse_verifier(text: str, source: Optional[str] = None, name: Optional[str] = None) -> VerifierSpec:
    lines = iter_lines(text, source)
    expect_header(lines, "NSVERIFIER", source)

    fields: Dict[str, Tuple[int, ...]] = {}
    question_map: Dict[int, Tuple[int, int]] = {}
    accepting: Set[Tuple[int, int, int]] = set()
    for number, tokens in lines:
        keyword = tokens[0]
        if keyword in ("randbits", "answers", "questions"):
            check_arity(tokens, 2 if keyword == "randbits" else 3, number, source)
            if keyword in fields:
                raise FormatError(f"duplicate '{keyword}' line", line=number, source=source)
            minimum = 0 if keyword == "randbits" else 1
            fields[keyword] = tuple(parse_int(t, number, source, minimum=minimum) for t in tokens[1:])
        elif keyword == "map":
            check_arity(tokens, 4, number, source)
            r, q1, q2 = (parse_int(t, number, source) for t in tokens[1:])
            if r in question_map:
                raise FormatError(f"random string {r} mapped twice", line=number, source=source)
            question_map[r] = (q1, q2)
        elif keyword == "acc":
            check_arity(tokens, 4, number, source)
            accepting.add(tuple(parse_int(t, number, source) for t in tokens[1:]))
        else:
            raise FormatError(f"unknown keyword {keyword!r}", line=number, source=source)

    for required in ("randbits", "answers"):
        if required not in fields:
            raise FormatError(f"missing '{required}' line", source=source)
    questions = fields.get("questions", (None, None))
    return build_model(
        VerifierSpec,
        source,
        name=name or (Path(source).stem if source else "verifier"),
        randomness_bits=fields["randbits"][0],
        question_map=question_map,
        accepting=frozenset(accepting),
        a1_count=fields["answers"][0],
        a2_count=fields["answers"][1],
        q1_count=questions[0],
        q2_count=questions[1],
    )


def format_verifier(spec: VerifierSpec) -> str:
    lines = [
        "NSVERIFIER 1",
        f"randbits {spec.randomness_bits}",
        f"answers {spec.a1_count} {spec.a2_count}",
    ]
    if spec.q1_count is not None and spec.q2_count is not None:
        lines.append(f"questions {spec.q1_count} {spec.q2_count}")
    lines += [f"map {r} {q1} {q2}" for r, (q1, q2) in sorted(spec.question_map.items())]
    lines += [f"acc {r} {a1} {a2}" for r, a1, a2 in sorted(spec.accepting)]
    return "\n".join(lines) + "\n"


def read_verifier(path: PathLike) -> VerifierSpec:
    return parse_verifier(read_text(path), source=str(path))

