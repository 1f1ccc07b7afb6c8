"""
Flat key=value serialization of run reports

    command=value
    input_digest=3f2a...
    param.eps=1/20
    result.lower=...
    rounds=812
    wall_time=0.214

Keys are sorted; values run to the end of the line.
"""
from typing import Dict, Optional

from src.models.report import RunReport
from src.utils.errors import FormatError


def format_report(report: RunReport) -> str:
    pairs: Dict[str, str] = {"command": report.command, "input_digest": report.input_digest}
    pairs.update({f"param.{k}": v for k, v in report.parameters.items()})
    pairs.update({f"result.{k}": v for k, v in report.results.items()})
    if report.rounds is not None:
        pairs["rounds"] = str(report.rounds)
    if report.wall_time is not None:
        pairs["wall_time"] = repr(report.wall_time)
    return "".join(f"{key}={pairs[key]}\n" for key in sorted(pairs))


def parse_report(text: str, source: Optional[str] = None) -> RunReport:
    fields: Dict[str, str] = {}
    parameters: Dict[str, str] = {}
    results: Dict[str, str] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        key, sep, value = raw.partition("=")
        if not sep:
            raise FormatError(f"expected key=value, got {raw!r}", line=number, source=source)
        if key.startswith("param."):
            parameters[key[len("param."):]] = value
        elif key.startswith("result."):
            results[key[len("result."):]] = value
        elif key in ("command", "input_digest", "rounds", "wall_time"):
            fields[key] = value
        else:
            raise FormatError(f"unknown report key {key!r}", line=number, source=source)
    if "command" not in fields:
        raise FormatError("report has no 'command' key", source=source)
    try:
        return RunReport(
            command=fields["command"],
            input_digest=fields.get("input_digest", ""),
            parameters=parameters,
            results=results,
            rounds=int(fields["rounds"]) if "rounds" in fields else None,
            wall_time=float(fields["wall_time"]) if "wall_time" in fields else None,
        )
    except ValueError as e:
        raise FormatError(f"bad numeric field: {e}", source=source)


def format_human(report: RunReport) -> str:
    """Aligned 'name: value' lines for terminal output"""
    lines = [f"{key}: {value}" for key, value in report.results.items()]
    if report.rounds is not None:
        lines.append(f"rounds: {report.rounds}")
    if report.wall_time is not None:
        lines.append(f"wall time: {report.wall_time:.3f}s")
    return "\n".join(lines) + "\n" if lines else ""

