"""
Command-line entry point for nsvalue

    python -m src.main <command> [options]

Reports go to stdout, logs to stderr.
"""
import argparse
import sys
import time
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, TextIO, Tuple

import structlog
from pydantic import ValidationError

from src.engines.scaling import DEFAULT_SIZES, RoundScalingMonitor
from src.engines.value_engine import ValueEngine
from src.formats import (
    digest,
    format_human,
    format_lp,
    format_mpc,
    format_report,
    format_verifier,
    parse_game,
    parse_lp,
    parse_mpc,
    parse_strategy,
    parse_verifier,
    write_game,
    write_strategy,
)
from src.formats.parsing import read_text
from src.games.builtin import BUILTIN_VERIFIERS
from src.games.game_core import acceptance_probability, check_no_signaling, lift_strategy, restrict_strategy
from src.games.verifier_compiler import compile_game
from src.lp.pipeline import STAGE_NAMES, build_stage
from src.models.linear_program import LPStatus
from src.models.mpc import MPCInstance, OutcomeKind
from src.models.report import RunReport
from src.models.verdict import Decision, EstimateMethod
from src.solvers.exact_simplex import ExactSimplexSolver
from src.solvers.mpc_solver import MixedPackingCoveringSolver
from src.utils.config import NSValueConfig, load_config
from src.utils.errors import NSValueError
from src.utils.logging_setup import configure_logging
from src.utils.rationals import format_rational, to_fraction

logger = structlog.get_logger()

USAGE_ERROR = 2
INPUT_ERROR = 1

# (report, headline printed first in human mode, raw text that replaces the report)
Outcome = Tuple[RunReport, str, Optional[str]]


def _rational(token: str) -> Fraction:
    try:
        return to_fraction(token)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational or decimal, got {token!r}")


def _read(path: str) -> Tuple[str, str]:
    return read_text(path), path


def cmd_value(args: argparse.Namespace, config: NSValueConfig) -> Outcome:
    text, source = _read(args.game)
    game = parse_game(text, source)
    estimate = ValueEngine(config).approximate_value(game, args.eps, args.method)
    report = RunReport(
        command="value",
        input_digest=digest(text),
        parameters={"eps": format_rational(args.eps), "method": estimate.method.value},
        results={
            "lower": format_rational(estimate.lower),
            "upper": format_rational(estimate.upper),
            "decisions": str(estimate.decisions),
        },
        rounds=estimate.rounds,
    )
    headline = f"[{format_rational(estimate.lower)}, {format_rational(estimate.upper)}]"
    return report, headline, None


def cmd_decide(args: argparse.Namespace, config: NSValueConfig) -> Outcome:
    text, source = _read(args.game)
    game = parse_game(text, source)
    verdict = ValueEngine(config).decide(game, args.s, args.c)
    results = {"decision": verdict.decision.value, "epsilon": format_rational(verdict.epsilon_used)}
    if verdict.decision is Decision.AT_MOST_S:
        results["certificate_objective"] = format_rational(verdict.certificate.objective)
    report = RunReport(
        command="decide",
        input_digest=digest(text),
        parameters={"s": format_rational(args.s), "c": format_rational(args.c)},
        results=results,
        rounds=verdict.rounds,
    )
    return report, verdict.decision.value, None


def cmd_exact(args: argparse.Namespace, config: NSValueConfig) -> Outcome:
    text, source = _read(args.game)
    game = parse_game(text, source)
    value, strategy = ValueEngine(config).exact_value(game)
    if args.strategy_out:
        write_strategy(args.strategy_out, lift_strategy(game, strategy))
    report = RunReport(command="exact", input_digest=digest(text), results={"value": format_rational(value)})
    return report, format_rational(value), None


def cmd_classical(args: argparse.Namespace, config: NSValueConfig) -> Outcome:
    text, source = _read(args.game)
    game = parse_game(text, source)
    value = ValueEngine(config).classical_value(game)
    report = RunReport(command="classical", input_digest=digest(text), results={"value": format_rational(value)})
    return report, format_rational(value), None


def cmd_compile(args: argparse.Namespace, config: NSValueConfig) -> Outcome:
    if args.builtin:
        spec = BUILTIN_VERIFIERS[args.builtin]()
        text = format_verifier(spec)
    elif args.verifier:
        text, source = _read(args.verifier)
        spec = parse_verifier(text, source)
    else:
        raise argparse.ArgumentTypeError("compile needs a verifier file or --builtin")
    game = compile_game(spec, config.verifier.max_randomness_bits)
    write_game(args.output, game)
    report = RunReport(
        command="compile",
        input_digest=digest(text),
        parameters={"verifier": spec.name},
        results={"size": str(game.size), "output": str(args.output)},
    )
    return report, f"wrote {args.output} (|G| = {game.size})", None


def cmd_check_strategy(args: argparse.Namespace, config: NSValueConfig) -> Outcome:
    game_text, game_source = _read(args.game)
    strategy_text, strategy_source = _read(args.strategy)
    game = parse_game(game_text, game_source)
    strategy = parse_strategy(strategy_text, strategy_source)
    signaling = check_no_signaling(strategy, args.tol)
    acceptance = acceptance_probability(game, restrict_strategy(game, strategy))
    report = RunReport(
        command="check-strategy",
        input_digest=digest(game_text + strategy_text),
        parameters={"tol": format_rational(args.tol)},
        results={
            "no_signaling": str(signaling.is_no_signaling).lower(),
            "worst_violation": format_rational(signaling.worst_violation),
            "acceptance": format_rational(acceptance),
        },
    )
    headline = "no-signaling" if signaling.is_no_signaling else f"signaling (witness {signaling.witness})"
    return report, headline, None


def cmd_dump_lp(args: argparse.Namespace, config: NSValueConfig) -> Outcome:
    if args.stage == "mpc" and args.s is None:
        raise argparse.ArgumentTypeError("--stage mpc needs --s")
    text, source = _read(args.game)
    game = parse_game(text, source)
    program = build_stage(game, args.stage, s=args.s, bound_z=args.bound_z)
    dumped = format_mpc(program) if isinstance(program, MPCInstance) else format_lp(program)
    parameters = {"stage": args.stage}
    if args.s is not None:
        parameters["s"] = format_rational(args.s)
    report = RunReport(
        command="dump-lp",
        input_digest=digest(text),
        parameters=parameters,
        results={"digest": digest(dumped)},
    )
    return report, "", dumped


def cmd_solve_mpc(args: argparse.Namespace, config: NSValueConfig) -> Outcome:
    text, source = _read(args.instance)
    instance = parse_mpc(text, source)
    outcome = MixedPackingCoveringSolver(config).solve(instance, args.eps)
    results = {"outcome": outcome.kind.value, "reason": outcome.reason, "trials": str(outcome.trials)}
    if outcome.kind is OutcomeKind.APPROX:
        results["x"] = " ".join(format_rational(v) for v in outcome.x)
    report = RunReport(
        command="solve-mpc",
        input_digest=digest(text),
        parameters={"eps": format_rational(args.eps)},
        results=results,
        rounds=outcome.rounds,
    )
    return report, outcome.kind.value, None


def cmd_solve_lp(args: argparse.Namespace, config: NSValueConfig) -> Outcome:
    text, source = _read(args.lp)
    lp = parse_lp(text, source)
    solver = ExactSimplexSolver(max_variables=config.exact.max_variables, max_pivots=config.exact.max_pivots)
    solution = solver.solve(lp)
    results = {"status": solution.status.value, "pivots": str(solution.pivots)}
    headline = solution.status.value
    if solution.status is LPStatus.OPTIMAL:
        results["objective"] = format_rational(solution.objective)
        headline = format_rational(solution.objective)
    report = RunReport(command="solve-lp", input_digest=digest(text), results=results)
    return report, headline, None


def cmd_scaling(args: argparse.Namespace, config: NSValueConfig) -> Outcome:
    table, exponent = RoundScalingMonitor(config).measure(args.sizes, args.eps, args.seed)
    results = {"exponent": repr(exponent)}
    for row in table.itertuples(index=False):
        results[f"rounds.{row.size}"] = str(row.rounds)
        results[f"outcome.{row.size}"] = row.outcome
    report = RunReport(
        command="scaling",
        parameters={
            "sizes": " ".join(str(size) for size in args.sizes),
            "eps": format_rational(args.eps),
            "seed": str(args.seed),
        },
        results=results,
        rounds=int(table["rounds"].sum()),
    )
    return report, f"{table.to_string(index=False)}\nfitted exponent: {exponent:.3f}", None


COMMANDS: Dict[str, Callable[[argparse.Namespace, NSValueConfig], Outcome]] = {
    "value": cmd_value,
    "decide": cmd_decide,
    "exact": cmd_exact,
    "classical": cmd_classical,
    "compile": cmd_compile,
    "check-strategy": cmd_check_strategy,
    "dump-lp": cmd_dump_lp,
    "solve-mpc": cmd_solve_mpc,
    "solve-lp": cmd_solve_lp,
    "scaling": cmd_scaling,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nsvalue", description="No-signaling value of two-prover one-round games")
    parser.add_argument("--machine", action="store_true", help="emit a key=value report")
    parser.add_argument("--threads", type=int, help="worker threads for grid decisions")
    parser.add_argument("--config", default="config.yaml", help="YAML configuration file")
    parser.add_argument("--log-level", help="override logging.level")
    parser.add_argument("--no-timing", action="store_true", help="omit wall time from reports")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("value", help="approximate w_ns within --eps")
    p.add_argument("game")
    p.add_argument("--eps", type=_rational, required=True)
    p.add_argument("--method", choices=[m.value for m in EstimateMethod])

    p = sub.add_parser("decide", help="decide w_ns <= s versus w_ns >= c")
    p.add_argument("game")
    p.add_argument("--s", type=_rational, required=True)
    p.add_argument("--c", type=_rational, required=True)

    p = sub.add_parser("exact", help="exact w_ns with the rational simplex")
    p.add_argument("game")
    p.add_argument("--strategy-out", help="write an optimal strategy in NSSTRAT format")

    p = sub.add_parser("classical", help="best deterministic strategy value")
    p.add_argument("game")

    p = sub.add_parser("compile", help="verifier description to game file")
    p.add_argument("verifier", nargs="?")
    p.add_argument("--builtin", choices=sorted(BUILTIN_VERIFIERS))
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("check-strategy", help="no-signaling check and acceptance probability")
    p.add_argument("game")
    p.add_argument("strategy")
    p.add_argument("--tol", type=_rational, default=Fraction(0))

    p = sub.add_parser("dump-lp", help="print one program of the reduction chain")
    p.add_argument("game")
    p.add_argument("--stage", choices=STAGE_NAMES, required=True)
    p.add_argument("--s", type=_rational)
    p.add_argument("--bound-z", action="store_true", help="add z <= pi marginal rows to the mpc stage")

    p = sub.add_parser("solve-mpc", help="approximate mixed packing/covering feasibility")
    p.add_argument("instance")
    p.add_argument("--eps", type=_rational, required=True)

    p = sub.add_parser("solve-lp", help="solve a dumped LP exactly")
    p.add_argument("lp")

    p = sub.add_parser("scaling", help="round counts on random games of growing size")
    p.add_argument("--sizes", type=int, nargs="+", default=list(DEFAULT_SIZES))
    p.add_argument("--eps", type=_rational, default=Fraction(1, 10))
    p.add_argument("--seed", type=int, default=0)
    return parser


def _load(args: argparse.Namespace) -> NSValueConfig:
    config = load_config(args.config)
    if args.threads is not None:
        config.engine.threads = args.threads
    if args.log_level:
        config.logging.level = args.log_level
    configure_logging(config.logging)
    return config


def run(argv: Optional[Sequence[str]] = None, stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None) -> int:
    """Run one command; returns the process exit status"""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else USAGE_ERROR
    if args.threads is not None and args.threads < 1:
        print("error: --threads must be at least 1", file=stderr)
        return USAGE_ERROR

    try:
        config = _load(args)
        started = time.perf_counter()
        report, headline, raw = COMMANDS[args.command](args, config)
        report = report.model_copy(update={"wall_time": time.perf_counter() - started})
        if args.no_timing:
            report = report.without_timing()
    except argparse.ArgumentTypeError as e:
        print(f"error: {e}", file=stderr)
        return USAGE_ERROR
    except NSValueError as e:
        logger.error("Command failed", command=args.command, error=str(e))
        print(f"error: {e}", file=stderr)
        return e.exit_code
    except ValidationError as e:
        logger.error("Invalid input", command=args.command, error=str(e))
        print(f"error: {e}", file=stderr)
        return INPUT_ERROR
    except (FileNotFoundError, IsADirectoryError, PermissionError) as e:
        logger.error("Command failed", command=args.command, error=str(e))
        print(f"error: {e}", file=stderr)
        return INPUT_ERROR

    if raw is not None:
        stdout.write(raw)
    elif args.machine:
        stdout.write(format_report(report))
    else:
        details: List[str] = [headline] if headline else []
        stdout.write("\n".join(details) + "\n" if details else "")
        stdout.write(format_human(report))
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
