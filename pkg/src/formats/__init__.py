"""
Line-oriented text formats for games, strategies, verifiers, packing/covering
instances, LP dumps and run reports
"""
from .game_files import (
    format_game,
    format_strategy,
    parse_game,
    parse_game_tables,
    parse_strategy,
    read_game,
    read_strategy,
    write_game,
    write_strategy,
)
from .lp_files import format_lp, parse_lp
from .mpc_files import format_mpc, parse_mpc
from .parsing import digest
from .report_files import format_human, format_report, parse_report
from .verifier_files import format_verifier, parse_verifier, read_verifier

__all__ = [
    "format_game", "format_strategy", "parse_game", "parse_game_tables", "parse_strategy",
    "read_game", "read_strategy", "write_game", "write_strategy",
    "format_lp", "parse_lp",
    "format_mpc", "parse_mpc",
    "digest", "format_human", "format_report", "parse_report",
    "format_verifier", "parse_verifier", "read_verifier",
]
