"""
Games, strategies and verifier compilation
"""

from .game_core import (
    acceptance_probability,
    check_no_signaling,
    deterministic_strategy,
    game_size,
    lift_strategy,
    marginals,
    product_strategy,
    restrict_strategy,
    strategy_marginals,
    validate_game,
)
from .verifier_compiler import compile_game

__all__ = [
    "acceptance_probability",
    "check_no_signaling",
    "deterministic_strategy",
    "game_size",
    "lift_strategy",
    "marginals",
    "product_strategy",
    "restrict_strategy",
    "strategy_marginals",
    "validate_game",
    "compile_game",
]
