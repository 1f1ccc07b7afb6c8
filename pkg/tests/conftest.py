"""
Fixtures and hypothesis profiles

HYPOTHESIS_PROFILE=acceptance runs the property sweeps at 200 examples.
"""
import os

import pytest
from hypothesis import HealthCheck, settings

from src.games.builtin import chsh_game, guess_game, trivial_game, zero_game
from src.solvers.exact_simplex import ExactSimplexSolver
from src.utils.config import LoggingConfig, NSValueConfig
from src.utils.logging_setup import configure_logging
from tests.helpers import capped_config as capped

settings.register_profile(
    "default", max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile(
    "acceptance", max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "default"))

configure_logging(LoggingConfig(level="WARNING"))


@pytest.fixture
def config() -> NSValueConfig:
    cfg = NSValueConfig()
    cfg.logging.level = "WARNING"
    return cfg


@pytest.fixture
def capped_config() -> NSValueConfig:
    return capped()


@pytest.fixture
def exact_config(config: NSValueConfig) -> NSValueConfig:
    config.solver.exact_mode = True
    config.solver.exact_max_columns = 10_000
    return config


@pytest.fixture
def exact_solver() -> ExactSimplexSolver:
    return ExactSimplexSolver()


@pytest.fixture
def g_triv():
    return trivial_game()


@pytest.fixture
def chsh():
    return chsh_game()


@pytest.fixture
def g_guess():
    return guess_game()


@pytest.fixture
def g_zero():
    return zero_game()
