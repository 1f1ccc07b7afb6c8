"""
Shared hypothesis strategies and small builders for the test suite
"""
from fractions import Fraction

import numpy as np
from hypothesis import strategies as st

from src.games.builtin import random_game
from src.models.game import Game
from src.models.mpc import MPCInstance
from src.utils.config import NSValueConfig


@st.composite
def small_games(draw, max_side: int = 3, sparsity: bool = False) -> Game:
    """Seeded random games with every set size in 1..max_side"""
    seed = draw(st.integers(min_value=0, max_value=2**32 - 1))
    dims = [draw(st.integers(min_value=1, max_value=max_side)) for _ in range(4)]
    denominator = draw(st.sampled_from([1, 2, 3, 4, 6]))
    rng = np.random.default_rng(seed)
    return random_game(rng, *dims, payoff_denominator=denominator, sparsity=0.3 if sparsity else None)


@st.composite
def small_instances(draw, max_rows: int = 4, max_columns: int = 6) -> MPCInstance:
    """Random nonnegative packing/covering instances with small integer data"""
    m1 = draw(st.integers(min_value=1, max_value=max_rows))
    m2 = draw(st.integers(min_value=1, max_value=max_rows))
    n = draw(st.integers(min_value=1, max_value=max_columns))
    entry = st.integers(min_value=0, max_value=4)
    A, C = [], []
    for rows, table in ((m1, A), (m2, C)):
        for i in range(rows):
            for j in range(n):
                value = draw(entry)
                if value:
                    table.append((i, j, Fraction(value)))
    b = [Fraction(draw(st.integers(min_value=1, max_value=8)), 2) for _ in range(m1)]
    d = [Fraction(draw(st.integers(min_value=0, max_value=8)), 2) for _ in range(m2)]
    return MPCInstance(n_packing=m1, n_covering=m2, n_columns=n, A=tuple(A), b=tuple(b), C=tuple(C), d=tuple(d))


def one_by_one(b: Fraction, d: Fraction = Fraction(1)) -> MPCInstance:
    """A = [1], C = [1] with the given right-hand sides"""
    return MPCInstance(
        n_packing=1, n_covering=1, n_columns=1,
        A=((0, 0, Fraction(1)),), b=(b,), C=((0, 0, Fraction(1)),), d=(d,),
    )


def capped_config() -> NSValueConfig:
    """Short iterative runs; instances up to exact_max_columns then fall back to the exact oracle"""
    config = NSValueConfig()
    config.solver.round_safety_factor = 0.01
    config.solver.tightening_retries = 0
    return config


def iterative_config() -> NSValueConfig:
    """Default round budget with the exact fallback switched off"""
    config = NSValueConfig()
    config.solver.exact_max_columns = 0
    return config

