"""
Round-scaling monitor for the packing/covering solver

Solves the threshold instance of seeded random games of growing size and
fits rounds ~ a * (ln |G|)^k on a log-log scale.
"""
import math
from fractions import Fraction
from typing import Iterable, Optional, Tuple, Union

import numpy as np
import pandas as pd

from src.engines.base_engine import BaseEngine
from src.games.builtin import random_game
from src.lp.mpc_reduction import build_mpc_instance
from src.solvers.mpc_solver import MixedPackingCoveringSolver, check_epsilon
from src.utils.config import NSValueConfig
from src.utils.errors import DimensionMismatch

DEFAULT_SIZES = (16, 256, 4096, 65536)
DEFAULT_THRESHOLD = Fraction(95, 100)


def side_length(size: int) -> int:
    """Common set size n with n^4 = |G|"""
    side = round(size ** 0.25)
    if side < 2 or side ** 4 != size:
        raise DimensionMismatch(f"game size {size} is not a fourth power of an integer >= 2")
    return side


class RoundScalingMonitor(BaseEngine):
    def __init__(self, config: Optional[NSValueConfig] = None):
        super().__init__(config, name="round-scaling")
        self.solver = MixedPackingCoveringSolver(self.config)

    def measure(
        self,
        sizes: Iterable[int] = DEFAULT_SIZES,
        epsilon: Union[Fraction, float, str] = Fraction(1, 10),
        seed: int = 0,
        threshold: Union[Fraction, float, str] = DEFAULT_THRESHOLD,
    ) -> Tuple[pd.DataFrame, float]:
        epsilon = check_epsilon(epsilon)
        rng = np.random.default_rng(seed)
        records = []
        for size in sizes:
            side = side_length(size)
            game = random_game(rng, side, side, side, side)
            instance = build_mpc_instance(game, threshold)
            outcome = self.solver.solve(instance, epsilon)
            records.append({
                "size": size,
                "columns": instance.n_columns,
                "packing_rows": instance.n_packing,
                "covering_rows": instance.n_covering,
                "outcome": outcome.kind.value,
                "rounds": outcome.rounds,
                "trials": outcome.trials,
            })
            self.logger.info("Measured rounds", size=size, rounds=outcome.rounds, outcome=outcome.kind.value)

        table = pd.DataFrame.from_records(records)
        exponent = fit_exponent(table)
        return table, exponent


def fit_exponent(table: pd.DataFrame) -> float:
    """Slope of ln(rounds) against ln(ln |G|); nan with fewer than two usable rows"""
    usable = table[(table["rounds"] > 0) & (table["size"] > math.e)]
    if len(usable) < 2:
        return float("nan")
    x = np.log(np.log(usable["size"].to_numpy(dtype=float)))
    y = np.log(usable["rounds"].to_numpy(dtype=float))
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)

