import math

import pandas as pd
import pytest

from src.engines.scaling import RoundScalingMonitor, fit_exponent, side_length
from src.utils.errors import DimensionMismatch, InvalidEpsilon


@pytest.mark.parametrize("size, side", [(16, 2), (81, 3), (4096, 8)])
def test_side_length(size, side):
    assert side_length(size) == side


@pytest.mark.parametrize("size", [1, 15, 100])
def test_side_length_rejects_non_fourth_powers(size):
    with pytest.raises(DimensionMismatch):
        side_length(size)


def test_fit_recovers_polylog_exponent():
    sizes = [16, 256, 4096, 65536]
    table = pd.DataFrame({"size": sizes, "rounds": [7 * math.log(n) ** 3 for n in sizes]})
    assert fit_exponent(table) == pytest.approx(3.0)


def test_fit_needs_two_rows():
    assert math.isnan(fit_exponent(pd.DataFrame({"size": [16], "rounds": [10]})))
    assert math.isnan(fit_exponent(pd.DataFrame({"size": [16, 81], "rounds": [0, 0]})))


def test_measure_records_instance_shape(capped_config):
    table, exponent = RoundScalingMonitor(capped_config).measure(sizes=(16,), epsilon="1/10", seed=3)
    row = table.iloc[0]
    assert list(table["size"]) == [16]
    assert row["columns"] == 20
    assert row["packing_rows"] == 33
    assert row["covering_rows"] == 8
    assert row["outcome"] in ("Approx", "Infeasible")
    assert math.isnan(exponent)


def test_measure_is_seeded(capped_config):
    monitor = RoundScalingMonitor(capped_config)
    first, _ = monitor.measure(sizes=(16,), seed=11)
    second, _ = monitor.measure(sizes=(16,), seed=11)
    pd.testing.assert_frame_equal(first, second)


def test_measure_checks_epsilon(capped_config):
    with pytest.raises(InvalidEpsilon):
        RoundScalingMonitor(capped_config).measure(sizes=(16,), epsilon=2)
