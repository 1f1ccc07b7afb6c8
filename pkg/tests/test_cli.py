import io
from fractions import Fraction
from pathlib import Path

import pytest
import yaml

from src.formats import parse_report, read_game, read_strategy
from src.main import run

DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture
def config_file(tmp_path) -> Path:
    path = tmp_path / "config.yaml"
    path.write_text(yaml.safe_dump({
        "solver": {"round_safety_factor": 0.01, "tightening_retries": 0},
        "logging": {"level": "ERROR"},
    }))
    return path


@pytest.fixture
def cli(config_file):
    def invoke(*argv: str):
        out, err = io.StringIO(), io.StringIO()
        code = run(["--config", str(config_file), *argv], stdout=out, stderr=err)
        return code, out.getvalue(), err.getvalue()
    return invoke


def data(name: str) -> str:
    return str(DATA / name)


def test_exact_trivial(cli):
    code, out, _ = cli("exact", data("triv.game"))
    assert code == 0
    assert out.splitlines()[0] == "1/1"


def test_classical_chsh(cli):
    code, out, _ = cli("classical", data("chsh.game"))
    assert code == 0
    assert out.splitlines()[0] == "3/4"


def test_decide(cli):
    code, out, _ = cli("decide", data("chsh.game"), "--s", "0.8", "--c", "0.95")
    assert code == 0
    assert out.splitlines()[0] == "AT_LEAST_C"

    code, out, _ = cli("--machine", "decide", data("guess.game"), "--s", "0.6", "--c", "0.9")
    report = parse_report(out)
    assert report.results["decision"] == "AT_MOST_S"
    assert report.parameters == {"s": "3/5", "c": "9/10"}


def test_value_brackets_exact_value(cli):
    code, out, _ = cli("--machine", "value", data("guess.game"), "--eps", "1/5")
    assert code == 0
    report = parse_report(out)
    lower, upper = (Fraction(report.results[key]) for key in ("lower", "upper"))
    assert lower <= Fraction(1, 2) <= upper
    assert upper - lower <= Fraction(1, 5)


def test_compiled_builtin_matches_game_file(cli, tmp_path):
    target = tmp_path / "chsh.game"
    code, out, _ = cli("compile", "--builtin", "chsh", "-o", str(target))
    assert code == 0
    assert read_game(target) == read_game(DATA / "chsh.game")
    assert cli("exact", str(target))[1].splitlines()[0] == "1/1"


def test_compile_verifier_file(cli, tmp_path):
    target = tmp_path / "guess.game"
    assert cli("compile", data("guess.verifier"), "-o", str(target))[0] == 0
    assert read_game(target) == read_game(DATA / "guess.game")


def test_dumped_final_program_solves_to_exact_value(cli, tmp_path):
    code, dumped, _ = cli("dump-lp", data("guess.game"), "--stage", "final")
    assert code == 0
    path = tmp_path / "final.lp"
    path.write_text(dumped)
    code, out, _ = cli("solve-lp", str(path))
    assert out.splitlines()[0] == cli("exact", data("guess.game"))[1].splitlines()[0] == "1/2"


def test_dumped_instance_solves(cli, tmp_path):
    code, dumped, _ = cli("dump-lp", data("triv.game"), "--stage", "mpc", "--s", "1/2")
    assert code == 0
    assert dumped.startswith("MPC 1\n")
    path = tmp_path / "triv.mpc"
    path.write_text(dumped)
    code, out, _ = cli("solve-mpc", str(path), "--eps", "1/10")
    assert code == 0
    assert out.splitlines()[0] == "Infeasible"


def test_exact_writes_checkable_strategy(cli, tmp_path):
    strategy_path = tmp_path / "chsh.strat"
    assert cli("exact", data("chsh.game"), "--strategy-out", str(strategy_path))[0] == 0
    assert read_strategy(strategy_path).dimensions == (2, 2, 2, 2)

    code, out, _ = cli("--machine", "check-strategy", data("chsh.game"), str(strategy_path))
    report = parse_report(out)
    assert report.results["no_signaling"] == "true"
    assert report.results["acceptance"] == "1/1"


def test_machine_reports_ignore_thread_count(cli):
    reports = [
        cli("--machine", "--no-timing", "--threads", threads, "value", data("chsh.game"), "--eps", "1/5",
            "--method", "grid")[1]
        for threads in ("1", "4")
    ]
    assert reports[0] == reports[1]
    assert "wall_time" not in reports[0]


def test_human_output_has_wall_time(cli):
    out = cli("exact", data("triv.game"))[1]
    assert out.splitlines()[-1].startswith("wall time: ")


class TestExitCodes:
    def test_missing_file(self, cli, tmp_path):
        code, _, err = cli("exact", str(tmp_path / "nope.game"))
        assert code == 1
        assert err.startswith("error:")

    def test_malformed_file(self, cli, tmp_path):
        path = tmp_path / "bad.game"
        path.write_text("NSGAME 1\nquestions 1\n")
        code, _, err = cli("exact", str(path))
        assert code == 1
        assert "bad.game:2:" in err

    def test_binary_file(self, cli, tmp_path):
        path = tmp_path / "binary.game"
        path.write_bytes(b"NSGAME 1\nquestions 1 1\nanswers 1 1\npi\n0 0 1\nR\n\xff\xfe\n")
        code, _, err = cli("exact", str(path))
        assert code == 1
        assert "not UTF-8" in err

    def test_strategy_with_empty_question_set(self, cli, tmp_path):
        path = tmp_path / "empty.strat"
        path.write_text("NSSTRAT 1\nquestions 0 1\nanswers 1 1\n")
        code, _, err = cli("check-strategy", data("triv.game"), str(path))
        assert code == 1
        assert "q1_count" in err

    def test_verifier_with_huge_randomness(self, cli, tmp_path):
        path = tmp_path / "huge.verifier"
        path.write_text("NSVERIFIER 1\nrandbits 1000000000\nanswers 1 1\nmap 0 0 0\n")
        code, _, err = cli("compile", str(path), "-o", str(tmp_path / "huge.game"))
        assert code == 3
        assert "guard" in err

    @pytest.mark.parametrize("argv", [
        ("value", "GAME", "--eps", "0"),
        ("value", "GAME", "--eps", "3/2"),
        ("value", "GAME", "--eps", "tiny"),
        ("decide", "GAME", "--s", "0.9", "--c", "0.1"),
        ("dump-lp", "GAME", "--stage", "mpc"),
        ("--threads", "0", "exact", "GAME"),
        ("frobnicate",),
    ])
    def test_usage_errors(self, cli, argv):
        argv = [data("chsh.game") if token == "GAME" else token for token in argv]
        assert cli(*argv)[0] == 2

    def test_guard(self, tmp_path):
        path = tmp_path / "guarded.yaml"
        path.write_text(yaml.safe_dump({"exact": {"classical_max_assignments": 4}}))
        code = run(["--config", str(path), "classical", data("chsh.game")], stdout=io.StringIO(), stderr=io.StringIO())
        assert code == 3
