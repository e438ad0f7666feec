"""Tests for the command line interface."""

import json
from pathlib import Path
from typing import TYPE_CHECKING

import pytest

from holomorphic_orbifolds.classify import Verdict, parse_candidate
from holomorphic_orbifolds.cli import main
from holomorphic_orbifolds.enums import VerdictStage

if TYPE_CHECKING:
    from pytest_mock import MockerFixture


def _run(argv: list[str], capsys: pytest.CaptureFixture[str]) -> tuple[int, str]:
    code = main(argv)
    return code, capsys.readouterr().out


def _integer(value: int) -> dict[str, object]:
    return {"conductor": 1, "coefficients": [[0, str(value)]]}


class TestSubcommands:
    """Tests for the JSON printed by each subcommand."""

    def test_fusion(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test the fusion group of an order 5 orbifold of type 0."""
        code, out = _run(["fusion", "--order", "5"], capsys)
        data = json.loads(out)
        assert code == 0
        assert data["order"] == 5
        assert data["type"] == 0
        assert len(data["elements"]) == 25
        assert len(data["isotropic_subgroups"]) == 3
        assert [[i, 0] for i in range(5)] in data["isotropic_subgroups"]

    def test_lie_weights(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test the integrable weights of A1 at level 2."""
        code, out = _run(["lie", "weights", "--type", "A1", "--level", "2"], capsys)
        data = json.loads(out)
        assert code == 0
        assert data["dual_coxeter"] == 2
        assert data["weights"] == [
            {"weight": [0], "conformal_weight": "0", "dim": 1},
            {"weight": [1], "conformal_weight": "3/16", "dim": 2},
            {"weight": [2], "conformal_weight": "1/2", "dim": 3},
        ]

    def test_theta(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test that A2 has six vectors of norm 2."""
        code, out = _run(["theta", "--gram", "[[2,-1],[-1,2]]"], capsys)
        data = json.loads(out)
        assert code == 0
        assert data["rank"] == 2
        assert [0, 1, _integer(1)] in data["series"]
        assert [1, 1, _integer(6)] in data["series"]

    def test_theta_gram_from_file(self, capsys: pytest.CaptureFixture[str], tmp_path: Path) -> None:
        """Test reading the Gram matrix from a file."""
        path = tmp_path / "a1.json"
        path.write_text("[[2]]", encoding="utf-8")
        code, out = _run(["theta", "--gram", str(path)], capsys)
        assert code == 0
        assert [1, 1, _integer(2)] in json.loads(out)["series"]

    def test_eisenstein(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test E_4 = 1 + 240 q + ..."""
        code, out = _run(["qexp", "eisenstein", "--weight", "4", "--terms", "3"], capsys)
        data = json.loads(out)
        assert code == 0
        assert [1, 1, _integer(240)] in data["series"]

    def test_cycle_shape(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test the eta product of the cycle shape 1^-1 5^5."""
        code, out = _run(["qexp", "shape", "--shape", "1:-1,5:5"], capsys)
        assert code == 0
        assert json.loads(out)["weight"] == "2"

    def test_cocycle(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test that the standard cocycle on Z/5 is an abelian 3-cocycle."""
        code, out = _run(["cocycle", "--group", "5", "--q", "1/5"], capsys)
        data = json.loads(out)
        assert code == 0
        assert data["valid"] is True
        assert data["orders"] == [5]

    def test_classify_enumerate(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test one JSON line per candidate."""
        code, out = _run(["classify", "enumerate"], capsys)
        lines = [json.loads(line) for line in out.splitlines()]
        assert code == 0
        assert len(lines) == 221
        assert [line["index"] for line in lines] == list(range(221))
        assert {"index", "candidate", "dim"} == set(lines[0])

    def test_classify_check(
        self, capsys: pytest.CaptureFixture[str], mocker: "MockerFixture"
    ) -> None:
        """Test that a single check prints the verdict of the cascade."""
        verdict = Verdict(parse_candidate("C4,10"), VerdictStage.FEASIBLE, witness={"(1,0,0,0)": 2})
        check = mocker.patch(
            "holomorphic_orbifolds.classify.check_candidate", return_value=verdict
        )
        code, out = _run(["classify", "check", "C4,10", "--seed", "7"], capsys)
        data = json.loads(out)
        assert code == 0
        assert data["candidate"] == "C4,10"
        assert data["witness"] == {"(1,0,0,0)": 2}
        assert check.call_args.args[1].seed == 7

    def test_output_file(self, capsys: pytest.CaptureFixture[str], tmp_path: Path) -> None:
        """Test --out writes the JSON to a file instead of stdout."""
        path = tmp_path / "fusion.json"
        code, out = _run(["fusion", "--order", "2", "--out", str(path)], capsys)
        assert code == 0
        assert out == ""
        assert json.loads(path.read_text(encoding="utf-8"))["order"] == 2

    @pytest.mark.slow
    def test_orbifold(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test the orbifold of the bundled order 5 automorphism."""
        code, out = _run(["orbifold", "--input", "a4_6_order5"], capsys)
        data = json.loads(out)
        assert code == 0
        assert data["dim_v1_orbifold"] == 48


class TestErrors:
    """Tests for exit codes and error reports."""

    @pytest.mark.parametrize(
        ("argv", "match"),
        [
            (["orbifold"], "orbifold needs --input"),
            (["orbifold", "--input", "e8_order7"], "Unknown automorphism"),
            (["classify", "check"], "needs a candidate name"),
            (["classify", "check", "H3,1"], "Invalid component"),
            (["qexp", "shape", "--shape", "1/5:1"], "Cycle shapes take integer periods"),
            (["qexp", "eta", "--shape", "1-24"], "Expected k:b pairs"),
            (["theta", "--gram", "[[2,"], "Gram matrix must be JSON"),
            (["cocycle", "--group", "5,5", "--q", "1/5"], "Need one value of q per cyclic factor"),
        ],
    )
    def test_domain_error(
        self, capsys: pytest.CaptureFixture[str], argv: list[str], match: str
    ) -> None:
        """Test that domain errors exit with 1 and a JSON error report."""
        code, out = _run(argv, capsys)
        data = json.loads(out)
        assert code == 1
        assert match in data["error"]
        assert data["kind"] == "ValueError"

    def test_invalid_setting(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test that invalid settings are domain errors."""
        code, out = _run(["classify", "enumerate", "--workers", "0"], capsys)
        assert code == 1
        assert json.loads(out) == {
            "error": "workers must be positive, got 0",
            "kind": "ValueError",
        }

    @pytest.mark.parametrize(
        "argv",
        [
            [],
            ["lie", "weights", "--level", "2"],
            ["classify", "rank"],
            ["fusion", "--order", "five"],
        ],
    )
    def test_usage_error(self, argv: list[str]) -> None:
        """Test that argparse failures exit with 2."""
        assert main(argv) == 2

    def test_help(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test that --help exits with 0."""
        assert main(["--help"]) == 0
        assert "holomorphic-orbifolds" in capsys.readouterr().out
