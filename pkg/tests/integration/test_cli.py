import json
import math
from pathlib import Path

import pytest
from scipy import special

from airykit.cli import (
    EXIT_NONCONVERGENCE,
    EXIT_OK,
    EXIT_USAGE,
    FIGURE_START,
    FIGURE_STEP,
    FIGURE_STOP,
    UsageError,
    lattice,
    parse_pairs,
)
from airykit.evolution import GridFunction

from .conftest import CliRunner


class TestParsing:
    def test_pairs(self) -> None:
        assert parse_pairs(["x=1", "y=-2.5"]) == {"x": "1", "y": "-2.5"}

    @pytest.mark.parametrize("pairs", [["x"], ["=1"], ["x=1", "x=2"]])
    def test_bad_pairs(self, pairs: list[str]) -> None:
        with pytest.raises(UsageError):
            parse_pairs(pairs)

    def test_lattice(self) -> None:
        assert lattice(-1.0, 1.0, 0.5) == [-1.0, -0.5, 0.0, 0.5, 1.0]
        assert len(lattice(FIGURE_START, FIGURE_STOP, FIGURE_STEP)) == 281
        with pytest.raises(UsageError):
            lattice(1.0, 0.0, 0.1)


class TestEval:
    def test_hermite(self, cli: CliRunner) -> None:
        result = cli("eval", "--hermite", "m=3", "n=3", "x=1", "y=1")
        assert result.code == EXIT_OK
        assert result.out == "7\n"

    def test_airy_json(self, cli: CliRunner) -> None:
        result = cli("eval", "--airy", "t=-2", "--format", "json")
        assert result.code == EXIT_OK
        payload = json.loads(result.out)
        assert payload["value"] == pytest.approx(special.airy(-2.0)[0], abs=1e-9)
        assert payload["est_error"] < 1e-8

    def test_precision_from_config_file(self, cli: CliRunner, tmp_path: Path) -> None:
        defaults = tmp_path / "airykit.conf"
        defaults.write_text("# output\nprecision = 4\n")
        result = cli("eval", "--airy", "t=0", "--config", str(defaults))
        assert result.code == EXIT_OK
        assert result.out == "0.355\n"

    def test_precision_flag_wins(
        self, cli: CliRunner, monkeypatch: pytest.MonkeyPatch
    ) -> None:
        monkeypatch.setenv("AIRYKIT_PRECISION", "4")
        result = cli("eval", "--airy", "t=0", "--precision", "6")
        assert result.out == "0.355028\n"

    def test_invalid_parameters(self, cli: CliRunner) -> None:
        result = cli("eval", "--hermite", "m=1", "n=3", "y=1")
        assert result.code == EXIT_USAGE
        assert "invalid parameters" in result.err

    def test_missing_function(self, cli: CliRunner) -> None:
        assert cli("eval", "t=0").code == EXIT_USAGE

    def test_watson_has_no_order(self, cli: CliRunner) -> None:
        result = cli("eval", "--watson", "x=0", "--order", "1")
        assert result.code == EXIT_USAGE
        assert "--order" in result.err

    def test_node_budget(self, cli: CliRunner, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv("AIRYKIT_MAX_NODES", "15")
        result = cli("eval", "--airy", "t=-20")
        assert result.code == EXIT_NONCONVERGENCE
        assert "no convergence" in result.err


class TestTable:
    def test_csv(self, cli: CliRunner) -> None:
        result = cli("table", "--airy", "x_min=-1", "x_max=1", "step=0.5")
        assert result.code == EXIT_OK
        lines = result.out.splitlines()
        assert lines[0] == "t,value,est_error"
        assert len(lines) == 6
        t, value, _ = (float(v) for v in lines[1].split(","))
        assert t == -1.0
        assert value == pytest.approx(special.airy(-1.0)[0], abs=1e-9)

    def test_json_to_file(self, cli: CliRunner, tmp_path: Path) -> None:
        out = tmp_path / "table.json"
        result = cli(
            "table",
            "--airy2",
            "x_min=0",
            "x_max=2",
            "step=1",
            "y=1",
            "--format",
            "json",
            "--out",
            str(out),
        )
        assert result.code == EXIT_OK
        assert result.out == ""
        rows = json.loads(out.read_text())
        assert [row["x"] for row in rows] == [0.0, 1.0, 2.0]
        c = 3 ** (1 / 3)
        for row in rows:
            assert row["value"] == pytest.approx(
                special.airy(row["x"] / c)[0] / c, abs=1e-9
            )

    def test_bad_bounds(self, cli: CliRunner) -> None:
        result = cli("table", "--airy", "x_min=1", "x_max=0")
        assert result.code == EXIT_USAGE


class TestTransform:
    def test_airy_of_constant(self, cli: CliRunner) -> None:
        result = cli("transform", "--airy", "--poly-degree", "0", "x=0.7", "y=1")
        assert result.code == EXIT_OK
        assert float(result.out) == pytest.approx(1.0, abs=1e-6)

    def test_airy_of_polynomial(self, cli: CliRunner) -> None:
        # H_3^(3)(x, y) = x^3 + 6y
        result = cli("transform", "--airy", "--input", "poly:0,0,0,1", "x=2", "y=0.5")
        assert float(result.out) == pytest.approx(11.0, rel=1e-6)

    def test_sampled_input(self, cli: CliRunner, gaussian_csv: Path) -> None:
        result = cli(
            "transform",
            "--gauss-weierstrass",
            "--input",
            str(gaussian_csv),
            "x=0",
            "y=0.25",
        )
        assert result.code == EXIT_OK
        # exp(-(x/2)^2) smoothed for y = 1/4 is exp(-x^2/5)·2/sqrt(5)
        assert float(result.out) == pytest.approx(2 / 5**0.5, abs=1e-4)

    def test_unknown_input(self, cli: CliRunner) -> None:
        result = cli("transform", "--airy", "--input", "nope", "x=0", "y=1")
        assert result.code == EXIT_USAGE
        assert "unknown input" in result.err


class TestEvolve:
    def test_propagate(self, cli: CliRunner, gaussian_csv: Path) -> None:
        result = cli(
            "evolve", "--propagate", "m=3", "y=0.5", "--input", str(gaussian_csv)
        )
        assert result.code == EXIT_OK
        before = GridFunction.from_csv(gaussian_csv.read_text())
        after = GridFunction.from_csv(result.out)
        assert after.grid == before.grid
        assert after.norm() == pytest.approx(before.norm(), rel=1e-9)

    def test_schrodinger_to_file(
        self, cli: CliRunner, gaussian_csv: Path, tmp_path: Path
    ) -> None:
        out = tmp_path / "psi.csv"
        result = cli(
            "evolve",
            "--schrodinger",
            "tau=0.5",
            "b=1",
            "--input",
            str(gaussian_csv),
            "--out",
            str(out),
            "--precision",
            "17",
        )
        assert result.code == EXIT_OK
        before = GridFunction.from_csv(gaussian_csv.read_text())
        after = GridFunction.from_csv(out.read_text())
        assert after.norm() == pytest.approx(before.norm(), rel=1e-12)

    def test_backward_diffusion(self, cli: CliRunner, gaussian_csv: Path) -> None:
        result = cli(
            "evolve", "--propagate", "m=2", "y=-1", "--input", str(gaussian_csv)
        )
        assert result.code == EXIT_USAGE
        assert "amplifies" in result.err

    def test_needs_input(self, cli: CliRunner) -> None:
        result = cli("evolve", "--airy-pde", "y=1")
        assert result.code == EXIT_USAGE
        assert "--input" in result.err

    def test_malformed_input(self, cli: CliRunner, tmp_path: Path) -> None:
        path = tmp_path / "bad.csv"
        path.write_text("x,re,im\n0,1,0\n")
        result = cli("evolve", "--airy-pde", "y=1", "--input", str(path))
        assert result.code == EXIT_USAGE


class TestExpand:
    def test_gaussian(self, cli: CliRunner) -> None:
        result = cli("expand", "--input", "gaussian", "--yabs", "1", "--N", "4")
        assert result.code == EXIT_OK
        coefficients = json.loads(result.out)
        assert len(coefficients) == 5
        assert all(isinstance(a, float) for a in coefficients)

    def test_cubic(self, cli: CliRunner) -> None:
        result = cli("expand", "--input", "poly:0,0,0,1", "--yabs", "0.5", "--N", "5")
        assert json.loads(result.out) == pytest.approx(
            [3.0, 0.0, 0.0, 1.0, 0.0, 0.0], abs=1e-6
        )


class TestVerify:
    def test_hermite(self, cli: CliRunner) -> None:
        result = cli("verify", "hermite")
        assert result.code == EXIT_OK
        assert "PASS" in result.out
        assert "FAIL" not in result.out

    @pytest.mark.parametrize("suite", ["airy", "transforms", "evolution", "all"])
    def test_suite_passes(self, cli: CliRunner, suite: str) -> None:
        result = cli("verify", suite)
        assert result.code == EXIT_OK, result.out
        assert "PASS" in result.out

    def test_unknown_suite(self, cli: CliRunner) -> None:
        assert cli("verify", "everything").code == EXIT_USAGE


class TestFigure:
    def test_fig1(self, cli: CliRunner) -> None:
        result = cli("figure", "fig1", "--precision", "8")
        assert result.code == EXIT_OK
        lines = result.out.splitlines()
        assert lines[0] == "x,Ai,Ai7"
        assert len(lines) == 282
        rows = [[float(v) for v in line.split(",")] for line in lines[1:]]
        x, ai, _ = rows[-1]
        assert x == pytest.approx(4.0)
        assert ai == pytest.approx(special.airy(4.0)[0], rel=1e-6)
        assert rows[200][1] == pytest.approx(special.airy(0.0)[0], abs=1e-8)
        negative = [row for row in rows if row[0] <= -2.0]
        for column in (1, 2):
            signs = [row[column] > 0 for row in negative]
            changes = sum(a != b for a, b in zip(signs, signs[1:]))
            assert changes >= 3

    def test_fig2(self, cli: CliRunner) -> None:
        result = cli("figure", "fig2", "--precision", "8")
        assert result.code == EXIT_OK
        lines = result.out.splitlines()
        assert lines[0] == "x,Ai,W"
        assert len(lines) == 282
        rows = [[float(v) for v in line.split(",")] for line in lines[1:]]
        assert rows[200][0] == pytest.approx(0.0, abs=1e-12)
        assert rows[200][2] == pytest.approx(
            math.gamma(1.25) * math.cos(math.pi / 8), abs=1e-7
        )
        # W(x) ~ -sin(2x^2)/(4x) on the right end of the range
        tail = [row[2] for row in rows if row[0] >= 2.0]
        assert max(abs(w) for w in tail) < 0.13
