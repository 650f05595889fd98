from collections.abc import Callable
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pytest

from airykit.cli import main
from airykit.evolution import Grid1D


@dataclass(frozen=True)
class CliResult:
    code: int
    out: str
    err: str


CliRunner = Callable[..., CliResult]


@pytest.fixture(autouse=True)
def clean_environ(monkeypatch: pytest.MonkeyPatch) -> None:
    for name in (
        "AIRYKIT_CONFIG",
        "AIRYKIT_ABS_TOL",
        "AIRYKIT_MAX_NODES",
        "AIRYKIT_MAX_BLOCKS",
        "AIRYKIT_PRECISION",
        "AIRYKIT_WORKERS",
    ):
        monkeypatch.delenv(name, raising=False)


@pytest.fixture
def cli(capsys: pytest.CaptureFixture[str]) -> CliRunner:
    def _run(*argv: str) -> CliResult:
        code = main(list(argv))
        captured = capsys.readouterr()
        return CliResult(code, captured.out, captured.err)

    return _run


@pytest.fixture
def gaussian_csv(tmp_path: Path) -> Path:
    grid = Grid1D(-30.0, 30.0, 2048)
    path = tmp_path / "gaussian.csv"
    path.write_text(
        grid.sample(lambda x: np.exp(-((x / 2) ** 2))).to_csv(precision=17)
    )
    return path
