# conftest.py
import io
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pytest
from dotenv import find_dotenv, load_dotenv

from infinikit import config
from infinikit.cli import main

# --- Paths / env -------------------------------------------------------------
ROOT = Path(__file__).resolve().parent
load_dotenv(find_dotenv())
DATA_DIR = ROOT / "test_data"
GOLDEN_JSON = DATA_DIR / "golden_cli.json"
DEFAULT_SEED = 1729


@dataclass(frozen=True)
class CliResult:
    code: int
    out: str
    err: str


# --- Fixtures ----------------------------------------------------------------
@pytest.fixture(scope="session")
def base_seed() -> int:
    """INFINIKIT_SEED when set, so a failing randomized run can be replayed."""
    seed = config.seed_from_env()
    return DEFAULT_SEED if seed is None else seed


@pytest.fixture
def faker_seed(base_seed: int) -> int:
    """Seeds the Faker pytest plugin's `faker` fixture."""
    return base_seed


@pytest.fixture
def rng(base_seed: int) -> np.random.Generator:
    return np.random.default_rng(base_seed)


@pytest.fixture(scope="session")
def golden() -> dict:
    """Loads the golden CLI runs from a JSON file."""
    with open(GOLDEN_JSON, "r", encoding="utf-8") as f:
        return json.load(f)


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture
def run_cli(monkeypatch: pytest.MonkeyPatch):
    """
    Factory fixture running the CLI in-process.

    Usage:
        result = run_cli("st", "3 + eps")
        result = run_cli("--format", "doc", "dixmier", "--tail", "n^-1", env={"INFINIKIT_SEED": "3"})
    """

    def _run(*args: str, env: dict[str, str] | None = None) -> CliResult:
        for key, value in (env or {}).items():
            monkeypatch.setenv(key, value)
        out, err = io.StringIO(), io.StringIO()
        code = main(list(args), out=out, err=err)
        return CliResult(code, out.getvalue(), err.getvalue())

    return _run


@pytest.fixture
def matrix_file(tmp_path: Path):
    """Factory fixture writing a matrix as whitespace-separated rows."""

    def _write(rows, name: str = "matrix.txt") -> Path:
        path = tmp_path / name
        text = "\n".join(" ".join(repr(float(x)) for x in row) for row in np.asarray(rows))
        path.write_text(text + "\n", encoding="utf-8")
        return path

    return _write
