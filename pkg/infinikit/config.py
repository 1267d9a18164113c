# infinikit/config.py
from __future__ import annotations

import os

from dotenv import find_dotenv, load_dotenv

from infinikit.errors import ConfigError

# --- Env ---------------------------------------------------------------------
load_dotenv(find_dotenv(usecwd=True))


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    text = raw.strip()
    try:
        if "^" in text:
            base, exp = text.split("^", 1)
            return int(base) ** int(exp)
        return int(text)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {raw!r}") from None


def _float_env(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"{name} must be a number, got {raw!r}") from None


def seed_from_env() -> int | None:
    """Seed fallback for the CLI; read at call time so tests can monkeypatch it."""
    raw = os.getenv("INFINIKIT_SEED")
    if raw is None or not raw.strip():
        return None
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"INFINIKIT_SEED must be an integer, got {raw!r}") from None


INV_CUTOFF = _int_env("INFINIKIT_INV_CUTOFF", 8)
FILTER_HORIZON = _int_env("INFINIKIT_FILTER_HORIZON", 10**6)
EXTEND_PROBE = _int_env("INFINIKIT_EXTEND_PROBE", 1000)
DIM_CAP = _int_env("INFINIKIT_DIM_CAP", 1024)
DIXMIER_CAP = _int_env("INFINIKIT_DIXMIER_CAP", 2**20)
TOL_MEAS = _float_env("INFINIKIT_TOL_MEAS", 1e-3)
LOG_LEVEL = os.getenv("INFINIKIT_LOG_LEVEL", "WARNING").strip().upper()
