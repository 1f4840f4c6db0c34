# backend/app/config.py

import os
from dataclasses import dataclass
from pathlib import Path

from dotenv import load_dotenv

# --- Paths ---

APP_DIR = Path(__file__).resolve().parent        # backend/app
BACKEND_DIR = APP_DIR.parent                     # backend/
SCHEMA_DIR = APP_DIR / "schemas"
DATA_DIR = BACKEND_DIR / "data"
WITNESS_PATH = DATA_DIR / "case_ii_witnesses.json"

# --- Numerical defaults ---

DEFAULT_TOL = 1e-9
DEFAULT_RANK_TOL = 1e-7
CLUSTER_GAP = 1e-6
SEARCH_STARTS = 32
COMBINATION_DRAWS = 64

SCHEMA_VERSION = "1.0"


@dataclass(frozen=True)
class Settings:
    tol: float = DEFAULT_TOL
    rank_tol: float = DEFAULT_RANK_TOL
    log_level: str = "WARNING"


def _float_env(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        value = float(raw)
    except ValueError:
        return default
    return value if value > 0 else default


def load_settings(tol: float | None = None, rank_tol: float | None = None) -> Settings:
    """
    Resolve settings: explicit arguments > environment (.env honoured) > defaults.

    SKT_TOL        absolute tolerance for "= 0" verdicts
    SKT_RANK_TOL   tolerance for rank decisions
    SKT_LOG_LEVEL  logging level name
    """
    load_dotenv()
    return Settings(
        tol=tol if tol is not None else _float_env("SKT_TOL", DEFAULT_TOL),
        rank_tol=rank_tol if rank_tol is not None else _float_env("SKT_RANK_TOL", DEFAULT_RANK_TOL),
        log_level=os.getenv("SKT_LOG_LEVEL", "WARNING").upper(),
    )
