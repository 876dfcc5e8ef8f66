"""mfhc config from environment."""

import os
from typing import Callable, TypeVar

T = TypeVar("T")


def _env(name: str, default: T, cast: Callable[[str], T]) -> T:
    """MFHC_<name> cast to the default's type; blank or malformed values fall back."""
    raw = os.getenv(f"MFHC_{name}")
    if raw is None or not raw.strip():
        return default
    try:
        return cast(raw.strip())
    except ValueError:
        return default


class Config:
    """Numeric tolerances, truncation defaults and logging from env vars."""

    # Tolerance for relations that hold exactly in theory but are checked in floats
    PRECISION: float = _env("PRECISION", 1e-10, float)
    # Relative, against mpmath.diff partials in u and v
    FD_TOL: float = _env("FD_TOL", 1e-6, float)
    LAPLACE_STEP: float = _env("LAPLACE_STEP", 1e-3, float)
    RESIDUAL_TOL: float = _env("RESIDUAL_TOL", 1e-4, float)
    MODULARITY_TOL: float = _env("MODULARITY_TOL", 1e-6, float)
    BRANCH_TOL: float = _env("BRANCH_TOL", 1e-9, float)
    DMAX: int = _env("DMAX", 400, int)
    NMAX: int = _env("NMAX", 20, int)
    MP_DPS: int = _env("MP_DPS", 30, int)
    WORKERS: int = _env("WORKERS", 1, int)
    LOG_LEVEL: str = _env("LOG_LEVEL", "WARNING", str)
    LOG_DIR: str = _env("LOG_DIR", "", str)


config = Config()
