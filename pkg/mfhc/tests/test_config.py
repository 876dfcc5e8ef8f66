"""Environment-driven settings."""

from mfhc.config import Config, _env


def test_env_casts_and_falls_back(monkeypatch) -> None:
    """Values are cast; blank or malformed ones keep the default."""
    monkeypatch.setenv("MFHC_DMAX", " 900 ")
    assert _env("DMAX", 400, int) == 900
    monkeypatch.setenv("MFHC_DMAX", "lots")
    assert _env("DMAX", 400, int) == 400
    monkeypatch.setenv("MFHC_DMAX", "  ")
    assert _env("DMAX", 400, int) == 400
    monkeypatch.delenv("MFHC_FD_TOL", raising=False)
    assert _env("FD_TOL", 1e-6, float) == 1e-6
    monkeypatch.setenv("MFHC_LOG_LEVEL", "debug")
    assert _env("LOG_LEVEL", "WARNING", str) == "debug"


def test_defaults() -> None:
    """Class-level defaults when nothing is set."""
    assert Config.MP_DPS >= 15
    assert 0 < Config.FD_TOL < 1e-3
