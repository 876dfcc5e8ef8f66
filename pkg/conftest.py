"""Root conftest: deterministic environment for every test path (mfhc/tests, tests)."""

import os

# Set before mfhc.config is imported; config reads the environment once.
os.environ.setdefault("MFHC_LOG_LEVEL", "WARNING")
os.environ.setdefault("MFHC_WORKERS", "1")
os.environ.setdefault("MFHC_MP_DPS", "30")
os.environ.pop("MFHC_LOG_DIR", None)
