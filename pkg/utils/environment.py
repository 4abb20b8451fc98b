from __future__ import annotations

import os
from pathlib import Path

_VERSION_PATH = Path(__file__).resolve().parents[1] / "VERSION"


def app_env() -> str:
    env = os.getenv("APP_ENV", "development").strip().lower()
    return env or "development"


def read_version() -> str:
    try:
        return _VERSION_PATH.read_text(encoding="utf-8").strip()
    except OSError:
        return ""
