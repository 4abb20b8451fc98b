"""
Optional Sentry reporting. Everything here is a no-op unless SENTRY_DSN is set and sentry-sdk
imports; a reporting failure never changes a command's exit code.
"""
from __future__ import annotations

import logging
import os
from typing import Any

from config import Settings
from utils.environment import app_env, read_version

LOGGER = logging.getLogger(__name__)

_INITIALIZED = False


def init_error_reporting(*, settings: Settings, service_name: str) -> None:
    global _INITIALIZED
    if _INITIALIZED:
        return

    dsn = os.getenv("SENTRY_DSN", "").strip()
    if not dsn:
        return

    try:
        import sentry_sdk  # type: ignore[import-not-found]
        from sentry_sdk.integrations.logging import (
            LoggingIntegration,  # type: ignore[import-not-found]
        )
    except Exception:
        LOGGER.warning("Sentry SDK not installed; skipping error reporting.")
        return

    environment = os.getenv("SENTRY_ENVIRONMENT", "").strip() or app_env()
    release = os.getenv("SENTRY_RELEASE", "").strip()
    if not release:
        version = read_version()
        release = f"ppmap-audit@{version}" if version else "ppmap-audit"

    sentry_sdk.init(
        dsn=dsn,
        environment=environment,
        release=release,
        send_default_pii=False,
        integrations=[LoggingIntegration(level=logging.INFO, event_level=logging.ERROR)],
        traces_sample_rate=0.0,
    )
    # enough to rerun a failing command
    for key, value in (
        ("service", service_name),
        ("seed", settings.seed),
        ("seesaw_restarts", settings.seesaw_restarts),
        ("eps_psd", settings.tolerances.eps_psd),
    ):
        try:
            sentry_sdk.set_tag(key, str(value))
        except Exception:
            pass

    _INITIALIZED = True
    LOGGER.info("Error reporting enabled (%s, env=%s).", service_name, environment)


def add_breadcrumb(category: str, message: str, **data: Any) -> None:
    if not _INITIALIZED:
        return
    try:
        import sentry_sdk  # type: ignore[import-not-found]

        sentry_sdk.add_breadcrumb(category=category, message=message, level="info", data=data)
    except Exception:
        return


def capture_exception(
    exc: BaseException, *, command: str | None = None, tags: dict[str, Any] | None = None
) -> None:
    if not _INITIALIZED:
        return
    try:
        import sentry_sdk  # type: ignore[import-not-found]

        with sentry_sdk.new_scope() as scope:
            if command:
                scope.set_tag("command", command)
            for key, value in (tags or {}).items():
                scope.set_tag(key, str(value))
            sentry_sdk.capture_exception(exc)
    except Exception:
        return
