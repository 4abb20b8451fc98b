from __future__ import annotations

import logging
from typing import Any


_RESERVED = frozenset(logging.LogRecord("", 0, "", 0, "", None, None).__dict__) | {"message"}


def _command_context(command: str, context: dict[str, Any]) -> dict[str, Any]:
    ctx: dict[str, Any] = {"command": command}
    for key, value in context.items():
        ctx[f"ctx_{key}" if key in _RESERVED else key] = value
    return ctx


def log_command_event(command: str, *, status: str, **context: Any) -> None:
    """
    Emit a structured log line for one CLI command invocation.
    """
    ctx = _command_context(command, context)
    details = " ".join(f"{key}={ctx[key]}" for key in sorted(ctx) if key != "command")
    logging.info(
        "command event status=%s command=%s %s",
        status,
        command,
        details,
        extra=ctx,
    )
