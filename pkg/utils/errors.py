from __future__ import annotations

import logging
import uuid


class PmapError(Exception):
    pass


class NonFiniteEntries(PmapError):
    pass


class NotSquare(PmapError):
    pass


class NotHermitian(PmapError):
    pass


class NotPsd(PmapError):
    pass


class DimensionMismatch(PmapError):
    pass


class BadDimension(PmapError):
    pass


class SingularBlock(PmapError):
    pass


class BlocksNotPsd(PmapError):
    pass


class NoUpperBracket(PmapError):
    pass


class CallableDimensionMismatch(PmapError):
    pass


class ParameterOutOfRange(PmapError):
    pass


class NonRealTrace(PmapError):
    pass


class StateValidationError(PmapError):
    pass


class MatrixFileError(PmapError):
    pass


class CommandUsageError(PmapError):
    pass


def log_command_error(
    error: BaseException,
    *,
    command: str | None,
    source: str,
    error_id: str | None = None,
) -> None:
    prefix = f"[error_id={error_id}] " if error_id else ""
    extra = {"command": command, "source": source, "error_type": type(error).__name__}
    logging.error(
        "%sCommand error source=%s command=%s type=%s",
        prefix,
        source,
        command,
        type(error).__name__,
        exc_info=error,
        extra=extra,
    )


def format_error_message(message: str, error_id: str | None = None) -> str:
    if error_id:
        return f"{message} (ref: {error_id})"
    return message


def new_error_id() -> str:
    return uuid.uuid4().hex[:8]
