from __future__ import annotations

import logging
import os
import sys
from typing import Sequence

from config import load_settings
from config.settings import summarize_settings
from ppmap import cli
from services.error_reporting_service import capture_exception, init_error_reporting

LOG_FORMAT = "%(asctime)s level=%(levelname)s name=%(name)s msg=\"%(message)s\""


def setup_logging() -> None:
    level = os.getenv("LOG_LEVEL", "WARNING").upper()
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)
    logging.captureWarnings(True)


def install_excepthook() -> None:
    def _hook(exc_type, exc_value, exc_traceback):  # type: ignore[no-untyped-def]
        logging.error(
            "Uncaught exception",
            exc_info=(exc_type, exc_value, exc_traceback),
        )
        if isinstance(exc_value, BaseException):
            capture_exception(exc_value)

    sys.excepthook = _hook


def main(argv: Sequence[str] | None = None) -> int:
    setup_logging()
    try:
        settings = load_settings()
    except RuntimeError as exc:
        logging.error("Invalid configuration: %s", exc)
        sys.stderr.write(f"error: {exc}\n")
        return cli.EXIT_USAGE
    logging.info("Settings loaded: %s", summarize_settings(settings))
    init_error_reporting(settings=settings, service_name="ppmap")
    install_excepthook()
    return cli.run(argv, settings=settings)


if __name__ == "__main__":
    sys.exit(main())
