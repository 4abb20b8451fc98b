"""
In-process counters for one CLI run: command outcomes, exit codes, claim verdicts and see-saw
effort. ``snapshot`` is what tests and the startup log read.
"""
from __future__ import annotations

import logging
import time
from collections import Counter
from typing import Dict, Tuple

LOGGER = logging.getLogger(__name__)

_counters: Counter[str] = Counter()
_timings: Counter[str] = Counter()


def record_command(name: str, *, status: str, duration_ms: float | None = None) -> None:
    _counters[f"commands.total.{status}.{name}"] += 1
    if duration_ms is None:
        LOGGER.info("command metric name=%s status=%s", name, status)
        return
    bucket = int(duration_ms // 100) * 100  # 100ms buckets
    _timings[f"commands.latency.bucket.{name}.{bucket}ms"] += 1
    LOGGER.info("command metric name=%s status=%s duration_ms=%.1f", name, status, duration_ms)


def record_exit(command: str, *, code: int, error_type: str) -> None:
    """Non-zero exits, keyed by code and by the exception class that caused them."""
    _counters[f"exits.{code}.{command}"] += 1
    _counters[f"errors.{error_type}"] += 1


def record_claim(claim_id: str, *, verdict: str) -> None:
    _counters[f"claims.total.{verdict}"] += 1
    _counters[f"claims.{claim_id}.{verdict}"] += 1


def record_seesaw(*, starts: int, converged: bool, counterexample: bool) -> None:
    _counters["seesaw.runs"] += 1
    _counters["seesaw.starts"] += starts
    if not converged:
        _counters["seesaw.unconverged"] += 1
    if counterexample:
        _counters["seesaw.counterexamples"] += 1


def snapshot() -> Tuple[Dict[str, int], Dict[str, int]]:
    return dict(_counters), dict(_timings)


def reset() -> None:
    _counters.clear()
    _timings.clear()


def now_ms() -> float:
    return time.perf_counter() * 1000
