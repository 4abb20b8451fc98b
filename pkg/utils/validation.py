from __future__ import annotations

import math
import re
from fractions import Fraction

BUILTIN_WITNESS_PATTERN = re.compile(r"^builtin:\s*([^,\s]+)\s*,\s*([^,\s]+)\s*$", re.IGNORECASE)

STATE_ALIASES = {
    "HORODECKI": "horodecki",
    "RHO_B": "horodecki",
    "BOUND": "horodecki",
    "NPT": "npt",
    "RHO_NPT": "npt",
}


def parse_real(value: str) -> float | None:
    """Decimal or fraction text ("0.75", "3/4", "-2") to a finite float."""
    try:
        parsed = float(Fraction(value.strip()))
    except (ValueError, ZeroDivisionError):
        return None
    return parsed if math.isfinite(parsed) else None


def parse_builtin_witness(value: str) -> tuple[float, float] | None:
    match = BUILTIN_WITNESS_PATTERN.fullmatch(value.strip())
    if not match:
        return None
    alpha = parse_real(match.group(1))
    beta = parse_real(match.group(2))
    if alpha is None or beta is None:
        return None
    return alpha, beta


def normalize_state_kind(value: str) -> str | None:
    key = value.strip().upper()
    return STATE_ALIASES.get(key)


def parse_unit_interval(value: str) -> float | None:
    parsed = parse_real(value)
    if parsed is None or not 0 <= parsed <= 1:
        return None
    return parsed


def parse_int_in_range(
    value: str, *, min_value: int, max_value: int | None = None
) -> int | None:
    try:
        parsed = int(value.strip())
    except ValueError:
        return None
    if parsed < min_value or (max_value is not None and parsed > max_value):
        return None
    return parsed
