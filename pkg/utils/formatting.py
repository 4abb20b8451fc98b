from __future__ import annotations

from typing import Iterable, Sequence

CSV_HEADER = "state,param,expectation,detected"


def format_real(value: float) -> str:
    return f"{value:.17g}"


def format_detection_row(
    *, state: str, param: float | None, expectation: float, detected: bool
) -> str:
    param_text = "" if param is None else format_real(param)
    return f"{state},{param_text},{format_real(expectation)},{str(detected).lower()}"


def format_detection_csv(rows: Iterable[str]) -> str:
    return "\n".join([CSV_HEADER, *rows]) + "\n"


def format_cp_message(
    *,
    completely_positive: bool,
    min_eigenvalue: float,
    zero_map: bool = False,
    minor_indices: Sequence[int] | None = None,
    minor_determinant: float | None = None,
    quadratic_value: float | None = None,
) -> str:
    if completely_positive:
        suffix = " (zero map)" if zero_map else ""
        return f"completely positive{suffix}\nmin eigenvalue: {format_real(min_eigenvalue)}"
    lines = [
        "not completely positive",
        f"min eigenvalue: {format_real(min_eigenvalue)}",
    ]
    if quadratic_value is not None:
        lines.append(f"certificate vector quadratic form: {format_real(quadratic_value)}")
    if minor_indices is not None and minor_determinant is not None:
        indices = ",".join(str(index) for index in minor_indices)
        lines.append(f"principal minor {{{indices}}} det: {format_real(minor_determinant)}")
    return "\n".join(lines)


def format_threshold_report(
    *,
    gamma: float,
    threshold: float,
    below: float,
    paper_values: dict[str, float],
) -> str:
    lines = [
        f"gamma: {format_real(gamma)}",
        f"alpha*: {format_real(threshold)}",
        f"bracket: not PSD at {format_real(below)}, PSD at {format_real(threshold)}",
    ]
    for name, value in paper_values.items():
        lines.append(f"{name}: {format_real(value)}")
    return "\n".join(lines)
