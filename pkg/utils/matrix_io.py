"""
MatrixFile JSON: {"rows": r, "cols": c, "data": [[re, im], ...]} in row-major order.

Each float is written with 17 significant digits, enough for write-then-read to be bit-exact.
"""
from __future__ import annotations

import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from utils.errors import MatrixFileError
from utils.formatting import format_real
from utils.linalg import ComplexMatrix


@dataclass(frozen=True)
class MatrixFile:
    rows: int
    cols: int
    data: list[list[float]]

    def to_matrix(self) -> ComplexMatrix:
        values = [complex(re, im) for re, im in self.data]
        return np.array(values, dtype=np.complex128).reshape(self.rows, self.cols)


def from_matrix(matrix: Any) -> MatrixFile:
    m = np.asarray(matrix, dtype=np.complex128)
    if m.ndim != 2:
        raise MatrixFileError(f"Expected a 2-D matrix, got shape {m.shape}.")
    data = [[float(value.real), float(value.imag)] for value in m.reshape(-1)]
    return MatrixFile(rows=int(m.shape[0]), cols=int(m.shape[1]), data=data)


def _finite_number(value: Any) -> bool:
    return (
        isinstance(value, (int, float))
        and not isinstance(value, bool)
        and math.isfinite(value)
    )


def parse_payload(payload: Any) -> MatrixFile:
    if not isinstance(payload, dict):
        raise MatrixFileError("Matrix file must be a JSON object.")
    rows, cols, data = payload.get("rows"), payload.get("cols"), payload.get("data")
    if not isinstance(rows, int) or not isinstance(cols, int) or rows < 1 or cols < 1:
        raise MatrixFileError("rows and cols must be positive integers.")
    if not isinstance(data, list) or len(data) != rows * cols:
        raise MatrixFileError(f"data must hold rows*cols = {rows * cols} entries.")
    pairs: list[list[float]] = []
    for index, entry in enumerate(data):
        if (
            not isinstance(entry, list)
            or len(entry) != 2
            or not all(_finite_number(part) for part in entry)
        ):
            raise MatrixFileError(f"data[{index}] must be a [re, im] pair of finite numbers.")
        pairs.append([float(entry[0]), float(entry[1])])
    return MatrixFile(rows=rows, cols=cols, data=pairs)


def dumps_matrix(matrix: Any) -> str:
    """Field order is fixed: rows, cols, data."""
    mf = from_matrix(matrix)
    pairs = ", ".join(f"[{format_real(re)}, {format_real(im)}]" for re, im in mf.data)
    return f'{{"rows": {mf.rows}, "cols": {mf.cols}, "data": [{pairs}]}}\n'


def loads_matrix(text: str) -> ComplexMatrix:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixFileError(f"Invalid JSON: {exc}") from exc
    return parse_payload(payload).to_matrix()


def read_matrix_file(path: str | Path) -> ComplexMatrix:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise MatrixFileError(f"Cannot read {path}: {exc}") from exc
    return loads_matrix(text)


def write_matrix_file(path: str | Path | None, matrix: Any) -> None:
    """Write to ``path``; None or "-" writes to stdout."""
    text = dumps_matrix(matrix)
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise MatrixFileError(f"Cannot write {path}: {exc}") from exc
