from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any

import numpy as np
import sympy

from utils.errors import ParameterOutOfRange, PmapError, StateValidationError
from utils.linalg import (
    DEFAULT_TOLERANCES,
    ComplexMatrix,
    Subsystem,
    Tolerances,
    as_matrix,
    is_psd,
    partial_transpose,
    realign_trace_norm,
)

LOGGER = logging.getLogger(__name__)

STATE_DIMS = (2, 4)


@dataclass(frozen=True)
class BipartiteState:
    matrix: ComplexMatrix
    d1: int
    d2: int
    label: str
    param: float | None = None


@dataclass(frozen=True)
class PptVerdict:
    is_ppt: bool
    min_pt_eigenvalue: float


@dataclass(frozen=True)
class RealignmentResult:
    value: float
    flag_entangled: bool


def validate_state(
    matrix: Any,
    d1: int,
    d2: int,
    label: str,
    *,
    param: float | None = None,
    tol: Tolerances | None = None,
) -> BipartiteState:
    """
    Wrap a density matrix after checking size, Hermiticity, unit trace and positivity.
    Every failure surfaces as StateValidationError.
    """
    tol = tol or DEFAULT_TOLERANCES
    try:
        m = as_matrix(matrix)
    except PmapError as exc:
        raise StateValidationError(f"{label}: {exc}") from exc
    if m.shape != (d1 * d2, d1 * d2):
        raise StateValidationError(f"{label}: expected {d1 * d2}x{d1 * d2}, got {m.shape}.")
    trace = complex(np.trace(m))
    if abs(trace - 1) > tol.eps_match:
        raise StateValidationError(f"{label}: trace {trace} is not 1.")
    try:
        verdict = is_psd(m, tol=tol)
    except PmapError as exc:
        raise StateValidationError(f"{label}: {exc}") from exc
    if not verdict.is_psd:
        raise StateValidationError(
            f"{label}: not PSD (min eigenvalue {verdict.min_eigenvalue:.3e})."
        )
    return BipartiteState(matrix=m, d1=d1, d2=d2, label=label, param=param)


def _require_unit_interval(b: float) -> None:
    if not 0 <= b <= 1:
        raise ParameterOutOfRange(f"b must lie in [0, 1] (got {b}).")


def _horodecki_rows(b: Any, half_root: Any, z: Any) -> list[list[Any]]:
    top = (1 + b) / 2
    return [
        [b, z, z, z, z, b, z, z],
        [z, b, z, z, z, z, b, z],
        [z, z, b, z, z, z, z, b],
        [z, z, z, b, z, z, z, z],
        [z, z, z, z, top, z, z, half_root],
        [b, z, z, z, z, b, z, z],
        [z, b, z, z, z, z, b, z],
        [z, z, b, z, half_root, z, z, top],
    ]


def horodecki_state(b: float, *, tol: Tolerances | None = None) -> BipartiteState:
    """The bound entangled 2x4 family rho_b, 0 <= b <= 1."""
    _require_unit_interval(b)
    b = float(b)
    rows = _horodecki_rows(b, math.sqrt(1 - b * b) / 2, 0.0)
    matrix = as_matrix(rows) / (1 + 7 * b)
    return validate_state(matrix, *STATE_DIMS, "horodecki", param=b, tol=tol)


def horodecki_matrix_exact(b: Any) -> sympy.Matrix:
    """rho_b in exact arithmetic; b may be an int, float or a string such as "1/2"."""
    exact_b = sympy.Rational(b)
    _require_unit_interval(float(exact_b))
    half_root = sympy.sqrt(1 - exact_b**2) / 2
    rows = _horodecki_rows(exact_b, half_root, sympy.Integer(0))
    return sympy.Matrix(rows) / (1 + 7 * exact_b)


def npt_matrix_exact() -> sympy.Matrix:
    matrix = sympy.zeros(8, 8)
    for i in (0, 5):
        for j in (0, 5):
            matrix[i, j] = sympy.Rational(1, 3)
    matrix[7, 7] = sympy.Rational(1, 3)
    return matrix


def npt_state(*, tol: Tolerances | None = None) -> BipartiteState:
    """(|v><v| + |111><111|) / 3 with v = |000> + |101>."""
    v = np.zeros(8, dtype=np.complex128)
    v[[0, 5]] = 1.0
    tail = np.zeros(8, dtype=np.complex128)
    tail[7] = 1.0
    matrix = (np.outer(v, v.conj()) + np.outer(tail, tail.conj())) / 3
    return validate_state(matrix, *STATE_DIMS, "npt", tol=tol)


def maximally_mixed(d1: int, d2: int) -> BipartiteState:
    size = d1 * d2
    return validate_state(np.eye(size) / size, d1, d2, "maximally_mixed")


def product_state(a: Any, b: Any, *, label: str = "product") -> BipartiteState:
    """|a><a| (x) |b><b| for (not necessarily normalised) vectors a and b."""
    a_vec = np.asarray(a, dtype=np.complex128)
    b_vec = np.asarray(b, dtype=np.complex128)
    a_vec = a_vec / np.linalg.norm(a_vec)
    b_vec = b_vec / np.linalg.norm(b_vec)
    joint = np.kron(a_vec, b_vec)
    return validate_state(np.outer(joint, joint.conj()), a_vec.size, b_vec.size, label)


def is_ppt(
    rho: BipartiteState, *, subsystem: Subsystem = "first", tol: Tolerances | None = None
) -> PptVerdict:
    transposed = partial_transpose(rho.matrix, rho.d1, rho.d2, subsystem)
    verdict = is_psd(transposed, tol=tol)
    return PptVerdict(verdict.is_psd, verdict.min_eigenvalue)


def realignment_value(
    rho: BipartiteState, *, tol: Tolerances | None = None
) -> RealignmentResult:
    """Trace norm of the realigned state; above 1 certifies entanglement, else inconclusive."""
    tol = tol or DEFAULT_TOLERANCES
    value = realign_trace_norm(rho.matrix, rho.d1, rho.d2)
    return RealignmentResult(value=value, flag_entangled=value > 1 + tol.eps_match)