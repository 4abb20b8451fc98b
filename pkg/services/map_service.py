"""
The map family Phi_{alpha,beta}(A) = alpha((A + A^T) (x) I_n) + beta (|psi+><psi+|)^Gamma.

Printed positivity formulas (blocks, contraction entries, characteristic coefficients, the
aggregate condition and the two thresholds) are implemented verbatim as audit subjects. The
verdict that an output is positive semidefinite always comes from ``utils.linalg.is_psd``.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any

import numpy as np
import sympy

from utils.errors import (
    BadDimension,
    BlocksNotPsd,
    DimensionMismatch,
    NoUpperBracket,
    NotPsd,
    SingularBlock,
)
from utils.linalg import (
    DEFAULT_TOLERANCES,
    ComplexMatrix,
    Tolerances,
    as_matrix,
    is_psd,
    kron,
    operator_norm,
    partial_transpose,
    psd_sqrt_inv,
)

LOGGER = logging.getLogger(__name__)

DEFAULT_BISECTION_TOL = 1e-9
DEFAULT_BISECTION_MAX_ITER = 200
MAX_BRACKET_DOUBLINGS = 64


@dataclass(frozen=True)
class MapParams:
    n: int
    alpha: float
    beta: float

    def __post_init__(self) -> None:
        if self.n < 2:
            raise BadDimension(f"n must be >= 2 (got {self.n}).")


@dataclass(frozen=True)
class Input2x2:
    a: float
    b: float
    c: float
    d: float

    def __post_init__(self) -> None:
        if self.a < 0 or self.d < 0:
            raise ValueError("Input2x2 requires a >= 0 and d >= 0.")

    def as_matrix(self) -> ComplexMatrix:
        return as_matrix([[self.a, self.b], [self.c, self.d]])


@dataclass(frozen=True)
class BlockSplit:
    x: ComplexMatrix
    y: ComplexMatrix
    z: ComplexMatrix
    v_numeric: ComplexMatrix | None
    absent_reason: str | None = None

    def reassemble(self) -> ComplexMatrix:
        return np.block([[self.x, self.y], [self.y.conj().T, self.z]])


@dataclass(frozen=True)
class CharCoeffs:
    k1_paper: float
    k2_paper: float
    lambda1_paper: float | None
    lambda2_paper: float | None
    gram_trace: float | None
    gram_det: float | None


class ConditionOutcome(str, Enum):
    HOLDS = "HOLDS"
    FAILS = "FAILS"
    INAPPLICABLE = "INAPPLICABLE"

    @classmethod
    def of(cls, value: bool) -> "ConditionOutcome":
        return cls.HOLDS if value else cls.FAILS


@dataclass(frozen=True)
class PositivityConditions:
    x_block: ConditionOutcome
    z_block: ConditionOutcome
    aggregate: ConditionOutcome
    contraction_norm: ConditionOutcome
    char_inequality: ConditionOutcome
    paper_verdict: ConditionOutcome
    ground_truth_psd: bool
    min_eigenvalue: float

    @property
    def paper_agrees(self) -> bool | None:
        if self.paper_verdict is ConditionOutcome.INAPPLICABLE:
            return None
        return (self.paper_verdict is ConditionOutcome.HOLDS) == self.ground_truth_psd


def max_entangled_projector(n: int) -> ComplexMatrix:
    """|psi+><psi+| with psi+ = n^{-1/2} sum_i |ii>; entries are exactly 1/n."""
    if n < 2:
        raise BadDimension(f"n must be >= 2 (got {n}).")
    projector = np.zeros((n * n, n * n), dtype=np.complex128)
    diagonal = [i * n + i for i in range(n)]
    projector[np.ix_(diagonal, diagonal)] = 1.0 / n
    return projector


def apply_map(params: MapParams, a: Any) -> ComplexMatrix:
    n = params.n
    matrix = as_matrix(a)
    if matrix.shape != (n, n):
        raise DimensionMismatch(f"Input must be {n}x{n}, got {matrix.shape}.")
    symmetrized = kron(matrix + matrix.T, np.eye(n))
    flipped = partial_transpose(max_entangled_projector(n), n, n, "second")
    return params.alpha * symmetrized + params.beta * flipped


def _closed_form_rows(alpha: Any, beta: Any, a: Any, b: Any, c: Any, d: Any) -> list[list[Any]]:
    off = alpha * (b + c)
    half = beta / 2
    z = 0 * alpha
    return [
        [2 * a * alpha + half, z, off, z],
        [z, 2 * a * alpha, half, off],
        [off, half, 2 * d * alpha, z],
        [z, off, z, 2 * d * alpha + half],
    ]


def closed_form_2x2(params: MapParams, inp: Input2x2) -> ComplexMatrix:
    if params.n != 2:
        raise BadDimension("The closed form exists for n = 2 only.")
    return as_matrix(
        _closed_form_rows(params.alpha, params.beta, inp.a, inp.b, inp.c, inp.d)
    )


def closed_form_exact(alpha: Any, beta: Any, a: sympy.Matrix) -> sympy.Matrix:
    """Exact 4x4 output for a 2x2 sympy input; alpha and beta accept strings such as "3/4"."""
    if a.shape != (2, 2):
        raise DimensionMismatch(f"Expected a 2x2 input, got {a.shape}.")
    rows = _closed_form_rows(
        sympy.Rational(alpha), sympy.Rational(beta), a[0, 0], a[0, 1], a[1, 0], a[1, 1]
    )
    return sympy.Matrix(rows)


def block_split(out4: Any, *, tol: Tolerances | None = None) -> BlockSplit:
    tol = tol or DEFAULT_TOLERANCES
    matrix = as_matrix(out4)
    if matrix.shape != (4, 4):
        raise DimensionMismatch(f"Expected a 4x4 map output, got {matrix.shape}.")
    x, y, z = matrix[:2, :2].copy(), matrix[:2, 2:].copy(), matrix[2:, 2:].copy()
    for name, block in (("X", x), ("Z", z)):
        verdict = is_psd(block, tol=tol)
        if not verdict.is_psd:
            raise BlocksNotPsd(
                f"Block {name} is not PSD (min eigenvalue {verdict.min_eigenvalue:.3e})."
            )
    x_roots = psd_sqrt_inv(x, tol=tol)
    z_roots = psd_sqrt_inv(z, tol=tol)
    if x_roots.singular or z_roots.singular:
        singular = "X" if x_roots.singular else "Z"
        return BlockSplit(x, y, z, None, absent_reason=f"block {singular} is singular")
    return BlockSplit(x, y, z, x_roots.inv_sqrt @ y @ z_roots.inv_sqrt)


def _require_contraction_domain(inp: Input2x2, params: MapParams, *, both: bool) -> None:
    alpha, beta = params.alpha, params.beta
    if inp.a <= 0 or inp.d <= 0 or alpha <= 0:
        raise SingularBlock("Printed formulas need a, d, alpha > 0.")
    if 4 * inp.a * alpha + beta <= 0:
        raise SingularBlock("Printed formulas need 4*a*alpha + beta > 0.")
    if both and 4 * inp.d * alpha + beta <= 0:
        raise SingularBlock("Printed formulas need 4*d*alpha + beta > 0.")


def paper_contraction_entries(inp: Input2x2, params: MapParams) -> ComplexMatrix:
    _require_contraction_domain(inp, params, both=True)
    a, d = inp.a, inp.d
    alpha, beta = params.alpha, params.beta
    s = inp.b + inp.c
    return as_matrix(
        [
            [alpha * s / math.sqrt(d * alpha * (4 * a * alpha + beta)), 0],
            [
                beta / (4 * alpha * math.sqrt(a * d)),
                alpha * s / math.sqrt(a * alpha * (4 * d * alpha + beta)),
            ],
        ]
    )


def paper_char_coeffs(
    inp: Input2x2, params: MapParams, *, tol: Tolerances | None = None
) -> CharCoeffs:
    _require_contraction_domain(inp, params, both=False)
    a, d = inp.a, inp.d
    alpha, beta = params.alpha, params.beta
    s2 = (inp.b + inp.c) ** 2
    k1 = (
        alpha * s2 / ((4 * a * alpha + beta) * d)
        + beta / (4 * a * alpha)
        + beta**2 / (16 * a * d * alpha**2)
        + d / a
    )
    k2 = s2 * (beta + 4 * d * alpha) / (a * d * (4 * a * alpha + beta))
    discriminant = k1 * k1 - k2
    lambda1 = lambda2 = None
    if discriminant >= 0:
        root = math.sqrt(discriminant)
        lambda1, lambda2 = (k1 + root) / 2, (k1 - root) / 2

    gram_trace = gram_det = None
    try:
        split = block_split(closed_form_2x2(params, inp), tol=tol)
    except BlocksNotPsd:
        split = None
    if split is not None and split.v_numeric is not None:
        gram = split.v_numeric.conj().T @ split.v_numeric
        gram_trace = float(np.real(np.trace(gram)))
        gram_det = float(np.real(np.linalg.det(gram)))
    return CharCoeffs(k1, k2, lambda1, lambda2, gram_trace, gram_det)


def paper_positivity_conditions(
    inp: Input2x2, params: MapParams, *, tol: Tolerances | None = None
) -> PositivityConditions:
    tol = tol or DEFAULT_TOLERANCES
    a, d = inp.a, inp.d
    alpha, beta = params.alpha, params.beta

    x_block = ConditionOutcome.of(2 * a * alpha >= 0 and 4 * a * alpha + beta >= 0)
    z_block = ConditionOutcome.of(2 * d * alpha >= 0 and 4 * d * alpha + beta >= 0)
    aggregate = ConditionOutcome.of(2 * alpha * (a + d) + beta >= 0 and alpha >= 0)

    try:
        paper_v = paper_contraction_entries(inp, params)
        contraction = ConditionOutcome.of(operator_norm(paper_v) <= 1 + tol.eps_psd)
    except SingularBlock:
        contraction = ConditionOutcome.INAPPLICABLE

    try:
        coeffs = paper_char_coeffs(inp, params, tol=tol)
        discriminant = coeffs.k1_paper**2 - coeffs.k2_paper
        if discriminant < 0:
            char_inequality = ConditionOutcome.INAPPLICABLE
        else:
            lhs = 4 * (1 + math.sqrt(discriminant) - coeffs.k2_paper)
            char_inequality = ConditionOutcome.of(lhs >= 1)
    except SingularBlock:
        char_inequality = ConditionOutcome.INAPPLICABLE

    if aggregate is ConditionOutcome.FAILS or char_inequality is ConditionOutcome.FAILS:
        paper_verdict = ConditionOutcome.FAILS
    elif char_inequality is ConditionOutcome.INAPPLICABLE:
        paper_verdict = ConditionOutcome.INAPPLICABLE
    else:
        paper_verdict = ConditionOutcome.HOLDS

    truth = is_psd(closed_form_2x2(params, inp), tol=tol)
    return PositivityConditions(
        x_block=x_block,
        z_block=z_block,
        aggregate=aggregate,
        contraction_norm=contraction,
        char_inequality=char_inequality,
        paper_verdict=paper_verdict,
        ground_truth_psd=truth.is_psd,
        min_eigenvalue=truth.min_eigenvalue,
    )


def paper_threshold_a1(gamma: float) -> float:
    return 9 * gamma / (2 * math.sqrt(146))


def paper_threshold_a2(gamma: float) -> float:
    return 9 * gamma / (90 - 2 * math.sqrt(27))


def _output_is_psd(a: Any, alpha: float, gamma: float, tol: Tolerances) -> bool:
    return is_psd(apply_map(MapParams(2, alpha, -gamma), a), tol=tol).is_psd


@dataclass(frozen=True)
class ThresholdBracket:
    """``lo`` gives a non-PSD output (or equals ``hi`` when alpha = 0 already works)."""

    lo: float
    hi: float
    iterations: int


def threshold_bracket(
    a: Any,
    gamma: float,
    *,
    abs_tol: float = DEFAULT_BISECTION_TOL,
    max_iter: int = DEFAULT_BISECTION_MAX_ITER,
    tol: Tolerances | None = None,
) -> ThresholdBracket:
    """
    Bisect for the smallest alpha making Phi_{alpha,-gamma}(A) PSD.

    Requires A + A^T PSD, which makes positivity monotone in alpha. The upper end of the
    bracket starts at max(1, gamma) and doubles until the output is PSD.
    """
    tol = tol or DEFAULT_TOLERANCES
    matrix = as_matrix(a)
    if matrix.shape != (2, 2):
        raise DimensionMismatch(f"Expected a 2x2 input, got {matrix.shape}.")
    if not gamma > 0:
        raise ValueError("gamma must be > 0.")
    if not is_psd(matrix + matrix.T, tol=tol).is_psd:
        raise NotPsd("A + A^T must be PSD for the threshold search.")

    lo, hi = 0.0, max(1.0, gamma)
    if _output_is_psd(matrix, lo, gamma, tol):
        return ThresholdBracket(lo, lo, 0)
    doublings = 0
    while not _output_is_psd(matrix, hi, gamma, tol):
        lo = hi
        hi *= 2
        doublings += 1
        if doublings > MAX_BRACKET_DOUBLINGS:
            raise NoUpperBracket(f"No PSD output found for alpha up to {hi:.3e}.")

    iterations = 0
    while hi - lo > abs_tol and iterations < max_iter:
        mid = (lo + hi) / 2
        if _output_is_psd(matrix, mid, gamma, tol):
            hi = mid
        else:
            lo = mid
        iterations += 1
        LOGGER.debug("Threshold bracket [%s, %s] after %s steps.", lo, hi, iterations)
    LOGGER.debug("Threshold for gamma=%s found alpha*=%s (%s steps).", gamma, hi, iterations)
    return ThresholdBracket(lo, hi, iterations)


def min_alpha_threshold(
    a: Any,
    gamma: float,
    *,
    abs_tol: float = DEFAULT_BISECTION_TOL,
    max_iter: int = DEFAULT_BISECTION_MAX_ITER,
    tol: Tolerances | None = None,
) -> float:
    """Smallest alpha (to within ``abs_tol``) for which Phi_{alpha,-gamma}(A) is PSD."""
    return threshold_bracket(a, gamma, abs_tol=abs_tol, max_iter=max_iter, tol=tol).hi
