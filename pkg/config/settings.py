from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterable

from utils.linalg import Tolerances

from . import constants


@dataclass(frozen=True)
class Settings:
    tolerances: Tolerances = field(default_factory=Tolerances)
    bisection_tol: float = constants.DEFAULT_BISECTION_TOL
    bisection_max_iter: int = constants.DEFAULT_BISECTION_MAX_ITER
    seesaw_restarts: int = constants.DEFAULT_SEESAW_RESTARTS
    seesaw_max_iters: int = constants.DEFAULT_SEESAW_MAX_ITERS
    seed: int = constants.DEFAULT_SEED
    audit_samples: int = constants.DEFAULT_AUDIT_SAMPLES
    max_dimension: int = constants.DEFAULT_MAX_DIMENSION


def _optional_float_default(name: str, default: float, invalid: list[str]) -> float:
    raw = os.getenv(name, "").strip()
    if not raw:
        return default
    try:
        return float(raw)
    except ValueError:
        invalid.append(name)
        return default


def _optional_int_default(name: str, default: int, invalid: list[str]) -> int:
    raw = os.getenv(name, "").strip()
    if not raw:
        return default
    try:
        return int(raw)
    except ValueError:
        invalid.append(name)
        return default


def _format_list(values: Iterable[str]) -> str:
    return ", ".join(sorted(values))


def load_settings() -> Settings:
    """
    Load and validate environment overrides.
    Every variable is optional; defaults reproduce the documented constants.
    Raises RuntimeError with a consolidated message when values are malformed or out of range.
    """
    invalid: list[str] = []
    out_of_range: list[str] = []

    eps_psd = _optional_float_default(constants.EPS_PSD_ENV, constants.DEFAULT_EPS_PSD, invalid)
    eps_eig = _optional_float_default(constants.EPS_EIG_ENV, constants.DEFAULT_EPS_EIG, invalid)
    eps_match = _optional_float_default(
        constants.EPS_MATCH_ENV, constants.DEFAULT_EPS_MATCH, invalid
    )
    bisection_tol = _optional_float_default(
        constants.BISECTION_TOL_ENV, constants.DEFAULT_BISECTION_TOL, invalid
    )
    bisection_max_iter = _optional_int_default(
        constants.BISECTION_MAX_ITER_ENV, constants.DEFAULT_BISECTION_MAX_ITER, invalid
    )
    seesaw_restarts = _optional_int_default(
        constants.SEESAW_RESTARTS_ENV, constants.DEFAULT_SEESAW_RESTARTS, invalid
    )
    seesaw_max_iters = _optional_int_default(
        constants.SEESAW_MAX_ITERS_ENV, constants.DEFAULT_SEESAW_MAX_ITERS, invalid
    )
    seed = _optional_int_default(constants.SEED_ENV, constants.DEFAULT_SEED, invalid)
    audit_samples = _optional_int_default(
        constants.AUDIT_SAMPLES_ENV, constants.DEFAULT_AUDIT_SAMPLES, invalid
    )
    max_dimension = _optional_int_default(
        constants.MAX_DIMENSION_ENV, constants.DEFAULT_MAX_DIMENSION, invalid
    )

    for name, value in (
        (constants.EPS_PSD_ENV, eps_psd),
        (constants.EPS_EIG_ENV, eps_eig),
        (constants.EPS_MATCH_ENV, eps_match),
        (constants.BISECTION_TOL_ENV, bisection_tol),
    ):
        if not value > 0:
            out_of_range.append(name)
    for name, count in (
        (constants.BISECTION_MAX_ITER_ENV, bisection_max_iter),
        (constants.SEESAW_RESTARTS_ENV, seesaw_restarts),
        (constants.SEESAW_MAX_ITERS_ENV, seesaw_max_iters),
        (constants.AUDIT_SAMPLES_ENV, audit_samples),
    ):
        if count < 1:
            out_of_range.append(name)
    negative = [constants.SEED_ENV] if seed < 0 else []
    too_small = [constants.MAX_DIMENSION_ENV] if max_dimension < 2 else []

    if invalid or out_of_range or negative or too_small:
        details = []
        if invalid:
            details.append(f"Invalid numeric config: {_format_list(invalid)}")
        if out_of_range:
            details.append(f"Config must be > 0: {_format_list(out_of_range)}")
        if negative:
            details.append(f"Config must be >= 0: {_format_list(negative)}")
        if too_small:
            details.append(f"Config must be >= 2: {_format_list(too_small)}")
        raise RuntimeError("; ".join(details))

    return Settings(
        tolerances=Tolerances(eps_psd=eps_psd, eps_eig=eps_eig, eps_match=eps_match),
        bisection_tol=bisection_tol,
        bisection_max_iter=bisection_max_iter,
        seesaw_restarts=seesaw_restarts,
        seesaw_max_iters=seesaw_max_iters,
        seed=seed,
        audit_samples=audit_samples,
        max_dimension=max_dimension,
    )


def summarize_settings(settings: Settings) -> dict[str, object]:
    """
    Produce a snapshot of configuration for startup logging and report headers.
    """
    return {
        "tolerances": {
            "eps_psd": settings.tolerances.eps_psd,
            "eps_eig": settings.tolerances.eps_eig,
            "eps_match": settings.tolerances.eps_match,
        },
        "bisection": {
            "tol": settings.bisection_tol,
            "max_iter": settings.bisection_max_iter,
        },
        "seesaw": {
            "restarts": settings.seesaw_restarts,
            "max_iters": settings.seesaw_max_iters,
        },
        "seed": settings.seed,
        "audit_samples": settings.audit_samples,
        "max_dimension": settings.max_dimension,
    }
