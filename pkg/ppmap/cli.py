"""
Command-line front end.

Exit codes: 0 success, 2 bad flags or unusable input, 3 a state that fails validation,
4 an internal numeric failure. A refuted claim or a non-CP verdict is output, not an error.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Sequence, TextIO

import numpy as np

from config import Settings, load_settings
from config.constants import DEFAULT_PARAM_GRID
from ppmap.resources import printed_input
from services.audit_service import render_summary, report_to_json, run_reproduction
from services.choi_service import choi_closed_form, is_completely_positive
from services.error_reporting_service import add_breadcrumb, capture_exception
from services.map_service import (
    MapParams,
    apply_map,
    paper_threshold_a1,
    paper_threshold_a2,
    threshold_bracket,
)
from services.state_service import (
    STATE_DIMS,
    BipartiteState,
    horodecki_state,
    npt_state,
    validate_state,
)
from services.witness_service import (
    WitnessCandidate,
    detect,
    witness_from_matrix,
    witness_from_params,
)
from utils.errors import (
    CommandUsageError,
    PmapError,
    StateValidationError,
    format_error_message,
    log_command_error,
    new_error_id,
)
from utils.formatting import (
    format_cp_message,
    format_detection_csv,
    format_detection_row,
    format_real,
    format_threshold_report,
)
from utils.linalg import herm_eigs
from utils.logging import log_command_event
from utils.matrix_io import read_matrix_file, write_matrix_file
from utils.metrics import now_ms, record_command, record_exit
from utils.validation import (
    normalize_state_kind,
    parse_builtin_witness,
    parse_int_in_range,
    parse_real,
    parse_unit_interval,
)

LOGGER = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INVALID_STATE = 3
EXIT_NUMERIC = 4

MAX_GRID = 401

Handler = Callable[[argparse.Namespace, Settings], int]


def _real(value: str) -> float:
    parsed = parse_real(value)
    if parsed is None:
        raise argparse.ArgumentTypeError(f"not a finite real number: {value!r}")
    return parsed


def _positive_real(value: str) -> float:
    parsed = _real(value)
    if not parsed > 0:
        raise argparse.ArgumentTypeError(f"must be > 0: {value!r}")
    return parsed


def _unit_real(value: str) -> float:
    parsed = parse_unit_interval(value)
    if parsed is None:
        raise argparse.ArgumentTypeError(f"must be a real number in [0, 1]: {value!r}")
    return parsed


def _dimension(value: str) -> int:
    parsed = parse_int_in_range(value, min_value=2)
    if parsed is None:
        raise argparse.ArgumentTypeError(f"n must be an integer >= 2: {value!r}")
    return parsed


def _grid(value: str) -> int:
    parsed = parse_int_in_range(value, min_value=2, max_value=MAX_GRID)
    if parsed is None:
        raise argparse.ArgumentTypeError(f"grid must be an integer in [2, {MAX_GRID}]")
    return parsed


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise CommandUsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ppmap", description="Positive-map and Choi-witness audit toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    map_apply = sub.add_parser("map-apply", help="Apply Phi_{alpha,beta} to a matrix file.")
    map_apply.add_argument("--alpha", type=_real, required=True, help="Weight of (A + A^T) x I.")
    map_apply.add_argument(
        "--beta", type=_real, required=True, help="Weight of the flipped Bell projector."
    )
    map_apply.add_argument(
        "--n", type=_dimension, default=2, help="Input dimension, up to PPMAP_MAX_DIMENSION."
    )
    map_apply.add_argument("--input", required=True, help="MatrixFile JSON with an n x n matrix.")
    map_apply.add_argument("--out", default=None, help="Output file; stdout when omitted.")
    map_apply.set_defaults(handler=cmd_map_apply)

    choi = sub.add_parser("choi", help="Choi matrix of Phi_{alpha,beta} for n = 2.")
    choi.add_argument("--alpha", type=_real, required=True, help="Decimal or fraction.")
    choi.add_argument("--beta", type=_real, required=True, help="Decimal or fraction.")
    choi.add_argument("--out", default=None, help="Write the Choi matrix as a MatrixFile.")
    choi.add_argument("--eigs", action="store_true", help="Print the spectrum.")
    choi.add_argument("--cp-check", action="store_true", help="Print the CP verdict.")
    choi.set_defaults(handler=cmd_choi)

    detect_cmd = sub.add_parser("detect", help="Evaluate a witness on a state.")
    detect_cmd.add_argument("--witness", required=True, help="MatrixFile path or builtin:a,b.")
    detect_cmd.add_argument("--state", required=True, help="horodecki, npt or a MatrixFile path.")
    detect_cmd.add_argument(
        "--b", type=_unit_real, default=None, help="Mixing parameter in [0, 1]; horodecki only."
    )
    detect_cmd.add_argument("--out", default=None, help="CSV output; stdout when omitted.")
    detect_cmd.set_defaults(handler=cmd_detect)

    reproduce = sub.add_parser("reproduce", help="Run the claim-by-claim audit.")
    reproduce.add_argument("--out", default=None, help="JSON report; stdout when omitted.")
    reproduce.add_argument(
        "--grid", type=_grid, default=DEFAULT_PARAM_GRID, help="Points per parameter axis."
    )
    reproduce.add_argument("--summary", default=None, help="Also write a Markdown summary.")
    reproduce.set_defaults(handler=cmd_reproduce)

    threshold = sub.add_parser("threshold", help="Smallest alpha with a PSD output.")
    threshold.add_argument(
        "--gamma", type=_positive_real, required=True, help="Positive; the map uses beta = -gamma."
    )
    threshold.add_argument("--input", default=None, help="2x2 MatrixFile; defaults to A1.")
    threshold.set_defaults(handler=cmd_threshold)
    return parser


def _write_text(path: str | None, text: str, stdout: TextIO) -> None:
    if path is None or path == "-":
        stdout.write(text)
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise CommandUsageError(f"Cannot write {path}: {exc}") from exc


def cmd_map_apply(args: argparse.Namespace, settings: Settings) -> int:
    if args.n > settings.max_dimension:
        raise CommandUsageError(
            f"--n {args.n} exceeds the configured limit of {settings.max_dimension}."
        )
    matrix = read_matrix_file(args.input)
    output = apply_map(MapParams(args.n, args.alpha, args.beta), matrix)
    write_matrix_file(args.out, output)
    return EXIT_OK


def cmd_choi(args: argparse.Namespace, settings: Settings) -> int:
    tol = settings.tolerances
    choi = choi_closed_form(args.alpha, args.beta)
    reports: list[str] = []
    if args.eigs:
        eigenvalues, _ = herm_eigs(choi.matrix, tol=tol)
        reports.append("\n".join(["eigenvalues:", *(format_real(v) for v in eigenvalues)]))
    if args.cp_check:
        verdict = is_completely_positive(MapParams(2, args.alpha, args.beta), tol=tol)
        certificate = verdict.certificate
        minor = certificate.minor if certificate else None
        reports.append(
            format_cp_message(
                completely_positive=verdict.completely_positive,
                min_eigenvalue=verdict.min_eigenvalue,
                zero_map=args.alpha == 0 and args.beta == 0,
                minor_indices=minor.one_based if minor else None,
                minor_determinant=minor.determinant if minor else None,
                quadratic_value=certificate.quadratic_value if certificate else None,
            )
        )
    if args.out is not None or not reports:
        write_matrix_file(args.out, choi.matrix)
    for report in reports:
        sys.stdout.write(report + "\n")
    return EXIT_OK


def _load_witness(spec: str, settings: Settings) -> WitnessCandidate:
    builtin = parse_builtin_witness(spec)
    if builtin is not None:
        return witness_from_params(MapParams(2, *builtin))
    if spec.strip().lower().startswith("builtin:"):
        raise CommandUsageError(f"Malformed builtin witness {spec!r}; expected builtin:a,b.")
    return witness_from_matrix(read_matrix_file(spec), label=spec, tol=settings.tolerances)


def _load_state(args: argparse.Namespace, settings: Settings) -> BipartiteState:
    tol = settings.tolerances
    kind = normalize_state_kind(args.state)
    if kind == "horodecki":
        if args.b is None:
            raise CommandUsageError("--b is required for the horodecki state.")
        return horodecki_state(args.b, tol=tol)
    if args.b is not None:
        raise CommandUsageError("--b applies to the horodecki state only.")
    if kind == "npt":
        return npt_state(tol=tol)
    return validate_state(read_matrix_file(args.state), *STATE_DIMS, args.state, tol=tol)


def cmd_detect(args: argparse.Namespace, settings: Settings) -> int:
    witness = _load_witness(args.witness, settings)
    rho = _load_state(args, settings)
    report = detect(witness, rho, tol=settings.tolerances)
    row = format_detection_row(
        state=report.state_label,
        param=report.param,
        expectation=report.expectation,
        detected=report.detected,
    )
    _write_text(args.out, format_detection_csv([row]), sys.stdout)
    return EXIT_OK


def cmd_reproduce(args: argparse.Namespace, settings: Settings) -> int:
    report = run_reproduction(settings, grid=args.grid)
    _write_text(args.out, report_to_json(report), sys.stdout)
    if args.summary is not None:
        _write_text(args.summary, render_summary(report), sys.stdout)
    counts = report.counts()
    LOGGER.info(
        "Audit complete: %s", ", ".join(f"{key}={value}" for key, value in counts.items())
    )
    return EXIT_OK


def cmd_threshold(args: argparse.Namespace, settings: Settings) -> int:
    if args.input is None:
        matrix = np.array(printed_input("A1").evalf().tolist(), dtype=np.complex128)
    else:
        matrix = read_matrix_file(args.input)
    bracket = threshold_bracket(
        matrix,
        args.gamma,
        abs_tol=settings.bisection_tol,
        max_iter=settings.bisection_max_iter,
        tol=settings.tolerances,
    )
    text = format_threshold_report(
        gamma=args.gamma,
        threshold=bracket.hi,
        below=bracket.lo,
        paper_values={
            "printed A1 threshold": paper_threshold_a1(args.gamma),
            "printed A2 threshold": paper_threshold_a2(args.gamma),
        },
    )
    sys.stdout.write(text + "\n")
    return EXIT_OK


def _fail(
    exc: BaseException, *, command: str, code: int, stderr: TextIO, started: float
) -> int:
    error_id = new_error_id()
    error_type = type(exc).__name__
    log_command_error(exc, command=command, source="cli", error_id=error_id)
    record_exit(command, code=code, error_type=error_type)
    add_breadcrumb("cli", f"{command} exited {code}", error_type=error_type, error_id=error_id)
    if code == EXIT_NUMERIC:
        capture_exception(
            exc, command=command, tags={"exit_code": code, "error_type": error_type}
        )
    stderr.write(format_error_message(f"error: {exc}", error_id) + "\n")
    duration = now_ms() - started
    record_command(command, status="error", duration_ms=duration)
    log_command_event(command, status="error", exit_code=code, error_id=error_id)
    return code


def run(argv: Sequence[str] | None = None, *, settings: Settings | None = None) -> int:
    started = now_ms()
    stderr = sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except CommandUsageError as exc:
        stderr.write(f"{exc}\n")
        record_exit("ppmap", code=EXIT_USAGE, error_type=type(exc).__name__)
        return EXIT_USAGE
    except SystemExit as exc:
        return int(exc.code or 0)
    command = args.command
    handler: Handler = args.handler
    try:
        active = settings or load_settings()
        code = handler(args, active)
    except StateValidationError as exc:
        return _fail(exc, command=command, code=EXIT_INVALID_STATE, stderr=stderr, started=started)
    except np.linalg.LinAlgError as exc:
        return _fail(exc, command=command, code=EXIT_NUMERIC, stderr=stderr, started=started)
    except (PmapError, RuntimeError, ValueError) as exc:
        return _fail(exc, command=command, code=EXIT_USAGE, stderr=stderr, started=started)
    record_command(command, status="ok", duration_ms=now_ms() - started)
    log_command_event(command, status="ok", exit_code=code)
    return code
