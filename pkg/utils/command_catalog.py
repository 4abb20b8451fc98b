"""
Prose that the argument parser cannot carry: grouping, exit codes and worked invocations.
Flags and their help text come from ``ppmap.cli.build_parser`` when the reference is rendered.
"""
from __future__ import annotations

from dataclasses import dataclass

EXIT_MEANINGS: dict[int, str] = {
    0: "Success. A refuted claim or a non-CP verdict is reported as output.",
    2: "Bad flags, unusable input files, wrong dimensions or invalid configuration.",
    3: "A supplied state is not a valid density matrix.",
    4: "Internal numeric failure, for example an eigensolver residual above tolerance.",
}


@dataclass(frozen=True)
class CommandInfo:
    name: str
    category: str
    summary: str
    exit_codes: tuple[int, ...]
    examples: tuple[str, ...] = ()


COMMANDS: list[CommandInfo] = [
    CommandInfo(
        name="map-apply",
        category="Maps",
        summary="Apply Phi_{alpha,beta} to an n x n matrix and write the n^2 x n^2 output.",
        exit_codes=(0, 2, 4),
        examples=(
            "ppmap map-apply --alpha 1 --beta 2 --input ones.json --out out.json",
            "ppmap map-apply --alpha 1 --beta=-1/2 --n 3 --input a3.json",
        ),
    ),
    CommandInfo(
        name="threshold",
        category="Maps",
        summary=(
            "Bisect the smallest alpha with a PSD output at beta = -gamma and print it next to "
            "the printed A1 and A2 thresholds."
        ),
        exit_codes=(0, 2, 4),
        examples=("ppmap threshold --gamma 2", "ppmap threshold --gamma 1/2 --input a2.json"),
    ),
    CommandInfo(
        name="choi",
        category="Choi",
        summary=(
            "Write the 8x8 Choi matrix of the n = 2 map. The verdict of --cp-check carries its "
            "certificate: a negative principal minor and a vector with a negative quadratic form."
        ),
        exit_codes=(0, 2, 4),
        examples=(
            "ppmap choi --alpha 1/8 --beta=-1 --cp-check",
            "ppmap choi --alpha 1 --beta 0 --eigs",
        ),
    ),
    CommandInfo(
        name="detect",
        category="Witnesses",
        summary="Evaluate Tr(W rho) and write one CSV row with 17 significant digits.",
        exit_codes=(0, 2, 3, 4),
        examples=(
            "ppmap detect --witness builtin:0.75,-2 --state horodecki --b 0.5",
            "ppmap detect --witness builtin:1/8,-1 --state npt --out detect.csv",
        ),
    ),
    CommandInfo(
        name="reproduce",
        category="Audit",
        summary=(
            "Check every claim and write the JSON audit report. A refuted claim is a finding, "
            "not a failure. --summary adds the Markdown table."
        ),
        exit_codes=(0, 2, 4),
        examples=(
            "ppmap reproduce --out report.json --summary report.md",
            "ppmap reproduce --grid 41 --out report.json",
        ),
    ),
]


def commands_by_category() -> dict[str, list[CommandInfo]]:
    buckets: dict[str, list[CommandInfo]] = {}
    for cmd in COMMANDS:
        buckets.setdefault(cmd.category, []).append(cmd)
    return buckets
