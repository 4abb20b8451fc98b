from __future__ import annotations

import json
from functools import lru_cache
from pathlib import Path
from typing import Any

import sympy
from jinja2 import Environment, FileSystemLoader, StrictUndefined

_PACKAGE_DIR = Path(__file__).resolve().parent
_TEMPLATES_DIR = _PACKAGE_DIR / "templates"
_DATA_DIR = _PACKAGE_DIR / "data"

_ENV: Environment | None = None


def env() -> Environment:
    global _ENV
    if _ENV is None:
        _ENV = Environment(
            loader=FileSystemLoader(str(_TEMPLATES_DIR)),
            autoescape=False,
            undefined=StrictUndefined,
            keep_trailing_newline=True,
            trim_blocks=True,
            lstrip_blocks=True,
        )
    return _ENV


def render(template_name: str, /, **context: Any) -> str:
    template = env().get_template(template_name)
    return template.render(**context)


@lru_cache(maxsize=1)
def printed_matrices() -> dict[str, Any]:
    """The published matrices as exact rational strings."""
    text = (_DATA_DIR / "printed_matrices.json").read_text(encoding="utf-8")
    return json.loads(text)


def exact_matrix(rows: list[list[str]]) -> sympy.Matrix:
    return sympy.Matrix([[sympy.Rational(entry) for entry in row] for row in rows])


def printed_entry(key: str) -> dict[str, Any]:
    return printed_matrices()[key]


def printed_input(name: str) -> sympy.Matrix:
    return exact_matrix(printed_matrices()["inputs"][name])
