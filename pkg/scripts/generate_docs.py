"""
Render docs/public/commands.md from the live argument parser plus utils/command_catalog.py.

  python -m scripts.generate_docs           # rewrite the reference
  python -m scripts.generate_docs --check   # exit 1 when the committed file is stale
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ppmap.cli import build_parser
from utils.command_catalog import EXIT_MEANINGS, CommandInfo, commands_by_category

DOC_PATH = Path("docs/public/commands.md")


def _subcommands(parser: argparse.ArgumentParser) -> dict[str, argparse.ArgumentParser]:
    for action in parser._actions:  # noqa: SLF001
        if isinstance(action, argparse._SubParsersAction):  # noqa: SLF001
            return dict(action.choices)
    return {}


def _flag_cell(action: argparse.Action) -> str:
    option = action.option_strings[0]
    return f"`{option}`" if action.nargs == 0 else f"`{option} {action.dest.upper()}`"


def _default_cell(action: argparse.Action) -> str:
    if action.required or action.default is None or action.default is False:
        return "-"
    return f"`{action.default}`"


def flag_table(sub: argparse.ArgumentParser) -> list[str]:
    rows = ["| Flag | Required | Default | Meaning |", "| --- | --- | --- | --- |"]
    for action in sub._actions:  # noqa: SLF001
        if not action.option_strings or isinstance(action, argparse._HelpAction):  # noqa: SLF001
            continue
        cells = [
            _flag_cell(action),
            "yes" if action.required else "no",
            _default_cell(action),
            action.help or "",
        ]
        rows.append("| " + " | ".join(cells) + " |")
    return rows


def _command_section(info: CommandInfo, sub: argparse.ArgumentParser) -> list[str]:
    lines = [f"### `ppmap {info.name}`", "", info.summary, ""]
    lines += flag_table(sub)
    lines += ["", "Exits: " + ", ".join(str(code) for code in info.exit_codes) + "."]
    if info.examples:
        lines += ["", "```sh", *info.examples, "```"]
    return lines


def render_markdown() -> str:
    subcommands = _subcommands(build_parser())
    lines = [
        "# ppmap command reference",
        "",
        "Generated by `python -m scripts.generate_docs`; edit the parser or the catalog instead.",
        "",
        "## Exit codes",
        "",
        "| Code | Meaning |",
        "| --- | --- |",
    ]
    lines += [f"| {code} | {meaning} |" for code, meaning in sorted(EXIT_MEANINGS.items())]
    for category, infos in commands_by_category().items():
        lines += ["", f"## {category}"]
        for info in infos:
            lines += ["", *_command_section(info, subcommands[info.name])]
    return "\n".join(lines) + "\n"


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description="Regenerate the command reference.")
    parser.add_argument("--check", action="store_true", help="Only report whether it is stale.")
    args = parser.parse_args(argv)
    content = render_markdown()
    current = DOC_PATH.read_text(encoding="utf-8") if DOC_PATH.exists() else ""
    if current == content:
        print(f"{DOC_PATH} is up to date.")
        return 0
    if args.check:
        print(f"{DOC_PATH} is stale; run python -m scripts.generate_docs.")
        return 1
    DOC_PATH.parent.mkdir(parents=True, exist_ok=True)
    DOC_PATH.write_text(content, encoding="utf-8")
    print(f"Updated {DOC_PATH}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
