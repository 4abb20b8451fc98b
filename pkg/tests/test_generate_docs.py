from pathlib import Path

from ppmap import cli
from scripts.generate_docs import DOC_PATH, flag_table, main, render_markdown
from utils.command_catalog import COMMANDS, EXIT_MEANINGS

ROOT = Path(__file__).resolve().parent.parent


def _subparsers() -> dict:
    parser = cli.build_parser()
    action = next(action for action in parser._actions if action.dest == "command")  # noqa: SLF001
    return action.choices


def test_committed_reference_is_current() -> None:
    assert (ROOT / DOC_PATH).read_text(encoding="utf-8") == render_markdown()


def test_catalog_covers_every_subcommand() -> None:
    assert {info.name for info in COMMANDS} == set(_subparsers())


def test_exit_table_matches_cli_codes() -> None:
    codes = {cli.EXIT_OK, cli.EXIT_USAGE, cli.EXIT_INVALID_STATE, cli.EXIT_NUMERIC}
    assert set(EXIT_MEANINGS) == codes
    for info in COMMANDS:
        assert set(info.exit_codes) <= codes


def test_every_flag_is_documented() -> None:
    for name, sub in _subparsers().items():
        rows = flag_table(sub)[2:]
        assert rows, name
        assert all(not row.endswith("|  |") for row in rows), name


def test_flag_table_shows_defaults_and_switches() -> None:
    rows = flag_table(_subparsers()["reproduce"])
    assert "| `--grid GRID` | no | `21` | Points per parameter axis. |" in rows
    choi_rows = flag_table(_subparsers()["choi"])
    assert "| `--cp-check` | no | - | Print the CP verdict. |" in choi_rows


def test_check_mode_reports_stale_reference(tmp_path, monkeypatch, capsys) -> None:
    monkeypatch.chdir(tmp_path)
    assert main(["--check"]) == 1
    assert not DOC_PATH.exists()
    assert main([]) == 0
    assert DOC_PATH.read_text(encoding="utf-8") == render_markdown()
    assert main(["--check"]) == 0
    assert "up to date" in capsys.readouterr().out
