from pathlib import Path

import pytest
import yaml

import cli
from cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, main
from wlevels import suites


def test_no_command_prints_help(capsys) -> None:
    assert main([]) == EXIT_USAGE
    assert "classify" in capsys.readouterr().out


def test_classify(capsys) -> None:
    assert main(["classify", "sl(4)"]) == EXIT_OK
    data = yaml.safe_load(capsys.readouterr().out)
    row = data["rows"][0]
    assert row["algebra"] == "sl(4)"
    assert row["collapsing"] == ["-2", "-1"]
    assert row["conformal_noncollapsing"] == ["-8/3", "-3/2"]


def test_classify_excluded_algebra(capsys) -> None:
    assert main(["classify", "sl(4|2)"]) == EXIT_USAGE
    assert "sl(n+2|n)" in capsys.readouterr().err


def test_classify_parse_error(capsys) -> None:
    assert main(["classify", "sl(4"]) == EXIT_USAGE


def test_bad_format_is_rejected() -> None:
    with pytest.raises(SystemExit):
        main(["classify", "sl(4)", "--format", "pdf"])


def test_chain_with_fractional_level(capsys) -> None:
    assert main(["chain", "sp(4)", "-2"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "W_k(sl(2)) at k = -3/2" in out
    assert "Endpoint: virasoro (c = -2)" in out


def test_chain_from_noncollapsing_level(capsys) -> None:
    assert main(["chain", "sl(4)", "-3/2"]) == EXIT_FAILED
    assert "not a collapsing level" in capsys.readouterr().err


def test_realize_n5_is_unsupported(capsys) -> None:
    assert main(["realize", "5"]) == EXIT_USAGE


def test_dump_to_file(tmp_path: Path, capsys) -> None:
    out = tmp_path / "sl3.txt"
    assert main(["dump", "sl(3)", "--out", str(out)]) == EXIT_OK
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines
    assert f"{len(lines)} structure constants" in capsys.readouterr().out


def test_verify_with_golden_dir(tmp_path: Path, capsys, monkeypatch) -> None:
    monkeypatch.setattr(suites, "_load_suites", lambda: {"prop34": {"instances": ["so(8)", "spo(2|1)"]}})
    args = ["verify", "prop34", "--golden-dir", str(tmp_path)]

    assert main(args) == EXIT_OK
    assert "✓ prop34: 2/2 passed (golden: new)" in capsys.readouterr().err

    assert main(args + ["--regenerate-goldens"]) == EXIT_OK
    assert (tmp_path / "prop34" / "prop34.yaml").exists()
    capsys.readouterr()

    assert main(args + ["--format", "markdown"]) == EXIT_OK
    captured = capsys.readouterr()
    assert captured.out.startswith("# verify prop34")
    assert "golden: match" in captured.err


def test_verify_reports_golden_mismatch(tmp_path: Path, capsys, monkeypatch) -> None:
    args = ["verify", "prop34", "--golden-dir", str(tmp_path)]
    monkeypatch.setattr(suites, "_load_suites", lambda: {"prop34": {"instances": ["so(8)"]}})
    main(args + ["--regenerate-goldens"])
    monkeypatch.setattr(suites, "_load_suites", lambda: {"prop34": {"instances": ["sl(3)"]}})
    capsys.readouterr()

    assert main(args) == EXIT_FAILED
    err = capsys.readouterr().err
    assert "--- golden" in err
    assert "golden: mismatch" in err


def test_dotenv_is_loaded_by_the_package_only() -> None:
    assert "load_dotenv" not in vars(cli)


def test_sources_use_section_rules() -> None:
    root = Path(__file__).resolve().parents[1]
    for path in [root / "cli.py", *sorted((root / "wlevels").glob("*.py"))]:
        banners = [line for line in path.read_text(encoding="utf-8").splitlines() if line.startswith("#####")]
        assert banners == [], path.name
