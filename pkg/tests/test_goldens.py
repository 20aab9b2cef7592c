from pathlib import Path

import pytest

from wlevels import __version__
from wlevels.goldens import (
    GoldenResult,
    GoldenStatus,
    check_golden,
    combine_results,
    compute_fingerprint,
    golden_body,
    golden_path,
    parse_golden,
    render_golden,
)

BODY = "title: table4\nrows:\n- algebra: sl(4)\n  p_of_k: k^2 + 3*k + 2\n"


def test_fingerprint_ignores_whitespace() -> None:
    assert compute_fingerprint("a:  1\nb: 2\n") == compute_fingerprint("a: 1 b: 2")
    assert compute_fingerprint("a: 1") != compute_fingerprint("a: 2")


def test_body_drops_version() -> None:
    body = golden_body({"title": "x", "version": __version__, "rows": []})
    assert "version" not in body
    assert body.startswith("title: x")


def test_render_and_parse() -> None:
    header, body = parse_golden(render_golden(BODY))
    assert header["version"] == __version__
    assert header["xxh64"] == compute_fingerprint(BODY)
    assert body == BODY


def test_golden_path(tmp_path: Path) -> None:
    assert golden_path("realize", "n4", tmp_path) == tmp_path / "realize" / "n4.yaml"


def test_golden_lifecycle(tmp_path: Path) -> None:
    result = check_golden("table4", "table4", BODY, tmp_path)
    assert result.status == GoldenStatus.NEW
    assert not result.path.exists()

    result = check_golden("table4", "table4", BODY, tmp_path, regenerate=True)
    assert result.status == GoldenStatus.WRITTEN
    assert result.path.exists()

    assert check_golden("table4", "table4", BODY, tmp_path).status == GoldenStatus.MATCH

    changed = BODY.replace("3*k", "4*k")
    result = check_golden("table4", "table4", changed, tmp_path)
    assert result.failed
    assert "--- golden" in result.diff
    assert "+  p_of_k: k^2 + 4*k + 2" in result.diff


def test_edited_golden_warns(tmp_path: Path, caplog) -> None:
    check_golden("lemma31", "lemma31", BODY, tmp_path, regenerate=True)
    path = golden_path("lemma31", "lemma31", tmp_path)
    path.write_text(path.read_text(encoding="utf-8") + "# trailing\n", encoding="utf-8")
    check_golden("lemma31", "lemma31", BODY, tmp_path)
    assert "fingerprint mismatch" in caplog.text


@pytest.mark.parametrize(
    "statuses, expected",
    [
        ([GoldenStatus.MATCH, GoldenStatus.MISMATCH, GoldenStatus.NEW], GoldenStatus.MISMATCH),
        ([GoldenStatus.MATCH, GoldenStatus.NEW], GoldenStatus.NEW),
        ([GoldenStatus.WRITTEN, GoldenStatus.WRITTEN], GoldenStatus.WRITTEN),
        ([GoldenStatus.MATCH, GoldenStatus.MATCH], GoldenStatus.MATCH),
        ([], GoldenStatus.NEW),
    ],
)
def test_combine_results(statuses, expected, tmp_path: Path) -> None:
    results = [GoldenResult(tmp_path / f"{i}.yaml", status, "") for i, status in enumerate(statuses)]
    assert combine_results(results, tmp_path).status == expected
