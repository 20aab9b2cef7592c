from fractions import Fraction

import pytest

from wlevels import suites
from wlevels.catalog import parse_algebra
from wlevels.errors import InvalidParameter, NotScalar
from wlevels.goldens import GoldenStatus
from wlevels.levels import ExclusionReason
from wlevels.suites import (
    classification_record,
    expected_conformal,
    expected_exclusions,
    expected_trivial,
    record_name,
    resolve_instances,
    run_checks,
    run_props45to47,
    run_prop34,
    run_suite,
    sl_corollary_levels,
    suite_report,
)


def F(text: str) -> Fraction:
    return Fraction(text)


def test_expected_trivial() -> None:
    assert expected_trivial(parse_algebra("so(8)")) == {F("-2")}
    assert expected_trivial(parse_algebra("spo(2|1)")) == {F("-1/2"), F("-5/4")}
    assert expected_trivial(parse_algebra("sl(5)")) == frozenset()


@pytest.mark.parametrize("spec", ["sl(2|1)", "so(5)", "sp(4)", "D(2,1;-1/2)"])
def test_expected_trivial_on_spo_isomorphs(spec: str) -> None:
    assert expected_trivial(parse_algebra(spec)) == {F("-1/2")}


def test_expected_conformal() -> None:
    assert expected_conformal(parse_algebra("sl(4)")) == {F("-8/3"), F("-3/2")}
    assert expected_conformal(parse_algebra("sl(3)")) == frozenset()
    assert expected_conformal(parse_algebra("so(5)")) == frozenset()
    assert expected_conformal(parse_algebra("D(2,1;-1/2)")) == frozenset()
    assert expected_conformal(parse_algebra("E8")) == {F("-29/2")}
    assert expected_conformal(parse_algebra("F(4):D212")) == frozenset()
    assert expected_conformal(parse_algebra("psl(3|3)")) == {F("1/2")}


def test_expected_exclusions() -> None:
    assert expected_exclusions(parse_algebra("sl(3)")) == {F("-1"): ExclusionReason.COLLAPSING}
    assert expected_exclusions(parse_algebra("D(2,1;-1/2)")) == {
        F("0"): ExclusionReason.CRITICAL,
        F("1/2"): ExclusionReason.SUGAWARA_POLE,
    }
    assert expected_exclusions(parse_algebra("F(4):D212")) == {F("-1"): ExclusionReason.COLLAPSING}


@pytest.mark.parametrize(
    "spec",
    [
        "sl(3)", "sl(4)", "sl(4|1)", "sl(2|1)", "so(8)", "so(5)", "sp(4)", "spo(2|1)",
        "psl(2|2)", "psl(3|3)", "D(2,1;-1/2)", "E8",
        "F(4):sl2", "F(4):D212", "G(3):sl2", "G(3):G2",
    ],
)
def test_classification_matches_stated_rules(spec: str, run_config) -> None:
    alg = parse_algebra(spec)
    run_prop34(alg, run_config)
    run_props45to47(alg, run_config)


def test_sl_corollary_levels() -> None:
    assert sl_corollary_levels(4) == {F("-1"), F("-8/3"), F("-3/2"), F("-2")}


def test_resolve_instances() -> None:
    assert [str(a) for a in resolve_instances(["sl(3)", "so(7)"])] == ["sl(3)", "so(7)"]
    assert len(resolve_instances("sweep")) > 50


def test_run_checks_keeps_order_and_records_failures(run_config) -> None:
    def check(alg, config):
        if str(alg) == "so(7)":
            raise NotScalar("so(7): not scalar")
        return {"seen": str(alg)}

    instances = resolve_instances(["sl(3)", "so(7)", "sl(4)"])
    for jobs in (1, 3):
        config = run_config.model_copy(update={"jobs": jobs})
        rows = run_checks(check, instances, config)
        assert [row["algebra"] for row in rows] == ["sl(3)", "so(7)", "sl(4)"]
        assert [row["status"] for row in rows] == ["pass", "fail", "pass"]
        assert rows[1]["detail"] == "so(7): not scalar"


def test_unknown_suite(run_config) -> None:
    with pytest.raises(InvalidParameter):
        suite_report("table9", run_config)


def test_run_suite_with_goldens(run_config, monkeypatch) -> None:
    monkeypatch.setattr(suites, "_load_suites", lambda: {"table4": {"instances": ["sl(3)", "spo(2|1)"]}})

    result = run_suite("table4", run_config)
    assert result.passed
    assert result.golden.status == GoldenStatus.NEW
    assert result.report.summary["checked"] == 2
    assert [row["p_of_k"] for row in result.report.rows] == ["k^2 + 5/2*k + 3/2", "k^2 + 7/4*k + 5/8"]

    regenerate = run_config.model_copy(update={"regenerate_goldens": True})
    assert run_suite("table4", regenerate).golden.status == GoldenStatus.WRITTEN
    assert run_suite("table4", run_config).golden.status == GoldenStatus.MATCH
    assert (run_config.golden_dir / "table4" / "table4.yaml").exists()


def test_record_name() -> None:
    assert record_name(parse_algebra("D(2,1;-1/2)")) == "D_2_1_m1over2"
    assert record_name(parse_algebra("sl(4|1)")) == "sl_4_1"
    assert record_name(parse_algebra("F(4):D212")) == "F_4_D212"


def test_classification_record_psl() -> None:
    record = classification_record(parse_algebra("psl(2|2)"))
    assert record["algebra"] == "psl(2|2)"
    assert record["trivial"] == {F("-1")}
    assert record["conformal_noncollapsing"] == {F("1/2")}


def test_classification_goldens_per_algebra(run_config, monkeypatch) -> None:
    monkeypatch.setattr(
        suites, "_load_suites", lambda: {"classification": {"instances": ["sl(3)", "psl(2|2)"]}}
    )

    result = run_suite("classification", run_config)
    assert result.passed
    assert result.golden.status == GoldenStatus.NEW
    assert [row["algebra"] for row in result.report.rows] == ["sl(3)", "psl(2|2)"]

    regenerate = run_config.model_copy(update={"regenerate_goldens": True})
    assert run_suite("classification", regenerate).golden.status == GoldenStatus.WRITTEN
    directory = run_config.golden_dir / "classification"
    assert sorted(p.name for p in directory.iterdir()) == ["psl_2_2.yaml", "sl_3.yaml"]
    assert run_suite("classification", run_config).golden.status == GoldenStatus.MATCH


@pytest.mark.slow
@pytest.mark.parametrize("suite", ["tables123", "prop34", "props45to47", "cor48"])
def test_sweep_suites_pass(suite: str, run_config) -> None:
    assert suite_report(suite, run_config).summary["failed"] == 0
