from fractions import Fraction

import pytest

from wlevels.catalog import parse_algebra
from wlevels.errors import InvalidParameter, NotCollapsing
from wlevels.exactmath import PolyK
from wlevels.levels import (
    ExclusionReason,
    check_closed_forms,
    check_corollary48,
    check_halfspace_casimir,
    check_level_shifts,
    check_prop41,
    check_remark33,
    check_uniform_h0,
    check_uniform_pk,
    classify,
    collapse_chain,
    collapse_target,
    in_admissible_set,
    trivial_levels,
    virasoro_central_charge,
)


def F(text: str) -> Fraction:
    return Fraction(text)


def test_classify_sl4() -> None:
    cls = classify(parse_algebra("sl(4)"))
    assert cls.h_vee == 4
    assert cls.collapsing == {F("-1"), F("-2")}
    assert cls.conformal_noncollapsing == {F("-8/3"), F("-3/2")}
    assert cls.conformal == {F("-1"), F("-2"), F("-8/3"), F("-3/2")}
    assert [c.label for c in cls.components] == ["center", "A_1"]


def test_classify_d21a_sugawara_pole() -> None:
    cls = classify(parse_algebra("D(2,1;-1/2)"))
    assert cls.conformal_noncollapsing == frozenset()
    assert (F("1/2"), ExclusionReason.SUGAWARA_POLE) in cls.excluded


@pytest.mark.parametrize(
    "spec, expected",
    [
        ("spo(2|1)", {F("-1/2"), F("-5/4")}),
        ("so(8)", {F("-2")}),
        ("sl(3)", {F("-3/2")}),
    ],
)
def test_trivial_levels(spec: str, expected) -> None:
    assert trivial_levels(parse_algebra(spec)) == expected


def test_critical_level_is_not_admissible() -> None:
    sl4 = parse_algebra("sl(4)")
    assert not in_admissible_set(sl4, -4)
    assert in_admissible_set(sl4, -1)


def test_collapse_target_so14() -> None:
    target = collapse_target(parse_algebra("so(14)"), -2)
    assert [(f.label, f.own_level) for f in target.factors] == [("A_1", 3)]


def test_collapse_target_rejects_noncollapsing_level() -> None:
    with pytest.raises(NotCollapsing):
        collapse_target(parse_algebra("sl(4)"), F("-3/2"))


def test_chain_sl8() -> None:
    chain = collapse_chain(parse_algebra("sl(8)"), -4)
    assert [(s.algebra, s.level) for s in chain.steps] == [
        ("sl(8)", -4),
        ("sl(6)", -3),
        ("sl(4)", -2),
        ("sl(2)", -1),
    ]
    assert chain.endpoint == "virasoro"
    assert chain.central_charge == 1


def test_chain_sp8() -> None:
    chain = collapse_chain(parse_algebra("sp(8)"), -3)
    assert [(s.algebra, s.level) for s in chain.steps] == [
        ("sp(8)", -3),
        ("sp(6)", F("-5/2")),
        ("sp(4)", -2),
        ("sl(2)", F("-3/2")),
    ]
    assert chain.central_charge == -2


@pytest.mark.parametrize(
    "spec, level, endpoint, charge",
    [
        ("so(6)", -1, "heisenberg", 1),
        ("so(14)", -2, "virasoro", F("-91/5")),
        ("so(8)", -2, "trivial", 0),
    ],
)
def test_chain_endpoints(spec: str, level, endpoint: str, charge) -> None:
    chain = collapse_chain(parse_algebra(spec), level)
    assert chain.endpoint == endpoint
    assert chain.central_charge == charge


def test_chain_from_noncollapsing_level() -> None:
    with pytest.raises(NotCollapsing):
        collapse_chain(parse_algebra("sl(4)"), F("-3/2"))


def test_virasoro_central_charge() -> None:
    assert virasoro_central_charge(-1) == 1
    assert virasoro_central_charge(F("-3/2")) == -2


def test_corollary_sl4() -> None:
    report = check_corollary48(parse_algebra("sl(4)"))
    assert report["solutions"] == [F("-8/3"), F("-2"), F("-3/2"), F("-1")]
    assert report["special_levels"] == [F("-2"), F("-1")]


def test_collapsing_levels_are_conformal() -> None:
    assert check_prop41(parse_algebra("sl(4)")) == [F("-2"), F("-1")]


def test_level_shifts_divide_p() -> None:
    assert check_level_shifts(parse_algebra("sl(4)")) == {0: True, 1: True}


def test_halfspace_casimir_sl4() -> None:
    assert check_halfspace_casimir(parse_algebra("sl(4)")) == [F("5/2"), F("5/2")]


def test_uniform_formulas() -> None:
    so8 = parse_algebra("so(8)")
    assert check_uniform_pk(so8) == PolyK.from_roots([-2, -2])
    assert check_uniform_pk(parse_algebra("sl(3)")) == PolyK.from_roots([-1, F("-3/2")])
    assert check_uniform_h0(so8) == {"shape": "deligne", "h0": 2}
    assert check_closed_forms(so8)["shape"] == "deligne"
    assert check_closed_forms(parse_algebra("sl(5)"))["shape"] == "sl"
    assert check_closed_forms(parse_algebra("spo(4|1)"))["shape"] == "spo"


def test_remark_so14() -> None:
    report = check_remark33(parse_algebra("so(14)"))
    assert report == {"n": 7, "level": 3, "central_charge": F("9/5")}


def test_remark_only_applies_to_even_orthogonal() -> None:
    with pytest.raises(InvalidParameter):
        check_remark33(parse_algebra("so(9)"))


@pytest.mark.parametrize("spec", ["psl(2|2)", "psl(3|3)"])
def test_classify_psl(spec: str) -> None:
    cls = classify(parse_algebra(spec))
    assert cls.h_vee == 0
    assert cls.collapsing == {F("-1")}
    assert cls.trivial == {F("-1")}
    assert cls.conformal_noncollapsing == {F("1/2")}


def test_classify_f4_theta_in_d21a() -> None:
    cls = classify(parse_algebra("F(4):D212"))
    assert cls.conformal_noncollapsing == frozenset()
    assert (F("-1"), ExclusionReason.COLLAPSING) in cls.excluded


def test_so5_and_sp4_classify_alike() -> None:
    so5, sp4 = classify(parse_algebra("so(5)")), classify(parse_algebra("sp(4)"))
    assert so5.p_of_k == sp4.p_of_k
    assert so5.trivial == sp4.trivial == {F("-1/2")}
    assert so5.conformal_noncollapsing == sp4.conformal_noncollapsing
