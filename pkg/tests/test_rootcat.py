from dataclasses import replace
from fractions import Fraction

import pytest

from wlevels.catalog import get_catalog, parse_algebra
from wlevels.errors import GradingViolation
from wlevels.rootcat import (
    build_catalog_entry,
    canonical_d21a,
    dual_coxeter,
    halfspace_weights,
    minimal_grading,
    minimal_roots,
    superdimensions,
    weight_casimir,
)


@pytest.mark.parametrize(
    "spec, expected",
    [
        ("sl(4)", 4),
        ("so(8)", 6),
        ("sp(6)", 4),
        ("spo(2|1)", Fraction(3, 2)),
        ("D(2,1;2)", 0),
        ("E8", 30),
    ],
)
def test_dual_coxeter(spec: str, expected) -> None:
    assert dual_coxeter(build_catalog_entry(parse_algebra(spec))) == expected


def test_dual_coxeter_agrees_with_catalog_on_sweep_sample() -> None:
    catalog = get_catalog()
    for spec in ("sl(5|2)", "osp(7|2)", "spo(4|3)", "psl(3|3)"):
        alg = parse_algebra(spec)
        assert dual_coxeter(build_catalog_entry(alg)) == catalog.closed_forms(alg).h_vee


def test_theta_is_normalized() -> None:
    for spec in ("sl(4|1)", "spo(4|1)", "G(3):sl2", "F4"):
        rd = build_catalog_entry(parse_algebra(spec))
        assert rd.ip(rd.theta, rd.theta) == 2


def test_sl4_components() -> None:
    mg = minimal_grading(build_catalog_entry(parse_algebra("sl(4)")))
    assert [c.label for c in mg.components] == ["center", "A_1"]
    assert mg.components[0].is_center
    assert mg.component(1).h_vee == 2


def test_so8_has_three_sl2_components() -> None:
    mg = minimal_grading(build_catalog_entry(parse_algebra("so(8)")))
    assert [c.label for c in mg.components] == ["A_1", "A_1", "A_1"]
    assert mg.index_set == [1, 2, 3]


def test_spo21_has_empty_natural_part() -> None:
    mg = minimal_grading(build_catalog_entry(parse_algebra("spo(2|1)")))
    assert mg.components == []


def test_short_theta_is_rejected() -> None:
    rd = build_catalog_entry(parse_algebra("G2"))
    short = tuple(Fraction(x) for x in (1, -1, 0))
    with pytest.raises(GradingViolation):
        minimal_grading(replace(rd, theta=short))


def test_halfspace_weights() -> None:
    sl4 = minimal_grading(build_catalog_entry(parse_algebra("sl(4)")))
    weights = halfspace_weights(sl4)
    assert weights.multiplicity_tag == "U + U*"
    assert [len(c.weights) for c in weights.components] == [2, 2]

    so8 = minimal_grading(build_catalog_entry(parse_algebra("so(8)")))
    assert halfspace_weights(so8).multiplicity_tag == "irreducible"


def test_weight_casimir_of_fundamental_sl2() -> None:
    mg = minimal_grading(build_catalog_entry(parse_algebra("sl(4)")))
    top = halfspace_weights(mg).components[0]
    assert weight_casimir(mg, 1, top.restrictions[1]) == Fraction(3, 2)


def test_superdimensions() -> None:
    sdims = superdimensions(build_catalog_entry(parse_algebra("sl(4)")))
    assert sdims["sdim_g"] == 15
    assert sdims["sdim_g0"] == 5
    assert sdims["sdim_ghalf"] == 4
    assert sdims["components"] == {0: 1, 1: 3}

    sdims = superdimensions(build_catalog_entry(parse_algebra("spo(2|1)")))
    assert sdims["sdim_g"] == 1
    assert sdims["sdim_ghalf"] == -1


def test_minimal_roots() -> None:
    assert len(minimal_roots(build_catalog_entry(parse_algebra("sl(3)")))) == 6
    # only the long roots of G2
    assert len(minimal_roots(build_catalog_entry(parse_algebra("G2")))) == 6


def test_canonical_d21a() -> None:
    rep, orbit = canonical_d21a(Fraction(2))
    assert rep == 2
    assert orbit == frozenset(Fraction(x) for x in ("2", "1/2", "-3", "-3/2", "-1/3", "-2/3"))

    rep, orbit = canonical_d21a(Fraction(-2))
    assert rep == 1
    assert orbit == frozenset({Fraction(1), Fraction(-2), Fraction(-1, 2)})


@pytest.mark.parametrize("spec", ["psl(2|2)", "psl(3|3)"])
def test_halfspace_weights_of_psl(spec: str) -> None:
    mg = minimal_grading(build_catalog_entry(parse_algebra(spec)))
    components = halfspace_weights(mg).components
    assert components
    assert all(0 not in c.restrictions for c in components)
