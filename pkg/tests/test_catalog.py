from fractions import Fraction
from pathlib import Path

import pytest

from wlevels.catalog import AlgebraId, Catalog, Family, get_catalog, parse_algebra
from wlevels.errors import ExcludedAlgebra, InvalidParameter, ParseError
from wlevels.exactmath import PolyK


@pytest.mark.parametrize(
    "text, family, params",
    [
        ("sl(4|1)", Family.SL, (4, 1)),
        ("so(7)", Family.OSP, (7, 0)),
        ("sp(6)", Family.SPO, (6, 0)),
        ("psl(3|3)", Family.PSL, (3,)),
        ("D(2,1;-3/2)", Family.D21A, (Fraction(-3, 2),)),
        ("E8", Family.LIE, ("E", 8)),
    ],
)
def test_parse_algebra(text: str, family: Family, params: tuple) -> None:
    alg = parse_algebra(text)
    assert alg.family == family
    assert alg.params == params


def test_canonical_spelling_parses_back() -> None:
    for text in ("sl(4|1)", "so(9)", "spo(2|1)", "D(2,1;1/2)", "F(4):D212", "G(3):G2"):
        alg = parse_algebra(text)
        assert str(alg) == text
        assert parse_algebra(str(alg)) == alg


def test_theta_choice_is_kept() -> None:
    alg = parse_algebra("F(4):sl2")
    assert alg.family == Family.F4SUPER
    assert alg.theta_choice == "sl2"


@pytest.mark.parametrize("text", ["sl(4|", "foo(3)", "sl(4|1) extra", "G(3):E8", "so(4|2)"])
def test_parse_errors(text: str) -> None:
    with pytest.raises(ParseError):
        parse_algebra(text)


def test_excluded_algebras() -> None:
    with pytest.raises(ExcludedAlgebra):
        parse_algebra("sl(4|2)")
    with pytest.raises(ExcludedAlgebra):
        parse_algebra("sl(2)")
    with pytest.raises(ExcludedAlgebra):
        parse_algebra("sp(2)")


def test_invalid_parameters() -> None:
    with pytest.raises(InvalidParameter):
        parse_algebra("D(2,1;-1)")
    with pytest.raises(InvalidParameter):
        parse_algebra("osp(5|3)")
    with pytest.raises(InvalidParameter):
        AlgebraId(Family.SL, (3, 3))


def test_closed_forms() -> None:
    catalog = get_catalog()
    forms = catalog.closed_forms(parse_algebra("sl(4)"))
    assert forms.h_vee == 4
    assert forms.sdim == 15
    assert forms.p_of_k == PolyK.from_roots([-1, -2])

    forms = catalog.closed_forms(parse_algebra("spo(2|1)"))
    assert forms.h_vee == Fraction(3, 2)
    assert forms.sdim == 1
    assert forms.p_of_k == PolyK.from_roots([Fraction(-1, 2), Fraction(-5, 4)])

    forms = catalog.closed_forms(parse_algebra("D(2,1;2)"))
    assert forms.h_vee == 0
    assert forms.p_of_k == PolyK.from_roots([2, -3])

    forms = catalog.closed_forms(parse_algebra("E8"))
    assert forms.h_vee == 30
    assert forms.p_of_k == PolyK.from_roots([-6, -10])


def test_sweep_skips_excluded_members() -> None:
    sweep = [str(alg) for alg in get_catalog().sweep()]
    assert "sl(4)" in sweep
    assert "sl(9)" in sweep
    assert "sl(4|2)" not in sweep
    assert "sl(2)" not in sweep
    assert "D(2,1;-1/2)" in sweep
    assert "E8" in sweep
    assert "G(3):sl2" in sweep
    assert len(sweep) == len(set(sweep))


def test_missing_catalog_file_uses_defaults(tmp_path: Path, caplog) -> None:
    catalog = Catalog(path=str(tmp_path / "missing.yaml"))
    assert "Catalog file not found" in caplog.text
    assert catalog.closed_forms(parse_algebra("so(8)")).h_vee == 6
