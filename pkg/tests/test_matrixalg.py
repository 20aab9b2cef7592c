from fractions import Fraction

import pytest

from wlevels.catalog import parse_algebra
from wlevels.errors import UnsupportedRealization
from wlevels.matrixalg import (
    casimir_eigenvalue,
    check_antisymmetry,
    check_dual_coxeter,
    check_invariance,
    check_jacobi,
    dump_structure_constants,
    kappa0_report,
    minimal_grading,
    realize,
)


def test_dimensions(sl3, sl21, spo21, d21a_two) -> None:
    assert (sl3.dim, sl3.dim_odd) == (8, 0)
    assert (sl21.dim, sl21.dim_odd) == (8, 4)
    assert (spo21.dim, spo21.dim_odd) == (5, 2)
    assert (d21a_two.dim, d21a_two.dim_odd) == (17, 8)


def test_jacobi_exhaustive(sl3, sl21) -> None:
    report = check_jacobi(sl3)
    assert report["mode"] == "exhaustive"
    assert report["triples"] == 8 ** 3
    check_jacobi(sl21)


def test_jacobi_sampled_is_seeded(sl4) -> None:
    report = check_jacobi(sl4, exhaustive_dim=10, samples=200, seed=7)
    assert report["mode"] == "sampled"
    assert report["triples"] == 200


def test_antisymmetry_and_invariance(sl21, d21a_two) -> None:
    assert check_antisymmetry(sl21)["pairs"] == 64
    check_invariance(sl21)
    check_invariance(d21a_two)


def test_theta_bracket(sl4) -> None:
    assert sl4.bracket(sl4.e_theta, sl4.e_minus_theta) == sl4.x
    assert sl4.ip(sl4.x, sl4.x) == Fraction(1, 2)


def test_grading_pieces(sl4) -> None:
    pieces = minimal_grading(sl4).pieces
    assert len(pieces[Fraction(1)]) == 1
    assert len(pieces[Fraction(1, 2)]) == 4
    assert len(pieces[Fraction(0)]) == 5


@pytest.mark.parametrize(
    "fixture, expected",
    [("sl3", 3), ("sl21", 1), ("spo21", Fraction(3, 2)), ("d21a_two", 0)],
)
def test_dual_coxeter_from_casimir(fixture: str, expected, request) -> None:
    assert check_dual_coxeter(request.getfixturevalue(fixture)) == expected


def test_casimir_eigenvalues(sl3, sl4) -> None:
    assert casimir_eigenvalue(sl3, "g-on-g").eigenvalue == 6
    assert casimir_eigenvalue(sl4, "g0-on-ghalf").eigenvalue == 3
    assert casimir_eigenvalue(sl4, "gi-on-gi", component=1).eigenvalue == 4


def test_kappa0_matches_component_dual_coxeter(sl4) -> None:
    rows = kappa0_report(sl4)
    assert [row["component"] for row in rows] == [0, 1]
    assert all(row["matches"] and row["kappa_g_matches"] for row in rows)


def test_dump_structure_constants(sl3) -> None:
    lines = dump_structure_constants(sl3)
    assert lines
    assert all(len(line.split()) == 4 for line in lines)
    assert any(line.startswith("E1,2 E2,1 ") for line in lines)


def test_exceptional_algebras_are_not_realized() -> None:
    with pytest.raises(UnsupportedRealization):
        realize(parse_algebra("E8"))
    with pytest.raises(UnsupportedRealization):
        realize(parse_algebra("F(4):sl2"))
