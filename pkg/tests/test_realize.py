from fractions import Fraction

import pytest

from wlevels.errors import UnsupportedN
from wlevels.realize import (
    bk_ope_table,
    charge_decomposition,
    check_vacuum_relation,
    verify_59,
    verify_lemma55,
    verify_prop53,
)


def test_sugawara_eigenvalue_n4() -> None:
    report = verify_prop53(4)
    assert report["eigenvalue"] == Fraction(8, 3)
    assert not report["degenerate"]


def test_n5_is_degenerate() -> None:
    assert verify_prop53(5)["degenerate"]
    with pytest.raises(UnsupportedN):
        bk_ope_table(5)


def test_small_n_is_unsupported() -> None:
    with pytest.raises(UnsupportedN):
        verify_prop53(3)
    with pytest.raises(UnsupportedN):
        bk_ope_table(3)


def test_table_n4() -> None:
    table = bk_ope_table(4)
    assert table.k == Fraction(3, 2)
    assert len([g for g in table.generators if g.parity == 1]) == 8
    assert table.imposed


def test_lattice_products_n4() -> None:
    assert verify_lemma55(4)["pairs_checked"] == 16
    assert check_vacuum_relation(4)["generators_checked"] == 8


def test_charges_n4() -> None:
    charges = charge_decomposition(4)["charges"]
    assert charges["G+1"] == 1
    assert charges["G-4"] == -1


@pytest.mark.slow
def test_homomorphism_n4() -> None:
    report = verify_59(4)
    assert report["level"] == Fraction(-5, 2)
    assert report["pairs_checked"] == 24 ** 2


@pytest.mark.slow
@pytest.mark.parametrize("n, eigenvalue", [(6, Fraction(16, 5)), (7, Fraction(10, 3))])
def test_sugawara_eigenvalue_larger_n(n: int, eigenvalue: Fraction) -> None:
    assert verify_prop53(n)["eigenvalue"] == eigenvalue
