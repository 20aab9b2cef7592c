from fractions import Fraction

import pytest

from wlevels.exactmath import PolyK
from wlevels.matrixalg import minimal_grading
from wlevels.wstruct import (
    assemble_lambda0,
    canonical_lambda0,
    context,
    check_form_properties,
    check_jj_levels,
    extract_pk,
    ope_GG_full,
    ope_GG_simplified,
    render_bracket,
    verify_lemma31,
)


@pytest.mark.parametrize(
    "fixture, roots",
    [
        ("sl3", [-1, Fraction(-3, 2)]),
        ("sl4", [-1, -2]),
        ("sl21", [-1, Fraction(-1, 2)]),
        ("spo21", [Fraction(-1, 2), Fraction(-5, 4)]),
        ("d21a_two", [2, -3]),
    ],
)
def test_extract_pk(fixture: str, roots, request) -> None:
    result = extract_pk(request.getfixturevalue(fixture))
    assert result.p == PolyK.from_roots(roots)
    assert result.per_pair_witnesses
    assert all(candidate == result.p for _, _, candidate in result.per_pair_witnesses)


def test_jj_levels_sl4(sl4) -> None:
    assert check_jj_levels(sl4) == {0: "k + 2", 1: "k + 1"}


def test_lemma_checks_every_pair(sl21, sl4) -> None:
    report = verify_lemma31(sl21)
    assert report["p_of_k"] == "k^2 + 3/2*k + 1/2"
    assert report["pairs_checked"] == 4

    report = verify_lemma31(sl4)
    assert report["pairs_checked"] == 16
    assert report["k_i"] == {0: "k + 2", 1: "k + 1"}


def test_simplified_bracket_lambda2(sl3) -> None:
    p = PolyK.from_roots([-1, Fraction(-3, 2)])
    half = minimal_grading(sl3).pieces[Fraction(-1, 2)]
    u, v = {half[0]: Fraction(1)}, {half[1]: Fraction(1)}
    full = ope_GG_full(sl3, u, v)
    simple = ope_GG_simplified(sl3, u, v, p)
    assert full.lambda2_scalar == simple.lambda2_scalar
    assert full.lambda2_scalar == p * (2 * full.pairing)


def test_form_properties(sl3, spo21) -> None:
    report = check_form_properties(sl3, PolyK.from_roots([-1, Fraction(-3, 2)]))
    assert report["pairs"] == 4
    check_form_properties(spo21)


def test_render_bracket_keys(sl3) -> None:
    half = minimal_grading(sl3).pieces[Fraction(-1, 2)]
    rendered = render_bracket(sl3, ope_GG_full(sl3, {half[0]: Fraction(1)}, {half[1]: Fraction(1)}))
    assert set(rendered) == {"u", "v", "pairing", "lambda2", "lambda1", "omega", "quadratic", "derivative"}


@pytest.mark.parametrize("fixture", ["sl3", "sl4", "sl21", "spo21"])
def test_lambda0_agrees_over_sheared_bases(fixture: str, request) -> None:
    A = request.getfixturevalue(fixture)
    half = minimal_grading(A).pieces[Fraction(-1, 2)]
    for i in half:
        for j in half:
            u, v = {i: Fraction(1)}, {j: Fraction(1)}
            assembled = canonical_lambda0(A, assemble_lambda0(A, u, v))
            assert assembled == canonical_lambda0(A, ope_GG_full(A, u, v))


def test_sheared_bases_differ_from_standard(sl4) -> None:
    ctx = context(sl4)
    nat, _, half, _ = ctx.sheared_duals()
    assert len(nat) == len(ctx.grading.nat_basis)
    assert nat != ctx.grading.nat_basis
    assert half != ctx.duals.half
