from fractions import Fraction

import pytest

from wlevels.errors import IrrationalSolutions, ParseError, ZeroDivisor, ZeroPolynomial
from wlevels.exactmath import (
    ALL_K,
    PolyK,
    RatFunK,
    format_scalar,
    parse_scalar,
    poly_divides,
    rational_roots,
    ratfun_equal_solutions,
)


def test_polyk_drops_trailing_zeros() -> None:
    assert PolyK([1, 2, 0, 0]).coeffs == (Fraction(1), Fraction(2))
    assert PolyK([0, 0]).is_zero()
    assert PolyK().degree == -1


def test_polyk_from_roots_and_evaluation() -> None:
    p = PolyK.from_roots([-1, Fraction(-3, 2)])
    assert p == PolyK([Fraction(3, 2), Fraction(5, 2), 1])
    assert p.is_monic()
    assert p(-1) == 0
    assert p(Fraction(-3, 2)) == 0
    assert p(0) == Fraction(3, 2)


def test_polyk_arithmetic() -> None:
    a = PolyK.linear(1)
    b = PolyK.linear(-2)
    assert a * b == PolyK([-2, -1, 1])
    assert (a * b).exquo(b) == a
    quotient, remainder = PolyK([1, 0, 1]).divmod(a)
    assert quotient == PolyK([-1, 1])
    assert remainder == PolyK([2])
    assert a - a == PolyK()
    assert PolyK([2, 4]).monic() == PolyK([Fraction(1, 2), 1])


def test_polyk_str() -> None:
    assert str(PolyK([2, 3, 1])) == "k^2 + 3*k + 2"
    assert str(PolyK([Fraction(-1, 2), 1])) == "k - 1/2"
    assert str(PolyK()) == "0"


def test_monic_of_zero_raises() -> None:
    with pytest.raises(ZeroPolynomial):
        PolyK().monic()


def test_rational_roots_split_and_non_split() -> None:
    assert rational_roots(PolyK.from_roots([-1, Fraction(-3, 2)])) == (
        frozenset({Fraction(-1), Fraction(-3, 2)}),
        True,
    )
    assert rational_roots(PolyK([-2, 0, 1])) == (frozenset(), False)
    roots, splits = rational_roots(PolyK.linear(-1) * PolyK([1, 0, 1]))
    assert roots == frozenset({Fraction(1)})
    assert not splits


def test_rational_roots_of_zero_raises() -> None:
    with pytest.raises(ZeroPolynomial):
        rational_roots(PolyK())


def test_poly_divides() -> None:
    p = PolyK.from_roots([-1, 2])
    assert poly_divides(PolyK.linear(1), p)
    assert not poly_divides(PolyK.linear(3), p)
    with pytest.raises(ZeroDivisor):
        poly_divides(PolyK(), p)


def test_ratfun_reduces_to_lowest_terms() -> None:
    f = RatFunK(PolyK.from_roots([1, 2]), PolyK.from_roots([1]) * 3)
    assert f == RatFunK(PolyK([Fraction(-2, 3), Fraction(1, 3)]))
    assert f.is_polynomial()
    assert f.den == PolyK([1])


def test_ratfun_evaluation_at_pole_is_none() -> None:
    f = RatFunK(PolyK([0, 1]), PolyK.linear(1))
    assert f(-1) is None
    assert f(1) == Fraction(1, 2)
    assert f.poles() == frozenset({Fraction(-1)})


def test_ratfun_zero_denominator() -> None:
    with pytest.raises(ZeroDivisor):
        RatFunK(PolyK([1]), PolyK())


def test_equal_solutions() -> None:
    lhs = RatFunK(PolyK([0, 1]), PolyK.linear(1))
    assert ratfun_equal_solutions(lhs, RatFunK(Fraction(1, 2))) == frozenset({Fraction(1)})
    assert ratfun_equal_solutions(lhs, lhs) is ALL_K
    assert ratfun_equal_solutions(lhs, RatFunK(Fraction(1, 2)), excluded_poles=[1]) == frozenset()


def test_equal_solutions_drops_poles() -> None:
    # k^2 = 1 away from the shared pole k = -1
    lhs = RatFunK(PolyK([0, 0, 1]), PolyK.linear(1))
    rhs = RatFunK(PolyK([1]), PolyK.linear(1))
    assert ratfun_equal_solutions(lhs, rhs) == frozenset({Fraction(1)})


def test_equal_solutions_irrational() -> None:
    with pytest.raises(IrrationalSolutions):
        ratfun_equal_solutions(RatFunK(PolyK([0, 0, 1])), RatFunK(2))


def test_scalar_formatting_and_parsing() -> None:
    assert format_scalar(Fraction(-3, 2)) == "-3/2"
    assert format_scalar(Fraction(4, 2)) == "2"
    assert parse_scalar("−5/2") == Fraction(-5, 2)
    assert parse_scalar(" 3 ") == Fraction(3)
    with pytest.raises(ParseError):
        parse_scalar("x")
