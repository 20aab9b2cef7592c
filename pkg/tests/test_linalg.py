from fractions import Fraction

import pytest

from wlevels.errors import DegenerateForm
from wlevels.linalg import (
    SpanCoordinates,
    independent_subset,
    inverse,
    nullspace,
    rank,
    rref,
    vadd,
    vscale,
    vsum,
)


def test_rref_and_rank() -> None:
    rows = [[1, 2, 3], [2, 4, 6], [0, 1, 1]]
    reduced, pivots = rref(rows, 3)
    assert pivots == (0, 1)
    assert reduced[0] == [1, 0, 1]
    assert reduced[1] == [0, 1, 1]
    assert rank(rows, 3) == 2
    assert rank([], 3) == 0


def test_nullspace_vectors_are_annihilated() -> None:
    rows = [[1, 2, 3], [0, 1, 1]]
    basis = nullspace(rows, 3)
    assert len(basis) == 1
    for v in basis:
        for row in rows:
            assert sum(Fraction(a) * b for a, b in zip(row, v)) == 0


def test_inverse() -> None:
    assert inverse([[2, 0], [0, 4]]) == [[Fraction(1, 2), 0], [0, Fraction(1, 4)]]
    with pytest.raises(DegenerateForm):
        inverse([[1, 2], [2, 4]])


def test_independent_subset_keeps_earliest() -> None:
    assert independent_subset([[1, 0], [2, 0], [0, 1]], 2) == [0, 2]


def test_sparse_vector_helpers() -> None:
    a = {"x": Fraction(1), "y": Fraction(2)}
    b = {"y": Fraction(2)}
    assert vadd(a, b, -1) == {"x": Fraction(1)}
    assert vscale(a, 0) == {}
    assert vsum([(a, Fraction(1)), (b, Fraction(-1))]) == {"x": Fraction(1)}


def test_span_coordinates() -> None:
    span = SpanCoordinates([{"a": Fraction(1), "b": Fraction(1)}, {"b": Fraction(1)}])
    assert span.coordinates({"a": Fraction(2), "b": Fraction(5)}) == {0: Fraction(2), 1: Fraction(3)}
    with pytest.raises(DegenerateForm):
        span.coordinates({"c": Fraction(1)})


def test_span_coordinates_rejects_dependent_basis() -> None:
    with pytest.raises(DegenerateForm):
        SpanCoordinates([{"a": Fraction(1)}, {"a": Fraction(2)}])
