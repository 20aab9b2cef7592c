"""
Exact Linear Algebra
Row reduction, nullspaces, inverses and coordinates over QQ.

Dense work is handed to sympy's DomainMatrix over QQ; everything that crosses
the module boundary is a plain list of Fractions or a sparse dict.
"""
import logging
from fractions import Fraction
from typing import Dict, Hashable, Iterable, List, Sequence, Tuple

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .errors import DegenerateForm
from .exactmath import to_fraction

logger = logging.getLogger(__name__)

Vec = Dict[Hashable, Fraction]


def _qq(value):
    value = to_fraction(value)
    return QQ(value.numerator, value.denominator)


def _domain_matrix(rows: Sequence[Sequence], ncols: int) -> DomainMatrix:
    data = [[_qq(x) for x in row] for row in rows]
    return DomainMatrix(data, (len(data), ncols), QQ)


def _to_rows(dm: DomainMatrix) -> List[List[Fraction]]:
    return [[to_fraction(x) for x in row] for row in dm.to_Matrix().tolist()]


def rref(rows: Sequence[Sequence], ncols: int) -> Tuple[List[List[Fraction]], Tuple[int, ...]]:
    """
    Reduced row echelon form.

    Returns:
        Tuple of (reduced rows, pivot column indices)
    """
    if not rows:
        return [], ()
    reduced, pivots = _domain_matrix(rows, ncols).rref()
    return _to_rows(reduced), tuple(pivots)


def rank(rows: Sequence[Sequence], ncols: int) -> int:
    if not rows:
        return 0
    return len(rref(rows, ncols)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> List[List[Fraction]]:
    """Basis of {v : rows·v = 0}, one vector per free column."""
    reduced, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -reduced[i][f]
        basis.append(v)
    return basis


def inverse(rows: Sequence[Sequence]) -> List[List[Fraction]]:
    n = len(rows)
    dm = _domain_matrix(rows, n)
    if dm.rank() < n:
        raise DegenerateForm(f"singular {n}x{n} matrix")
    return _to_rows(dm.inv())


def independent_subset(vectors: Sequence[Sequence], ncols: int) -> List[int]:
    """Indices of a maximal linearly independent subset, earliest first."""
    if not vectors:
        return []
    # pivots of the transpose pick out independent columns
    columns = [[vectors[j][i] for j in range(len(vectors))] for i in range(ncols)]
    _, pivots = rref(columns, len(vectors))
    return list(pivots)


# =============================================================================
# SPARSE VECTORS
# =============================================================================


def vadd(a: Vec, b: Vec, scale=1) -> Vec:
    out = dict(a)
    for key, value in b.items():
        v = out.get(key, 0) + scale * value
        if v:
            out[key] = v
        else:
            out.pop(key, None)
    return out


def vscale(a: Vec, scale) -> Vec:
    if not scale:
        return {}
    return {key: scale * value for key, value in a.items()}


def vsum(terms: Iterable[Tuple[Vec, Fraction]]) -> Vec:
    out: Vec = {}
    for vec, scale in terms:
        if scale:
            out = vadd(out, vec, scale)
    return out


class SpanCoordinates:
    """
    Coordinates with respect to a fixed list of independent sparse vectors.

    A set of ambient keys on which the basis restricts to an invertible
    square matrix is chosen once; solving then only touches the target's
    support on those keys.
    """

    def __init__(self, basis: Sequence[Vec], label: str = 'span'):
        self.basis = list(basis)
        self.label = label
        keys = sorted({key for vec in self.basis for key in vec}, key=repr)
        n = len(self.basis)
        if n == 0:
            self.pivot_keys: List[Hashable] = []
            self._columns: Dict[Hashable, Vec] = {}
            return
        rows = [[vec.get(key, 0) for key in keys] for vec in self.basis]
        _, pivots = rref(rows, len(keys))
        if len(pivots) < n:
            raise DegenerateForm(f"{label}: basis vectors are linearly dependent")
        self.pivot_keys = [keys[p] for p in pivots]
        square = [[vec.get(key, 0) for vec in self.basis] for key in self.pivot_keys]
        inv = inverse(square)
        # column of the inverse belonging to each pivot key, stored sparsely
        self._columns = {
            key: {i: inv[i][col] for i in range(n) if inv[i][col]}
            for col, key in enumerate(self.pivot_keys)
        }

    def __len__(self):
        return len(self.basis)

    def coordinates(self, target: Vec, check: bool = True) -> Dict[int, Fraction]:
        coords: Dict[int, Fraction] = {}
        for key, value in target.items():
            column = self._columns.get(key)
            if column:
                coords = vadd(coords, column, value)
        if check:
            rebuilt = vsum((self.basis[i], c) for i, c in coords.items())
            if vadd(rebuilt, target, -1):
                raise DegenerateForm(f"{self.label}: vector is outside the span")
        return coords
