"""
Matrix Algebras
Structure-constant realizations of sl(m|n), psl(m|m), osp(m|n), spo(n|m) and
D(2,1;a), with the normalized invariant form, the minimal grading, g^♮,
dual bases and Casimir operators.

Elements are sparse coordinate dicts over the basis. Every basis element is
a weight vector whose weight is written in the same ε/δ coordinates as the
root data of rootcat, so roots can be matched exactly.
"""
import random
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from .catalog import AlgebraId, Family
from .errors import (
    DegenerateForm,
    GradingViolation,
    MismatchAt,
    NotScalar,
    UnsupportedRealization,
    VerificationFailure,
)
from .exactmath import format_scalar, to_fraction
from .linalg import SpanCoordinates, Vec, independent_subset, inverse, nullspace, vadd, vscale, vsum
from .rootcat import (
    MinimalGradingData,
    RootDatum,
    Vector,
    build_catalog_entry,
    dual_coxeter,
    minimal_grading as root_minimal_grading,
)

logger = logging.getLogger(__name__)

ONE = Fraction(1)
GRADES = (Fraction(-1), Fraction(-1, 2), Fraction(0), Fraction(1, 2), Fraction(1))

Matrix = Dict[Tuple[int, int], Fraction]


@dataclass(frozen=True)
class BasisElement:
    label: str
    parity: int
    weight: Vector

    @property
    def is_cartan(self) -> bool:
        return not any(self.weight)


@dataclass
class CasimirReport:
    subspace: str
    eigenvalue: Fraction
    is_scalar: bool = True


@dataclass
class GradedDecomposition:
    """ad x eigenspaces and the split of g^♮ into minimal ideals."""

    grades: Dict[int, Fraction]
    pieces: Dict[Fraction, List[int]]
    nat_basis: List[Vec]
    nat_labels: List[str]
    nat_component: List[int]
    nat_coords: SpanCoordinates

    def component_indices(self, i: int) -> List[int]:
        return [a for a, c in enumerate(self.nat_component) if c == i]


@dataclass
class DualBases:
    """
    Dual bases used by the λ-bracket formulas.

    nat[α], nat_dual[α] satisfy (nat[α] | nat_dual[β]) = δ_αβ on g^♮.
    half[γ], half_dual[γ] span g_{1/2} with ⟨half[γ], half_dual[δ]⟩_ne = δ_γδ,
    where ⟨a, b⟩_ne = (e_{-θ} | [a, b]).
    """

    nat: List[Vec]
    nat_dual: List[Vec]
    half: List[Vec]
    half_dual: List[Vec]


@dataclass
class SuperMatrixAlgebra:
    algebra: AlgebraId
    rd: RootDatum
    mg: MinimalGradingData
    basis: List[BasisElement]
    brackets: Dict[Tuple[int, int], Vec]
    form: Dict[Tuple[int, int], Fraction]
    e_theta: Vec
    e_minus_theta: Vec
    x: Vec
    cartan: List[int]
    matrices: Optional[List[Matrix]] = None
    span: Optional[SpanCoordinates] = None
    index_parity: Optional[Tuple[int, ...]] = None
    _grading: Optional[GradedDecomposition] = field(default=None, repr=False)
    _duals: Optional[DualBases] = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def dim_even(self) -> int:
        return sum(1 for b in self.basis if b.parity == 0)

    @property
    def dim_odd(self) -> int:
        return sum(1 for b in self.basis if b.parity == 1)

    def index(self, label: str) -> int:
        for i, b in enumerate(self.basis):
            if b.label == label:
                return i
        raise KeyError(f"{self.algebra}: no basis element {label!r}")

    def element(self, label: str) -> Vec:
        return {self.index(label): ONE}

    def parity(self, u: Vec) -> int:
        """Parity of a homogeneous element."""
        parities = {self.basis[i].parity for i in u}
        if len(parities) > 1:
            raise VerificationFailure(f"{self.algebra}: element {self.render(u)} is not homogeneous")
        return parities.pop() if parities else 0

    def bracket(self, u: Vec, v: Vec) -> Vec:
        out: Vec = {}
        for i, a in u.items():
            for j, b in v.items():
                c = self.brackets.get((i, j))
                if c:
                    out = vadd(out, c, a * b)
        return out

    def ip(self, u: Vec, v: Vec) -> Fraction:
        total = Fraction(0)
        for i, a in u.items():
            for j, b in v.items():
                f = self.form.get((i, j))
                if f:
                    total += a * b * f
        return total

    def supertrace(self, a: Vec, b: Vec, indices: Sequence[int]) -> Fraction:
        """str of ad(a)ad(b) restricted to the span of the given basis elements."""
        total = Fraction(0)
        for s in indices:
            image = self.bracket(a, self.bracket(b, {s: ONE}))
            coeff = image.get(s)
            if coeff:
                total += -coeff if self.basis[s].parity else coeff
        return total

    def from_matrix(self, entries: Matrix) -> Vec:
        """Coordinates of a supermatrix of the defining representation."""
        if self.span is None:
            raise UnsupportedRealization(f"{self.algebra} has no matrix realization")
        coords = self.span.coordinates({key: to_fraction(v) for key, v in entries.items()})
        return {i: c for i, c in coords.items() if i < self.dim}

    def render(self, u: Vec) -> str:
        if not u:
            return '0'
        return ' + '.join(f"{format_scalar(c)}*{self.basis[i].label}" for i, c in sorted(u.items()))


# =============================================================================
# SPARSE SUPERMATRICES
# =============================================================================


def _mat_mul(a: Matrix, b: Matrix) -> Matrix:
    rows: Dict[int, List[Tuple[int, Fraction]]] = {}
    for (r, c), v in b.items():
        rows.setdefault(r, []).append((c, v))
    out: Matrix = {}
    for (r, c), v in a.items():
        for c2, w in rows.get(c, ()):
            total = out.get((r, c2), 0) + v * w
            if total:
                out[(r, c2)] = total
            else:
                out.pop((r, c2), None)
    return out


def _supercommutator(a: Matrix, pa: int, b: Matrix, pb: int) -> Matrix:
    sign = -1 if pa * pb else 1
    return vadd(_mat_mul(a, b), _mat_mul(b, a), -sign)


def _supertrace(a: Matrix, index_parity: Sequence[int]) -> Fraction:
    return sum(
        (-v if index_parity[r] else v for (r, c), v in a.items() if r == c),
        Fraction(0),
    )


# =============================================================================
# FAMILIES
# =============================================================================


def _sl_elements(m: int, n: int, drop_identity: bool):
    """sl(m|n) basis; for psl the identity is appended last as the dropped element."""
    size = m + n
    index_parity = tuple(0 if a < m else 1 for a in range(size))
    signs = [1 if p == 0 else -1 for p in index_parity]
    weights = [tuple(Fraction(1) if j == a else Fraction(0) for j in range(size)) for a in range(size)]
    elements = []
    for a in range(size):
        for b in range(size):
            if a != b:
                weight = tuple(x - y for x, y in zip(weights[a], weights[b]))
                elements.append((f"E{a + 1},{b + 1}", (index_parity[a] + index_parity[b]) % 2, weight, {(a, b): ONE}))
    zero = tuple(Fraction(0) for _ in range(size))
    cartan_count = size - 2 if drop_identity else size - 1
    for i in range(cartan_count):
        matrix = {(i, i): ONE, (i + 1, i + 1): Fraction(-signs[i] * signs[i + 1])}
        elements.append((f"h{i + 1}", 0, zero, matrix))
    extra = None
    if drop_identity:
        extra = {(a, a): ONE for a in range(size)}
    return elements, index_parity, extra


def _osp_elements(m: int, n: int):
    """
    osp(m|n) as the supermatrices preserving an antidiagonal supersymmetric form.

    Even indices come first. Each weight space is cut out by an exact nullspace.
    """
    l, r = m // 2, n // 2
    d = l + r
    size = m + n
    index_parity = tuple(0 if a < m else 1 for a in range(size))

    def unit(j, s):
        return tuple(Fraction(s) if t == j else Fraction(0) for t in range(d))

    zero = tuple(Fraction(0) for _ in range(d))
    weights: List[Vector] = [zero] * size
    for i in range(l):
        weights[i] = unit(i, 1)
        weights[m - 1 - i] = unit(i, -1)
    for j in range(r):
        weights[m + j] = unit(l + j, 1)
        weights[m + n - 1 - j] = unit(l + j, -1)

    form: Matrix = {}
    for a in range(m):
        form[(a, m - 1 - a)] = ONE
    for j in range(n):
        form[(m + j, m + n - 1 - j)] = ONE if j < r else Fraction(-1)

    groups: Dict[Tuple[Vector, int], List[Tuple[int, int]]] = {}
    for a in range(size):
        for b in range(size):
            weight = tuple(x - y for x, y in zip(weights[a], weights[b]))
            parity = (index_parity[a] + index_parity[b]) % 2
            groups.setdefault((weight, parity), []).append((a, b))

    elements = []
    cartan = []
    for (weight, parity), keys in sorted(groups.items(), key=lambda item: (item[0][1], item[0][0])):
        rows = []
        for b in range(size):
            for c in range(size):
                row = []
                for (p, q) in keys:
                    coeff = Fraction(0)
                    # Σ_a X_ab B_ac
                    if q == b:
                        coeff += form.get((p, c), 0)
                    # (-1)^{|X||b|} Σ_a B_ba X_ac
                    if q == c:
                        sign = -1 if parity * index_parity[b] else 1
                        coeff += sign * form.get((b, p), 0)
                    row.append(coeff)
                if any(row):
                    rows.append(row)
        solutions = nullspace(rows, len(keys)) if rows else [[ONE if i == j else Fraction(0) for i in range(len(keys))] for j in range(len(keys))]
        for vec in solutions:
            matrix = {key: v for key, v in zip(keys, vec) if v}
            if not any(weight):
                cartan.append((parity, weight, matrix))
                continue
            lead = min(matrix)
            elements.append((f"X{lead[0] + 1},{lead[1] + 1}", parity, weight, matrix))
    for i, (parity, weight, matrix) in enumerate(cartan, start=1):
        elements.append((f"h{i}", parity, weight, matrix))
    return elements, index_parity, None


def _build_matrix_algebra(alg: AlgebraId, rd: RootDatum, elements, index_parity, extra) -> SuperMatrixAlgebra:
    basis = [BasisElement(label, parity, weight) for label, parity, weight, _ in elements]
    matrices = [matrix for _, _, _, matrix in elements]
    span_basis = matrices + ([extra] if extra else [])
    span = SpanCoordinates(span_basis, label=str(alg))
    dim = len(basis)

    brackets: Dict[Tuple[int, int], Vec] = {}
    for i in range(dim):
        for j in range(dim):
            product_ = _supercommutator(matrices[i], basis[i].parity, matrices[j], basis[j].parity)
            if not product_:
                continue
            coords = span.coordinates(product_)
            # the identity of psl(m|m) is central and is dropped
            coords = {a: c for a, c in coords.items() if a < dim}
            if coords:
                brackets[(i, j)] = coords

    raw_form: Dict[Tuple[int, int], Fraction] = {}
    for i in range(dim):
        for j in range(dim):
            value = _supertrace(_mat_mul(matrices[i], matrices[j]), index_parity)
            if value:
                raw_form[(i, j)] = value

    return _normalize(alg, rd, basis, brackets, raw_form, matrices, span, index_parity)


# =============================================================================
# D(2,1;A)
# =============================================================================


def _psi(s: int, t: int) -> int:
    if s == 1 and t == -1:
        return 1
    if s == -1 and t == 1:
        return -1
    return 0


def _d21a_algebra(alg: AlgebraId, rd: RootDatum) -> SuperMatrixAlgebra:
    """sl(2)^3 ⊕ (C^2)^{⊗3} with the odd bracket weighted by σ = (-(1+a), 1, a)."""
    a = to_fraction(alg.params[0])
    sigma = (-(1 + a), ONE, a)

    def unit(i, s):
        return tuple(Fraction(s) if t == i else Fraction(0) for t in range(3))

    zero = unit(0, 0)
    basis: List[BasisElement] = []
    for i in range(3):
        basis.append(BasisElement(f"E{i + 1}", 0, unit(i, 2)))
    for i in range(3):
        basis.append(BasisElement(f"F{i + 1}", 0, unit(i, -2)))
    for i in range(3):
        basis.append(BasisElement(f"H{i + 1}", 0, zero))
    spinors = list(product((1, -1), repeat=3))
    for s in spinors:
        label = 'e' + ''.join('+' if x > 0 else '-' for x in s)
        basis.append(BasisElement(label, 1, tuple(Fraction(x) for x in s)))
    E, F, H = (lambda i: i), (lambda i: 3 + i), (lambda i: 6 + i)
    spinor_index = {s: 9 + k for k, s in enumerate(spinors)}

    brackets: Dict[Tuple[int, int], Vec] = {}

    def put(i, j, value: Vec):
        if value:
            brackets[(i, j)] = value

    for i in range(3):
        put(H(i), E(i), {E(i): Fraction(2)})
        put(E(i), H(i), {E(i): Fraction(-2)})
        put(H(i), F(i), {F(i): Fraction(-2)})
        put(F(i), H(i), {F(i): Fraction(2)})
        put(E(i), F(i), {H(i): ONE})
        put(F(i), E(i), {H(i): -ONE})

    def act(i: int, kind: str, s: Tuple[int, ...]) -> Vec:
        if kind == 'H':
            return {spinor_index[s]: Fraction(s[i])}
        flipped = list(s)
        if kind == 'E' and s[i] == -1:
            flipped[i] = 1
        elif kind == 'F' and s[i] == 1:
            flipped[i] = -1
        else:
            return {}
        return {spinor_index[tuple(flipped)]: ONE}

    for i in range(3):
        for kind, idx in (('E', E(i)), ('F', F(i)), ('H', H(i))):
            for s in spinors:
                image = act(i, kind, s)
                put(idx, spinor_index[s], image)
                put(spinor_index[s], idx, vscale(image, -1))

    def pairing(i: int, s: int, t: int) -> Vec:
        if s == 1 and t == 1:
            return {E(i): Fraction(2)}
        if s == -1 and t == -1:
            return {F(i): Fraction(-2)}
        return {H(i): -ONE}

    for s in spinors:
        for t in spinors:
            total: Vec = {}
            for i in range(3):
                coeff = sigma[i]
                for j in range(3):
                    if j != i:
                        coeff *= _psi(s[j], t[j])
                if coeff:
                    total = vadd(total, pairing(i, s[i], t[i]), coeff)
            put(spinor_index[s], spinor_index[t], total)

    raw_form = _solve_invariant_form(alg, basis, brackets)
    return _normalize(alg, rd, basis, brackets, raw_form, None, None, None)


def _solve_invariant_form(alg: AlgebraId, basis: List[BasisElement], brackets) -> Dict[Tuple[int, int], Fraction]:
    """The invariant supersymmetric form, as the one-dimensional solution of the invariance equations."""
    dim = len(basis)
    unknowns = [
        (i, j) for i in range(dim) for j in range(i, dim)
        if basis[i].parity == basis[j].parity
        and not any(x + y for x, y in zip(basis[i].weight, basis[j].weight))
    ]
    position = {pair: u for u, pair in enumerate(unknowns)}

    def coefficient(i: int, j: int) -> Tuple[Optional[int], int]:
        if (i, j) in position:
            return position[(i, j)], 1
        if (j, i) in position:
            sign = -1 if basis[i].parity and basis[j].parity else 1
            return position[(j, i)], sign
        return None, 0

    rows = []
    for a in range(dim):
        for b in range(dim):
            ab = brackets.get((a, b), {})
            for c in range(dim):
                bc = brackets.get((b, c), {})
                row = [Fraction(0)] * len(unknowns)
                # ([a,b]|c) - (a|[b,c])
                for d, coeff in ab.items():
                    u, sign = coefficient(d, c)
                    if u is not None:
                        row[u] += sign * coeff
                for d, coeff in bc.items():
                    u, sign = coefficient(a, d)
                    if u is not None:
                        row[u] -= sign * coeff
                if any(row):
                    rows.append(row)
    solutions = nullspace(rows, len(unknowns))
    if len(solutions) != 1:
        raise DegenerateForm(f"{alg}: invariant form space has dimension {len(solutions)}")
    form: Dict[Tuple[int, int], Fraction] = {}
    for (i, j), value in zip(unknowns, solutions[0]):
        if value:
            form[(i, j)] = value
            sign = -1 if basis[i].parity and basis[j].parity else 1
            form[(j, i)] = sign * value
    return form


# =============================================================================
# NORMALIZATION
# =============================================================================


def _normalize(alg, rd, basis, brackets, raw_form, matrices, span, index_parity) -> SuperMatrixAlgebra:
    """Rescale the form so (θ|θ) = 2 and fix e_θ, e_{-θ}, x with [e_θ, e_{-θ}] = x."""
    by_weight: Dict[Vector, List[int]] = {}
    for i, b in enumerate(basis):
        if not b.is_cartan:
            by_weight.setdefault(b.weight, []).append(i)

    root_weights = sorted(r.vector for r in rd.roots)
    basis_weights = sorted(b.weight for b in basis if not b.is_cartan)
    if root_weights != basis_weights:
        raise VerificationFailure(f"{alg}: basis weights do not match the root data")

    neg_theta = tuple(-t for t in rd.theta)
    (e_idx,), (f_idx,) = by_weight[rd.theta], by_weight[neg_theta]
    e_raw, f_raw = {e_idx: ONE}, {f_idx: ONE}

    def bracket(u, v):
        out: Vec = {}
        for i, a in u.items():
            for j, b in v.items():
                c = brackets.get((i, j))
                if c:
                    out = vadd(out, c, a * b)
        return out

    def raw_ip(u, v):
        return sum((a * b * raw_form.get((i, j), 0) for i, a in u.items() for j, b in v.items()), Fraction(0))

    h = bracket(e_raw, f_raw)
    theta_h = bracket(h, e_raw).get(e_idx, Fraction(0))
    if not theta_h or not raw_ip(h, h):
        raise DegenerateForm(f"{alg}: θ(h_θ) or (h_θ|h_θ) vanishes")
    theta_norm_raw = theta_h * theta_h / raw_ip(h, h)
    scale = theta_norm_raw / 2
    form = {key: value * scale for key, value in raw_form.items()}

    x = vscale(h, 1 / theta_h)
    e_theta = {e_idx: 1 / theta_h}
    cartan = [i for i, b in enumerate(basis) if b.is_cartan]
    logger.info(f"realized {alg}: dim {len(basis)}, {len(brackets)} nonzero brackets")
    return SuperMatrixAlgebra(
        algebra=alg,
        rd=rd,
        mg=root_minimal_grading(rd),
        basis=basis,
        brackets=brackets,
        form=form,
        e_theta=e_theta,
        e_minus_theta=f_raw,
        x=x,
        cartan=cartan,
        matrices=matrices,
        span=span,
        index_parity=index_parity,
    )


@lru_cache(maxsize=32)
def realize(alg: AlgebraId) -> SuperMatrixAlgebra:
    """Structure-constant realization of a classical family or D(2,1;a)."""
    rd = build_catalog_entry(alg)
    f, p = alg.family, alg.params
    if f == Family.SL:
        return _build_matrix_algebra(alg, rd, *_sl_elements(p[0], p[1], drop_identity=False))
    if f == Family.PSL:
        return _build_matrix_algebra(alg, rd, *_sl_elements(p[0], p[0], drop_identity=True))
    if f == Family.OSP:
        return _build_matrix_algebra(alg, rd, *_osp_elements(p[0], p[1]))
    if f == Family.SPO:
        return _build_matrix_algebra(alg, rd, *_osp_elements(p[1], p[0]))
    if f == Family.D21A:
        return _d21a_algebra(alg, rd)
    raise UnsupportedRealization(f"{alg}: only the root-level engine covers this algebra")


# =============================================================================
# GRADING, G^♮ AND DUAL BASES
# =============================================================================


def _dense(u: Vec, indices: Sequence[int]) -> List[Fraction]:
    return [u.get(i, Fraction(0)) for i in indices]


def minimal_grading(A: SuperMatrixAlgebra) -> GradedDecomposition:
    if A._grading is not None:
        return A._grading
    grades: Dict[int, Fraction] = {}
    for i, b in enumerate(A.basis):
        image = A.bracket(A.x, {i: ONE})
        value = image.get(i, Fraction(0))
        if vadd(image, {i: value}, -1):
            raise GradingViolation(f"{A.algebra}: {b.label} is not an eigenvector of ad x")
        if value not in GRADES:
            raise GradingViolation(f"{A.algebra}: ad x eigenvalue {value} on {b.label}")
        if value != A.rd.ip(b.weight, A.rd.theta) / 2:
            raise GradingViolation(f"{A.algebra}: grade of {b.label} disagrees with its root")
        grades[i] = value
    pieces = {g: [i for i in range(A.dim) if grades[i] == g] for g in GRADES}
    if len(pieces[ONE]) != 1 or len(pieces[-ONE]) != 1:
        raise GradingViolation(f"{A.algebra}: g_{{±1}} is not one-dimensional")

    by_weight = {b.weight: i for i, b in enumerate(A.basis) if not b.is_cartan}
    nat_basis: List[Vec] = []
    nat_labels: List[str] = []
    nat_component: List[int] = []
    cartan_vectors: List[Vec] = []

    simple = [c for c in A.mg.components if not c.is_center]
    blocks = []
    for comp in simple:
        roots = sorted(by_weight[r.vector] for r in comp.roots)
        coroots = [
            A.bracket({by_weight[r.vector]: ONE}, {by_weight[tuple(-t for t in r.vector)]: ONE})
            for r in comp.roots
        ]
        dense = [_dense(h, A.cartan) for h in coroots]
        chosen = [coroots[i] for i in independent_subset(dense, len(A.cartan))]
        if len(chosen) != comp.rank:
            raise VerificationFailure(
                f"{A.algebra}: component {comp.label} has {len(chosen)} coroots, expected rank {comp.rank}"
            )
        cartan_vectors.extend(chosen)
        blocks.append((comp, roots, chosen))

    # center of g^♮: orthogonal to x and to every component Cartan
    rows = [[A.ip({j: ONE}, A.x) for j in A.cartan]]
    rows += [[A.ip({j: ONE}, h) for j in A.cartan] for h in cartan_vectors]
    center = nullspace(rows, len(A.cartan))
    has_center = any(c.is_center for c in A.mg.components)
    if len(center) != (1 if has_center else 0):
        raise VerificationFailure(f"{A.algebra}: center of g^♮ has dimension {len(center)}")
    if center:
        nat_basis.append({j: v for j, v in zip(A.cartan, center[0]) if v})
        nat_labels.append('c')
        nat_component.append(0)

    for comp, roots, chosen in blocks:
        for i in roots:
            nat_basis.append({i: ONE})
            nat_labels.append(A.basis[i].label)
            nat_component.append(comp.index)
        for t, h in enumerate(chosen, start=1):
            nat_basis.append(h)
            nat_labels.append(f"h{comp.index}_{t}")
            nat_component.append(comp.index)

    A._grading = GradedDecomposition(
        grades=grades,
        pieces=pieces,
        nat_basis=nat_basis,
        nat_labels=nat_labels,
        nat_component=nat_component,
        nat_coords=SpanCoordinates(nat_basis, label=f"{A.algebra} g^♮"),
    )
    logger.debug(f"{A.algebra}: dim g^♮ = {len(nat_basis)}, grades {[len(pieces[g]) for g in GRADES]}")
    return A._grading


def in_degree(A: SuperMatrixAlgebra, a: Vec, degree: Fraction) -> bool:
    grades = minimal_grading(A).grades
    return all(grades[i] == degree for i in a)


def project_nat(A: SuperMatrixAlgebra, a: Vec) -> Vec:
    """a ↦ a^♮, the orthogonal projection of a ∈ g_0 onto g^♮."""
    if not in_degree(A, a, Fraction(0)):
        raise GradingViolation(f"{A.algebra}: {A.render(a)} is not in g_0")
    xx = A.ip(A.x, A.x)
    return vadd(a, A.x, -A.ip(a, A.x) / xx)


def nat_coordinates(A: SuperMatrixAlgebra, a: Vec) -> Dict[int, Fraction]:
    """Coordinates of a^♮ in the g^♮ basis."""
    return minimal_grading(A).nat_coords.coordinates(project_nat(A, a))


def project_component(A: SuperMatrixAlgebra, a: Vec, i: int) -> Vec:
    """a ↦ a_i^♮, the part of a^♮ in the component g_i^♮."""
    grading = minimal_grading(A)
    coords = nat_coordinates(A, a)
    return vsum((grading.nat_basis[alpha], c) for alpha, c in coords.items() if grading.nat_component[alpha] == i)


def dual_basis(vectors: List[Vec], pairing) -> List[Vec]:
    """Vectors v^β with pairing(vectors[α], v^β) = δ_αβ."""
    n = len(vectors)
    if n == 0:
        return []
    gram = [[pairing(vectors[a], vectors[b]) for b in range(n)] for a in range(n)]
    inv = inverse(gram)
    return [vsum((vectors[g], inv[g][b]) for g in range(n)) for b in range(n)]


def ne_form(A: SuperMatrixAlgebra, a: Vec, b: Vec) -> Fraction:
    return A.ip(A.e_minus_theta, A.bracket(a, b))


def dual_bases(A: SuperMatrixAlgebra) -> DualBases:
    if A._duals is not None:
        return A._duals
    grading = minimal_grading(A)
    nat = grading.nat_basis
    half = [{i: ONE} for i in grading.pieces[Fraction(1, 2)]]
    try:
        nat_dual = dual_basis(nat, A.ip)
    except DegenerateForm:
        raise DegenerateForm(f"{A.algebra}: (·|·) is degenerate on g^♮")
    try:
        half_dual = dual_basis(half, lambda a, b: ne_form(A, a, b))
    except DegenerateForm:
        raise DegenerateForm(f"{A.algebra}: ⟨·,·⟩_ne is degenerate on g_1/2")
    A._duals = DualBases(nat=nat, nat_dual=nat_dual, half=half, half_dual=half_dual)
    return A._duals


# =============================================================================
# CASIMIR OPERATORS AND CHECKS
# =============================================================================


def _casimir_on(A: SuperMatrixAlgebra, pairs: List[Tuple[Vec, Vec]], targets: List[int], tag: str) -> CasimirReport:
    eigenvalue: Optional[Fraction] = None
    for t in targets:
        z = {t: ONE}
        image = vsum((A.bracket(dual, A.bracket(vec, z)), ONE) for vec, dual in pairs)
        value = image.get(t, Fraction(0))
        if vadd(image, z, -value) or (eigenvalue is not None and value != eigenvalue):
            raise NotScalar(f"{A.algebra}: Casimir {tag} is not scalar at {A.basis[t].label}")
        eigenvalue = value
    return CasimirReport(subspace=tag, eigenvalue=eigenvalue if eigenvalue is not None else Fraction(0))


def casimir_eigenvalue(A: SuperMatrixAlgebra, which: str, component: Optional[int] = None) -> CasimirReport:
    """
    Eigenvalue of a Casimir operator C(z) = Σ_α [a^α, [a_α, z]].

    which is 'g-on-g', 'g0-on-ghalf' or 'gi-on-gi' (with component set).
    """
    grading = minimal_grading(A)
    if which == 'g-on-g':
        vectors = [{i: ONE} for i in range(A.dim)]
        return _casimir_on(A, list(zip(vectors, dual_basis(vectors, A.ip))), list(range(A.dim)), which)
    if which == 'g0-on-ghalf':
        vectors = [{i: ONE} for i in grading.pieces[Fraction(0)]]
        pairs = list(zip(vectors, dual_basis(vectors, A.ip)))
        return _casimir_on(A, pairs, grading.pieces[Fraction(-1, 2)], which)
    if which == 'gi-on-gi':
        idx = grading.component_indices(component)
        vectors = [grading.nat_basis[a] for a in idx]
        pairs = list(zip(vectors, dual_basis(vectors, A.ip)))
        eigenvalue = None
        for a in idx:
            z = grading.nat_basis[a]
            image = vsum((A.bracket(dual, A.bracket(vec, z)), ONE) for vec, dual in pairs)
            coords = grading.nat_coords.coordinates(image) if image else {}
            value = coords.get(a, Fraction(0))
            if vadd(coords, {a: value}, -1) or (eigenvalue is not None and value != eigenvalue):
                raise NotScalar(f"{A.algebra}: Casimir of component {component} is not scalar")
            eigenvalue = value
        return CasimirReport(subspace=f"{which}[{component}]", eigenvalue=eigenvalue or Fraction(0))
    raise ValueError(f"unknown Casimir subspace {which!r}")


def check_dual_coxeter(A: SuperMatrixAlgebra) -> Fraction:
    """The Casimir route to h∨ must agree with the weight route."""
    h_casimir = casimir_eigenvalue(A, 'g-on-g').eigenvalue / 2
    h_roots = dual_coxeter(A.rd)
    if h_casimir != h_roots:
        raise MismatchAt(str(A.algebra), 'dual Coxeter number', h_casimir - h_roots)
    return h_casimir


def _triples(A: SuperMatrixAlgebra, exhaustive_dim: int, samples: int, seed: int):
    if A.dim <= exhaustive_dim:
        mode = 'exhaustive'
        triples = list(product(range(A.dim), repeat=3))
    else:
        mode = 'sampled'
        rng = random.Random(seed)
        triples = [(rng.randrange(A.dim), rng.randrange(A.dim), rng.randrange(A.dim)) for _ in range(samples)]
    return mode, triples


def check_jacobi(A: SuperMatrixAlgebra, exhaustive_dim: int = 60, samples: int = 10000, seed: int = 20240601) -> Dict:
    """[a,[b,c]] = [[a,b],c] + (-1)^{p(a)p(b)} [b,[a,c]] on basis triples."""
    mode, triples = _triples(A, exhaustive_dim, samples, seed)
    for a, b, c in triples:
        va, vb, vc = {a: ONE}, {b: ONE}, {c: ONE}
        sign = -1 if A.basis[a].parity and A.basis[b].parity else 1
        lhs = A.bracket(va, A.bracket(vb, vc))
        rhs = vadd(A.bracket(A.bracket(va, vb), vc), A.bracket(vb, A.bracket(va, vc)), sign)
        difference = vadd(lhs, rhs, -1)
        if difference:
            labels = tuple(A.basis[i].label for i in (a, b, c))
            raise MismatchAt(labels, 'super Jacobi identity', A.render(difference))
    logger.info(f"{A.algebra}: Jacobi identity holds on {len(triples)} triples ({mode})")
    return {'algebra': str(A.algebra), 'dim': A.dim, 'mode': mode, 'triples': len(triples)}


def check_antisymmetry(A: SuperMatrixAlgebra) -> Dict:
    for a in range(A.dim):
        for b in range(A.dim):
            sign = -1 if A.basis[a].parity and A.basis[b].parity else 1
            ab = A.brackets.get((a, b), {})
            ba = A.brackets.get((b, a), {})
            difference = vadd(ab, ba, sign)
            if difference:
                raise MismatchAt((A.basis[a].label, A.basis[b].label), 'super antisymmetry', A.render(difference))
    return {'algebra': str(A.algebra), 'pairs': A.dim * A.dim}


def check_invariance(A: SuperMatrixAlgebra, exhaustive_dim: int = 60, samples: int = 10000, seed: int = 20240601) -> Dict:
    """Supersymmetry of the form and ([a,b]|c) = (a|[b,c])."""
    for (a, b), value in A.form.items():
        sign = -1 if A.basis[a].parity and A.basis[b].parity else 1
        if A.form.get((b, a), 0) != sign * value:
            raise MismatchAt((A.basis[a].label, A.basis[b].label), 'form supersymmetry', value)
    mode, triples = _triples(A, exhaustive_dim, samples, seed)
    for a, b, c in triples:
        va, vb, vc = {a: ONE}, {b: ONE}, {c: ONE}
        difference = A.ip(A.bracket(va, vb), vc) - A.ip(va, A.bracket(vb, vc))
        if difference:
            labels = tuple(A.basis[i].label for i in (a, b, c))
            raise MismatchAt(labels, 'form invariance', difference)
    theta_norm = A.rd.ip(A.rd.theta, A.rd.theta)
    if theta_norm != 2 or A.bracket(A.e_theta, A.e_minus_theta) != A.x:
        raise MismatchAt(str(A.algebra), 'θ normalization', theta_norm)
    return {'algebra': str(A.algebra), 'mode': mode, 'triples': len(triples)}


def kappa0_report(A: SuperMatrixAlgebra) -> List[Dict]:
    """
    κ_0(a, b) = str_{g_0}(ad a ad b) per component, against 2h∨_{0,i}(a|b).

    Each row also records κ(a, a') = str_g(ad a ad a') against 2h∨(a|a').
    """
    grading = minimal_grading(A)
    g0 = grading.pieces[Fraction(0)]
    everything = list(range(A.dim))
    h_vee = dual_coxeter(A.rd)
    duals = dual_bases(A)
    rows = []
    for comp in A.mg.components:
        idx = grading.component_indices(comp.index)
        a = grading.nat_basis[idx[0]]
        # a paired with a dual partner gives (a|b) = 1
        b = duals.nat_dual[idx[0]]
        pairing = A.ip(a, b)
        kappa0 = A.supertrace(a, b, g0)
        kappa = A.supertrace(a, b, everything)
        rows.append({
            'component': comp.index,
            'label': comp.label,
            'form': pairing,
            'kappa0': kappa0,
            'ratio': kappa0 / pairing,
            'expected': 2 * comp.h_vee,
            'matches': kappa0 == 2 * comp.h_vee * pairing,
            'kappa_g_matches': kappa == 2 * h_vee * pairing,
        })
    return rows


def dump_structure_constants(A: SuperMatrixAlgebra) -> List[str]:
    """Nonzero structure constants as 'label label label coefficient' lines."""
    lines = []
    for (i, j) in sorted(A.brackets):
        for d, c in sorted(A.brackets[(i, j)].items()):
            lines.append(f"{A.basis[i].label} {A.basis[j].label} {A.basis[d].label} {format_scalar(c)}")
    return lines
