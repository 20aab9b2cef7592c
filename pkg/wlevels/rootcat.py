"""
Root Data
Root systems in explicit coordinates, minimal gradings, g^♮ components and
the weights of g_{-1/2}.

Every catalog algebra is hardcoded in ε/δ coordinates (orthonormal-style
coordinates for the exceptional Lie algebras) with a diagonal ambient form,
rescaled once so that (θ|θ) = 2.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .catalog import AlgebraId, Family
from .errors import GradingViolation, VerificationFailure
from .exactmath import to_fraction
from .linalg import independent_subset, inverse, rank

logger = logging.getLogger(__name__)

Vector = Tuple[Fraction, ...]

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class Root:
    vector: Vector
    parity: int

    @property
    def is_even(self) -> bool:
        return self.parity == 0


@dataclass(frozen=True)
class RootDatum:
    """Roots of g with the normalized diagonal ambient form and the chosen θ."""

    algebra: AlgebraId
    form: Vector
    roots: Tuple[Root, ...]
    theta: Vector
    rank: int
    simple_roots: Tuple[Root, ...] = ()

    def ip(self, u: Sequence, v: Sequence) -> Fraction:
        return sum((f * a * b for f, a, b in zip(self.form, u, v)), Fraction(0))

    def positive_key(self, v: Sequence) -> Tuple:
        """Sort key of the positive system in which θ is the highest root."""
        return (self.ip(v, self.theta), tuple(v))

    def is_positive(self, v: Sequence) -> bool:
        return self.positive_key(v) > (Fraction(0), tuple(Fraction(0) for _ in v))


@dataclass
class Component:
    """One minimal ideal of g^♮ (or the center, index 0)."""

    index: int
    roots: Tuple[Root, ...]
    rank: int
    label: str
    theta: Optional[Vector] = None
    rho: Optional[Vector] = None
    h_vee: Fraction = Fraction(0)

    @property
    def is_center(self) -> bool:
        return not self.roots

    @property
    def dim_even(self) -> int:
        return sum(1 for r in self.roots if r.is_even) + self.rank

    @property
    def dim_odd(self) -> int:
        return sum(1 for r in self.roots if not r.is_even)

    @property
    def sdim(self) -> Fraction:
        return Fraction(self.dim_even - self.dim_odd)


@dataclass
class MinimalGradingData:
    rd: RootDatum
    grading: Dict[Vector, Fraction]
    components: List[Component]
    rho: Vector
    h_vee: Fraction

    @property
    def index_set(self) -> List[int]:
        return [c.index for c in self.components]

    def component(self, i: int) -> Component:
        for c in self.components:
            if c.index == i:
                return c
        raise KeyError(f"no g^♮ component with index {i}")

    @property
    def nat_roots(self) -> List[Root]:
        return [r for c in self.components for r in c.roots]


@dataclass
class HalfSpaceComponent:
    highest_weight: Vector
    restrictions: Dict[int, Vector]
    weights: Tuple[Vector, ...]


@dataclass
class HalfSpaceWeights:
    components: List[HalfSpaceComponent]

    @property
    def multiplicity_tag(self) -> str:
        return 'irreducible' if len(self.components) == 1 else 'U + U*'


# =============================================================================
# VECTOR HELPERS
# =============================================================================


def _vec(*xs) -> Vector:
    return tuple(to_fraction(x) for x in xs)


def _add(u: Sequence, v: Sequence, scale=1) -> Vector:
    return tuple(a + scale * b for a, b in zip(u, v))


def _scale(u: Sequence, s) -> Vector:
    return tuple(s * a for a in u)


def _zero(d: int) -> Vector:
    return tuple(Fraction(0) for _ in range(d))


def _unit(d: int, i: int, s=1) -> Vector:
    return tuple(Fraction(s) if j == i else Fraction(0) for j in range(d))


def _with_negatives(vectors, parity: int) -> List[Root]:
    out = []
    for v in vectors:
        out.append(Root(v, parity))
        out.append(Root(_scale(v, -1), parity))
    return out


# =============================================================================
# RAW ROOT SYSTEMS
# =============================================================================


def _sl_roots(m: int, n: int):
    d = m + n
    form = _vec(*([1] * m + [-1] * n))
    eps = [_unit(d, i) for i in range(m)]
    dlt = [_unit(d, m + j) for j in range(n)]
    even = [_add(eps[i], eps[j], -1) for i, j in combinations(range(m), 2)]
    even += [_add(dlt[i], dlt[j], -1) for i, j in combinations(range(n), 2)]
    odd = [_add(e, dl, -1) for e in eps for dl in dlt]
    theta = _add(eps[0], eps[m - 1], -1)
    return form, _with_negatives(even, 0) + _with_negatives(odd, 1), theta


def _osp_roots(m: int, n: int):
    """Roots of osp(m|n): so(m) on ε, sp(n) on δ, with (ε|ε) = 1 and (δ|δ) = -1."""
    l, r = m // 2, n // 2
    d = l + r
    form = _vec(*([1] * l + [-1] * r))
    eps = [_unit(d, i) for i in range(l)]
    dlt = [_unit(d, l + j) for j in range(r)]
    even, odd = [], []
    for i, j in combinations(range(l), 2):
        even += [_add(eps[i], eps[j]), _add(eps[i], eps[j], -1)]
    for i, j in combinations(range(r), 2):
        even += [_add(dlt[i], dlt[j]), _add(dlt[i], dlt[j], -1)]
    even += [_scale(dl, 2) for dl in dlt]
    for e in eps:
        for dl in dlt:
            odd += [_add(e, dl), _add(e, dl, -1)]
    if m % 2:
        even += eps
        odd += dlt
    return form, _with_negatives(even, 0) + _with_negatives(odd, 1), eps, dlt


def _d21a_roots(a: Fraction):
    sigma = (-(1 + a), Fraction(1), a)
    form = tuple(s / 2 for s in sigma)
    even = [_unit(3, i, 2) for i in range(3)]
    odd = [_vec(1, s2, s3) for s2, s3 in product((1, -1), repeat=2)]
    theta = _unit(3, 1, 2)
    return form, _with_negatives(even, 0) + _with_negatives(odd, 1), theta


def _f4super_roots(choice: str):
    d = 4
    form = _vec(1, 1, 1, -3)
    eps = [_unit(d, i) for i in range(3)]
    delta = _unit(d, 3)
    even = []
    for i, j in combinations(range(3), 2):
        even += [_add(eps[i], eps[j]), _add(eps[i], eps[j], -1)]
    even += eps + [delta]
    odd = [
        _scale(_vec(s1, s2, s3, 1), HALF)
        for s1, s2, s3 in product((1, -1), repeat=3)
    ]
    theta = delta if choice == 'sl2' else _add(eps[0], eps[1])
    return form, _with_negatives(even, 0) + _with_negatives(odd, 1), theta


def _g3super_roots(choice: str):
    d = 4
    form = _vec(-3, -3, -3, 2)
    third = Fraction(1, 3)
    eps = [
        tuple((Fraction(1) if j == i else Fraction(0)) - third if j < 3 else Fraction(0) for j in range(d))
        for i in range(3)
    ]
    delta = _unit(d, 3)
    even = list(eps)
    even += [_add(eps[i], eps[j], -1) for i, j in combinations(range(3), 2)]
    even += [_scale(delta, 2)]
    odd = [_add(e, delta) for e in eps] + [_add(e, delta, -1) for e in eps] + [delta]
    theta = _scale(delta, 2) if choice == 'sl2' else _add(eps[0], eps[1], -1)
    return form, _with_negatives(even, 0) + _with_negatives(odd, 1), theta


def _e8_vectors() -> List[Vector]:
    vectors = []
    for i, j in combinations(range(8), 2):
        for si, sj in product((1, -1), repeat=2):
            v = [Fraction(0)] * 8
            v[i], v[j] = Fraction(si), Fraction(sj)
            vectors.append(tuple(v))
    for signs in product((1, -1), repeat=8):
        if signs.count(-1) % 2 == 0:
            vectors.append(tuple(Fraction(s, 2) for s in signs))
    return vectors


def _lie_roots(letter: str, r: int):
    if letter == 'E':
        form = _vec(*([1] * 8))
        vectors = _e8_vectors()
        if r <= 7:
            vectors = [v for v in vectors if v[6] + v[7] == 0]
        if r == 6:
            vectors = [v for v in vectors if v[5] == v[6]]
        theta = max(vectors)
        return form, [Root(v, 0) for v in vectors], theta
    if letter == 'F':
        form = _vec(1, 1, 1, 1)
        vectors = []
        for i in range(4):
            vectors += [_unit(4, i), _unit(4, i, -1)]
        for i, j in combinations(range(4), 2):
            for si, sj in product((1, -1), repeat=2):
                vectors.append(_add(_unit(4, i, si), _unit(4, j, sj)))
        vectors += [tuple(Fraction(s, 2) for s in signs) for signs in product((1, -1), repeat=4)]
        return form, [Root(v, 0) for v in vectors], _vec(1, 1, 0, 0)
    if letter == 'G':
        form = _vec(Fraction(1, 3), Fraction(1, 3), Fraction(1, 3))
        short = [_add(_unit(3, i), _unit(3, j), -1) for i, j in combinations(range(3), 2)]
        long = []
        for i in range(3):
            others = [j for j in range(3) if j != i]
            long.append(_add(_add(_unit(3, i, 2), _unit(3, others[0]), -1), _unit(3, others[1]), -1))
        roots = _with_negatives(short, 0) + _with_negatives(long, 0)
        return form, roots, long[0]
    raise VerificationFailure(f"no root data for {letter}{r}")


def _raw_root_data(alg: AlgebraId):
    f, p = alg.family, alg.params
    if f == Family.SL:
        return _sl_roots(*p)
    if f == Family.PSL:
        return _sl_roots(p[0], p[0])
    if f == Family.OSP:
        form, roots, eps, _ = _osp_roots(p[0], p[1])
        return form, roots, _add(eps[0], eps[1])
    if f == Family.SPO:
        n, m = p
        form, roots, _, dlt = _osp_roots(m, n)
        return form, roots, _scale(dlt[0], 2)
    if f == Family.D21A:
        return _d21a_roots(to_fraction(p[0]))
    if f == Family.F4SUPER:
        return _f4super_roots(alg.theta_choice)
    if f == Family.G3SUPER:
        return _g3super_roots(alg.theta_choice)
    return _lie_roots(*p)


# =============================================================================
# OPERATIONS
# =============================================================================


def gram_rank(form: Vector, vectors: Sequence[Vector]) -> int:
    """Rank of the form restricted to the span of the given vectors."""
    if not vectors:
        return 0
    d = len(form)
    basis_idx = independent_subset(list(vectors), d)
    basis = [vectors[i] for i in basis_idx]
    gram = [[sum(f * a * b for f, a, b in zip(form, u, v)) for v in basis] for u in basis]
    return rank(gram, len(basis))


def _simple_roots(rd: RootDatum) -> Tuple[Root, ...]:
    positives = [r for r in rd.roots if rd.is_positive(r.vector)]
    vectors = {r.vector for r in positives}
    simple = []
    for r in positives:
        decomposable = any(
            _add(r.vector, other.vector, -1) in vectors
            for other in positives if other.vector != r.vector
        )
        if not decomposable:
            simple.append(r)
    return tuple(sorted(simple, key=lambda r: rd.positive_key(r.vector)))


@lru_cache(maxsize=None)
def build_catalog_entry(alg: AlgebraId) -> RootDatum:
    """Root datum of g with (θ|θ) = 2 and θ chosen per the algebra's theta choice."""
    form, roots, theta = _raw_root_data(alg)
    raw = sum((f * t * t for f, t in zip(form, theta)), Fraction(0))
    # rescale the form on roots so that (θ|θ) = 2
    form = tuple(f * 2 / raw for f in form)
    rd = RootDatum(
        algebra=alg,
        form=form,
        roots=tuple(roots),
        theta=tuple(theta),
        rank=gram_rank(form, [r.vector for r in roots]),
    )
    rd = RootDatum(rd.algebra, rd.form, rd.roots, rd.theta, rd.rank, _simple_roots(rd))
    logger.debug(f"built root datum for {alg}: {len(roots)} roots, rank {rd.rank}")
    return rd


def rho_vector(rd: RootDatum, roots: Sequence[Root]) -> Vector:
    """½(Σ positive even − Σ positive odd) over the given roots."""
    d = len(rd.form)
    total = _zero(d)
    for r in roots:
        if rd.is_positive(r.vector):
            total = _add(total, r.vector, 1 if r.is_even else -1)
    return _scale(total, HALF)


def dual_coxeter(rd: RootDatum) -> Fraction:
    rho = rho_vector(rd, rd.roots)
    return (rd.ip(rd.theta, rd.theta) + 2 * rd.ip(rd.theta, rho)) / 2


def check_grading(rd: RootDatum) -> Dict[Vector, Fraction]:
    """(η|θ)/2 for every root, after checking the minimal-grading conditions."""
    grading = {}
    neg_theta = _scale(rd.theta, -1)
    for r in rd.roots:
        value = rd.ip(r.vector, rd.theta)
        if value not in (-2, -1, 0, 1, 2):
            raise GradingViolation(f"{rd.algebra}: (η|θ) = {value} for η = {r.vector}")
        if abs(value) == 2 and r.vector not in (rd.theta, neg_theta):
            raise GradingViolation(f"{rd.algebra}: (η|θ) = ±2 for η = {r.vector} ≠ ±θ")
        grading[r.vector] = value / 2
    if sum(1 for r in rd.roots if rd.ip(r.vector, rd.theta) == 2) != 1:
        raise GradingViolation(f"{rd.algebra}: g_1 is not one-dimensional")
    return grading


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i: int, j: int) -> None:
        self.parent[self.find(i)] = self.find(j)

    def groups(self) -> List[List[int]]:
        out: Dict[int, List[int]] = {}
        for i in range(len(self.parent)):
            out.setdefault(self.find(i), []).append(i)
        return list(out.values())


def lie_type(rd: RootDatum, roots: Sequence[Root], component_rank: int) -> str:
    """Cartan type label of a component from its rank, root count and root lengths."""
    if any(not r.is_even for r in roots):
        dim_even = sum(1 for r in roots if r.is_even) + component_rank
        dim_odd = sum(1 for r in roots if not r.is_even)
        return f"super({dim_even}|{dim_odd})"
    r, count = component_rank, len(roots)
    if count == r * (r + 1):
        return f"A_{r}"
    exceptional = {(2, 12): 'G2', (4, 48): 'F4', (6, 72): 'E_6', (7, 126): 'E_7', (8, 240): 'E_8'}
    if (r, count) in exceptional:
        return exceptional[(r, count)]
    if count == 2 * r * r:
        if r == 2:
            return 'C_2'
        lengths = [abs(rd.ip(x.vector, x.vector)) for x in roots]
        longest = max(lengths)
        short = sum(1 for length in lengths if length != longest)
        return f"B_{r}" if short == 2 * r else f"C_{r}"
    if count == 2 * r * (r - 1):
        return f"D_{r}"
    return f"unknown({r},{count})"


def minimal_grading(rd: RootDatum) -> MinimalGradingData:
    grading = check_grading(rd)
    nat = [r for r in rd.roots if rd.ip(r.vector, rd.theta) == 0]
    vectors = {r.vector for r in rd.roots}

    uf = _UnionFind(len(nat))
    for i, j in combinations(range(len(nat)), 2):
        a, b = nat[i].vector, nat[j].vector
        if rd.ip(a, b) != 0 or _add(a, b) in vectors or _add(a, b) == _zero(len(a)):
            uf.union(i, j)

    simple: List[Component] = []
    for group in uf.groups():
        roots = tuple(nat[i] for i in group)
        comp_rank = gram_rank(rd.form, [r.vector for r in roots])
        theta_i = max((r.vector for r in roots), key=rd.positive_key)
        rho_i = rho_vector(rd, roots)
        h_i = (rd.ip(theta_i, theta_i) + 2 * rd.ip(theta_i, rho_i)) / 2
        simple.append(Component(
            index=-1,
            roots=roots,
            rank=comp_rank,
            label=lie_type(rd, roots, comp_rank),
            theta=theta_i,
            rho=rho_i,
            h_vee=h_i,
        ))
    simple.sort(key=lambda c: (c.dim_even + c.dim_odd, sorted(r.vector for r in c.roots)))

    center_dim = (rd.rank - 1) - sum(c.rank for c in simple)
    if center_dim not in (0, 1):
        raise GradingViolation(f"{rd.algebra}: center of g^♮ has dimension {center_dim}")

    components: List[Component] = []
    if center_dim == 1:
        components.append(Component(index=0, roots=(), rank=1, label='center'))
    for i, c in enumerate(simple, start=1):
        c.index = i
        components.append(c)

    rho = rho_vector(rd, rd.roots)
    h_vee = (rd.ip(rd.theta, rd.theta) + 2 * rd.ip(rd.theta, rho)) / 2
    logger.debug(f"{rd.algebra}: g^♮ components {[c.label for c in components]}")
    return MinimalGradingData(rd=rd, grading=grading, components=components, rho=rho, h_vee=h_vee)


def component_dual_coxeter(mg: MinimalGradingData, i: int) -> Fraction:
    return mg.component(i).h_vee


def project(rd: RootDatum, span: Sequence[Vector], mu: Vector) -> Vector:
    """Orthogonal projection of mu onto the span of the given (non-degenerate) vectors."""
    d = len(rd.form)
    if not span:
        return _zero(d)
    basis = [span[i] for i in independent_subset(list(span), d)]
    gram = [[rd.ip(u, v) for v in basis] for u in basis]
    inv = inverse(gram)
    rhs = [rd.ip(mu, b) for b in basis]
    coeffs = [sum(inv[i][j] * rhs[j] for j in range(len(basis))) for i in range(len(basis))]
    out = _zero(d)
    for c, b in zip(coeffs, basis):
        out = _add(out, b, c)
    return out


def restrict_weight(mg: MinimalGradingData, mu: Vector) -> Dict[int, Vector]:
    """Restrictions μ^i of a g_{-1/2} weight to each component, center included."""
    rd = mg.rd
    restrictions: Dict[int, Vector] = {}
    rest = _add(mu, rd.theta, -rd.ip(mu, rd.theta) / 2)
    for c in mg.components:
        if c.is_center:
            continue
        restrictions[c.index] = project(rd, [r.vector for r in c.roots], mu)
        rest = _add(rest, restrictions[c.index], -1)
    if any(c.is_center for c in mg.components):
        restrictions[0] = rest
    # psl(m|m) weights carry a leftover in the radical of the form
    elif any(rd.ip(rest, r.vector) != 0 for r in rd.roots):
        raise VerificationFailure(f"{rd.algebra}: weight {mu} has a center part but g^♮ has no center")
    return dict(sorted(restrictions.items()))


def halfspace_weights(mg: MinimalGradingData) -> HalfSpaceWeights:
    rd = mg.rd
    weights = [r.vector for r in rd.roots if rd.ip(r.vector, rd.theta) == -1]
    nat_vectors = {r.vector for r in mg.nat_roots}
    uf = _UnionFind(len(weights))
    for i, j in combinations(range(len(weights)), 2):
        if _add(weights[i], weights[j], -1) in nat_vectors:
            uf.union(i, j)

    components = []
    for group in uf.groups():
        orbit = tuple(sorted((weights[i] for i in group), key=rd.positive_key, reverse=True))
        mu = orbit[0]
        components.append(HalfSpaceComponent(
            highest_weight=mu,
            restrictions=restrict_weight(mg, mu),
            weights=orbit,
        ))
    components.sort(key=lambda c: rd.positive_key(c.highest_weight), reverse=True)
    if len(components) > 2:
        raise VerificationFailure(f"{rd.algebra}: g_{{-1/2}} has {len(components)} g^♮-components")
    return HalfSpaceWeights(components=components)


def weight_casimir(mg: MinimalGradingData, i: int, mu_i: Vector) -> Fraction:
    rd = mg.rd
    comp = mg.component(i)
    if comp.is_center:
        return rd.ip(mu_i, mu_i)
    return rd.ip(mu_i, _add(mu_i, comp.rho, 2))


def superdimensions(rd: RootDatum, mg: Optional[MinimalGradingData] = None) -> Dict:
    """Superdimensions of g, g_0, g_{1/2} and of every g^♮ component."""
    mg = mg or minimal_grading(rd)

    def sdim(roots) -> int:
        return sum(1 if r.is_even else -1 for r in roots)

    sdim_g = sdim(rd.roots) + rd.rank
    sdim_g0 = sdim(r for r in rd.roots if rd.ip(r.vector, rd.theta) == 0) + rd.rank
    sdim_ghalf = sdim(r for r in rd.roots if rd.ip(r.vector, rd.theta) == 1)
    if sdim_g0 != sdim_g - 2 * sdim_ghalf - 2:
        raise VerificationFailure(f"{rd.algebra}: sdim g_0 = {sdim_g0} inconsistent with sdim g")
    return {
        'sdim_g': Fraction(sdim_g),
        'sdim_g0': Fraction(sdim_g0),
        'sdim_ghalf': Fraction(sdim_ghalf),
        'components': {c.index: c.sdim for c in mg.components},
    }


def minimal_roots(rd: RootDatum) -> List[Vector]:
    """Even roots η satisfying the minimal-grading criterion when rescaled to (η|η) = 2."""
    found = []
    for eta in (r.vector for r in rd.roots if r.is_even):
        norm = rd.ip(eta, eta)
        if norm == 0:
            continue
        neg = _scale(eta, -1)
        ok = True
        for beta in rd.roots:
            value = 2 * rd.ip(beta.vector, eta) / norm
            if value not in (-2, -1, 0, 1, 2) or (abs(value) == 2 and beta.vector not in (eta, neg)):
                ok = False
                break
        if ok:
            found.append(eta)
    return found


def canonical_d21a(a) -> Tuple[Fraction, FrozenSet[Fraction]]:
    """Orbit of a under a -> 1/a and a -> -1-a, with a deterministic representative."""
    orbit = {to_fraction(a)}
    frontier = list(orbit)
    while frontier:
        x = frontier.pop()
        for y in (1 / x if x else None, -1 - x):
            if y is not None and y not in orbit:
                orbit.add(y)
                frontier.append(y)
    rep = min(orbit, key=lambda x: (abs(x.numerator) + x.denominator, -x))
    return rep, frozenset(orbit)
