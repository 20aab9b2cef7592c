"""
W-Algebra Brackets
λ-bracket coefficients of the generators J^a, G^u of W^k(g, θ), computed from
structure constants, and the checks of the p(k) simplification.

Coefficients are PolyK in the level k. Elements of g^♮ are carried as
coordinate dicts over the g^♮ basis of matrixalg.minimal_grading.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .catalog import AlgebraId
from .errors import (
    InconsistentPairs,
    MismatchAt,
    NoNondegeneratePair,
    PoleNotCancelled,
    VerificationFailure,
)
from .exactmath import PolyK, RatFunK, format_scalar, poly_divides
from .levels import central_charge_function
from .linalg import Vec, vadd
from .matrixalg import (
    SuperMatrixAlgebra,
    dual_basis,
    dual_bases,
    minimal_grading,
    nat_coordinates,
    ne_form,
)
from .rootcat import dual_coxeter, superdimensions

logger = logging.getLogger(__name__)

ZERO = PolyK()

Coords = Dict[int, Fraction]


def _add_term(terms: Dict, key, coeff: PolyK) -> None:
    total = terms.get(key, ZERO) + coeff
    if total.is_zero():
        terms.pop(key, None)
    else:
        terms[key] = total


def _scaled(coords: Coords, coeff: PolyK) -> Dict[int, PolyK]:
    out: Dict[int, PolyK] = {}
    for i, c in coords.items():
        _add_term(out, i, coeff * c)
    return out


def _merge(*parts: Dict) -> Dict:
    out: Dict = {}
    for part in parts:
        for key, coeff in part.items():
            _add_term(out, key, coeff)
    return out


@dataclass
class JJBracket:
    """[J^a_λ J^b] = J^{[a,b]} + λ·scalar."""

    linear: Coords
    scalar: PolyK


@dataclass
class GGBracket:
    """
    [G^u_λ G^v] = λ²·lambda2_scalar + λ·J^{lambda_term} + ω·omega_coeff
                  + quadratic terms + ∂J^{deriv_term}.

    quad_casimir and quad_gamma are the two normally ordered sums, as ordered
    pairs of g^♮ basis indices before reordering.
    """

    u: Vec
    v: Vec
    pairing: Fraction
    omega_coeff: PolyK = ZERO
    quad_casimir: Dict[Tuple[int, int], PolyK] = field(default_factory=dict)
    quad_gamma: Dict[Tuple[int, int], PolyK] = field(default_factory=dict)
    deriv_term: Dict[int, PolyK] = field(default_factory=dict)
    lambda_term: Dict[int, PolyK] = field(default_factory=dict)
    lambda2_scalar: PolyK = ZERO

    @property
    def quad_terms(self) -> Dict[Tuple[int, int], PolyK]:
        return _merge(self.quad_casimir, self.quad_gamma)

    def is_zero(self) -> bool:
        return (
            self.omega_coeff.is_zero()
            and not self.quad_terms
            and not self.deriv_term
            and not self.lambda_term
            and self.lambda2_scalar.is_zero()
        )


@dataclass
class PkResult:
    p: PolyK
    per_pair_witnesses: List[Tuple[str, str, PolyK]]


# =============================================================================
# PER-ALGEBRA CONTEXT
# =============================================================================


class WContext:
    """Cached data shared by every bracket of one realized algebra."""

    def __init__(self, A: SuperMatrixAlgebra):
        self.A = A
        self.grading = minimal_grading(A)
        self.duals = dual_bases(A)
        self.h_vee = dual_coxeter(A.rd)
        dims = superdimensions(A.rd, A.mg)
        self.sdim_g = dims['sdim_g']
        self.components = A.mg.components
        self.sdim_nat = sum((c.sdim for c in self.components), Fraction(0))
        self.k_shift = {c.index: (self.h_vee - c.h_vee) / 2 for c in self.components}
        self.c_g = central_charge_function(self.h_vee, self.sdim_g)

        pole = RatFunK(PolyK.linear(self.h_vee)) * self.c_g
        if not pole.is_polynomial():
            raise PoleNotCancelled(f"{A.algebra}: (k+h∨)c(g,k) = {pole} is not a polynomial")
        h0_term = sum((c.h_vee * c.sdim for c in self.components), Fraction(0)) / 2
        self.lambda2_constant = (
            -pole.num + PolyK.linear(self.h_vee / 2) * self.sdim_nat - h0_term
        )

        nat = self.grading.nat_basis
        upper = self.grading.pieces[Fraction(1, 2)] + self.grading.pieces[Fraction(1)]
        self.nat_gram = [[A.ip(a, b) for b in nat] for a in nat]
        self.nat_trace = [[A.supertrace(a, b, upper) for b in nat] for a in nat]
        self.nat_parity = [A.parity(a) for a in nat]
        self.nat_brackets: Dict[Tuple[int, int], Coords] = {}

        half = self.grading.pieces[Fraction(-1, 2)]
        self.minus_half = [{i: Fraction(1)} for i in half]
        self._casimir_pairs = self._casimir_quadratic(self.duals.nat_dual)
        self._sheared_duals = None
        logger.debug(f"{A.algebra}: W context ready, dim g^♮ = {len(nat)}, dim g_-1/2 = {len(half)}")

    def k_i(self, i: int) -> PolyK:
        return PolyK.linear(self.k_shift[i])

    def nat(self, a: Vec) -> Coords:
        if not a:
            return {}
        return nat_coordinates(self.A, a)

    def cprime(self, a: Coords, b: Coords) -> PolyK:
        """c′(a, b) = k(a|b) + ½ str_{g_1/2 ⊕ g_1}(ad a ad b)."""
        form = Fraction(0)
        trace = Fraction(0)
        for i, x in a.items():
            for j, y in b.items():
                form += x * y * self.nat_gram[i][j]
                trace += x * y * self.nat_trace[i][j]
        return PolyK((trace / 2, form))

    def nat_bracket(self, i: int, j: int) -> Coords:
        key = (i, j)
        if key not in self.nat_brackets:
            nat = self.grading.nat_basis
            self.nat_brackets[key] = self.nat(self.A.bracket(nat[i], nat[j]))
        return self.nat_brackets[key]

    def _casimir_quadratic(self, duals: List[Vec]) -> Dict[Tuple[int, int], PolyK]:
        """Σ_α :J^{a^α} J^{a_α}: expanded over basis pairs."""
        pairs: Dict[Tuple[int, int], PolyK] = {}
        for alpha, dual in enumerate(duals):
            for beta, c in self.nat(dual).items():
                _add_term(pairs, (beta, alpha), PolyK.constant(c))
        return pairs

    def componentwise_casimir(self) -> Dict[Tuple[int, int], PolyK]:
        """The same sum with dual bases taken inside each g_i^♮ separately."""
        pairs: Dict[Tuple[int, int], PolyK] = {}
        nat = self.grading.nat_basis
        for comp in self.components:
            idx = self.grading.component_indices(comp.index)
            local = dual_basis([nat[a] for a in idx], self.A.ip)
            for alpha, dual in zip(idx, local):
                for beta, c in self.nat(dual).items():
                    _add_term(pairs, (beta, alpha), PolyK.constant(c))
        return pairs

    def gamma_terms(self, u: Vec, v: Vec) -> List[Tuple[Coords, Coords, Vec]]:
        """([u, u^γ]^♮, [u_γ, v]^♮, [[u, u^γ], [u_γ, v]]) for every γ."""
        A = self.A
        out = []
        for u_g, u_dual in zip(self.duals.half, self.duals.half_dual):
            left = A.bracket(u, u_dual)
            right = A.bracket(u_g, v)
            if not left and not right:
                continue
            out.append((self.nat(left), self.nat(right), A.bracket(left, right)))
        return out

    def theta_term(self, u: Vec, v: Vec) -> Coords:
        """[[e_θ, u], v]^♮ in g^♮ coordinates."""
        return self.nat(self.A.bracket(self.A.bracket(self.A.e_theta, u), v))

    def sheared_duals(self):
        """Sheared bases of g^♮ and g_1/2 with their dual bases, built once."""
        if self._sheared_duals is None:
            A = self.A
            nat = _sheared(self.grading.nat_basis)
            half = _sheared(self.duals.half)
            self._sheared_duals = (
                nat, dual_basis(nat, A.ip),
                half, dual_basis(half, lambda a, b: ne_form(A, a, b)),
            )
        return self._sheared_duals


_contexts: Dict[AlgebraId, WContext] = {}


def context(A: SuperMatrixAlgebra) -> WContext:
    ctx = _contexts.get(A.algebra)
    if ctx is None or ctx.A is not A:
        ctx = WContext(A)
        _contexts[A.algebra] = ctx
    return ctx


# =============================================================================
# BRACKETS
# =============================================================================


def ope_JJ(A: SuperMatrixAlgebra, a: Vec, b: Vec) -> JJBracket:
    """[J^a_λ J^b] with λ-scalar (k + h∨/2)(a|b) − κ_0(a,b)/4."""
    ctx = context(A)
    kappa0 = A.supertrace(a, b, ctx.grading.pieces[Fraction(0)])
    form = A.ip(a, b)
    scalar = PolyK.linear(ctx.h_vee / 2) * form - kappa0 / 4
    return JJBracket(linear=ctx.nat(A.bracket(a, b)), scalar=scalar)


def check_jj_levels(A: SuperMatrixAlgebra) -> Dict[int, str]:
    """On each g_i^♮ the J–J λ-scalar must be k_i(a|b)."""
    ctx = context(A)
    nat = ctx.grading.nat_basis
    levels = {}
    for comp in ctx.components:
        for alpha in ctx.grading.component_indices(comp.index):
            a, b = nat[alpha], ctx.duals.nat_dual[alpha]
            scalar = ope_JJ(A, a, b).scalar
            expected = ctx.k_i(comp.index) * A.ip(a, b)
            if scalar != expected:
                raise MismatchAt((comp.label, ctx.grading.nat_labels[alpha]), 'J-J level', str(scalar - expected))
        levels[comp.index] = str(ctx.k_i(comp.index))
    return levels


def lambda2_scalar(A: SuperMatrixAlgebra, u: Vec, v: Vec) -> PolyK:
    """The λ² coefficient of [G^u_λ G^v] assembled from structure constants."""
    ctx = context(A)
    pairing = A.ip(A.e_theta, A.bracket(u, v))
    total = ctx.lambda2_constant * pairing
    for left, right, _ in ctx.gamma_terms(u, v):
        total = total + ctx.cprime(left, right)
    return total / 3


def ope_GG_full(A: SuperMatrixAlgebra, u: Vec, v: Vec) -> GGBracket:
    ctx = context(A)
    pairing = A.ip(A.e_theta, A.bracket(u, v))
    bracket = GGBracket(u=u, v=v, pairing=pairing)

    lambda_term: Dict[int, PolyK] = {}
    quad_gamma: Dict[Tuple[int, int], PolyK] = {}
    lambda2 = ctx.lambda2_constant * pairing
    for left, right, nested in ctx.gamma_terms(u, v):
        lambda2 = lambda2 + ctx.cprime(left, right)
        if nested:
            lambda_term = _merge(lambda_term, _scaled(ctx.nat(nested), PolyK.constant(1)))
        for i, x in left.items():
            for j, y in right.items():
                _add_term(quad_gamma, (i, j), PolyK.constant(x * y))

    theta = ctx.theta_term(u, v)
    k_plus_1 = PolyK.linear(1)
    lambda_term = _merge(lambda_term, _scaled(theta, k_plus_1 * 4))

    bracket.lambda2_scalar = lambda2 / 3
    bracket.lambda_term = lambda_term
    bracket.omega_coeff = PolyK.linear(ctx.h_vee) * (-2 * pairing)
    if pairing:
        bracket.quad_casimir = {key: c * pairing for key, c in ctx._casimir_pairs.items()}
    bracket.quad_gamma = quad_gamma
    bracket.deriv_term = _scaled(theta, k_plus_1 * 2)
    return bracket


def ope_GG_simplified(A: SuperMatrixAlgebra, u: Vec, v: Vec, p: PolyK) -> GGBracket:
    """The bracket in its closed form with 4λ Σ_i p(k)/k_i J^{[[e_θ,u],v]_i^♮} and 2λ²(e_θ|[u,v])p(k)."""
    ctx = context(A)
    pairing = A.ip(A.e_theta, A.bracket(u, v))
    bracket = GGBracket(u=u, v=v, pairing=pairing)

    theta = ctx.theta_term(u, v)
    lambda_term: Dict[int, PolyK] = {}
    for comp in ctx.components:
        part = {a: c for a, c in theta.items() if ctx.grading.nat_component[a] == comp.index}
        if part:
            quotient = p.exquo(ctx.k_i(comp.index))
            lambda_term = _merge(lambda_term, _scaled(part, quotient * 4))

    quad_gamma: Dict[Tuple[int, int], PolyK] = {}
    for left, right, _ in ctx.gamma_terms(u, v):
        for i, x in left.items():
            for j, y in right.items():
                _add_term(quad_gamma, (i, j), PolyK.constant(x * y))

    bracket.lambda2_scalar = p * (2 * pairing)
    bracket.lambda_term = lambda_term
    bracket.omega_coeff = PolyK.linear(ctx.h_vee) * (-2 * pairing)
    if pairing:
        bracket.quad_casimir = {key: c * pairing for key, c in ctx.componentwise_casimir().items()}
    bracket.quad_gamma = quad_gamma
    bracket.deriv_term = _scaled(theta, PolyK.linear(1) * 2)
    return bracket


def canonical_lambda0(A: SuperMatrixAlgebra, bracket: GGBracket):
    """
    Normal form of the λ⁰ part.

    Pairs are reordered to α ≤ β with :J^a J^b: = (−1)^{p(a)p(b)} :J^b J^a: + ∂J^{[a,b]};
    an odd square :J^a J^a: becomes ½ ∂J^{[a,a]}.

    Returns:
        Tuple of (omega coefficient, ordered pairs, derivative terms)
    """
    ctx = context(A)
    pairs: Dict[Tuple[int, int], PolyK] = {}
    deriv = dict(bracket.deriv_term)
    for (i, j), coeff in bracket.quad_terms.items():
        pi, pj = ctx.nat_parity[i], ctx.nat_parity[j]
        if i < j:
            _add_term(pairs, (i, j), coeff)
        elif i > j:
            sign = -1 if pi and pj else 1
            _add_term(pairs, (j, i), coeff * sign)
            deriv = _merge(deriv, _scaled(ctx.nat_bracket(i, j), coeff))
        elif pi:
            deriv = _merge(deriv, _scaled(ctx.nat_bracket(i, i), coeff / 2))
        else:
            _add_term(pairs, (i, i), coeff)
    return bracket.omega_coeff, pairs, deriv


def _sheared(vectors: List[Vec]) -> List[Vec]:
    """b_α + b_{α+1}, with the last vector kept; a unitriangular change of basis."""
    return [vadd(b, vectors[i + 1]) if i + 1 < len(vectors) else dict(b) for i, b in enumerate(vectors)]


def assemble_lambda0(A: SuperMatrixAlgebra, u: Vec, v: Vec) -> GGBracket:
    """
    The λ⁰ part of [G^u_λ G^v] rebuilt over sheared bases of g^♮ and g_1/2,
    with dual bases computed afresh. Both sums are basis independent.
    """
    ctx = context(A)
    nat, nat_dual, half, half_dual = ctx.sheared_duals()
    pairing = A.ip(A.e_theta, A.bracket(u, v))
    bracket = GGBracket(u=u, v=v, pairing=pairing)
    bracket.omega_coeff = PolyK.linear(ctx.h_vee) * (-2 * pairing)

    if pairing:
        quad_casimir: Dict[Tuple[int, int], PolyK] = {}
        for a, a_dual in zip(nat, nat_dual):
            right = ctx.nat(a)
            for i, x in ctx.nat(a_dual).items():
                for j, y in right.items():
                    _add_term(quad_casimir, (i, j), PolyK.constant(x * y * pairing))
        bracket.quad_casimir = quad_casimir

    quad_gamma: Dict[Tuple[int, int], PolyK] = {}
    for u_g, u_dual in zip(half, half_dual):
        left = ctx.nat(A.bracket(u, u_dual))
        right = ctx.nat(A.bracket(u_g, v))
        for i, x in left.items():
            for j, y in right.items():
                _add_term(quad_gamma, (i, j), PolyK.constant(x * y))
    bracket.quad_gamma = quad_gamma
    bracket.deriv_term = _scaled(ctx.theta_term(u, v), PolyK.linear(1) * 2)
    return bracket


# =============================================================================
# P(K) AND THE BRACKET IDENTITY CHECKS
# =============================================================================


def _label(A: SuperMatrixAlgebra, u: Vec) -> str:
    return A.render(u)


def extract_pk(A: SuperMatrixAlgebra) -> PkResult:
    """p(k) from the λ² coefficient of every pair with (e_θ|[u,v]) ≠ 0."""
    ctx = context(A)
    p: Optional[PolyK] = None
    witnesses = []
    for u in ctx.minus_half:
        for v in ctx.minus_half:
            pairing = A.ip(A.e_theta, A.bracket(u, v))
            if not pairing:
                continue
            candidate = lambda2_scalar(A, u, v) / (2 * pairing)
            witnesses.append((_label(A, u), _label(A, v), candidate))
            if p is None:
                p = candidate
            elif candidate != p:
                raise InconsistentPairs(
                    f"{A.algebra}: pair ({_label(A, u)}, {_label(A, v)}) gives {candidate}, expected {p}"
                )
    if p is None:
        raise NoNondegeneratePair(f"{A.algebra}: (e_θ|[u,v]) vanishes on all of g_-1/2")
    if p.degree != 2 or not p.is_monic():
        raise VerificationFailure(f"{A.algebra}: extracted p(k) = {p} is not a monic quadratic")
    logger.info(f"{A.algebra}: p(k) = {p} from {len(witnesses)} pairs")
    return PkResult(p=p, per_pair_witnesses=witnesses)


def _difference(left: Dict, right: Dict) -> Dict:
    out = dict(left)
    for key, coeff in right.items():
        _add_term(out, key, -coeff)
    return out


def verify_lemma31(A: SuperMatrixAlgebra, p: Optional[PolyK] = None) -> Dict:
    """
    Divisibility k_i | p(k), and agreement of the λ¹, λ² and λ⁰ parts of the
    bracket with the closed form, for every pair of g_-1/2 basis elements.
    The λ⁰ side is compared with assemble_lambda0, over a different basis.
    """
    ctx = context(A)
    p = p or extract_pk(A).p
    divisibility = {}
    for comp in ctx.components:
        k_i = ctx.k_i(comp.index)
        if not poly_divides(k_i, p):
            raise MismatchAt(comp.label, 'k_i divides p(k)', str(p.divmod(k_i)[1]))
        divisibility[comp.index] = str(k_i)

    checked = 0
    for u in ctx.minus_half:
        for v in ctx.minus_half:
            full = ope_GG_full(A, u, v)
            simple = ope_GG_simplified(A, u, v, p)
            where = (_label(A, u), _label(A, v))
            if full.lambda2_scalar != simple.lambda2_scalar:
                raise MismatchAt(where, 'lambda^2', str(full.lambda2_scalar - simple.lambda2_scalar))
            diff = _difference(full.lambda_term, simple.lambda_term)
            if diff:
                raise MismatchAt(where, 'lambda^1', _render_terms(ctx, diff))
            omega_a, pairs_a, deriv_a = canonical_lambda0(A, assemble_lambda0(A, u, v))
            omega_s, pairs_s, deriv_s = canonical_lambda0(A, simple)
            if omega_a != omega_s:
                raise MismatchAt(where, 'lambda^0 omega', str(omega_a - omega_s))
            diff = _difference(pairs_a, pairs_s)
            if diff:
                raise MismatchAt(where, 'lambda^0 quadratic', _render_terms(ctx, diff))
            diff = _difference(deriv_a, deriv_s)
            if diff:
                raise MismatchAt(where, 'lambda^0 derivative', _render_terms(ctx, diff))
            checked += 1
    return {
        'algebra': str(A.algebra),
        'p_of_k': str(p),
        'k_i': divisibility,
        'pairs_checked': checked,
    }


def _render_terms(ctx: WContext, terms: Dict) -> str:
    labels = ctx.grading.nat_labels

    def name(key):
        if isinstance(key, tuple):
            return ':' + ' '.join(f"J^{labels[i]}" for i in key) + ':'
        return f"J^{labels[key]}"

    return ', '.join(f"({coeff})*{name(key)}" for key, coeff in sorted(terms.items()))


def lambda2_form(A: SuperMatrixAlgebra) -> Dict[Tuple[int, int], PolyK]:
    """The λ²-form on g_-1/2 basis pairs, keyed by basis index."""
    ctx = context(A)
    form = {}
    for u in ctx.minus_half:
        for v in ctx.minus_half:
            (i,), (j,) = u, v
            value = lambda2_scalar(A, u, v)
            if not value.is_zero():
                form[(i, j)] = value
    return form


def check_form_properties(A: SuperMatrixAlgebra, p: Optional[PolyK] = None) -> Dict:
    """Super-antisymmetry and g^♮-invariance of the λ²-form."""
    ctx = context(A)
    form = lambda2_form(A)
    indices = [next(iter(u)) for u in ctx.minus_half]
    parity = {i: A.basis[i].parity for i in indices}

    def f(u: Vec, v: Vec) -> PolyK:
        total = ZERO
        for i, x in u.items():
            for j, y in v.items():
                value = form.get((i, j))
                if value is not None:
                    total = total + value * (x * y)
        return total

    for i in indices:
        for j in indices:
            sign = -1 if parity[i] and parity[j] else 1
            if form.get((j, i), ZERO) != form.get((i, j), ZERO) * (-sign):
                raise MismatchAt((A.basis[i].label, A.basis[j].label), 'lambda^2 antisymmetry', str(form.get((i, j), ZERO)))

    nat = ctx.grading.nat_basis
    for alpha, a in enumerate(nat):
        pa = ctx.nat_parity[alpha]
        for i in indices:
            au = A.bracket(a, {i: Fraction(1)})
            for j in indices:
                av = A.bracket(a, {j: Fraction(1)})
                sign = -1 if pa and parity[i] else 1
                total = f(au, {j: Fraction(1)}) + f({i: Fraction(1)}, av) * sign
                if not total.is_zero():
                    where = (ctx.grading.nat_labels[alpha], A.basis[i].label, A.basis[j].label)
                    raise MismatchAt(where, 'lambda^2 invariance', str(total))
    if p is not None:
        for (i, j), value in form.items():
            expected = p * (2 * A.ip(A.e_theta, A.bracket({i: Fraction(1)}, {j: Fraction(1)})))
            if value != expected:
                raise MismatchAt((A.basis[i].label, A.basis[j].label), 'lambda^2 = 2(e_θ|[u,v])p(k)', str(value - expected))
    return {'algebra': str(A.algebra), 'pairs': len(indices) ** 2, 'invariance_elements': len(nat)}


def render_bracket(A: SuperMatrixAlgebra, bracket: GGBracket) -> Dict:
    """Plain-text rendering of every term of a bracket."""
    ctx = context(A)
    omega, pairs, deriv = canonical_lambda0(A, bracket)
    return {
        'u': A.render(bracket.u),
        'v': A.render(bracket.v),
        'pairing': format_scalar(bracket.pairing),
        'lambda2': str(bracket.lambda2_scalar),
        'lambda1': _render_terms(ctx, bracket.lambda_term),
        'omega': str(omega),
        'quadratic': _render_terms(ctx, pairs),
        'derivative': _render_terms(ctx, deriv),
    }
