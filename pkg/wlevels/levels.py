"""
Level Classification
Collapsing, trivial and conformal levels of minimal W-algebras, central
charges, collapse targets and collapse chains.

Everything here is driven by the root data of rootcat; p(k) comes from the
catalog. Levels are Fractions, level-dependent quantities are PolyK/RatFunK.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Dict, FrozenSet, List, Optional, Tuple

from .catalog import AlgebraId, ClosedForms, Family, get_catalog
from .errors import (
    ExcludedAlgebra,
    InconsistentPairs,
    InvalidParameter,
    MismatchAt,
    NotCollapsing,
    SetMismatch,
    VerificationFailure,
)
from .exactmath import (
    ALL_K,
    PolyK,
    RatFunK,
    format_scalar,
    poly_divides,
    rational_roots,
    ratfun_equal_solutions,
    to_fraction,
)
from .rootcat import (
    MinimalGradingData,
    RootDatum,
    build_catalog_entry,
    dual_coxeter,
    halfspace_weights,
    minimal_grading,
    superdimensions,
    weight_casimir,
)

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)
THREE_HALVES = Fraction(3, 2)


class ExclusionReason(str, Enum):
    CRITICAL = 'critical'
    COLLAPSING = 'collapsing'
    KI_ZERO = 'ki_zero'
    SUGAWARA_POLE = 'sugawara_pole'


@dataclass
class ComponentLevel:
    """One g^♮ component with its level shift k_i = k + (h∨ - h∨_0,i)/2."""

    index: int
    label: str
    h_vee: Fraction
    k_i: PolyK
    sdim: Fraction
    theta_norm: Fraction = Fraction(2)

    @property
    def is_center(self) -> bool:
        return self.label == 'center'


@dataclass
class LevelClassification:
    algebra: AlgebraId
    h_vee: Fraction
    components: List[ComponentLevel]
    p_of_k: PolyK
    collapsing: FrozenSet[Fraction]
    trivial: FrozenSet[Fraction]
    conformal_noncollapsing: FrozenSet[Fraction]
    excluded: List[Tuple[Fraction, ExclusionReason]]
    c_g: RatFunK
    c_sug: RatFunK
    candidates: FrozenSet[Fraction] = frozenset()
    candidate_polys: List[PolyK] = field(default_factory=list)

    @property
    def conformal(self) -> FrozenSet[Fraction]:
        """Collapsing levels in 𝒦 together with the non-collapsing conformal ones."""
        return frozenset(k for k in self.collapsing if in_admissible_set(self, k)) | self.conformal_noncollapsing


@dataclass
class TargetFactor:
    index: int
    label: str
    level: Fraction
    own_level: Fraction

    @property
    def is_heisenberg(self) -> bool:
        return self.label == 'center'


@dataclass
class CollapseTarget:
    algebra: AlgebraId
    k: Fraction
    factors: List[TargetFactor]

    @property
    def is_trivial(self) -> bool:
        return not self.factors


@dataclass
class ChainStep:
    algebra: str
    level: Fraction


@dataclass
class ChainResult:
    steps: List[ChainStep]
    endpoint: str
    central_charge: Optional[Fraction] = None
    detail: str = ''


# =============================================================================
# ROOT-DATA DRIVEN INGREDIENTS
# =============================================================================


@dataclass
class _LevelData:
    rd: RootDatum
    mg: MinimalGradingData
    h_vee: Fraction
    sdim: Dict
    forms: ClosedForms
    components: List[ComponentLevel]


@lru_cache(maxsize=None)
def _level_data(alg: AlgebraId) -> _LevelData:
    rd = build_catalog_entry(alg)
    mg = minimal_grading(rd)
    h_vee = dual_coxeter(rd)
    dims = superdimensions(rd, mg)
    components = []
    for comp in mg.components:
        components.append(ComponentLevel(
            index=comp.index,
            label=comp.label,
            h_vee=comp.h_vee,
            k_i=PolyK.linear((h_vee - comp.h_vee) / 2),
            sdim=comp.sdim,
            theta_norm=rd.ip(comp.theta, comp.theta) if comp.theta is not None else Fraction(2),
        ))
    return _LevelData(
        rd=rd,
        mg=mg,
        h_vee=h_vee,
        sdim=dims,
        forms=get_catalog().closed_forms(alg),
        components=components,
    )


def central_charge_function(h_vee: Fraction, sdim: Fraction) -> RatFunK:
    """c(g, k) = k sdim g/(k + h∨) - 6k + h∨ - 4."""
    h_vee, sdim = to_fraction(h_vee), to_fraction(sdim)
    return RatFunK(PolyK((0, sdim)), PolyK.linear(h_vee)) + PolyK((h_vee - 4, -6))


def central_charge(alg: AlgebraId) -> RatFunK:
    data = _level_data(alg)
    return central_charge_function(data.h_vee, data.sdim['sdim_g'])


def _sugawara_term(comp: ComponentLevel) -> RatFunK:
    if comp.is_center:
        return RatFunK(1)
    return RatFunK(comp.k_i * comp.sdim, comp.k_i + comp.h_vee)


def sugawara_central_charge(alg: AlgebraId) -> RatFunK:
    """Central charge of the Sugawara vector of the affine part, generic branch."""
    total = RatFunK(0)
    for comp in _level_data(alg).components:
        total = total + _sugawara_term(comp)
    return total


def sugawara_at(alg: AlgebraId, k) -> Optional[Fraction]:
    """
    c_sug at a single level, dropping the components with k_i = 0.

    Returns None when a surviving component sits at its critical level.
    """
    k = to_fraction(k)
    total = Fraction(0)
    for comp in _level_data(alg).components:
        if comp.k_i(k) == 0:
            continue
        value = _sugawara_term(comp)(k)
        if value is None:
            return None
        total += value
    return total


def in_admissible_set(cls_or_alg, k) -> bool:
    """Membership in 𝒦: k ≠ -h∨ and k_i + h∨_0,i ≠ 0 whenever k_i ≠ 0."""
    alg = cls_or_alg.algebra if isinstance(cls_or_alg, LevelClassification) else cls_or_alg
    data = _level_data(alg)
    k = to_fraction(k)
    if k == -data.h_vee:
        return False
    for comp in data.components:
        ki = comp.k_i(k)
        if ki != 0 and ki + comp.h_vee == 0:
            return False
    return True


# =============================================================================
# CLASSIFICATION
# =============================================================================


def _conformal_polynomials(data: _LevelData) -> List[PolyK]:
    """Cleared denominators of the weight-3/2 condition, one per g_{-1/2} component."""
    halves = halfspace_weights(data.mg)
    denominators = {c.index: (c.k_i + c.h_vee) * 2 for c in data.components}
    polys = []
    for hc in halves.components:
        total = PolyK()
        for comp in data.components:
            mu_i = hc.restrictions.get(comp.index)
            if mu_i is None:
                continue
            wc = weight_casimir(data.mg, comp.index, mu_i)
            if wc == 0:
                continue
            term = PolyK.constant(wc)
            for other in data.components:
                if other.index != comp.index:
                    term = term * denominators[other.index]
            total = total + term
        product = PolyK.constant(THREE_HALVES)
        for comp in data.components:
            product = product * denominators[comp.index]
        polys.append(total - product)
    return polys


def _exclusion(data: _LevelData, p: PolyK, k: Fraction) -> Optional[ExclusionReason]:
    if k == -data.h_vee:
        return ExclusionReason.CRITICAL
    if p(k) == 0:
        return ExclusionReason.COLLAPSING
    if any(c.k_i(k) == 0 for c in data.components):
        return ExclusionReason.KI_ZERO
    if any(c.k_i(k) + c.h_vee == 0 for c in data.components):
        return ExclusionReason.SUGAWARA_POLE
    return None


def allowed_conformal(h_vee: Fraction) -> FrozenSet[Fraction]:
    return frozenset({-2 * h_vee / 3, -(h_vee - 1) / 2})


def classify(alg: AlgebraId) -> LevelClassification:
    """
    Classify the levels of W_k(g, θ).

    Returns:
        LevelClassification with the collapsing, trivial and conformal
        non-collapsing levels and the exclusion ledger of every candidate.
    """
    data = _level_data(alg)
    h_vee = data.h_vee
    p = data.forms.p_of_k

    roots, splits = rational_roots(p)
    if not splits:
        logger.warning(f"{alg}: p(k) = {p} does not split over QQ")
    collapsing = frozenset(r for r in roots if r != -h_vee)
    trivial = frozenset(r for r in collapsing if all(c.k_i(r) == 0 for c in data.components))

    polys = _conformal_polynomials(data)
    candidate_sets = []
    for poly in polys:
        if poly.is_zero():
            raise VerificationFailure(f"{alg}: conformal weight condition holds identically")
        found, _ = rational_roots(poly)
        candidate_sets.append(found)
    if any(s != candidate_sets[0] for s in candidate_sets[1:]):
        raise InconsistentPairs(
            f"{alg}: g_{{-1/2}} components give different conformal candidates {candidate_sets}"
        )
    candidates = candidate_sets[0] if candidate_sets else frozenset()

    excluded: List[Tuple[Fraction, ExclusionReason]] = []
    conformal = set()
    for r in sorted(candidates):
        reason = _exclusion(data, p, r)
        if reason is None:
            conformal.add(r)
        else:
            excluded.append((r, reason))
            logger.debug(f"{alg}: candidate {format_scalar(r)} discarded ({reason.value})")

    stray = conformal - allowed_conformal(h_vee)
    if stray:
        raise VerificationFailure(
            f"{alg}: conformal levels {sorted(stray)} outside {{-2h∨/3, -(h∨-1)/2}}"
        )

    logger.info(f"Classified {alg}: collapsing {sorted(collapsing)}, conformal {sorted(conformal)}")
    return LevelClassification(
        algebra=alg,
        h_vee=h_vee,
        components=data.components,
        p_of_k=p,
        collapsing=collapsing,
        trivial=trivial,
        conformal_noncollapsing=frozenset(conformal),
        excluded=excluded,
        c_g=central_charge(alg),
        c_sug=sugawara_central_charge(alg),
        candidates=candidates,
        candidate_polys=polys,
    )


def trivial_levels(alg: AlgebraId) -> FrozenSet[Fraction]:
    return classify(alg).trivial


# =============================================================================
# COLLAPSE TARGETS AND CHAINS
# =============================================================================


def collapse_target(alg: AlgebraId, k) -> CollapseTarget:
    """The affine factors V_{k_i}(g_i^♮) with k_i ≠ 0 that W_k(g, θ) collapses to."""
    k = to_fraction(k)
    data = _level_data(alg)
    p = data.forms.p_of_k
    if k == -data.h_vee or p(k) != 0:
        raise NotCollapsing(f"{alg}: k = {format_scalar(k)} is not a collapsing level (p(k) = {p})")
    factors = []
    for comp in data.components:
        level = comp.k_i(k)
        if level == 0:
            continue
        factors.append(TargetFactor(
            index=comp.index,
            label=comp.label,
            level=level,
            own_level=level * comp.theta_norm / 2,
        ))
    return CollapseTarget(algebra=alg, k=k, factors=factors)


def virasoro_central_charge(k) -> Fraction:
    k = to_fraction(k)
    return 3 * k / (k + 2) - 6 * k - 2


def _factor_algebra(label: str) -> Optional[AlgebraId]:
    """Catalog algebra of a simple Lie factor, or None when there is none."""
    exceptional = {'G2': ('G', 2), 'F4': ('F', 4), 'E_6': ('E', 6), 'E_7': ('E', 7), 'E_8': ('E', 8)}
    try:
        if label in exceptional:
            return AlgebraId(Family.LIE, exceptional[label])
        letter, _, rank = label.partition('_')
        if not rank.isdigit():
            return None
        r = int(rank)
        if letter == 'A':
            return AlgebraId(Family.SL, (r + 1, 0))
        if letter == 'B':
            return AlgebraId(Family.OSP, (2 * r + 1, 0))
        if letter == 'C':
            return AlgebraId(Family.SPO, (2 * r, 0))
        if letter == 'D':
            return AlgebraId(Family.OSP, (2 * r, 0))
    except (ExcludedAlgebra, InvalidParameter):
        return None
    return None


def collapse_chain(alg: AlgebraId, k) -> ChainResult:
    """Iterate collapse targets while a single simple factor sits at a collapsing level."""
    k = to_fraction(k)
    steps = [ChainStep(str(alg), k)]
    current, level = alg, k
    while True:
        target = collapse_target(current, level)
        if target.is_trivial:
            return ChainResult(steps, 'trivial', Fraction(0), 'C1')
        if len(target.factors) > 1:
            labels = ', '.join(f.label for f in target.factors)
            return ChainResult(steps, 'multi_factor', detail=labels)
        factor = target.factors[0]
        if factor.is_heisenberg:
            return ChainResult(steps, 'heisenberg', Fraction(1), 'M(1)')
        if factor.label == 'A_1':
            steps.append(ChainStep('sl(2)', factor.own_level))
            return ChainResult(steps, 'virasoro', virasoro_central_charge(factor.own_level), 'Virasoro')

        nxt = _factor_algebra(factor.label)
        if nxt is None:
            return ChainResult(steps, 'affine', detail=f"{factor.label} at {format_scalar(factor.own_level)}")
        steps.append(ChainStep(str(nxt), factor.own_level))
        nxt_data = _level_data(nxt)
        if factor.own_level == -nxt_data.h_vee or nxt_data.forms.p_of_k(factor.own_level) != 0:
            return ChainResult(steps, 'affine', detail=f"{nxt} at {format_scalar(factor.own_level)}")
        logger.debug(f"chain {alg}: {current} at {level} -> {nxt} at {factor.own_level}")
        current, level = nxt, factor.own_level


# =============================================================================
# CONFORMAL-LEVEL SET CHECKS
# =============================================================================


def check_corollary48(alg: AlgebraId) -> Dict:
    """
    Solve c(g, k) = c_sug with the branch at k_i = 0 and compare with the classification.

    Raises:
        SetMismatch when the solution set differs from the collapsing levels in 𝒦
        together with the conformal non-collapsing levels.
    """
    cls = classify(alg)
    data = _level_data(alg)
    generic = ratfun_equal_solutions(cls.c_g, cls.c_sug, excluded_poles=[-data.h_vee])
    if generic is ALL_K:
        raise VerificationFailure(f"{alg}: c(g, k) = c_sug holds identically")

    special = {-(data.h_vee - c.h_vee) / 2 for c in data.components}
    solutions = set(generic) - special
    branch = {}
    for r in sorted(special):
        if r == -data.h_vee:
            continue
        c_g = cls.c_g(r)
        c_sug = sugawara_at(alg, r)
        branch[r] = (c_g, c_sug)
        if c_g is not None and c_sug is not None and c_g == c_sug:
            solutions.add(r)

    expected = cls.conformal
    if solutions != expected:
        raise SetMismatch(f"{alg} c(g,k) = c_sug", expected - solutions, solutions - expected)
    return {
        'algebra': str(alg),
        'solutions': sorted(solutions),
        'special_levels': sorted(special),
        'branch_values': branch,
    }


def check_prop41(alg: AlgebraId) -> List[Fraction]:
    """Every collapsing level in 𝒦 has c(g, k) = c_sug."""
    cls = classify(alg)
    checked = []
    for k in sorted(cls.collapsing):
        if not in_admissible_set(alg, k):
            continue
        c_g, c_sug = cls.c_g(k), sugawara_at(alg, k)
        if c_g != c_sug:
            raise MismatchAt(f"{alg} at k = {format_scalar(k)}", 'collapsing level not conformal',
                             (c_g, c_sug))
        checked.append(k)
    return checked


def check_level_shifts(alg: AlgebraId) -> Dict[int, bool]:
    """Each k_i divides p(k)."""
    data = _level_data(alg)
    p = data.forms.p_of_k
    result = {}
    for comp in data.components:
        result[comp.index] = poly_divides(comp.k_i, p)
        if not result[comp.index]:
            raise MismatchAt(str(alg), f"k_{comp.index} does not divide p(k)", str(comp.k_i))
    return result


def check_halfspace_casimir(alg: AlgebraId) -> List[Fraction]:
    """Σ_i (μ^i|μ^i + 2ρ^i) over each g_{-1/2} component equals h∨ - 3/2."""
    data = _level_data(alg)
    totals = []
    for hc in halfspace_weights(data.mg).components:
        total = sum(
            (weight_casimir(data.mg, i, mu_i) for i, mu_i in hc.restrictions.items()),
            Fraction(0),
        )
        if total != data.h_vee - THREE_HALVES:
            raise MismatchAt(str(alg), 'g^♮ Casimir on g_{-1/2}', total - (data.h_vee - THREE_HALVES))
        totals.append(total)
    return totals


# =============================================================================
# UNIFORM FORMULAS
# =============================================================================


def deligne_shape(alg: AlgebraId) -> bool:
    """Algebras whose minimal W-algebra is trivial at k = -h∨/6 - 1."""
    f, p = alg.family, alg.params
    if f in (Family.PSL, Family.F4SUPER, Family.G3SUPER, Family.LIE):
        return True
    if f == Family.SL:
        return p == (3, 0)
    if f == Family.OSP:
        return p == (8, 0) or (p[1] >= 2 and p[0] - p[1] == 8)
    if f == Family.SPO:
        return p == (2, 1)
    return False


def check_uniform_h0(alg: AlgebraId) -> Dict:
    """h∨_0 = 2h∨/3 - 2 on the Deligne-type list and h∨_0 = h∨ - 1 for spo."""
    data = _level_data(alg)
    expected = None
    if alg.family == Family.SPO:
        expected, shape = data.h_vee - 1, 'spo'
    elif deligne_shape(alg):
        expected, shape = 2 * data.h_vee / 3 - 2, 'deligne'
    if expected is None:
        return {'shape': None}
    for comp in data.components:
        if comp.h_vee != expected:
            raise MismatchAt(f"{alg} component {comp.index}", f"uniform h∨_0 ({shape})",
                             comp.h_vee - expected)
    return {'shape': shape, 'h0': expected}


def _closed_form_targets(alg: AlgebraId, h: Fraction) -> Optional[Tuple[str, Fraction, PolyK]]:
    if alg.family == Family.SPO:
        return 'spo', (2 * h - 1) * (h - 1), PolyK.from_roots([-HALF, -(h + 1) / 2])
    if deligne_shape(alg):
        return ('deligne', 2 * (h + 1) * (5 * h - 6) / (h + 6),
                PolyK.from_roots([-(h / 6 + 1), -h / 3]))
    if alg.family == Family.SL:
        return 'sl', h * h - 1, PolyK.from_roots([-1, -h / 2])
    if alg.family == Family.OSP:
        return 'osp', (h + 1) * (h + 2) / 2, PolyK.from_roots([-2, -(h - 2) / 2])
    return None


def check_closed_forms(alg: AlgebraId) -> Dict:
    """Family closed forms for sdim g and p(k) against the root data and the catalog."""
    data = _level_data(alg)
    h = data.h_vee
    if data.forms.h_vee != h:
        raise MismatchAt(str(alg), 'h∨ (catalog vs root data)', data.forms.h_vee - h)
    if data.forms.sdim != data.sdim['sdim_g']:
        raise MismatchAt(str(alg), 'sdim g (catalog vs root data)', data.forms.sdim - data.sdim['sdim_g'])
    target = _closed_form_targets(alg, h)
    if target is None:
        return {'shape': None}
    shape, sdim, p = target
    if sdim != data.sdim['sdim_g']:
        raise MismatchAt(str(alg), f"sdim g ({shape} closed form)", sdim - data.sdim['sdim_g'])
    if p != data.forms.p_of_k:
        raise MismatchAt(str(alg), f"p(k) ({shape} closed form)", str(p - data.forms.p_of_k))
    return {'shape': shape, 'sdim': sdim, 'p_of_k': p}


def check_uniform_pk(alg: AlgebraId) -> Optional[PolyK]:
    """
    p(k) = -1/6 {(k + h∨)c(g,k) - (k + (h∨ - h∨_0)/2)(sdim g_0 + sdim g_1/2)}
    whenever every component has the same h∨_0.
    """
    data = _level_data(alg)
    values = {c.h_vee for c in data.components}
    if len(values) != 1:
        return None
    h0 = values.pop()
    pole = central_charge(alg) * PolyK.linear(data.h_vee)
    if not pole.is_polynomial():
        raise VerificationFailure(f"{alg}: (k + h∨)c(g,k) has a pole")
    dims = data.sdim['sdim_g0'] + data.sdim['sdim_ghalf']
    p = (pole.num - PolyK.linear((data.h_vee - h0) / 2) * dims) * Fraction(-1, 6)
    if p != data.forms.p_of_k:
        raise MismatchAt(str(alg), 'p(k) from c(g,k) and h∨_0', str(p - data.forms.p_of_k))
    return p


def check_remark33(alg: AlgebraId) -> Dict:
    """W_{-2}(so(2n)) = V_{n-4}(sl(2)), with matching central charge."""
    if alg.family != Family.OSP or alg.params[1] != 0 or alg.params[0] % 2:
        raise InvalidParameter(f"{alg}: only so(2n) applies")
    n = alg.params[0] // 2
    target = collapse_target(alg, -2)
    level = Fraction(n - 4)
    if level == 0:
        if not target.is_trivial:
            raise MismatchAt(str(alg), 'W_{-2} target', [f.label for f in target.factors])
    elif len(target.factors) != 1 or target.factors[0].label != 'A_1' or target.factors[0].own_level != level:
        raise MismatchAt(str(alg), 'W_{-2} target', [(f.label, f.own_level) for f in target.factors])
    c = central_charge(alg)(-2)
    expected = 3 * level / (level + 2)
    if c != expected:
        raise MismatchAt(str(alg), 'c(g, -2) vs V_{n-4}(sl(2))', c - expected)
    return {'n': n, 'level': level, 'central_charge': c}
