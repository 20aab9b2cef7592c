"""
Verification Suites
Named acceptance suites: each runs one family of checks over its configured
instance set and collects a report.
"""
import os
import re
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, FrozenSet, List, Optional, Sequence

import yaml

from . import CONFIG_DIR
from .catalog import AlgebraId, Family, get_catalog, parse_algebra
from .errors import (
    InvalidParameter,
    MismatchAt,
    SetMismatch,
    UnsupportedRealization,
    VerificationFailure,
)
from .exactmath import format_scalar
from .exporter import Report, ReportExporter, to_plain
from .goldens import GoldenResult, check_golden, combine_results, golden_body
from .levels import (
    ExclusionReason,
    check_closed_forms,
    check_corollary48,
    check_halfspace_casimir,
    check_level_shifts,
    check_prop41,
    check_remark33,
    check_uniform_h0,
    check_uniform_pk,
    classify,
    collapse_chain,
    trivial_levels,
)
from .matrixalg import (
    casimir_eigenvalue,
    check_antisymmetry,
    check_invariance,
    check_jacobi,
    kappa0_report,
    realize,
)
from .realize import (
    bk_ope_table,
    charge_decomposition,
    check_vacuum_relation,
    verify_59,
    verify_lemma55,
    verify_prop53,
)
from .rootcat import build_catalog_entry, dual_coxeter, minimal_grading, superdimensions
from .settings import RunConfig
from .wstruct import check_form_properties, check_jj_levels, extract_pk, verify_lemma31

logger = logging.getLogger(__name__)

SUITE_NAMES = (
    'table4', 'tables123', 'lemma31', 'prop34', 'props45to47', 'cor48', 'properties', 'classification',
)
REALIZE_PATTERN = re.compile(r'realize-(\d+)$')

Row = Dict


@dataclass
class SuiteResult:
    suite: str
    report: Report
    failures: List[str] = field(default_factory=list)
    golden: Optional[GoldenResult] = None

    @property
    def passed(self) -> bool:
        return not self.failures and not (self.golden and self.golden.failed)


# =============================================================================
# CONFIGURATION
# =============================================================================


def _load_suites(path: Optional[str] = None) -> Dict:
    """Load suite instance sets."""
    path = path or os.path.join(CONFIG_DIR, 'suites.yaml')
    try:
        with open(path, 'r') as f:
            return yaml.safe_load(f)['suites']
    except FileNotFoundError:
        logger.warning("Suites file not found, using defaults")
        return _get_default_suites()


def _get_default_suites() -> Dict:
    """Default suite instance sets if file not found."""
    return {
        'table4': {'instances': [
            'sl(3)', 'sl(4)', 'sl(5)', 'sl(6)', 'sl(2|1)', 'sl(3|2)', 'sl(4|1)', 'sl(2|4)',
            'psl(3|3)', 'psl(4|4)', 'osp(5|2)', 'osp(7|2)', 'spo(4|2)', 'spo(6|2)',
            'spo(2|1)', 'sp(4)', 'sp(6)', 'so(7)', 'so(8)', 'so(9)',
            'D(2,1;2)', 'D(2,1;1/2)', 'D(2,1;-3/2)', 'D(2,1;3)',
        ]},
        'tables123': {'instances': 'sweep'},
        'lemma31': {'instances': ['sl(3)', 'sl(4)', 'sl(2|1)', 'sl(2|3)', 'spo(2|1)', 'spo(4|1)',
                                  'sp(4)', 'osp(4|2)', 'so(7)', 'D(2,1;2)']},
        'prop34': {'instances': 'sweep'},
        'props45to47': {'instances': 'sweep'},
        'cor48': {'instances': 'sweep'},
        'classification': {'instances': 'sweep'},
        'properties': {
            'realized': ['sl(3)', 'sl(4)', 'sl(2|1)', 'sl(3|2)', 'psl(2|2)', 'spo(2|1)',
                         'spo(4|2)', 'sp(4)', 'so(7)', 'so(8)', 'osp(4|2)', 'osp(5|2)',
                         'D(2,1;2)', 'D(2,1;-1/2)'],
            'levels': 'sweep',
            'remark33': ['so(8)', 'so(10)', 'so(12)', 'so(14)'],
        },
        'realize': {'n': [4, 6, 7]},
    }


def resolve_instances(value) -> List[AlgebraId]:
    """A list of spec strings, or the word "sweep" for the catalog sweep."""
    if value == 'sweep':
        return get_catalog().sweep()
    return [parse_algebra(spec) for spec in value]


# =============================================================================
# EXPECTED VALUES STATED CASE BY CASE
# =============================================================================


def _two_levels(alg: AlgebraId):
    h = get_catalog().closed_forms(alg).h_vee
    return -2 * h / 3, -(h - 1) / 2, h


def expected_trivial(alg: AlgebraId) -> FrozenSet[Fraction]:
    """
    Levels with W_k = C1, listed by family.

    -h∨/6 - 1 on the Deligne series, psl(m|m), osp(n+8|n) (n >= 2), F(4),
    G(3) and spo(2|1); -1/2 on every spo(n|m) and the algebras isomorphic to
    one with the same minimal root. The critical level is dropped.
    """
    h = get_catalog().closed_forms(alg).h_vee
    f, p = alg.family, alg.params
    levels = set()
    deligne = (
        f in (Family.LIE, Family.PSL, Family.F4SUPER, Family.G3SUPER)
        or (f == Family.SL and p == (3, 0))
        or (f == Family.OSP and (p == (8, 0) or (p[0] - p[1] == 8 and p[1] >= 2)))
        or (f == Family.SPO and p == (2, 1))
    )
    # sl(2|1) = spo(2|2), so(5) = sp(4), D(2,1;-1/2) = spo(2|4), same minimal root
    spo_alias = (
        (f == Family.SL and p == (2, 1))
        or (f == Family.OSP and p == (5, 0))
        or (f == Family.D21A and p[0] == Fraction(-1, 2))
    )
    if deligne:
        levels.add(-h / 6 - 1)
    if f == Family.SPO or spo_alias:
        levels.add(Fraction(-1, 2))
    return frozenset(k for k in levels if k != -h)


def expected_conformal(alg: AlgebraId) -> FrozenSet[Fraction]:
    """Conformal non-collapsing levels, family by family."""
    two_thirds, shifted, _ = _two_levels(alg)
    f, p = alg.family, alg.params
    both = frozenset({two_thirds, shifted})
    none = frozenset()

    # F(4) with θ in D(2,1;2): the shifted level -1 is a root of p(k)
    if f == Family.F4SUPER and alg.theta_choice == 'D212':
        return none
    if f in (Family.LIE, Family.F4SUPER, Family.G3SUPER, Family.PSL):
        return frozenset({shifted})
    if f == Family.SPO:
        n, m = p
        if m in (n + 2, n - 1, n - 4):
            return none
        return frozenset({two_thirds})
    if f == Family.SL:
        m, n = p
        if (m, n) == (3, 0):
            return none
        # g^♮ is one-dimensional
        if (m, n) == (2, 1):
            return frozenset({two_thirds})
        if n == m - 3:
            return none
        if n in (m + 1, m - 1):
            return frozenset({two_thirds})
        return both
    if f == Family.OSP:
        m, n = p
        d = m - n
        # so(5) = sp(4) with the same minimal root
        if (m, n) == (5, 0):
            return none
        if d == 5 and n >= 2:
            return none
        if d == 8 or (d == 2 and n >= 2) or (d == -4 and n >= 8):
            return frozenset({shifted})
        if d == 7 or (d == 1 and n >= 4):
            return frozenset({two_thirds})
        return both
    if f == Family.D21A:
        if p[0] in (Fraction(1, 2), Fraction(-1, 2), Fraction(-3, 2)):
            return none
        return frozenset({shifted})
    raise InvalidParameter(f"no conformal-level rule for {alg}")


def expected_exclusions(alg: AlgebraId) -> Dict[Fraction, ExclusionReason]:
    """The discarded candidates named case by case, with the reason for each."""
    two_thirds, shifted, _ = _two_levels(alg)
    f, p = alg.family, alg.params
    critical, collapsing, pole = (
        ExclusionReason.CRITICAL, ExclusionReason.COLLAPSING, ExclusionReason.SUGAWARA_POLE
    )
    out: Dict[Fraction, ExclusionReason] = {}
    if f == Family.SPO:
        n, m = p
        if m == n + 2:
            out[two_thirds] = critical
        elif m == n - 1 and n >= 4:
            out[two_thirds] = pole
        elif m == n - 4:
            out[two_thirds] = collapsing
    elif f == Family.SL:
        m, n = p
        if (m, n) == (3, 0):
            out[shifted] = collapsing
        elif n == m + 1:
            out[shifted] = critical
        elif n == m - 1 and m >= 3:
            out[shifted] = pole
        elif n == m - 3 and m >= 4:
            out[shifted] = collapsing
            out[two_thirds] = pole
    elif f == Family.OSP:
        m, n = p
        d = m - n
        if d == 1 and n >= 4:
            out[shifted] = critical
        elif d == 2 and n >= 2:
            out[two_thirds] = critical
        elif d == 7:
            out[shifted] = collapsing
        elif d == -4 and n >= 8:
            out[two_thirds] = collapsing
        elif d == 5 and n >= 2:
            out[two_thirds] = collapsing
            out[shifted] = pole
        elif d == 8 and n >= 2:
            out[two_thirds] = pole
    elif f == Family.F4SUPER and alg.theta_choice == 'D212':
        out[shifted] = collapsing
    elif f == Family.D21A:
        out[Fraction(0)] = critical
        if p[0] in (Fraction(1, 2), Fraction(-3, 2)):
            out[Fraction(1, 2)] = collapsing
        elif p[0] == Fraction(-1, 2):
            out[Fraction(1, 2)] = pole
    return out


def sl_corollary_levels(n: int) -> FrozenSet[Fraction]:
    """Solutions of c(sl(n), k) = c_sug for n >= 4."""
    return frozenset({Fraction(-1), Fraction(-2 * n, 3), Fraction(1 - n, 2), Fraction(-n, 2)})


def _compare_sets(label: str, got, expected) -> None:
    got, expected = frozenset(got), frozenset(expected)
    if got != expected:
        raise SetMismatch(label, expected - got, got - expected)


def _levels(values) -> str:
    return '{' + ', '.join(format_scalar(v) for v in sorted(values)) + '}'


# =============================================================================
# PER-INSTANCE CHECKS
# =============================================================================


def run_table4(alg: AlgebraId, config: RunConfig) -> Row:
    A = realize(alg)
    result = extract_pk(A)
    expected = get_catalog().closed_forms(alg).p_of_k
    if result.p != expected:
        raise MismatchAt(str(alg), 'p(k) against the catalog closed form', str(result.p - expected))
    return {'p_of_k': str(result.p), 'pairs': len(result.per_pair_witnesses)}


def run_tables123(alg: AlgebraId, config: RunConfig) -> Row:
    rd = build_catalog_entry(alg)
    mg = minimal_grading(rd)
    h = dual_coxeter(rd)
    forms = get_catalog().closed_forms(alg)
    if h != forms.h_vee:
        raise MismatchAt(str(alg), 'h∨ against the catalog', h - forms.h_vee)
    dims = superdimensions(rd, mg)
    if dims['sdim_ghalf'] != 2 * h - 4:
        raise MismatchAt(str(alg), 'sdim g_1/2 = 2h∨ - 4', dims['sdim_ghalf'] - (2 * h - 4))
    check_halfspace_casimir(alg)
    route = 'weights'
    try:
        A = realize(alg)
    except UnsupportedRealization:
        A = None
    if A is not None:
        route = 'matrix'
        eigenvalue = casimir_eigenvalue(A, 'g0-on-ghalf').eigenvalue
        if eigenvalue != h - 1:
            raise MismatchAt(str(alg), 'Casimir of g_0 on g_-1/2 = h∨ - 1', eigenvalue - (h - 1))
    shifts = check_level_shifts(alg)
    return {
        'h_vee': h,
        'sdim_ghalf': dims['sdim_ghalf'],
        'casimir_g0': h - 1,
        'route': route,
        'k_i_divide_p': len(shifts),
    }


def run_lemma31(alg: AlgebraId, config: RunConfig) -> Row:
    result = verify_lemma31(realize(alg))
    return {'p_of_k': result['p_of_k'], 'pairs': result['pairs_checked']}


def run_prop34(alg: AlgebraId, config: RunConfig) -> Row:
    got = trivial_levels(alg)
    _compare_sets(f"{alg} trivial levels", got, expected_trivial(alg))
    return {'trivial': _levels(got)}


def run_props45to47(alg: AlgebraId, config: RunConfig) -> Row:
    cls = classify(alg)
    _compare_sets(f"{alg} conformal non-collapsing levels", cls.conformal_noncollapsing,
                  expected_conformal(alg))
    ledger = dict(cls.excluded)
    for k, reason in expected_exclusions(alg).items():
        if ledger.get(k) != reason:
            got = ledger[k].value if k in ledger else 'not a candidate'
            raise MismatchAt(f"{alg} at k = {format_scalar(k)}", f"exclusion {reason.value}", got)
    return {
        'conformal_noncollapsing': _levels(cls.conformal_noncollapsing),
        'excluded': ', '.join(f"{format_scalar(k)}: {r.value}" for k, r in cls.excluded),
    }


def run_cor48(alg: AlgebraId, config: RunConfig) -> Row:
    result = check_corollary48(alg)
    if alg.family == Family.SL and alg.params[1] == 0 and alg.params[0] >= 4:
        _compare_sets(f"{alg} c(g,k) = c_sug", result['solutions'], sl_corollary_levels(alg.params[0]))
    return {'solutions': _levels(result['solutions'])}


def run_realized_properties(alg: AlgebraId, config: RunConfig) -> Row:
    A = realize(alg)
    jacobi = check_jacobi(A, config.exhaustive_dim, config.jacobi_samples, config.seed)
    check_antisymmetry(A)
    check_invariance(A, config.exhaustive_dim, config.jacobi_samples, config.seed)
    p = extract_pk(A).p
    check_form_properties(A, p)
    check_jj_levels(A)
    for row in kappa0_report(A):
        if not row['matches']:
            raise MismatchAt(f"{alg} component {row['component']}", 'κ_0 = 2h∨_0,i (a|b)', row['ratio'])
    return {'dim': A.dim, 'jacobi': jacobi['mode'], 'triples': jacobi['triples']}


def run_level_properties(alg: AlgebraId, config: RunConfig) -> Row:
    checked = check_prop41(alg)
    shape = check_uniform_h0(alg)['shape']
    closed = check_closed_forms(alg)['shape']
    uniform = check_uniform_pk(alg)
    return {
        'conformal_collapsing_levels': _levels(checked),
        'uniform_h0': shape or '-',
        'closed_form': closed or '-',
        'uniform_pk': 'checked' if uniform is not None else '-',
    }


def run_remark33(alg: AlgebraId, config: RunConfig) -> Row:
    result = check_remark33(alg)
    chain = collapse_chain(alg, -2)
    return {'level': result['level'], 'central_charge': result['central_charge'], 'endpoint': chain.endpoint}


def classification_record(alg: AlgebraId) -> Row:
    """Every field of the level classification of one algebra."""
    cls = classify(alg)
    return {
        'algebra': str(cls.algebra),
        'h_vee': cls.h_vee,
        'p_of_k': cls.p_of_k,
        'collapsing': cls.collapsing,
        'trivial': cls.trivial,
        'conformal': cls.conformal,
        'conformal_noncollapsing': cls.conformal_noncollapsing,
        'excluded': [{'k': k, 'reason': reason} for k, reason in cls.excluded],
        'components': [{'label': c.label, 'h_vee': c.h_vee, 'k_i': str(c.k_i)} for c in cls.components],
        'central_charge': cls.c_g,
        'sugawara_central_charge': cls.c_sug,
    }


def run_classification(alg: AlgebraId, config: RunConfig) -> Row:
    cls = classify(alg)
    return {
        'p_of_k': str(cls.p_of_k),
        'collapsing': _levels(cls.collapsing),
        'conformal_noncollapsing': _levels(cls.conformal_noncollapsing),
    }


def record_name(alg: AlgebraId) -> str:
    """File-safe name of an algebra, e.g. D(2,1;-1/2) -> D_2_1_m1over2."""
    text = str(alg).replace('-', 'm').replace('/', 'over')
    return re.sub(r'[^A-Za-z0-9]+', '_', text).strip('_')


# =============================================================================
# RUNNER
# =============================================================================


def _guarded(check: Callable[[AlgebraId, RunConfig], Row], alg: AlgebraId, config: RunConfig) -> Row:
    try:
        row = check(alg, config)
        return {'algebra': str(alg), 'status': 'pass', **row}
    except VerificationFailure as e:
        logger.error(f"{alg}: {e}")
        return {'algebra': str(alg), 'status': 'fail', 'detail': str(e)}


def run_checks(check: Callable[[AlgebraId, RunConfig], Row], instances: Sequence[AlgebraId],
               config: RunConfig) -> List[Row]:
    """Run one check per instance; rows come back in submission order."""
    if config.jobs > 1 and len(instances) > 1:
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            futures = [pool.submit(_guarded, check, alg, config) for alg in instances]
            return [future.result() for future in futures]
    rows = []
    for i, alg in enumerate(instances, 1):
        logger.info(f"[{i}/{len(instances)}] {check.__name__} {alg}")
        rows.append(_guarded(check, alg, config))
    return rows


_SIMPLE_SUITES = {
    'table4': run_table4,
    'tables123': run_tables123,
    'lemma31': run_lemma31,
    'prop34': run_prop34,
    'props45to47': run_props45to47,
    'cor48': run_cor48,
    'classification': run_classification,
}


def _realize_rows(n: int) -> List[Row]:
    table = bk_ope_table(n)
    rows = [{'check': 'G-G products', 'status': 'pass', 'detail': f"{len(table.imposed)} entries imposed by simplicity"}]
    checks = [
        ('Sugawara eigenvalue on ∧²U', verify_prop53, 'eigenvalue'),
        ('G⊗e^{±φ} products', verify_lemma55, 'pairs_checked'),
        ('γ homomorphism', verify_59, 'pairs_checked'),
        ('charges', charge_decomposition, 'charges'),
        ('vacuum relation', check_vacuum_relation, 'generators_checked'),
    ]
    for name, check, key in checks:
        try:
            result = check(n)
            rows.append({'check': name, 'status': 'pass', 'detail': result[key]})
        except VerificationFailure as e:
            logger.error(f"realize-{n} {name}: {e}")
            rows.append({'check': name, 'status': 'fail', 'detail': str(e)})
    return rows


def suite_report(suite: str, config: RunConfig) -> Report:
    """Build the report of a suite without touching goldens."""
    suites = _load_suites()
    match = REALIZE_PATTERN.match(suite)
    if match:
        n = int(match.group(1))
        rows = _realize_rows(n)
        title = f"realize-{n}"
    elif suite in _SIMPLE_SUITES:
        instances = resolve_instances(suites[suite]['instances'])
        rows = run_checks(_SIMPLE_SUITES[suite], instances, config)
        title = suite
    elif suite == 'properties':
        cfg = suites['properties']
        rows = []
        for check, key in ((run_realized_properties, 'realized'), (run_level_properties, 'levels'),
                           (run_remark33, 'remark33')):
            for row in run_checks(check, resolve_instances(cfg[key]), config):
                rows.append({'group': key, **row})
        title = 'properties'
    else:
        raise InvalidParameter(f"unknown suite {suite!r}; choose from {', '.join(SUITE_NAMES)} or realize-N")

    failed = sum(1 for row in rows if row['status'] == 'fail')
    summary = {'checked': len(rows), 'passed': len(rows) - failed, 'failed': failed}
    return Report(title=f"verify {title}", rows=rows, summary=summary)


def run_suite(suite: str, config: RunConfig) -> SuiteResult:
    """Run a suite and compare its report with the committed golden."""
    if suite == 'classification':
        return _run_classification(config)
    report = suite_report(suite, config)
    failures = [row.get('detail', '') for row in report.rows if row['status'] == 'fail']
    group, _, name = suite.partition('-')
    body = golden_body(ReportExporter(report).plain)
    golden = check_golden(group, f"n{name}" if name else group, body, config.golden_dir,
                          config.regenerate_goldens)
    report.summary['golden'] = golden.status.value
    return SuiteResult(suite=suite, report=report, failures=failures, golden=golden)


def _run_classification(config: RunConfig) -> SuiteResult:
    """The classification suite keeps one golden per algebra."""
    report = suite_report('classification', config)
    failures = [row.get('detail', '') for row in report.rows if row['status'] == 'fail']
    results = []
    for alg in resolve_instances(_load_suites()['classification']['instances']):
        try:
            record = classification_record(alg)
        except VerificationFailure:
            continue
        body = golden_body(to_plain(record))
        results.append(check_golden('classification', record_name(alg), body, config.golden_dir,
                                    config.regenerate_goldens))
    golden = combine_results(results, Path(config.golden_dir) / 'classification')
    report.summary['golden'] = golden.status.value
    return SuiteResult(suite='classification', report=report, failures=failures, golden=golden)
