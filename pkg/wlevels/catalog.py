"""
Algebra Catalog
Algebra identifiers, the spec-string grammar, and closed-form catalog data.
"""
import os
import re
import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import yaml
from sympy import Poly, Symbol, sympify

from . import CONFIG_DIR
from .errors import ExcludedAlgebra, InvalidParameter, ParseError
from .exactmath import K, PolyK, format_scalar, parse_scalar, to_fraction, to_sympy

logger = logging.getLogger(__name__)


class Family(str, Enum):
    SL = 'sl'
    PSL = 'psl'
    OSP = 'osp'
    SPO = 'spo'
    D21A = 'D21a'
    F4SUPER = 'F4super'
    G3SUPER = 'G3super'
    LIE = 'lie'


EXCEPTIONAL_LIE = {'G2': ('G', 2), 'F4': ('F', 4), 'E6': ('E', 6), 'E7': ('E', 7), 'E8': ('E', 8)}
THETA_CHOICES = {
    Family.F4SUPER: ('sl2', 'D212'),
    Family.G3SUPER: ('sl2', 'G2'),
}


@dataclass(frozen=True)
class AlgebraId:
    """A basic Lie superalgebra together with the choice of minimal root."""

    family: Family
    params: Tuple = ()
    theta_choice: Optional[str] = None

    def __post_init__(self):
        validate(self)

    @property
    def is_lie(self) -> bool:
        """True when the odd part is zero."""
        if self.family == Family.LIE:
            return True
        if self.family in (Family.SL, Family.OSP):
            return self.params[1] == 0
        if self.family == Family.SPO:
            return self.params[1] == 0
        return False

    def __str__(self):
        f, p = self.family, self.params
        if f == Family.SL:
            return f"sl({p[0]})" if p[1] == 0 else f"sl({p[0]}|{p[1]})"
        if f == Family.PSL:
            return f"psl({p[0]}|{p[0]})"
        if f == Family.OSP:
            return f"so({p[0]})" if p[1] == 0 else f"osp({p[0]}|{p[1]})"
        if f == Family.SPO:
            return f"sp({p[0]})" if p[1] == 0 else f"spo({p[0]}|{p[1]})"
        if f == Family.D21A:
            return f"D(2,1;{format_scalar(p[0])})"
        if f == Family.F4SUPER:
            return f"F(4):{self.theta_choice}"
        if f == Family.G3SUPER:
            return f"G(3):{self.theta_choice}"
        return f"{p[0]}{p[1]}"

    def __repr__(self):
        return f"AlgebraId({self})"


def validate(alg: AlgebraId) -> None:
    """Raise ExcludedAlgebra or InvalidParameter for ids without a usable minimal grading."""
    f, p = alg.family, alg.params
    if f == Family.SL:
        m, n = p
        if m < 2 or n < 0:
            raise InvalidParameter(f"sl({m}|{n}): need m >= 2 and n >= 0")
        if m == n:
            raise InvalidParameter(f"sl({m}|{n}): write psl({m}|{m}) for m = n")
        if m == 2 and n == 0:
            raise ExcludedAlgebra("sl(2): the minimal W-algebra is the Virasoro algebra")
        if n > 0 and m == n + 2:
            raise ExcludedAlgebra(f"sl({m}|{n}): sl(n+2|n) is excluded")
    elif f == Family.PSL:
        if p[0] < 2:
            raise InvalidParameter(f"psl({p[0]}|{p[0]}): need m >= 2")
    elif f == Family.OSP:
        m, n = p
        if n < 0 or n % 2:
            raise InvalidParameter(f"osp({m}|{n}): n must be even and non-negative")
        if m < 4 or (n == 0 and m < 5):
            raise InvalidParameter(f"osp({m}|{n}): need m >= 4, and m >= 5 when n = 0")
    elif f == Family.SPO:
        n, m = p
        if n < 2 or n % 2 or m < 0:
            raise InvalidParameter(f"spo({n}|{m}): n must be even and at least 2")
        if n == 2 and m == 0:
            raise ExcludedAlgebra("sp(2) = sl(2) is excluded")
    elif f == Family.D21A:
        a = to_fraction(p[0])
        if a in (0, -1):
            raise InvalidParameter(f"D(2,1;{format_scalar(a)}): a must differ from 0 and -1")
    elif f in THETA_CHOICES:
        if alg.theta_choice not in THETA_CHOICES[f]:
            raise InvalidParameter(
                f"{f.value}: theta choice {alg.theta_choice!r} not in {THETA_CHOICES[f]}"
            )
    elif f == Family.LIE:
        if f"{p[0]}{p[1]}" not in EXCEPTIONAL_LIE:
            raise InvalidParameter(f"no exceptional Lie algebra {p[0]}{p[1]}")


# =============================================================================
# SPEC-STRING GRAMMAR
# =============================================================================

_TOKEN = re.compile(r'\s*(-?\d+(?:/\d+)?|[A-Za-z][A-Za-z0-9]*|[()|;:,]|\S)')


class _Parser:
    def __init__(self, text: str):
        self.text = text
        cleaned = text.replace('−', '-').strip()
        self.tokens = [m.group(1) for m in _TOKEN.finditer(cleaned)]
        self.pos = 0

    def peek(self) -> Optional[str]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> str:
        token = self.peek()
        if token is None:
            raise ParseError(self.text, '<end>', 'unexpected end of input at')
        self.pos += 1
        return token

    def expect(self, wanted: str) -> None:
        token = self.next()
        if token != wanted:
            raise ParseError(self.text, token, f"expected {wanted!r}, got")

    def integer(self) -> int:
        token = self.next()
        if not re.fullmatch(r'-?\d+', token):
            raise ParseError(self.text, token, 'expected an integer, got')
        return int(token)

    def done(self) -> None:
        if self.peek() is not None:
            raise ParseError(self.text, self.peek(), 'trailing token')


def parse_algebra(text: str) -> AlgebraId:
    """
    Parse an algebra spec such as "sl(4|1)", "D(2,1;3/2)", "E8" or "G(3):G2".

    Raises ParseError naming the offending token, or the validation errors
    of AlgebraId for well-formed but excluded input.
    """
    parser = _Parser(text)
    head = parser.next()

    if head in EXCEPTIONAL_LIE and parser.peek() is None:
        return AlgebraId(Family.LIE, EXCEPTIONAL_LIE[head])

    if head in ('sl', 'psl', 'osp', 'spo', 'so', 'sp'):
        parser.expect('(')
        first = parser.integer()
        second = 0
        if parser.peek() == '|':
            parser.next()
            second = parser.integer()
        parser.expect(')')
        parser.done()
        if head in ('so', 'sp') and second:
            raise ParseError(text, head, f"{head}(n) takes one parameter; use osp/spo for")
        if head == 'psl':
            if second != first:
                raise InvalidParameter(f"psl({first}|{second}): parameters must agree")
            return AlgebraId(Family.PSL, (first,))
        family = {'sl': Family.SL, 'osp': Family.OSP, 'so': Family.OSP,
                  'spo': Family.SPO, 'sp': Family.SPO}[head]
        return AlgebraId(family, (first, second))

    if head == 'D':
        parser.expect('(')
        parser.expect('2')
        parser.expect(',')
        parser.expect('1')
        parser.expect(';')
        value = parse_scalar(parser.next())
        parser.expect(')')
        parser.done()
        return AlgebraId(Family.D21A, (value,))

    if head in ('F', 'G'):
        parser.expect('(')
        parser.expect('4' if head == 'F' else '3')
        parser.expect(')')
        parser.expect(':')
        choice = parser.next()
        parser.done()
        family = Family.F4SUPER if head == 'F' else Family.G3SUPER
        if choice not in THETA_CHOICES[family]:
            raise ParseError(text, choice, 'unknown theta choice')
        return AlgebraId(family, (), choice)

    raise ParseError(text, head, 'unknown algebra')


# =============================================================================
# CLOSED-FORM CATALOG DATA
# =============================================================================


@dataclass(frozen=True)
class ClosedForms:
    h_vee: Fraction
    sdim: Fraction
    p_of_k: PolyK


class Catalog:
    """Closed-form data (h∨, sdim g, p(k)) per family, loaded from config/catalog.yaml."""

    def __init__(self, path: Optional[str] = None):
        self.path = path or os.path.join(CONFIG_DIR, 'catalog.yaml')
        self.data = self._load_catalog()

    def _load_catalog(self) -> Dict:
        """Load the catalog file."""
        try:
            with open(self.path, 'r') as f:
                return yaml.safe_load(f)
        except FileNotFoundError:
            logger.warning("Catalog file not found, using defaults")
            return self._get_default_catalog()

    def _get_default_catalog(self) -> Dict:
        """Default catalog if file not found."""
        return {
            'families': {
                'sl': {'params': ['m', 'n'], 'h_vee': 'm - n', 'sdim': '(m - n)**2 - 1',
                       'p_of_k': '(k + 1)*(k + (m - n)/2)'},
                'psl': {'params': ['m'], 'h_vee': '0', 'sdim': '-2', 'p_of_k': 'k*(k + 1)'},
                'osp': {'params': ['m', 'n'], 'h_vee': 'm - n - 2',
                        'sdim': '(m - n)*(m - n - 1)/2', 'p_of_k': '(k + 2)*(k + (m - n - 4)/2)'},
                'spo': {'params': ['n', 'm'], 'h_vee': '(n - m)/2 + 1',
                        'sdim': '(m - n)*(m - n - 1)/2', 'p_of_k': '(k + 1/2)*(k + (n - m + 4)/4)'},
                'D21a': {'params': ['a'], 'h_vee': '0', 'sdim': '1', 'p_of_k': '(k - a)*(k + 1 + a)'},
            },
            'exceptional': {
                'F(4):sl2': {'h_vee': '-2', 'sdim': '8', 'p_of_k': '(k + 2/3)*(k - 2/3)'},
                'F(4):D212': {'h_vee': '3', 'sdim': '8', 'p_of_k': '(k + 3/2)*(k + 1)'},
                'G(3):sl2': {'h_vee': '-3/2', 'sdim': '3', 'p_of_k': '(k - 1/2)*(k + 3/4)'},
                'G(3):G2': {'h_vee': '2', 'sdim': '3', 'p_of_k': '(k + 2/3)*(k + 4/3)'},
                'G2': {'h_vee': '4', 'sdim': '14', 'p_of_k': '(k + 4/3)*(k + 5/3)'},
                'F4': {'h_vee': '9', 'sdim': '52', 'p_of_k': '(k + 5/2)*(k + 3)'},
                'E6': {'h_vee': '12', 'sdim': '78', 'p_of_k': '(k + 3)*(k + 4)'},
                'E7': {'h_vee': '18', 'sdim': '133', 'p_of_k': '(k + 4)*(k + 6)'},
                'E8': {'h_vee': '30', 'sdim': '248', 'p_of_k': '(k + 6)*(k + 10)'},
            },
            'sweep': {
                'sl_max_total': 9,
                'psl_max': 4,
                'orthosymplectic_max_total': 12,
                'd21a_values': ['1/2', '-1/2', '-3/2', '2', '3'],
                'exceptional': ['G2', 'F4', 'E6', 'E7', 'E8',
                                'F(4):sl2', 'F(4):D212', 'G(3):sl2', 'G(3):G2'],
            },
        }

    def _entry(self, alg: AlgebraId) -> Tuple[Dict, Dict]:
        if alg.family in (Family.LIE, Family.F4SUPER, Family.G3SUPER):
            return self.data['exceptional'][str(alg)], {}
        entry = self.data['families'][alg.family.value]
        values = {name: to_sympy(value) for name, value in zip(entry['params'], alg.params)}
        return entry, values

    def closed_forms(self, alg: AlgebraId) -> ClosedForms:
        entry, values = self._entry(alg)
        symbols = {name: Symbol(name) for name in ('m', 'n', 'a')}
        symbols['k'] = K

        def evaluate(expr: str):
            parsed = sympify(expr, locals=symbols)
            return parsed.subs({symbols[name]: v for name, v in values.items()})

        return ClosedForms(
            h_vee=to_fraction(evaluate(entry['h_vee'])),
            sdim=to_fraction(evaluate(entry['sdim'])),
            p_of_k=PolyK.from_sympy(Poly(evaluate(entry['p_of_k']), K)),
        )

    def sweep(self) -> List[AlgebraId]:
        """The parameter sweep, skipping members excluded by the validity rules."""
        cfg = self.data['sweep']
        specs: List[Tuple[Family, Tuple]] = []
        total = cfg['sl_max_total']
        for m in range(2, total + 1):
            for n in range(0, total - m + 1):
                specs.append((Family.SL, (m, n)))
        for m in range(2, cfg['psl_max'] + 1):
            specs.append((Family.PSL, (m,)))
        total = cfg['orthosymplectic_max_total']
        for n in range(2, total + 1, 2):
            for m in range(0, total - n + 1):
                specs.append((Family.SPO, (n, m)))
        for n in range(0, total + 1, 2):
            for m in range(4, total - n + 1):
                specs.append((Family.OSP, (m, n)))

        ids: List[AlgebraId] = []
        for family, params in specs:
            try:
                ids.append(AlgebraId(family, params))
            except (ExcludedAlgebra, InvalidParameter):
                continue
        for value in cfg['d21a_values']:
            ids.append(AlgebraId(Family.D21A, (parse_scalar(str(value)),)))
        for spec in cfg['exceptional']:
            ids.append(parse_algebra(spec))
        return ids


_catalog: Optional[Catalog] = None


def get_catalog() -> Catalog:
    """Shared catalog instance."""
    global _catalog
    if _catalog is None:
        _catalog = Catalog()
        logger.info(f"Loaded catalog from {_catalog.path}")
    return _catalog
