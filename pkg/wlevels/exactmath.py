"""
Exact Arithmetic
Rationals, polynomials and rational functions in the level variable k.

Ring arithmetic on PolyK is done on coefficient tuples; gcd, division and
factorization over QQ are delegated to sympy.
"""
import logging
from fractions import Fraction
from typing import FrozenSet, Iterable, Optional, Tuple, Union

from sympy import Poly, QQ, Rational, Symbol

from .errors import IrrationalSolutions, ParseError, ZeroDivisor, ZeroPolynomial

logger = logging.getLogger(__name__)

K = Symbol('k')

Scalar = Union[int, Fraction]


def to_fraction(value) -> Fraction:
    """Convert an int, Fraction, sympy Rational or QQ element to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Rational):
        return Fraction(int(value.p), int(value.q))
    # PythonMPQ and gmpy2.mpq both expose numerator/denominator
    return Fraction(int(value.numerator), int(value.denominator))


def to_sympy(value: Scalar) -> Rational:
    value = to_fraction(value)
    return Rational(value.numerator, value.denominator)


def parse_scalar(text: str) -> Fraction:
    """Parse "3", "-5/2" or "−5/2" into a Fraction."""
    cleaned = text.strip().replace('−', '-')
    try:
        return Fraction(cleaned)
    except (ValueError, ZeroDivisionError):
        raise ParseError(text, text.strip(), 'not a rational number')


def format_scalar(value: Scalar) -> str:
    """Render a rational as "p/q", or "p" when integral."""
    value = to_fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class PolyK:
    """Immutable polynomial in k with rational coefficients, lowest degree first."""

    __slots__ = ('_coeffs',)

    def __init__(self, coeffs: Iterable = ()):
        cs = [to_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self._coeffs = tuple(cs)

    @classmethod
    def constant(cls, value: Scalar) -> 'PolyK':
        return cls((value,))

    @classmethod
    def linear(cls, shift: Scalar) -> 'PolyK':
        """The monic linear polynomial k + shift."""
        return cls((shift, 1))

    @classmethod
    def from_roots(cls, roots: Iterable[Scalar]) -> 'PolyK':
        result = cls.constant(1)
        for root in roots:
            result = result * cls.linear(-to_fraction(root))
        return result

    @classmethod
    def from_sympy(cls, poly: Poly) -> 'PolyK':
        return cls(reversed([to_fraction(c) for c in poly.all_coeffs()]))

    def to_sympy(self) -> Poly:
        if not self._coeffs:
            return Poly(0, K, domain=QQ)
        return Poly([to_sympy(c) for c in reversed(self._coeffs)], K, domain=QQ)

    @property
    def coeffs(self) -> Tuple[Fraction, ...]:
        return self._coeffs

    @property
    def degree(self) -> int:
        return len(self._coeffs) - 1

    @property
    def leading(self) -> Fraction:
        return self._coeffs[-1] if self._coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self._coeffs

    def is_monic(self) -> bool:
        return self.leading == 1

    def monic(self) -> 'PolyK':
        if self.is_zero():
            raise ZeroPolynomial("cannot normalize the zero polynomial")
        return self / self.leading

    def __call__(self, value: Scalar) -> Fraction:
        value = to_fraction(value)
        result = Fraction(0)
        for c in reversed(self._coeffs):
            result = result * value + c
        return result

    # -- ring operations -------------------------------------------------

    def _coerce(self, other) -> Optional['PolyK']:
        if isinstance(other, PolyK):
            return other
        if isinstance(other, (int, Fraction)):
            return PolyK.constant(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        size = max(len(self._coeffs), len(other._coeffs))
        a = self._coeffs + (Fraction(0),) * (size - len(self._coeffs))
        b = other._coeffs + (Fraction(0),) * (size - len(other._coeffs))
        return PolyK(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return PolyK(-c for c in self._coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return PolyK(c * other for c in self._coeffs)
        if not isinstance(other, PolyK):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return PolyK()
        out = [Fraction(0)] * (len(self._coeffs) + len(other._coeffs) - 1)
        for i, a in enumerate(self._coeffs):
            if a:
                for j, b in enumerate(other._coeffs):
                    out[i + j] += a * b
        return PolyK(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisor("division of a polynomial by zero")
            return PolyK(c / other for c in self._coeffs)
        return NotImplemented

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self):
        return hash(self._coeffs)

    # -- Euclidean structure (sympy) ---------------------------------------

    def divmod(self, divisor: 'PolyK') -> Tuple['PolyK', 'PolyK']:
        if divisor.is_zero():
            raise ZeroDivisor("division by the zero polynomial")
        q, r = self.to_sympy().div(divisor.to_sympy())
        return PolyK.from_sympy(q), PolyK.from_sympy(r)

    def exquo(self, divisor: 'PolyK') -> 'PolyK':
        """Exact quotient; raises ArithmeticError if the division leaves a remainder."""
        q, r = self.divmod(divisor)
        if not r.is_zero():
            raise ArithmeticError(f"{divisor} does not divide {self}")
        return q

    def gcd(self, other: 'PolyK') -> 'PolyK':
        g = PolyK.from_sympy(self.to_sympy().gcd(other.to_sympy()))
        return g.monic() if not g.is_zero() else g

    def factors(self):
        """Irreducible factors over QQ as (monic PolyK, multiplicity) pairs."""
        _, factor_pairs = self.to_sympy().factor_list()
        return [(PolyK.from_sympy(f).monic(), m) for f, m in factor_pairs]

    def to_list(self):
        return [format_scalar(c) for c in self._coeffs]

    def __repr__(self):
        return f"PolyK({self})"

    def __str__(self):
        if not self._coeffs:
            return '0'
        terms = []
        for power in range(len(self._coeffs) - 1, -1, -1):
            c = self._coeffs[power]
            if c == 0:
                continue
            sign = '-' if c < 0 else '+'
            mag = abs(c)
            if power == 0:
                body = format_scalar(mag)
            else:
                var = 'k' if power == 1 else f'k^{power}'
                body = var if mag == 1 else f"{format_scalar(mag)}*{var}"
            terms.append((sign, body))
        first_sign, first_body = terms[0]
        text = ('-' if first_sign == '-' else '') + first_body
        for sign, body in terms[1:]:
            text += f" {sign} {body}"
        return text


class RatFunK:
    """Rational function in k in lowest terms with a monic denominator."""

    __slots__ = ('num', 'den')

    def __init__(self, num, den=None):
        num = num if isinstance(num, PolyK) else PolyK.constant(num)
        den = PolyK.constant(1) if den is None else den
        den = den if isinstance(den, PolyK) else PolyK.constant(den)
        if den.is_zero():
            raise ZeroDivisor("rational function with zero denominator")
        if num.is_zero():
            self.num, self.den = PolyK(), PolyK.constant(1)
            return
        if den.degree > 0:
            g = num.gcd(den)
            if g.degree > 0:
                num, den = num.exquo(g), den.exquo(g)
        lead = den.leading
        self.num, self.den = num / lead, den / lead

    @classmethod
    def from_poly(cls, p: PolyK) -> 'RatFunK':
        return cls(p)

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def poles(self) -> FrozenSet[Fraction]:
        roots, _ = rational_roots(self.den) if self.den.degree > 0 else (frozenset(), True)
        return frozenset(roots)

    def __call__(self, value: Scalar) -> Optional[Fraction]:
        d = self.den(value)
        if d == 0:
            return None
        return self.num(value) / d

    def _coerce(self, other):
        if isinstance(other, RatFunK):
            return other
        if isinstance(other, (PolyK, int, Fraction)):
            return RatFunK(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RatFunK(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunK(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RatFunK(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisor("division by the zero rational function")
        return RatFunK(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RatFunK({self})"

    def __str__(self):
        if self.is_polynomial():
            return str(self.num)
        return f"({self.num})/({self.den})"


class AllK:
    """Marker returned when two rational functions coincide identically."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return 'AllK'


ALL_K = AllK()


def rational_roots(p: PolyK) -> Tuple[FrozenSet[Fraction], bool]:
    """
    Rational roots of p, without multiplicity.

    Returns:
        Tuple of (roots, splits) where splits is True iff p is a product of
        linear factors over QQ.
    """
    if p.is_zero():
        raise ZeroPolynomial("rational_roots of the zero polynomial")
    roots = set()
    splits = True
    for factor, _ in p.factors():
        if factor.degree == 1:
            roots.add(-factor.coeffs[0])
        elif factor.degree > 1:
            splits = False
    return frozenset(roots), splits


def poly_divides(d: PolyK, p: PolyK) -> bool:
    if d.is_zero():
        raise ZeroDivisor("poly_divides with zero divisor")
    _, remainder = p.divmod(d)
    return remainder.is_zero()


def ratfun_equal_solutions(lhs: RatFunK, rhs: RatFunK, excluded_poles: Iterable[Scalar] = ()):
    """
    All rational k with lhs(k) = rhs(k), both sides defined, k not excluded.

    Returns ALL_K when the two sides are the same rational function.
    """
    difference = lhs - rhs
    if difference.is_zero():
        return ALL_K
    if difference.num.degree == 0:
        return frozenset()
    roots, splits = rational_roots(difference.num)
    if not splits:
        residual = [str(f) for f, _ in difference.num.factors() if f.degree > 1]
        raise IrrationalSolutions(residual)
    excluded = {to_fraction(e) for e in excluded_poles}
    solutions = frozenset(
        r for r in roots
        if r not in excluded and lhs(r) is not None and rhs(r) is not None
    )
    logger.debug(f"solutions of {lhs} = {rhs}: {sorted(solutions)}")
    return solutions
