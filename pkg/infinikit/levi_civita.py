# infinikit/levi_civita.py
"""Exact Levi-Civita numbers: finite sums  sum a_q * eps^q  with rational q and a_q.

eps is a fixed positive infinitesimal. Everything here is exact (Fraction);
no floating point is used anywhere in the module.
"""

from __future__ import annotations

import enum
from collections.abc import Iterable, Sequence
from fractions import Fraction
from functools import total_ordering
from numbers import Rational
from typing import Union

from infinikit import config
from infinikit.errors import DivisionByZeroError, InfiniteInputError, PreconditionError

RationalLike = Union[int, Fraction, str]
Term = tuple[Fraction, Fraction]


def _q(value: RationalLike | Rational) -> Fraction:
    if isinstance(value, float):
        raise TypeError("levi_civita is exact; pass int, Fraction or 'p/q' strings")
    return Fraction(value)  # type: ignore[arg-type]


def _collect(terms: Iterable[tuple[RationalLike, RationalLike]]) -> tuple[Term, ...]:
    acc: dict[Fraction, Fraction] = {}
    for exp, coeff in terms:
        q = _q(exp)
        acc[q] = acc.get(q, Fraction(0)) + _q(coeff)
    return tuple((q, a) for q, a in sorted(acc.items()) if a)


class Classification(str, enum.Enum):
    ZERO = "zero"
    INFINITESIMAL = "infinitesimal"
    APPRECIABLE = "appreciable-finite"
    INFINITE = "infinite"


class Ordering(str, enum.Enum):
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"


@total_ordering
class LCNumber:
    """Immutable Levi-Civita number; `terms` is sorted by exponent, zero-free."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Iterable[tuple[RationalLike, RationalLike]] = ()) -> None:
        object.__setattr__(self, "_terms", _collect(terms))

    @classmethod
    def _from_canonical(cls, terms: tuple[Term, ...]) -> LCNumber:
        self = cls.__new__(cls)
        object.__setattr__(self, "_terms", terms)
        return self

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("LCNumber is immutable")

    @property
    def terms(self) -> tuple[Term, ...]:
        return self._terms

    # -------- structure --------
    def is_zero(self) -> bool:
        return not self._terms

    def valuation(self) -> Fraction:
        """Smallest exponent. Undefined for zero."""
        if not self._terms:
            raise PreconditionError("valuation of zero is undefined")
        return self._terms[0][0]

    def leading_term(self) -> Term:
        if not self._terms:
            raise PreconditionError("zero has no leading term")
        return self._terms[0]

    def coefficient(self, exponent: RationalLike) -> Fraction:
        q = _q(exponent)
        for exp, coeff in self._terms:
            if exp == q:
                return coeff
        return Fraction(0)

    def sign(self) -> int:
        if not self._terms:
            return 0
        return 1 if self._terms[0][1] > 0 else -1

    # -------- arithmetic --------
    def __add__(self, other: object) -> LCNumber:
        b = _coerce(other)
        if b is None:
            return NotImplemented
        return add(self, b)

    __radd__ = __add__

    def __sub__(self, other: object) -> LCNumber:
        b = _coerce(other)
        if b is None:
            return NotImplemented
        return sub(self, b)

    def __rsub__(self, other: object) -> LCNumber:
        b = _coerce(other)
        if b is None:
            return NotImplemented
        return sub(b, self)

    def __mul__(self, other: object) -> LCNumber:
        b = _coerce(other)
        if b is None:
            return NotImplemented
        return mul(self, b)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> LCNumber:
        b = _coerce(other)
        if b is None:
            return NotImplemented
        return div(self, b)

    def __rtruediv__(self, other: object) -> LCNumber:
        b = _coerce(other)
        if b is None:
            return NotImplemented
        return div(b, self)

    def __neg__(self) -> LCNumber:
        return neg(self)

    def __pos__(self) -> LCNumber:
        return self

    def __pow__(self, k: int) -> LCNumber:
        if not isinstance(k, int):
            return NotImplemented
        return power(self, k)

    # -------- order --------
    def __eq__(self, other: object) -> bool:
        b = _coerce(other)
        if b is None:
            return NotImplemented
        return self._terms == b._terms

    def __lt__(self, other: object) -> bool:
        b = _coerce(other)
        if b is None:
            return NotImplemented
        return compare(self, b) is Ordering.LESS

    def __hash__(self) -> int:
        return hash(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __repr__(self) -> str:
        return f"LCNumber({format_lc(self)!r})"

    def __str__(self) -> str:
        return format_lc(self)


def _coerce(value: object) -> LCNumber | None:
    if isinstance(value, LCNumber):
        return value
    if isinstance(value, (int, Fraction)):
        return constant(value)
    return None


ZERO = LCNumber._from_canonical(())
ONE = LCNumber._from_canonical(((Fraction(0), Fraction(1)),))
EPS = LCNumber._from_canonical(((Fraction(1), Fraction(1)),))


def constant(value: RationalLike) -> LCNumber:
    v = _q(value)
    return LCNumber._from_canonical(((Fraction(0), v),) if v else ())


def monomial(coeff: RationalLike, exponent: RationalLike) -> LCNumber:
    return LCNumber([(exponent, coeff)])


def make(terms: Iterable[tuple[RationalLike, RationalLike]]) -> LCNumber:
    """Build from (exponent, coefficient) pairs; duplicates sum, zeros drop."""
    return LCNumber(terms)


# --- Ring operations ---------------------------------------------------------
def add(a: LCNumber, b: LCNumber) -> LCNumber:
    return LCNumber._from_canonical(_collect(a.terms + b.terms))


def neg(a: LCNumber) -> LCNumber:
    return LCNumber._from_canonical(tuple((q, -c) for q, c in a.terms))


def sub(a: LCNumber, b: LCNumber) -> LCNumber:
    return add(a, neg(b))


def mul(a: LCNumber, b: LCNumber) -> LCNumber:
    return LCNumber._from_canonical(
        _collect((qa + qb, ca * cb) for qa, ca in a.terms for qb, cb in b.terms)
    )


def power(a: LCNumber, k: int, cutoff: RationalLike | None = None) -> LCNumber:
    if k < 0:
        return inv(power(a, -k), cutoff)
    result, base = ONE, a
    while k:
        if k & 1:
            result = mul(result, base)
        base = mul(base, base)
        k >>= 1
    return result


def inv(a: LCNumber, cutoff: RationalLike | None = None) -> LCNumber:
    """Reciprocal, exact up to eps^cutoff: every exponent of a*inv(a) - 1 exceeds cutoff.

    Writes a = c*eps^v*(1 + r) with r infinitesimal and sums the geometric
    series in r until the remaining powers of r pass the cutoff.
    """
    if a.is_zero():
        raise DivisionByZeroError("inverse of zero")
    c_off = _q(config.INV_CUTOFF if cutoff is None else cutoff)
    v, c = a.leading_term()
    lead_inv = monomial(1 / c, -v)
    if len(a.terms) == 1:
        return lead_inv
    r = LCNumber._from_canonical(tuple((q - v, k / c) for q, k in a.terms[1:]))
    step = r.valuation()
    # a*b - 1 = -(-r)^(m+1); we need (m+1)*step > cutoff
    m = 0
    while (m + 1) * step <= c_off:
        m += 1
    series = ONE
    term = ONE
    neg_r = neg(r)
    for _ in range(m):
        term = _truncate(mul(term, neg_r), c_off)
        series = add(series, term)
    return mul(lead_inv, series)


def _truncate(a: LCNumber, above: Fraction) -> LCNumber:
    # Drops terms that only feed exponents already beyond the cutoff.
    return LCNumber._from_canonical(tuple(t for t in a.terms if t[0] <= above))


def div(a: LCNumber, b: LCNumber, cutoff: RationalLike | None = None) -> LCNumber:
    """a / b. Exact when b is a monomial; otherwise a * inv(b, cutoff)."""
    if b.is_zero():
        raise DivisionByZeroError("division by zero")
    if len(b.terms) == 1:
        return mul(a, inv(b))
    return mul(a, inv(b, cutoff))


# --- Order and classification ------------------------------------------------
def compare(a: LCNumber, b: LCNumber) -> Ordering:
    """Sign of the leading coefficient of a - b."""
    s = sub(a, b).sign()
    if s < 0:
        return Ordering.LESS
    if s > 0:
        return Ordering.GREATER
    return Ordering.EQUAL


def classify(a: LCNumber) -> Classification:
    if a.is_zero():
        return Classification.ZERO
    v = a.valuation()
    if v > 0:
        return Classification.INFINITESIMAL
    if v < 0:
        return Classification.INFINITE
    return Classification.APPRECIABLE


def standard_part(a: LCNumber) -> Fraction:
    """The rational infinitely close to a; infinite inputs have none."""
    if classify(a) is Classification.INFINITE:
        raise InfiniteInputError(f"infinite input: {format_lc(a)}")
    return a.coefficient(0)


# --- Polynomials and the infinitesimal quotient --------------------------------
class Polynomial:
    """Rational polynomial, coefficients in ascending degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[RationalLike]) -> None:
        cs = [_q(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x: LCNumber | RationalLike) -> LCNumber:
        """Horner evaluation in LC arithmetic (exact)."""
        xv = x if isinstance(x, LCNumber) else constant(x)
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = add(mul(acc, xv), constant(c))
        return acc

    def derivative(self) -> Polynomial:
        return Polynomial([k * c for k, c in enumerate(self.coeffs)][1:])

    @staticmethod
    def _lift(value: object) -> Polynomial | None:
        if isinstance(value, Polynomial):
            return value
        if isinstance(value, (int, Fraction)):
            return Polynomial([value])
        return None

    def __add__(self, other: object) -> Polynomial:
        b = Polynomial._lift(other)
        if b is None:
            return NotImplemented
        size = max(len(self.coeffs), len(b.coeffs))
        pad_a = self.coeffs + (Fraction(0),) * (size - len(self.coeffs))
        pad_b = b.coeffs + (Fraction(0),) * (size - len(b.coeffs))
        return Polynomial([x + y for x, y in zip(pad_a, pad_b)])

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial([-c for c in self.coeffs])

    def __sub__(self, other: object) -> Polynomial:
        b = Polynomial._lift(other)
        if b is None:
            return NotImplemented
        return self + (-b)

    def __rsub__(self, other: object) -> Polynomial:
        b = Polynomial._lift(other)
        if b is None:
            return NotImplemented
        return b + (-self)

    def __mul__(self, other: object) -> Polynomial:
        b = Polynomial._lift(other)
        if b is None:
            return NotImplemented
        if not self.coeffs or not b.coeffs:
            return Polynomial([])
        out = [Fraction(0)] * (len(self.coeffs) + len(b.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            for j, y in enumerate(b.coeffs):
                out[i + j] += x * y
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Polynomial:
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = Polynomial([1])
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Polynomial({[str(c) for c in self.coeffs]})"


def _as_poly(f: Polynomial | Sequence[RationalLike]) -> Polynomial:
    return f if isinstance(f, Polynomial) else Polynomial(f)


def derivative(f: Polynomial | Sequence[RationalLike], x0: RationalLike) -> Fraction:
    """st((f(x0 + eps) - f(x0)) / eps), computed in LC arithmetic."""
    p = _as_poly(f)
    x = constant(x0)
    quotient = div(sub(p(add(x, EPS)), p(x)), EPS)
    return standard_part(quotient)


def continuity_check(
    f: Polynomial | Sequence[RationalLike], x0: RationalLike, alpha: LCNumber
) -> bool:
    """Cauchy: an infinitesimal change alpha gives an infinitesimal change in f."""
    if classify(alpha) is not Classification.INFINITESIMAL:
        raise PreconditionError(
            f"alpha must be infinitesimal, got {classify(alpha).value}: {format_lc(alpha)}"
        )
    p = _as_poly(f)
    x = constant(x0)
    delta = sub(p(add(x, alpha)), p(x))
    return classify(delta) in (Classification.ZERO, Classification.INFINITESIMAL)


# --- Printing ----------------------------------------------------------------
def format_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_exponent(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"({format_rational(q)})"


def format_lc(a: LCNumber) -> str:
    """Canonical text, ascending exponents: `3 + 1*eps^1 - 1/2*eps^(3/2)`."""
    if a.is_zero():
        return "0"
    parts: list[str] = []
    for i, (q, c) in enumerate(a.terms):
        mag = abs(c) if i else c
        body = format_rational(mag)
        if q:
            body = f"{body}*eps^{format_exponent(q)}"
        if i:
            parts.append(f"{'-' if c < 0 else '+'} {body}")
        else:
            parts.append(body)
    return " ".join(parts)
