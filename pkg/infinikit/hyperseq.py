# infinikit/hyperseq.py
"""Sequence model of the hyperreals at desk scale.

A RateSeq is a finite sum of rate classes  (c + a*(-1)^n) * n^p * ln(n)^q  with
distinct (p, q), dominant class first, plus finitely many index overrides.
Ring operations act term by term; the maximal ideal that would turn this
ring into a field is never chosen, so comparisons the classes cannot settle
come back as an explicit undecidable verdict.
"""

from __future__ import annotations

import enum
import logging
import math
import operator
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from typing import Any, Union

import numpy as np

from infinikit import config
from infinikit import levi_civita as lc
from infinikit.errors import (
    BadInputError,
    CertificationError,
    DegenerateInputError,
    DomainError,
    NoLimitError,
)

log = logging.getLogger(__name__)

Number = Union[int, Fraction, float]
Order = tuple[Fraction, int]

_LN2 = math.log(2.0)


def _is_exact(x: Number) -> bool:
    return isinstance(x, (int, Fraction))


def _exact_or_float(x: Number | str) -> Number:
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    return float(x)


def _parity(n: int) -> int:
    return 1 if n % 2 == 0 else -1


def format_number(x: Number, digits: int = 12) -> str:
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"
    if math.isfinite(x) and x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return format(x, f".{digits}g")


# --- Rate classes --------------------------------------------------------------
@dataclass(frozen=True)
class RateClass:
    """(c + alt*(-1)^n) * n^p * ln(n)^q."""

    c: Number
    p: Fraction = Fraction(0)
    q: int = 0
    alt: Number = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", Fraction(self.p))
        object.__setattr__(self, "q", int(self.q))

    @property
    def order(self) -> Order:
        return (self.p, self.q)

    def is_zero(self) -> bool:
        return not self.c and not self.alt

    def restricted(self, parity: int) -> Number:
        """Coefficient on even (parity=1) or odd (parity=-1) indices."""
        return self.c + parity * self.alt

    def nonvanishing(self) -> bool:
        return bool(self.restricted(1)) and bool(self.restricted(-1))

    def is_exact(self) -> bool:
        return (
            _is_exact(self.c)
            and _is_exact(self.alt)
            and self.p.denominator == 1
            and self.q == 0
        )

    def at(self, n: int) -> Number:
        """Value at index n.

        A negative power of ln(n) is undefined at n = 1 (ln 1 = 0); that one
        sample uses ln 2 instead, so 1/ln(n) reads 1/ln 2 at n = 1. Only the
        first index is affected, which never changes a class.
        """
        coef = self.restricted(_parity(n))
        if not coef:
            return Fraction(0) if _is_exact(coef) else 0.0
        if self.is_exact():
            return Fraction(coef) * Fraction(n) ** int(self.p)
        value = float(coef) * float(n) ** float(self.p)
        if self.q:
            ln = _LN2 if self.q < 0 and n == 1 else math.log(n)
            value *= ln**self.q
        return value

    def sample_array(self, n: np.ndarray) -> np.ndarray:
        if self.alt:
            sign = np.where(n % 2 == 0, 1.0, -1.0)
            coef = float(self.c) + float(self.alt) * sign
        else:
            coef = np.full_like(n, float(self.c))
        values = coef * np.power(n, float(self.p))
        if self.q:
            ln = np.log(n)
            if self.q < 0:
                ln = np.where(n == 1, _LN2, ln)
            values = values * np.power(ln, self.q)
        return values

    def times(self, other: RateClass) -> RateClass:
        # (c1 + a1 s)(c2 + a2 s) with s^2 = 1
        return RateClass(
            c=self.c * other.c + self.alt * other.alt,
            p=self.p + other.p,
            q=self.q + other.q,
            alt=self.c * other.alt + self.alt * other.c,
        )

    def scaled(self, k: Number) -> RateClass:
        return replace(self, c=self.c * k, alt=self.alt * k)


def _merge(classes: Iterable[RateClass]) -> tuple[RateClass, ...]:
    acc: dict[Order, list[Number]] = {}
    for cls in classes:
        slot = acc.setdefault(cls.order, [Fraction(0), Fraction(0)])
        slot[0] = slot[0] + cls.c
        slot[1] = slot[1] + cls.alt
    merged = [
        RateClass(c=c, p=order[0], q=order[1], alt=a)
        for order, (c, a) in acc.items()
        if c or a
    ]
    merged.sort(key=lambda k: k.order, reverse=True)
    return tuple(merged)


# --- Sequences -------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class SeqSource:
    """Sampler rule for sequences not given by their classes alone."""

    name: str
    fn: Callable[..., Any]
    args: tuple[RateSeq, ...]
    vfn: Callable[..., np.ndarray] | None = None

    def evaluate(self, n: int) -> Number:
        return self.fn(*(a.sample(n) for a in self.args))


@dataclass(frozen=True, eq=False)
class RateSeq:
    """A real sequence <u_n>, n >= 1.

    `symbolic`: the classes equal u_n for all large n. Otherwise they are an
    asymptotic expansion, u_n - sum(terms) = o(last term); no terms means
    nothing is known about the growth.
    """

    terms: tuple[RateClass, ...] = ()
    prefix: tuple[tuple[int, Number], ...] = ()
    source: SeqSource | None = None
    symbolic: bool = True
    integer_valued: bool = False

    @cached_property
    def _overrides(self) -> dict[int, Number]:
        return dict(self.prefix)

    # -------- sampling --------
    def sample(self, n: int) -> Number:
        if n < 1:
            raise ValueError(f"sequences are indexed from 1, got {n}")
        if n in self._overrides:
            return self._overrides[n]
        if self.source is not None:
            return self.source.evaluate(n)
        total: Number = Fraction(0)
        for cls in self.terms:
            total = total + cls.at(n)
        return total

    def sample_array(self, start: int, stop: int) -> np.ndarray:
        """Float samples for indices start..stop inclusive."""
        n = np.arange(start, stop + 1, dtype=np.float64)
        if self.source is not None:
            if self.source.vfn is not None:
                with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                    out = self.source.vfn(
                        *(a.sample_array(start, stop) for a in self.source.args)
                    )
                out = np.asarray(out, dtype=np.float64)
            else:
                out = np.array(
                    [float(self.source.evaluate(k)) for k in range(start, stop + 1)]
                )
        else:
            out = np.zeros_like(n)
            for cls in self.terms:
                out += cls.sample_array(n)
        for idx, value in self.prefix:
            if start <= idx <= stop:
                out[idx - start] = float(value)
        return out

    def head(self, count: int) -> list[float]:
        return [float(self.sample(k)) for k in range(1, count + 1)]

    # -------- structure --------
    @property
    def rate(self) -> RateClass | None:
        """Dominant class, or None for the zero class / unknown growth."""
        return self.terms[0] if self.terms else None

    def is_zero_class(self) -> bool:
        return self.symbolic and not self.terms

    def with_prefix(self, overrides: Iterable[tuple[int, Number]]) -> RateSeq:
        merged = dict(self.prefix)
        for idx, value in overrides:
            if idx < 1:
                raise BadInputError(f"prefix index must be >= 1, got {idx}")
            merged[int(idx)] = value
        return replace(self, prefix=tuple(sorted(merged.items())))

    def __add__(self, other: object) -> RateSeq:
        b = _coerce(other)
        return NotImplemented if b is None else termwise_add(self, b)

    __radd__ = __add__

    def __mul__(self, other: object) -> RateSeq:
        b = _coerce(other)
        return NotImplemented if b is None else termwise_mul(self, b)

    __rmul__ = __mul__

    def __sub__(self, other: object) -> RateSeq:
        b = _coerce(other)
        return NotImplemented if b is None else sub(self, b)

    def __neg__(self) -> RateSeq:
        return neg(self)

    def __repr__(self) -> str:
        return f"RateSeq({describe(self)!r})"

    def __str__(self) -> str:
        return describe(self)


def _coerce(value: object) -> RateSeq | None:
    if isinstance(value, RateSeq):
        return value
    if isinstance(value, (int, Fraction, float)):
        return constant(value)
    return None


def seq(
    terms: Iterable[RateClass] = (),
    prefix: Iterable[tuple[int, Number]] = (),
) -> RateSeq:
    return RateSeq(terms=_merge(terms)).with_prefix(prefix)


def constant(value: Number | str) -> RateSeq:
    v = _exact_or_float(value)
    return RateSeq(terms=_merge([RateClass(c=v)]))


def monomial(c: Number | str = 1, p: Fraction | int | str = 0, q: int = 0) -> RateSeq:
    return RateSeq(terms=_merge([RateClass(c=_exact_or_float(c), p=Fraction(p), q=q)]))


ZERO = RateSeq()
ONE = constant(1)
N = monomial(1, 1)
LN = monomial(1, 0, 1)
ALTERNATING = RateSeq(terms=(RateClass(c=Fraction(0), alt=Fraction(1)),))


# --- Term-wise ring operations --------------------------------------------------------
def _precision(a: RateSeq) -> tuple[Any, ...] | None:
    """None when exact; otherwise the order below which nothing is known."""
    if a.symbolic:
        return None
    if not a.terms:
        return (math.inf, 0)
    return a.terms[-1].order


def _truncate_to(terms: tuple[RateClass, ...], prec: tuple[Any, ...] | None) -> tuple[RateClass, ...]:
    if prec is None:
        return terms
    return tuple(t for t in terms if t.order >= prec)


def _combined_source(
    name: str, fn: Callable[..., Any], vfn: Callable[..., np.ndarray], a: RateSeq, b: RateSeq
) -> SeqSource | None:
    if a.source is None and b.source is None:
        return None
    return SeqSource(name=name, fn=fn, args=(a, b), vfn=vfn)


def _pointwise_prefix(
    a: RateSeq, b: RateSeq, fn: Callable[[Number, Number], Number]
) -> tuple[tuple[int, Number], ...]:
    indices = sorted(set(a._overrides) | set(b._overrides))
    return tuple((i, fn(a.sample(i), b.sample(i))) for i in indices)


def termwise_add(a: RateSeq, b: RateSeq) -> RateSeq:
    """Pointwise sum. Exact on classes when both inputs are symbolic."""
    precs = [p for p in (_precision(a), _precision(b)) if p is not None]
    prec = max(precs) if precs else None
    terms = _truncate_to(_merge(a.terms + b.terms), prec)
    return RateSeq(
        terms=terms,
        prefix=_pointwise_prefix(a, b, operator.add),
        source=_combined_source("add", operator.add, np.add, a, b),
        symbolic=a.symbolic and b.symbolic,
        integer_valued=a.integer_valued and b.integer_valued,
    )


def _is_pure_monomial(a: RateSeq) -> bool:
    return a.symbolic and len(a.terms) == 1 and not a.terms[0].alt


def _inverse_pair(a: RateSeq, b: RateSeq) -> bool:
    """One side is the reciprocal expansion of a symbolic sequence eventually equal to the other."""
    for x, y in ((a, b), (b, a)):
        if x.symbolic or x.source is None or x.source.name != "reciprocal":
            continue
        base = x.source.args[0]
        if not base.symbolic:
            continue
        try:
            if eventually_equal(base, y):
                return True
        except CertificationError:
            pass
    return False


def termwise_mul(a: RateSeq, b: RateSeq) -> RateSeq:
    """Pointwise product; classes multiply exactly (coefficients multiply, exponents add)."""
    symbolic = a.symbolic and b.symbolic
    if _inverse_pair(a, b):
        # e * (1/e) is 1 off the finitely many zero samples of e
        terms, symbolic = (RateClass(c=Fraction(1)),), True
    elif symbolic:
        terms = _merge(x.times(y) for x in a.terms for y in b.terms)
    elif _is_pure_monomial(a) or _is_pure_monomial(b):
        mono, other = (a, b) if _is_pure_monomial(a) else (b, a)
        terms = tuple(t.times(mono.terms[0]) for t in other.terms)
    elif a.is_zero_class() or b.is_zero_class():
        terms, symbolic = (), True
    elif a.terms and b.terms and a.terms[0].nonvanishing() and b.terms[0].nonvanishing():
        terms = (a.terms[0].times(b.terms[0]),)
    else:
        terms = ()
    return RateSeq(
        terms=terms,
        prefix=_pointwise_prefix(a, b, operator.mul),
        source=_combined_source("mul", operator.mul, np.multiply, a, b),
        symbolic=symbolic,
        integer_valued=a.integer_valued and b.integer_valued,
    )


def neg(a: RateSeq) -> RateSeq:
    return termwise_mul(a, constant(-1))


def sub(a: RateSeq, b: RateSeq) -> RateSeq:
    return termwise_add(a, neg(b))


def scale(a: RateSeq, k: Number | str) -> RateSeq:
    return termwise_mul(a, constant(k))


# --- Eventual equality and dominance --------------------------------------------------
def _same_source(a: RateSeq, b: RateSeq) -> bool:
    sa, sb = a.source, b.source
    if sa is None or sb is None:
        return False
    if sa.name != sb.name or sa.fn is not sb.fn or len(sa.args) != len(sb.args):
        return False
    try:
        return all(eventually_equal(x, y) for x, y in zip(sa.args, sb.args))
    except CertificationError:
        return False


def eventually_equal(a: RateSeq, b: RateSeq) -> bool:
    """True iff a and b differ at finitely many indices (a - b is eventually zero)."""
    diff = sub(a, b)
    if diff.symbolic:
        return not diff.terms
    if _same_source(a, b):
        return True
    if diff.terms:
        # the leading class is nonzero on at least one parity
        return False
    raise CertificationError(
        "eventual equality is not certified by the classes of these sequences"
    )


class DominanceVerdict(str, enum.Enum):
    LESS = "less"
    GREATER = "greater"
    SAME_ORDER = "same-order"
    UNDECIDABLE = "undecidable-without-ultrafilter"


_ZERO_KEY: tuple[Any, ...] = (-math.inf, 0, 0)


def _parity_key(a: RateSeq, parity: int) -> tuple[Any, ...] | None:
    for cls in a.terms:
        coef = cls.restricted(parity)
        if coef:
            return (cls.p, cls.q, abs(coef))
    if a.symbolic:
        return _ZERO_KEY
    return None


def _compare_keys(ka: tuple[Any, ...], kb: tuple[Any, ...]) -> DominanceVerdict:
    if ka == kb:
        return DominanceVerdict.SAME_ORDER
    return DominanceVerdict.LESS if ka < kb else DominanceVerdict.GREATER


def dominance_compare(a: RateSeq, b: RateSeq) -> DominanceVerdict:
    """Eventual order of |a| against |b|, decided separately on even and odd n."""
    verdicts = set()
    for parity in (1, -1):
        ka, kb = _parity_key(a, parity), _parity_key(b, parity)
        if ka is None or kb is None:
            return DominanceVerdict.UNDECIDABLE
        verdicts.add(_compare_keys(ka, kb))
    if len(verdicts) == 1:
        return verdicts.pop()
    return DominanceVerdict.UNDECIDABLE


def eventual_sign(a: RateSeq) -> int | None:
    """+1 / -1 when a is eventually of that sign, 0 for eventually zero, else None."""
    signs = set()
    for parity in (1, -1):
        for cls in a.terms:
            coef = cls.restricted(parity)
            if coef:
                signs.add(1 if coef > 0 else -1)
                break
        else:
            if not a.symbolic:
                return None
            signs.add(0)
    return signs.pop() if len(signs) == 1 else None


# --- Limits ------------------------------------------------------------------------
_UNIT: Order = (Fraction(0), 0)


def standard_part_seq(a: RateSeq) -> Number:
    """lim u_n, read off the classes; prefix overrides never matter."""
    if not a.symbolic and not a.terms:
        raise NoLimitError("growth of this sequence is unknown")
    for cls in a.terms:
        if cls.is_zero():
            continue
        if cls.order > _UNIT:
            raise NoLimitError(f"sequence diverges: {describe(a)}")
        if cls.order == _UNIT:
            if cls.alt:
                raise NoLimitError(f"sequence oscillates: {describe(a)}")
            return cls.c
        return Fraction(0)
    return Fraction(0)


def converges(a: RateSeq) -> bool:
    try:
        standard_part_seq(a)
    except NoLimitError:
        return False
    return True


def infinitesimal_part(x: RateSeq) -> RateSeq:
    """x - st(x), a sequence tending to 0."""
    return sub(x, constant(standard_part_seq(x)))


def diverges_to_plus_infinity(a: RateSeq) -> bool:
    lead = a.rate
    if lead is None or lead.order <= _UNIT:
        return False
    return lead.restricted(1) > 0 and lead.restricted(-1) > 0


# --- Natural extensions ------------------------------------------------------------------
def identity(x: Number) -> Number:
    return x


@dataclass(frozen=True)
class Power:
    """x -> x**r, the power entry of the extension catalogue."""

    r: Fraction = field(default=Fraction(1))

    def __post_init__(self) -> None:
        object.__setattr__(self, "r", Fraction(self.r))

    def __call__(self, x: Number) -> Number:
        if self.r.denominator == 1:
            k = int(self.r)
            if _is_exact(x):
                return Fraction(x) ** k
            return float(x) ** k
        if x < 0:
            raise ValueError(f"negative base {x} for power {self.r}")
        return float(x) ** float(self.r)

    def vectorized(self, x: np.ndarray) -> np.ndarray:
        return np.power(x, float(self.r))


def _class_power(cls: RateClass, r: Fraction) -> RateClass | None:
    if cls.alt or not cls.c or (cls.q * r).denominator != 1:
        return None
    if r.denominator == 1:
        coef: Number = cls.c ** int(r)
    elif cls.c > 0:
        coef = float(cls.c) ** float(r)
    else:
        return None
    return RateClass(c=coef, p=cls.p * r, q=int(cls.q * r))


def _probe(f: Callable[[Number], Number], a: RateSeq, name: str) -> None:
    indices = set(range(1, config.EXTEND_PROBE + 1)) | set(a._overrides)
    for n in sorted(indices):
        try:
            value = f(a.sample(n))
        except (ValueError, OverflowError, ZeroDivisionError) as exc:
            raise DomainError(f"{name} undefined at index {n}: {exc}") from None
        if isinstance(value, complex):
            raise DomainError(f"{name} leaves the reals at index {n}")


def _extension_terms(f: Callable[[Number], Number], a: RateSeq) -> tuple[tuple[RateClass, ...], str]:
    """Asymptotic classes of f(a) for catalogue functions, plus a display name."""
    lead = a.rate
    if f is math.exp:
        if not converges(a):
            return (), "exp"
        limit = standard_part_seq(a)
        base = math.exp(float(limit))
        rest = infinitesimal_part(a)
        terms = [RateClass(c=base)]
        if rest.rate is not None and rest.rate.nonvanishing():
            terms.append(rest.rate.scaled(base))
        return _merge(terms), "exp"
    if f is math.log:
        if converges(a):
            limit = standard_part_seq(a)
            if limit < 0:
                raise DomainError(f"ln of a sequence with negative limit {limit}")
            if limit > 0:
                rest = infinitesimal_part(a)
                terms = [RateClass(c=math.log(float(limit)))]
                if rest.rate is not None and rest.rate.nonvanishing():
                    terms.append(rest.rate.scaled(1 / float(limit)))
                return _merge(terms), "ln"
        if lead is not None and not lead.alt and lead.c and lead.c > 0 and lead.p:
            return (RateClass(c=lead.p, p=Fraction(0), q=1),), "ln"
        return (), "ln"
    return (), getattr(f, "__name__", type(f).__name__)


def extend(f: Callable[[Number], Number], a: RateSeq) -> RateSeq:
    """Natural extension: the sequence n -> f(a_n).

    Classes are recomputed for the catalogue (identity, Power, math.exp,
    math.log, math.sqrt); any other function gives a sampler-only sequence.
    """
    if f is identity:
        return a
    if f is math.sqrt:
        f = Power(Fraction(1, 2))
    if isinstance(f, Power):
        _probe(f, a, f"power {f.r}")
        r = f.r
        if r.denominator == 1 and r >= 0:
            result = ONE
            for _ in range(int(r)):
                result = termwise_mul(result, a)
            return result
        if r.denominator == 1:
            return reciprocal(extend(Power(-r), a))
        if a.symbolic and len(a.terms) == 1:
            cls = _class_power(a.terms[0], r)
            if cls is not None:
                prefix = tuple((i, f(v)) for i, v in a.prefix)
                return RateSeq(terms=(cls,), prefix=prefix)
        lead_pow = _class_power(a.rate, r) if a.rate is not None else None
        return RateSeq(
            terms=(lead_pow,) if lead_pow is not None else (),
            source=SeqSource(f"pow{r}", f, (a,), f.vectorized),
            symbolic=False,
        )
    _probe(f, a, getattr(f, "__name__", "f"))
    if a.symbolic and a.source is None and all(t.order == _UNIT and not t.alt for t in a.terms):
        # constant argument: exact image
        value = f(a.terms[0].c if a.terms else Fraction(0))
        prefix = tuple((i, f(v)) for i, v in a.prefix)
        return RateSeq(terms=_merge([RateClass(c=_exact_or_float(value))]), prefix=prefix)
    terms, name = _extension_terms(f, a)
    vfn = {math.exp: np.exp, math.log: np.log}.get(f)
    return RateSeq(
        terms=terms,
        source=SeqSource(name, f, (a,), vfn),
        symbolic=False,
    )


# --- H = 1/eps and its integer part --------------------------------------------------------
ZERO_SAMPLE_SENTINEL = math.inf


def _reciprocal_value(x: Number) -> Number:
    if not x:
        log.debug("reciprocal: zero sample read as +inf")
        return ZERO_SAMPLE_SENTINEL
    if _is_exact(x):
        return 1 / Fraction(x)
    return 1.0 / x


def _reciprocal_array(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    with np.errstate(divide="ignore"):
        out = np.reciprocal(x)
    return np.where(x == 0, ZERO_SAMPLE_SENTINEL, out)


def _reciprocal_class(cls: RateClass) -> RateClass:
    if not cls.alt:
        return RateClass(c=_reciprocal_value(cls.c), p=-cls.p, q=-cls.q)
    det = cls.c * cls.c - cls.alt * cls.alt
    # 1/(c + a s) = (c - a s)/(c^2 - a^2) since s^2 = 1
    return RateClass(c=cls.c / det, p=-cls.p, q=-cls.q, alt=-cls.alt / det)


def _is_power_sum(e: RateSeq) -> bool:
    """Exact classes c*n^p only, so e is a Levi-Civita number in eps = 1/n."""
    return (
        e.symbolic
        and e.source is None
        and all(not cls.alt and not cls.q and _is_exact(cls.c) for cls in e.terms)
    )


def _reciprocal_expansion(e: RateSeq) -> tuple[RateClass, ...]:
    """Classes of 1/e down to its first decaying one, by series inversion in eps = 1/n.

    Every class returned is exact; what is left over is o(last class).
    """
    a = lc.make((-cls.p, cls.c) for cls in e.terms)
    v = a.valuation()
    step = min(-cls.p - v for cls in e.terms[1:])
    extra = step
    while True:
        b = lc.inv(a, v + extra)
        # inv is exact for eps exponents up to the cutoff minus v
        if any(q > 0 for q, _ in b.terms) or extra >= config.INV_CUTOFF:
            break
        extra = min(2 * extra, Fraction(config.INV_CUTOFF))
    return _merge(RateClass(c=coef, p=-q) for q, coef in b.terms)


def _zero_free_from(e: RateSeq) -> int | None:
    """An index past which the classes of e cannot cancel, or None when not bounded cheaply.

    |sum of later classes| <= S * n^p1 < m * n^p0 once n^(p0 - p1) > S / m.
    """
    if not e.symbolic or e.source is not None or any(cls.q for cls in e.terms):
        return None
    lead = e.terms[0]
    m = min(abs(lead.restricted(1)), abs(lead.restricted(-1)))
    if not m:
        return None
    rest = sum(abs(cls.c) + abs(cls.alt) for cls in e.terms[1:])
    if not rest:
        return 1
    gap = lead.p - e.terms[1].p
    log_bound = (math.log(float(rest)) - math.log(float(m))) / float(gap)
    if log_bound > math.log(config.FILTER_HORIZON):
        return None
    return int(math.exp(max(log_bound, 0.0))) + 2


def _zero_indices(e: RateSeq) -> list[int]:
    """Indices where e vanishes: exact over the cancellation range, probed otherwise."""
    last = max(config.EXTEND_PROBE, _zero_free_from(e) or 0)
    n = np.arange(1, last + 1, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        values = e.sample_array(1, last)
        size = np.zeros_like(n)
        for cls in e.terms:
            size += np.abs(cls.sample_array(n))
    near = np.nonzero(~(np.abs(values) > 1e-9 * size))[0] + 1
    candidates = {int(k) for k in near} | set(e._overrides)
    return [k for k in sorted(candidates) if not e.sample(k)]


def _vanishing_parity(e: RateSeq) -> int | None:
    for parity in (1, -1):
        if all(not cls.restricted(parity) for cls in e.terms):
            return parity
    return None


def reciprocal(e: RateSeq) -> RateSeq:
    """H = 1/e on the tail.

    Indices where e vanishes get the sentinel value +inf as an override and
    are logged. For sums of exact power classes the result carries the
    inverted series down to its first decaying class.
    """
    if e.is_zero_class():
        raise DegenerateInputError("reciprocal of the zero sequence")
    if e.source is not None and e.source.name == "reciprocal":
        return e.source.args[0]
    lead = e.rate
    if lead is None:
        raise DegenerateInputError("reciprocal of a sequence with unknown class")
    if e.symbolic:
        parity = _vanishing_parity(e)
        if parity is not None:
            raise DegenerateInputError(
                f"class {describe(e)} vanishes on every {'even' if parity == 1 else 'odd'} index"
            )

    zeros = _zero_indices(e)
    if zeros:
        log.warning("reciprocal: zero samples at indices %s replaced by +inf", zeros)
    sentinel = tuple((n, ZERO_SAMPLE_SENTINEL) for n in zeros)
    source = SeqSource("reciprocal", _reciprocal_value, (e,), _reciprocal_array)

    if e.symbolic and len(e.terms) == 1:
        cls = _reciprocal_class(lead)
        if e.source is None:
            prefix = tuple((i, _reciprocal_value(v)) for i, v in e.prefix if v)
            return RateSeq(terms=(cls,), prefix=prefix).with_prefix(sentinel)
        return RateSeq(terms=(cls,), source=source).with_prefix(sentinel)
    if _is_power_sum(e):
        terms = _reciprocal_expansion(e)
    else:
        terms = (_reciprocal_class(lead),) if lead.nonvanishing() else ()
    return RateSeq(terms=terms, source=source, symbolic=False).with_prefix(sentinel)


def _floor(x: Number) -> Number:
    if isinstance(x, float) and math.isinf(x):
        return x  # zero-sample sentinel passes through
    return math.floor(x)


def _integer(x: Number) -> bool:
    return _is_exact(x) and Fraction(x).denominator == 1


@dataclass(frozen=True)
class FloorRule:
    """floor(G(n) + r_n) for large n.

    G is a rational polynomial in n with (-1)^n coefficients, stored as
    {degree: (c, alt)}; r_n tends to 0 and, when `below`, from below, so
    integer values of G drop by one.
    """

    coeffs: tuple[tuple[int, Fraction, Fraction], ...]
    below: bool = False

    def g(self, n: int) -> Fraction:
        s = _parity(n)
        return sum((Fraction(c + s * a) * n**d for d, c, a in self.coeffs), Fraction(0))

    def value(self, n: int) -> int:
        g = self.g(n)
        f = math.floor(g)
        return f - 1 if self.below and g == f else f

    @property
    def denominator(self) -> int:
        return math.lcm(*(Fraction(x).denominator for _, c, a in self.coeffs for x in (c, a)))

    def period(self, modulus: int) -> int:
        """A period of value(n) mod modulus in n."""
        return 2 * modulus * self.denominator

    @property
    def integral(self) -> bool:
        return all(_integer(a) and (d == 0 or _integer(c)) for d, c, a in self.coeffs)

    def classes(self) -> tuple[RateClass, ...]:
        """Exact classes of the floor; only for integral rules."""
        out = []
        for d, c, a in self.coeffs:
            if d == 0:
                c = Fraction(math.floor(c)) if not _integer(c) else c - (1 if self.below else 0)
            out.append(RateClass(c=Fraction(c), p=Fraction(d), alt=Fraction(a)))
        if self.below and all(d for d, _, _ in self.coeffs):
            out.append(RateClass(c=Fraction(-1)))
        return _merge(out)

    def steps_within_unit(self) -> bool:
        """G(n+1) - G(n) in [0, 1] with G -> +inf: every large integer is a value."""
        degrees = {d for d, _, _ in self.coeffs}
        if not degrees <= {0, 1} or 1 not in degrees:
            return False
        by_degree = {d: (c, a) for d, c, a in self.coeffs}
        c1, a1 = by_degree[1]
        _, a0 = by_degree.get(0, (Fraction(0), Fraction(0)))
        if a1 or c1 <= 0:
            return False
        return all(0 <= c1 + k * a0 <= 1 for k in (2, -2))


def floor_rule(h: RateSeq) -> FloorRule | None:
    """The FloorRule of h when h = rational polynomial + o(1) with the o(1) sign known."""
    if not h.terms:
        return None
    if not h.symbolic and h.terms[-1].order >= _UNIT:
        # the expansion stops above the constant term
        return None
    coeffs: list[tuple[int, Fraction, Fraction]] = []
    decaying: list[RateClass] = []
    for cls in h.terms:
        if cls.order < _UNIT:
            decaying.append(cls)
        elif cls.q == 0 and cls.p.denominator == 1 and _is_exact(cls.c) and _is_exact(cls.alt):
            coeffs.append((int(cls.p), Fraction(cls.c), Fraction(cls.alt)))
        else:
            return None
    rule = FloorRule(tuple(coeffs))
    if not decaying:
        return rule
    sign = eventual_sign(RateSeq(terms=tuple(decaying)))
    if sign is None:
        # only matters where G is an integer
        hits = any(rule.g(n).denominator == 1 for n in range(1, 2 * rule.denominator + 1))
        return None if hits else rule
    return replace(rule, below=sign < 0)


def integer_part(h: RateSeq) -> RateSeq:
    """*[H]: floor of every sample; classes stay exact when h is an integer polynomial plus o(1)."""
    rule = floor_rule(h)
    source = SeqSource("floor", _floor, (h,), np.floor)
    if rule is not None and rule.integral:
        return RateSeq(terms=rule.classes(), source=source, symbolic=True, integer_valued=True)
    lead = h.rate
    terms = (lead,) if lead is not None and lead.order > _UNIT and lead.nonvanishing() else ()
    return RateSeq(terms=terms, source=source, symbolic=False, integer_valued=True)


def floor_rule_of(h_int: RateSeq) -> FloorRule | None:
    """How an integer-valued sequence behaves for large n, when that is known exactly."""
    coeffs = integer_polynomial(h_int)
    if coeffs is not None:
        return FloorRule(tuple((d, Fraction(c), Fraction(a)) for d, (c, a) in coeffs.items()))
    if h_int.source is not None and h_int.source.name == "floor":
        return floor_rule(h_int.source.args[0])
    return None


def integer_polynomial(h: RateSeq) -> dict[int, tuple[int, int]] | None:
    """{degree: (c, alt)} when h's classes are an integer polynomial in n (with (-1)^n)."""
    if not h.symbolic:
        return None
    coeffs: dict[int, tuple[int, int]] = {}
    for cls in h.terms:
        if cls.q or cls.p.denominator != 1 or cls.p < 0:
            return None
        if not (_integer(cls.c) and _integer(cls.alt)):
            return None
        coeffs[int(cls.p)] = (int(cls.c), int(cls.alt))
    return coeffs


# --- Text forms ------------------------------------------------------------------------
def _format_class(cls: RateClass, digits: int) -> tuple[str, bool]:
    """Body of one class and whether it is negative (for ' - ' joins)."""
    negative = False
    if not cls.alt:
        negative = cls.c < 0
        coef = format_number(abs(cls.c), digits)
    elif not cls.c:
        negative = cls.alt < 0
        coef = f"{format_number(abs(cls.alt), digits)}*(-1)^n"
    else:
        sign = "-" if cls.alt < 0 else "+"
        coef = f"({format_number(cls.c, digits)} {sign} {format_number(abs(cls.alt), digits)}*(-1)^n)"
    factors = [coef]
    if cls.p:
        factors.append(f"n^{_format_exp(cls.p)}")
    if cls.q:
        factors.append("ln(n)" if cls.q == 1 else f"ln(n)^{cls.q}")
    return "*".join(factors), negative


def _format_exp(p: Fraction) -> str:
    if p.denominator == 1:
        return str(p.numerator)
    return f"({p.numerator}/{p.denominator})"


def format_seq(a: RateSeq, digits: int = 12) -> str:
    """Classes as an expression the CLI parser accepts, dominant class first."""
    if not a.terms:
        return "0" if a.symbolic else "?"
    parts: list[str] = []
    for i, cls in enumerate(a.terms):
        body, negative = _format_class(cls, digits)
        if i == 0:
            parts.append(f"-{body}" if negative else body)
        else:
            parts.append(f"{'-' if negative else '+'} {body}")
    return " ".join(parts)


def format_prefix(prefix: Sequence[tuple[int, Number]], digits: int = 12) -> str:
    inner = ", ".join(f"{i}:{format_number(v, digits)}" for i, v in prefix)
    return "{" + inner + "}"


def describe(a: RateSeq, digits: int = 12) -> str:
    text = format_seq(a, digits)
    if not a.symbolic:
        text = f"{a.source.name if a.source else 'seq'}(...) ~ {text}"
    if a.prefix:
        text += " " + format_prefix(a.prefix, digits)
    return text


def parse_prefix(text: str) -> tuple[tuple[int, Fraction], ...]:
    """`{1:0.5, 2:1/4}` -> ((1, 1/2), (2, 1/4)); values are exact."""
    body = text.strip()
    if not (body.startswith("{") and body.endswith("}")):
        raise BadInputError(f"prefix must look like {{1:0.5, 2:0.25}}, got {text!r}")
    body = body[1:-1].strip()
    if not body:
        return ()
    items: list[tuple[int, Fraction]] = []
    for chunk in body.split(","):
        try:
            key, value = chunk.split(":")
            items.append((int(key), Fraction(value.strip())))
        except ValueError:
            raise BadInputError(f"bad prefix entry {chunk.strip()!r}") from None
    return tuple(sorted(items))
