# infinikit/filters.py
"""Ultrafilter questions about an infinite hypernatural H, answered where they can be.

For a decidable A in N the question is whether {n : H(n) in A} belongs to the
ultrafilter. Only cofinite sets (always in) and finite sets (never in) have a
choice-free answer; everything else is `undecided`.
"""

from __future__ import annotations

import abc
import enum
import logging
import math
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

from infinikit import config
from infinikit.errors import BadInputError, CertificationError, PreconditionError
from infinikit.hyperseq import (
    FloorRule,
    RateSeq,
    describe,
    diverges_to_plus_infinity,
    floor_rule_of,
    integer_polynomial,
)

log = logging.getLogger(__name__)


class FilterVerdict(str, enum.Enum):
    IN_FILTER = "in_filter"
    IN_COMPLEMENT = "in_complement"
    UNDECIDED = "undecided"


class TailKind(str, enum.Enum):
    FINITE = "finite"
    COFINITE = "cofinite"
    SPLIT = "infinite-coinfinite"


_KIND_VERDICT = {
    TailKind.FINITE: FilterVerdict.IN_COMPLEMENT,
    TailKind.COFINITE: FilterVerdict.IN_FILTER,
    TailKind.SPLIT: FilterVerdict.UNDECIDED,
}


def iroot(m: int, k: int) -> int:
    """floor(m ** (1/k)) for m >= 0, exact."""
    if m < 0:
        raise ValueError("iroot of a negative number")
    if m < 2:
        return m
    x = 1 << ((m.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + m // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def is_perfect_power(m: int, k: int) -> bool:
    if m < 0:
        return False
    r = iroot(m, k)
    return r**k == m


# --- Floors of polynomials in n (with (-1)^n) ---------------------------------------
def _eventual_lower_index(rule: FloorRule, floor_value: int) -> int:
    """An index after which rule.value(n) > floor_value, from a Cauchy root bound per parity."""
    bound = 1
    for s in (1, -1):
        restricted = {d: c + s * a for d, c, a in rule.coeffs}
        # value(n) >= G(n) - 1, so G has to clear floor_value + 1
        restricted[0] = restricted.get(0, 0) - (floor_value + 1)
        deg = max(d for d, v in restricted.items() if v)
        lead = restricted[deg]
        cauchy = 1 + max(
            (Fraction(abs(v), abs(lead)) for d, v in restricted.items() if d < deg),
            default=Fraction(0),
        )
        bound = max(bound, math.ceil(cauchy) + 1)
    return bound


# --- Predicates ------------------------------------------------------------------------
class Predicate(abc.ABC):
    """A decidable subset A of N with enough description to certify tail behaviour."""

    name: str

    @abc.abstractmethod
    def contains(self, m: int) -> bool: ...

    @abc.abstractmethod
    def tail_kind(self, horizon: int) -> TailKind | None:
        """Whether A itself is finite, cofinite or neither; None if not certified."""

    def decide(self, h: RateSeq, horizon: int) -> FilterVerdict | None:
        """Predicate-specific symbolic rule, None when it does not apply."""
        return None

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Threshold(Predicate):
    """{m : m > k}."""

    k: int

    @property
    def name(self) -> str:  # type: ignore[override]
        return f"gt{self.k}"

    def contains(self, m: int) -> bool:
        return m > self.k

    def tail_kind(self, horizon: int) -> TailKind:
        return TailKind.COFINITE

    def decide(self, h: RateSeq, horizon: int) -> FilterVerdict:
        # H diverges, so H(n) > k for all large n
        return FilterVerdict.IN_FILTER


@dataclass(frozen=True)
class FiniteSet(Predicate):
    elements: frozenset[int]

    @property
    def name(self) -> str:  # type: ignore[override]
        return "set{" + ",".join(str(e) for e in sorted(self.elements)) + "}"

    def contains(self, m: int) -> bool:
        return m in self.elements

    def tail_kind(self, horizon: int) -> TailKind:
        return TailKind.FINITE

    def decide(self, h: RateSeq, horizon: int) -> FilterVerdict:
        return FilterVerdict.IN_COMPLEMENT


@dataclass(frozen=True)
class Progression(Predicate):
    """{m : m = residue (mod modulus)}."""

    modulus: int
    residue: int = 0

    def __post_init__(self) -> None:
        if self.modulus < 1:
            raise BadInputError(f"modulus must be >= 1, got {self.modulus}")

    @property
    def name(self) -> str:  # type: ignore[override]
        if (self.modulus, self.residue % self.modulus) == (2, 0):
            return "evens"
        if (self.modulus, self.residue % self.modulus) == (2, 1):
            return "odds"
        return f"mod{self.modulus}={self.residue % self.modulus}"

    def contains(self, m: int) -> bool:
        return m % self.modulus == self.residue % self.modulus

    def tail_kind(self, horizon: int) -> TailKind:
        return TailKind.COFINITE if self.modulus == 1 else TailKind.SPLIT

    def decide(self, h: RateSeq, horizon: int) -> FilterVerdict | None:
        rule = floor_rule_of(h)
        if rule is None or rule.period(self.modulus) > horizon:
            return None
        hits = {self.contains(rule.value(n)) for n in range(1, rule.period(self.modulus) + 1)}
        if hits == {True}:
            return FilterVerdict.IN_FILTER
        if hits == {False}:
            return FilterVerdict.IN_COMPLEMENT
        return FilterVerdict.UNDECIDED


@dataclass(frozen=True)
class PerfectPowers(Predicate):
    """{j^k : j >= 0}."""

    k: int = 2

    def __post_init__(self) -> None:
        if self.k < 2:
            raise BadInputError(f"perfect powers need k >= 2, got {self.k}")

    @property
    def name(self) -> str:  # type: ignore[override]
        return {2: "squares", 3: "cubes"}.get(self.k, f"powers{self.k}")

    def contains(self, m: int) -> bool:
        return is_perfect_power(m, self.k)

    def tail_kind(self, horizon: int) -> TailKind:
        return TailKind.SPLIT

    def decide(self, h: RateSeq, horizon: int) -> FilterVerdict | None:
        coeffs = integer_polynomial(h)
        if coeffs is None or len(coeffs) != 1:
            return None
        ((deg, (c, alt)),) = coeffs.items()
        if alt or c <= 0 or deg < 1:
            return None
        if deg % self.k == 0:
            # c*n^deg = c*(n^(deg/k))^k is a k-th power iff c is
            return FilterVerdict.IN_FILTER if self.contains(c) else FilterVerdict.IN_COMPLEMENT
        if math.gcd(deg, self.k) == 1:
            # n = c^s * t^k with k | 1 + s*deg hits infinitely often; large primes miss
            return FilterVerdict.UNDECIDED
        return None


@dataclass(frozen=True)
class Described(Predicate):
    """User-supplied set whose membership is periodic beyond `start` (bounded description)."""

    label: str
    member: Callable[[int], bool]
    period: int | None = None
    start: int = 0

    @property
    def name(self) -> str:  # type: ignore[override]
        return self.label

    def contains(self, m: int) -> bool:
        return bool(self.member(m))

    def tail_kind(self, horizon: int) -> TailKind | None:
        if self.period is None:
            return None
        window = {self.contains(m) for m in range(self.start + 1, self.start + 1 + self.period)}
        if window == {True}:
            return TailKind.COFINITE
        if window == {False}:
            return TailKind.FINITE
        return TailKind.SPLIT

    def decide(self, h: RateSeq, horizon: int) -> FilterVerdict | None:
        rule = floor_rule_of(h)
        if rule is None or self.period is None:
            return None
        n0 = _eventual_lower_index(rule, self.start)
        if n0 > horizon:
            raise CertificationError(
                f"{self.label}: H passes the description start only after index {n0} > horizon {horizon}"
            )
        hits = {
            self.contains(rule.value(n)) for n in range(n0, n0 + rule.period(self.period))
        }
        if hits == {True}:
            return FilterVerdict.IN_FILTER
        if hits == {False}:
            return FilterVerdict.IN_COMPLEMENT
        return FilterVerdict.UNDECIDED


# --- Catalogue lookup --------------------------------------------------------------------
def predicate_from_name(text: str) -> Predicate:
    """Catalogue names: gtK, evens, odds, modQ=R, squares, cubes, powersK, set{a,b,...}."""
    token = text.strip().lower()
    try:
        if token == "evens":
            return Progression(2, 0)
        if token == "odds":
            return Progression(2, 1)
        if token == "squares":
            return PerfectPowers(2)
        if token == "cubes":
            return PerfectPowers(3)
        if token.startswith("powers"):
            return PerfectPowers(int(token[len("powers"):]))
        if token.startswith("gt"):
            return Threshold(int(token[2:]))
        if token.startswith("mod") and "=" in token:
            q, r = token[3:].split("=", 1)
            return Progression(int(q), int(r))
        if token.startswith("set{") and token.endswith("}"):
            body = token[4:-1].strip()
            return FiniteSet(frozenset(int(x) for x in body.split(",") if x.strip()))
    except ValueError:
        pass
    raise BadInputError(f"unknown predicate {text!r}")


def parse_predicates(text: str) -> list[Predicate]:
    """Comma list outside braces: `gt10,evens,set{1,2}`."""
    items, depth, current = [], 0, ""
    for ch in text:
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
        if ch == "," and depth == 0:
            items.append(current)
            current = ""
        else:
            current += ch
    if current.strip():
        items.append(current)
    return [predicate_from_name(item) for item in items if item.strip()]


# --- Queries ---------------------------------------------------------------------------
def _slowly_surjective(h: RateSeq) -> bool:
    """Eventually nondecreasing with steps in {0, 1}: H hits every large integer."""
    coeffs = integer_polynomial(h)
    if coeffs is not None:
        return set(coeffs) <= {0, 1} and coeffs.get(1) == (1, 0)
    rule = floor_rule_of(h)
    if rule is not None and rule.steps_within_unit():
        return True
    if h.source is None or h.source.name != "floor":
        return False
    g = h.source.args[0]
    lead = g.rate
    if not g.symbolic or lead is None or lead.alt or not lead.c or lead.c < 0:
        return False
    zero, one = (Fraction(0), 0), (Fraction(1), 0)
    if any(cls.alt for cls in g.terms if cls.order >= zero):
        return False
    # increments of g tend to 0 and g increases to +inf
    return zero < lead.order < one


def filter_query(
    h: RateSeq, predicate: Predicate, horizon: int | None = None
) -> FilterVerdict:
    """Is {n : H(n) in A} in the ultrafilter? Certified answers only.

    Raises CertificationError when no symbolic rule or tail argument applies
    within the horizon. Samples of H are never turned into a verdict.
    """
    horizon = config.FILTER_HORIZON if horizon is None else horizon
    if not h.integer_valued:
        raise PreconditionError("filter queries need an integer-valued H (take integer_part first)")
    if not diverges_to_plus_infinity(h):
        raise PreconditionError(f"H must diverge to +inf: {describe(h)}")

    verdict = predicate.decide(h, horizon)
    if verdict is not None:
        return verdict

    if _slowly_surjective(h):
        kind = predicate.tail_kind(horizon)
        if kind is not None:
            return _KIND_VERDICT[kind]

    log.debug("filter_query: no certified rule for %s on H = %s", predicate, describe(h))
    raise CertificationError(
        f"cannot certify {predicate} for H = {describe(h)} within horizon {horizon}"
    )


def filter_queries(
    h: RateSeq, predicates: Sequence[Predicate], horizon: int | None = None
) -> list[tuple[str, FilterVerdict]]:
    return [(p.name, filter_query(h, p, horizon)) for p in predicates]


# --- Dyadic enclosure --------------------------------------------------------------------
@dataclass(frozen=True)
class DyadicInterval:
    lo: Fraction
    hi: Fraction
    decided_bits: int

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x: Fraction) -> bool:
        return self.lo <= x <= self.hi

    def __str__(self) -> str:
        return f"[{_frac(self.lo)}, {_frac(self.hi)}]"


def _frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def dyadic_embed(answers: Iterable[FilterVerdict | str]) -> DyadicInterval:
    """Smallest dyadic-aligned interval holding every binary expansion 0.b1 b2 ...

    b_k = 1 for in_filter, 0 for in_complement; an undecided bit leaves it and
    everything after it free, so only the leading decided run narrows the interval.
    """
    bits = 0
    d = 0
    for answer in answers:
        verdict = FilterVerdict(answer)
        if verdict is FilterVerdict.UNDECIDED:
            break
        bits = 2 * bits + (1 if verdict is FilterVerdict.IN_FILTER else 0)
        d += 1
    scale = Fraction(1, 2**d)
    return DyadicInterval(lo=bits * scale, hi=(bits + 1) * scale, decided_bits=d)
