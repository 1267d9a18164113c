# tests/unit/test_filters.py
import math
from fractions import Fraction

import pytest

from infinikit.errors import BadInputError, CertificationError, PreconditionError
from infinikit.filters import (
    Described,
    FilterVerdict,
    Progression,
    dyadic_embed,
    filter_queries,
    filter_query,
    iroot,
    is_perfect_power,
    parse_predicates,
    predicate_from_name,
)
from infinikit.hyperseq import N, constant, extend, integer_part, monomial, reciprocal, scale

H_N = integer_part(reciprocal(monomial(1, -1)))


def _q(h, name):
    return filter_query(h, predicate_from_name(name), horizon=1000)


def test_identity_hypernatural_examples():
    assert _q(H_N, "gt10") is FilterVerdict.IN_FILTER
    assert _q(H_N, "evens") is FilterVerdict.UNDECIDED
    assert _q(H_N, "squares") is FilterVerdict.UNDECIDED
    assert _q(H_N, "set{1,2,3}") is FilterVerdict.IN_COMPLEMENT


def test_polynomial_hypernaturals_decide_periodic_sets():
    h_sq = integer_part(monomial(1, 2))
    assert _q(h_sq, "squares") is FilterVerdict.IN_FILTER
    assert _q(h_sq, "evens") is FilterVerdict.UNDECIDED
    h_2n = integer_part(monomial(2, 1))
    assert _q(h_2n, "evens") is FilterVerdict.IN_FILTER
    assert _q(h_2n, "odds") is FilterVerdict.IN_COMPLEMENT
    assert _q(integer_part(monomial(2, 2)), "squares") is FilterVerdict.IN_COMPLEMENT


def test_slowly_growing_floor_uses_tail_argument():
    h = integer_part(extend(math.sqrt, N))
    assert _q(h, "gt10") is FilterVerdict.IN_FILTER
    assert _q(h, "evens") is FilterVerdict.UNDECIDED
    assert _q(h, "set{5}") is FilterVerdict.IN_COMPLEMENT


def test_described_set_with_period():
    mult3 = Described("mult3", lambda m: m % 3 == 0, period=3)
    assert filter_query(integer_part(monomial(3, 1)), mult3, horizon=100) is FilterVerdict.IN_FILTER


def test_uncertified_query_raises():
    opaque = Described("opaque", lambda m: bin(m).count("1") % 2 == 0)
    with pytest.raises(CertificationError, match="cannot certify opaque"):
        filter_query(integer_part(monomial(2, 1)), opaque, horizon=1000)


def test_query_preconditions():
    with pytest.raises(PreconditionError):
        filter_query(N, predicate_from_name("gt1"))
    with pytest.raises(PreconditionError):
        filter_query(integer_part(constant(3)), predicate_from_name("gt1"))


def test_filter_queries_keeps_order():
    preds = parse_predicates("gt10,evens,squares")
    assert filter_queries(H_N, preds, horizon=1000) == [
        ("gt10", FilterVerdict.IN_FILTER),
        ("evens", FilterVerdict.UNDECIDED),
        ("squares", FilterVerdict.UNDECIDED),
    ]


def test_predicate_catalogue():
    assert [p.name for p in parse_predicates("gt10,evens,set{1,2}")] == ["gt10", "evens", "set{1,2}"]
    assert predicate_from_name("mod3=4").name == "mod3=1"
    assert predicate_from_name("cubes").contains(27)
    assert not predicate_from_name("odds").contains(4)
    with pytest.raises(BadInputError):
        predicate_from_name("primes")
    with pytest.raises(BadInputError):
        Progression(0)


@pytest.mark.parametrize(
    "answers, lo, hi",
    [
        (["in_filter"], Fraction(1, 2), Fraction(1)),
        (["in_filter", "in_complement"], Fraction(1, 2), Fraction(3, 4)),
        (["undecided"], Fraction(0), Fraction(1)),
        (["in_complement", "undecided", "in_filter"], Fraction(0), Fraction(1, 2)),
        ([], Fraction(0), Fraction(1)),
    ],
)
def test_dyadic_embed(answers, lo, hi):
    interval = dyadic_embed(answers)
    assert (interval.lo, interval.hi) == (lo, hi)


def test_dyadic_interval_text():
    interval = dyadic_embed([FilterVerdict.IN_FILTER])
    assert str(interval) == "[1/2, 1]"
    assert interval.width == Fraction(1, 2)
    assert interval.decided_bits == 1


def test_integer_roots():
    assert iroot(10**20, 2) == 10**10
    assert iroot(10**20 - 1, 2) == 10**10 - 1
    assert is_perfect_power(27, 3)
    assert not is_perfect_power(28, 3)


def test_rational_floor_rule_decides_progressions():
    # H = n^2 / (2n - 1), so *[H] = floor(n/2 + 1/4)
    h = integer_part(reciprocal(scale(monomial(1, -1), 2) - monomial(1, -2)))
    assert _q(h, "gt10") is FilterVerdict.IN_FILTER
    assert _q(h, "mod1=0") is FilterVerdict.IN_FILTER
    assert _q(h, "evens") is FilterVerdict.UNDECIDED
    mult3 = Described("mult3", lambda m: m % 3 == 0, period=3)
    assert filter_query(h, mult3, horizon=1000) is FilterVerdict.UNDECIDED


def test_unit_steps_make_split_sets_undecided():
    h = integer_part(reciprocal(scale(monomial(1, -1), 2) - monomial(1, -2)))
    assert _q(h, "squares") is FilterVerdict.UNDECIDED
    assert _q(h, "set{4,9}") is FilterVerdict.IN_COMPLEMENT


def test_rational_floor_period_beyond_horizon_is_not_certified():
    # floor(3n/2 + 9/4): period 56 for mod 7 and steps of 3/2 skip integers
    h = integer_part(reciprocal(scale(monomial(1, -1), "2/3") - monomial(1, -2)))
    assert _q(h, "evens") is FilterVerdict.UNDECIDED
    with pytest.raises(CertificationError, match="cannot certify"):
        filter_query(h, predicate_from_name("mod7=3"), horizon=50)
