# tests/smoke/test_sequence_suite.py
from fractions import Fraction

import pytest

from infinikit.hyperseq import (
    ONE,
    DominanceVerdict,
    RateClass,
    constant,
    converges,
    dominance_compare,
    eventually_equal,
    floor_rule,
    infinitesimal_part,
    integer_part,
    monomial,
    reciprocal,
    seq,
    standard_part_seq,
    termwise_add,
    termwise_mul,
)

pytestmark = pytest.mark.acceptance

EXPONENTS = [Fraction(p) for p in (-3, -2, -1, 0, 1, 2)]
NULL_EXPONENTS = [Fraction(p) for p in (-3, -2, -1)]
TRIALS = 300
POINTS = [*range(1, 10_001, 101), 10_000]
FAR = 10**6

FLIPPED = {
    DominanceVerdict.LESS: DominanceVerdict.GREATER,
    DominanceVerdict.GREATER: DominanceVerdict.LESS,
    DominanceVerdict.SAME_ORDER: DominanceVerdict.SAME_ORDER,
    DominanceVerdict.UNDECIDABLE: DominanceVerdict.UNDECIDABLE,
}


def _rational(faker, bound: int = 6) -> Fraction:
    return Fraction(faker.random_int(-bound, bound), faker.random_int(1, 3))


def _class(faker, exponents=EXPONENTS, alt_chance: int = 30) -> RateClass:
    alt = _rational(faker) if faker.boolean(chance_of_getting_true=alt_chance) else Fraction(0)
    return RateClass(c=_rational(faker), p=faker.random_element(exponents), alt=alt)


def _seq(faker, exponents=EXPONENTS, alt_chance: int = 30):
    return seq(_class(faker, exponents, alt_chance) for _ in range(faker.random_int(1, 3)))


def _convergent(faker):
    x = _seq(faker, NULL_EXPONENTS)
    if faker.boolean():
        x = termwise_add(x, constant(_rational(faker)))
    return x


def _null_power_sum(faker):
    """Positive lead, no (-1)^n parts: 1/e is defined on the tail."""
    lead = monomial(Fraction(faker.random_int(1, 6), faker.random_int(1, 3)), -1)
    rest = seq(
        RateClass(c=_rational(faker), p=faker.random_element(NULL_EXPONENTS[:2]))
        for _ in range(faker.random_int(0, 2))
    )
    return termwise_add(lead, rest)


def test_termwise_operations_agree_with_samples(faker):
    for _ in range(TRIALS):
        a, b = _seq(faker), _seq(faker)
        total, product = termwise_add(a, b), termwise_mul(a, b)
        for n in POINTS:
            assert total.sample(n) == a.sample(n) + b.sample(n), (a, b, n)
            assert product.sample(n) == a.sample(n) * b.sample(n), (a, b, n)


def test_eventual_equality_is_a_congruence(faker):
    for _ in range(TRIALS):
        a, b = _seq(faker), _seq(faker)
        a2 = a.with_prefix((k, _rational(faker)) for k in range(1, faker.random_int(2, 6)))
        b2 = b.with_prefix([(faker.random_int(1, 50), _rational(faker))])
        assert eventually_equal(a2, a) and eventually_equal(a, a2)
        assert eventually_equal(termwise_add(a2, b2), termwise_add(a, b))
        assert eventually_equal(termwise_mul(a2, b2), termwise_mul(a, b))
        assert not eventually_equal(a, termwise_add(a, monomial(1, faker.random_element(EXPONENTS))))


def test_dominance_is_antisymmetric_and_transitive(faker):
    for _ in range(TRIALS):
        a, b, c = _seq(faker), _seq(faker), _seq(faker)
        assert dominance_compare(a, a) is DominanceVerdict.SAME_ORDER
        ab, bc = dominance_compare(a, b), dominance_compare(b, c)
        assert dominance_compare(b, a) is FLIPPED[ab]
        if DominanceVerdict.UNDECIDABLE in (ab, bc) or ab is not bc:
            continue
        assert dominance_compare(a, c) is ab, (a, b, c)


def test_less_means_eventually_smaller(faker):
    for _ in range(TRIALS):
        a, b = _seq(faker), _seq(faker)
        if dominance_compare(a, b) is DominanceVerdict.LESS:
            for n in (FAR, FAR + 1):
                assert abs(a.sample(n)) < abs(b.sample(n)), (a, b, n)


def test_standard_part_is_additive_and_multiplicative(faker):
    for _ in range(TRIALS):
        a, b = _convergent(faker), _convergent(faker)
        assert converges(a) and converges(b)
        sa, sb = standard_part_seq(a), standard_part_seq(b)
        assert standard_part_seq(termwise_add(a, b)) == sa + sb
        assert standard_part_seq(termwise_mul(a, b)) == sa * sb


def test_standard_and_infinitesimal_parts_rebuild_x(faker):
    for _ in range(TRIALS):
        x = _convergent(faker)
        eps = infinitesimal_part(x)
        assert standard_part_seq(eps) == 0
        assert eventually_equal(termwise_add(constant(standard_part_seq(x)), eps), x)


def test_reciprocal_is_an_involution(faker):
    for _ in range(TRIALS):
        e = _null_power_sum(faker)
        h = reciprocal(e)
        assert eventually_equal(reciprocal(h), e)
        assert eventually_equal(termwise_mul(e, h), ONE)
        for n in POINTS:
            if e.sample(n):
                assert h.sample(n) * e.sample(n) == 1, (e, n)


def test_reciprocal_series_leaves_a_smaller_remainder(faker):
    for _ in range(TRIALS):
        e = _null_power_sum(faker)
        h = reciprocal(e)
        expansion = sum((cls.at(FAR) for cls in h.terms), Fraction(0))
        assert abs(h.sample(FAR) - expansion) < abs(h.terms[-1].at(FAR)), e
        rule = floor_rule(h)
        assert rule is not None, e
        h_int = integer_part(h)
        for n in (FAR, FAR + 1):
            assert h_int.sample(n) == rule.value(n), (e, n)
