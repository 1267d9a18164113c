# tests/unit/test_levi_civita.py
from fractions import Fraction

import pytest

from infinikit.errors import DivisionByZeroError, InfiniteInputError, PreconditionError
from infinikit.levi_civita import (
    EPS,
    ONE,
    ZERO,
    Classification,
    Ordering,
    Polynomial,
    classify,
    compare,
    constant,
    continuity_check,
    derivative,
    format_lc,
    inv,
    make,
    monomial,
    standard_part,
    sub,
)


def test_make_canonicalizes():
    assert make([(0, 3), (1, 1)]).terms == ((0, 3), (1, 1))
    assert make([(1, 1), (1, -1)]) == ZERO
    assert make([(1, 2), (0, 3), (1, -1)]) == constant(3) + EPS


def test_ring_examples():
    assert EPS + EPS == monomial(2, 1)
    assert EPS * EPS == monomial(1, 2)
    assert (1 + EPS) * (1 - EPS) == 1 - monomial(1, 2)


def test_inverse_of_one_plus_eps_to_cubic_order():
    b = inv(ONE + EPS, cutoff=3)
    assert b == make([(0, 1), (1, -1), (2, 1), (3, -1)])
    residual = (ONE + EPS) * b - 1
    assert residual.valuation() > 3


def test_inverse_of_monomials_is_exact():
    assert inv(EPS) == monomial(1, -1)
    assert inv(constant(2)) == constant(Fraction(1, 2))


def test_inverse_of_zero_raises():
    with pytest.raises(DivisionByZeroError):
        inv(ZERO)
    with pytest.raises(DivisionByZeroError):
        _ = ONE / ZERO


def test_inverse_leading_term_is_exact_reciprocal():
    a = make([("1/2", 3), (2, -5), ("5/2", 7)])
    b = inv(a, cutoff=4)
    assert b.leading_term() == (Fraction(-1, 2), Fraction(1, 3))
    assert (a * b - 1).valuation() > 4


def test_compare_examples():
    assert compare(EPS * EPS, EPS) is Ordering.LESS
    assert compare(EPS, constant(Fraction(1, 1_000_000))) is Ordering.LESS
    assert compare(constant(3) + EPS, constant(3)) is Ordering.GREATER
    assert compare(EPS, EPS) is Ordering.EQUAL
    assert EPS < 1 and -EPS < ZERO


def test_classify_examples():
    assert classify(ZERO) is Classification.ZERO
    assert classify(EPS) is Classification.INFINITESIMAL
    assert classify(constant(3) + EPS) is Classification.APPRECIABLE
    assert classify(inv(EPS)) is Classification.INFINITE
    assert Classification.APPRECIABLE.value == "appreciable-finite"


def test_standard_part():
    assert standard_part(constant(3) + EPS) == 3
    assert standard_part(EPS) == 0
    with pytest.raises(InfiniteInputError):
        standard_part(inv(EPS))


@pytest.mark.parametrize(
    "coeffs, x0, expected",
    [
        ([0, 0, 1], 3, 6),
        ([7], 5, 0),
        ([0, -2, 0, 1], 1, 1),
        ([1, "1/2", "-1/3"], "3/4", Fraction(0)),
    ],
)
def test_derivative_examples(coeffs, x0, expected):
    assert derivative(coeffs, x0) == expected


def test_derivative_matches_symbolic_derivative():
    p = Polynomial([3, "-1/2", 0, 4, "2/7"])
    for x0 in (0, 1, "-3/2", "5/3"):
        assert derivative(p, x0) == standard_part(p.derivative()(x0))


def test_continuity_examples():
    assert continuity_check([0, 0, 1], 5, EPS)
    assert continuity_check([0, 1], 0, EPS * EPS)
    assert continuity_check([7], 11, EPS)


def test_continuity_needs_infinitesimal_alpha():
    with pytest.raises(PreconditionError):
        continuity_check([0, 1], 0, constant(1))
    with pytest.raises(PreconditionError):
        continuity_check([0, 1], 0, ZERO)


def test_values_are_immutable():
    with pytest.raises(AttributeError):
        EPS.foo = 1  # type: ignore[attr-defined]


def test_exact_only():
    with pytest.raises(TypeError):
        constant(0.5)  # type: ignore[arg-type]


def test_format_lc():
    assert format_lc(ZERO) == "0"
    assert format_lc(constant(3) + EPS) == "3 + 1*eps^1"
    assert format_lc(EPS * EPS) == "1*eps^2"
    assert format_lc(make([(0, 1), ("3/2", "-1/2")])) == "1 - 1/2*eps^(3/2)"
    assert format_lc(inv(EPS)) == "1*eps^-1"


def test_polynomial_arithmetic():
    x = Polynomial([0, 1])
    assert (x + 1) ** 2 == Polynomial([1, 2, 1])
    assert (x - 1) * (x + 1) == Polynomial([-1, 0, 1])
    assert (2 - x).coeffs == (2, -1)
    assert sub((x**3)(EPS), EPS**3) == ZERO
