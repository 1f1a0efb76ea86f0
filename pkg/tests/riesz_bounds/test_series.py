import math
from fractions import Fraction

import pytest

from riesz_bounds import series


def test_mul_truncates() -> None:
    assert series.mul([1, 1], [1, 1], 1) == [1, 2]
    assert series.mul([1, 1], [1, -1], 3) == [1, 0, -1, 0]


def test_compose() -> None:
    # 1 / (1 - y) at y = x + x^2
    geometric = [Fraction(1)] * 5
    assert series.compose(geometric, [0, 1, 1], 4) == [1, 1, 2, 3, 5]


def test_compose_needs_vanishing_inner() -> None:
    with pytest.raises(ValueError, match="vanish"):
        series.compose([1, 1], [1, 1], 3)


def test_reversion_catalan() -> None:
    q = series.reversion([Fraction(0), Fraction(1), Fraction(1)], 5)
    assert q == [0, 1, -1, 2, -5, 14]
    assert series.compose([0, 1, 1], q, 5) == [0, 1, 0, 0, 0, 0]


def test_reversion_float() -> None:
    q = series.reversion([0.0, 2.0], 3)
    assert q == [0.0, 0.5, 0.0, 0.0]


@pytest.mark.parametrize("p", [[1, 1], [0, 0, 1]], ids=["constant-term", "zero-linear-term"])
def test_reversion_rejects(p: list) -> None:
    with pytest.raises(ValueError, match="reversion"):
        series.reversion(p, 3)


def test_exp_factorials() -> None:
    e = series.exp([Fraction(0), Fraction(1)], 6)
    assert e == [Fraction(1, math.factorial(k)) for k in range(7)]


def test_exp_needs_zero_constant() -> None:
    with pytest.raises(ValueError, match="p_0 = 0"):
        series.exp([1.0, 1.0], 2)


def test_hyp2f1_coefficients_log() -> None:
    # 2F1(1, 1; 2; x) = -ln(1 - x) / x
    assert series.hyp2f1_coefficients(Fraction(1), Fraction(1), Fraction(2), 4) == [
        Fraction(1, k + 1) for k in range(5)
    ]


def test_hyp2f1_coefficients_scale() -> None:
    coefficients = series.hyp2f1_coefficients(Fraction(1), Fraction(1), Fraction(2), 3, Fraction(-1))
    assert coefficients == [1, Fraction(-1, 2), Fraction(1, 3), Fraction(-1, 4)]


def test_binomial_coefficients() -> None:
    assert series.binomial_coefficients(Fraction(3), 4) == [1, 3, 3, 1, 0]
    assert series.binomial_coefficients(Fraction(-1, 2), 3) == [1, Fraction(-1, 2), Fraction(3, 8), Fraction(-5, 16)]


def test_evaluate() -> None:
    assert series.evaluate([1, Fraction(1, 2), 3], 2.0) == pytest.approx(14.0)
    assert series.evaluate([], 2.0) == 0.0
