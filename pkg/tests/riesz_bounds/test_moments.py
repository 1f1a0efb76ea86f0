import logging
import math

import pytest

from riesz_bounds.exceptions import AdmissibilityError, DomainError, InsufficientData, MissingMoment
from riesz_bounds.moments import (
    MomentSeq,
    check_critical_inequalities,
    exp_transform_moments,
    hankel_determinants,
    interval_moments,
    invert_steps,
    markov_check,
    sinh_check,
    step_moments,
    tanh_check,
)


def test_interval_moments() -> None:
    s = interval_moments(0.0, 1.0, range(0, 3))
    assert s.s == {0: 0.5, 1: 0.25, 2: pytest.approx(1.0 / 6.0, rel=1e-15)}
    assert s.interval == (0.0, 1.0)
    s = interval_moments(1.0, 2.0, [-2, -1])
    assert s[-1] == pytest.approx(0.5 * math.log(2.0), rel=1e-15)
    assert s[-2] == 0.25


@pytest.mark.parametrize("a, b, ks", [(1.0, 1.0, [0]), (-1.0, 1.0, [0]), (0.0, 1.0, [-1])])
def test_interval_errors(a: float, b: float, ks: list) -> None:
    with pytest.raises(DomainError):
        interval_moments(a, b, ks)


def test_moment_seq() -> None:
    s = MomentSeq({0: 1.0, 1: 2.0}, L=2.0)
    assert s.normalized() == {0: 0.5, 1: 1.0}
    assert 1 in s and 2 not in s
    with pytest.raises(MissingMoment, match="s_2") as exc_info:
        s[2]
    assert exc_info.value.k == 2
    assert MomentSeq.from_plain({0: 1.0, -1: 0.4}).s == {0: 0.5, -1: 0.2}
    with pytest.raises(DomainError):
        MomentSeq({0: 1.0}, L=0.0)
    with pytest.raises(DomainError, match="s_1"):
        MomentSeq({1: math.inf})


def test_equality_on_intervals() -> None:
    markov = markov_check(interval_moments(0.0, 1.0, range(3)).s)
    assert markov.lhs == pytest.approx(1.0 / 16.0, rel=1e-15)
    assert abs(markov.slack) <= 1e-12
    s = interval_moments(1.0, 2.0, range(-2, 3)).s
    assert abs(tanh_check(s).slack) <= 1e-12
    assert abs(sinh_check(s).slack) <= 1e-12
    assert tanh_check(s).rhs == pytest.approx(0.25, rel=1e-14)
    assert sinh_check(s).lhs == pytest.approx(0.125, rel=1e-14)


def test_plain_measure_violates() -> None:
    # chi_[1, 2] in plain dx: 1 <= 1.5 tanh(ln 2) = 0.9 fails
    plain = {k: 2.0 * value for k, value in interval_moments(1.0, 2.0, range(-2, 3)).s.items()}
    report = check_critical_inequalities(MomentSeq(plain))
    assert not report.ok
    tanh = next(check for check in report.checks if check.name == "tanh")
    assert tanh.rhs == pytest.approx(0.9, rel=1e-14)
    assert "tanh" in [violation.name for violation in report.violations]
    converted = check_critical_inequalities(MomentSeq.from_plain(plain))
    assert converted.ok
    assert "dx/2" in converted.note


def test_step_densities() -> None:
    steps = [(0.5, 1.0, 1.0), (2.0, 3.0, 0.4), (3.5, 5.0, 0.8)]
    s = step_moments(steps, range(-2, 3))
    assert s.interval == (0.5, 5.0)
    assert s[0] == pytest.approx(0.25 + 0.2 + 0.6, rel=1e-15)
    report = check_critical_inequalities(s)
    assert report.ok
    assert [check.name for check in report.checks] == ["markov", "tanh", "sinh"]
    # a gap makes every inequality strict
    assert all(check.slack > 0.0 for check in report.checks)


def test_step_errors() -> None:
    with pytest.raises(AdmissibilityError, match="overlap"):
        step_moments([(1.0, 2.0, 1.0), (1.5, 3.0, 1.0)], [0])
    with pytest.raises(AdmissibilityError, match="weight"):
        step_moments([(1.0, 2.0, 1.5)], [0])
    with pytest.raises(AdmissibilityError, match="a < b"):
        step_moments([(2.0, 1.0, 1.0)], [0])


def test_inversion_duality() -> None:
    steps = [(0.5, 1.0, 1.0), (2.0, 3.0, 0.4)]
    inverted = invert_steps(steps)
    assert inverted == [(pytest.approx(1.0 / 3.0), 0.5, 0.4), (1.0, 2.0, 1.0)]
    s, t = step_moments(steps, range(-4, 3)), step_moments(inverted, range(-4, 3))
    for k in range(0, 3):
        assert s[k] == pytest.approx(t[-k - 2], rel=1e-13)
    with pytest.raises(DomainError):
        invert_steps([(0.0, 1.0, 1.0)])


def test_exp_transform_of_unit_interval() -> None:
    # 1 - sqrt(1 - w), w = 1/z
    a = exp_transform_moments(interval_moments(0.0, 1.0, range(8)), 3)
    assert a == pytest.approx([0.5, 0.125, 0.0625, 5.0 / 128.0], rel=1e-14)


def test_exp_transform_leading_terms() -> None:
    s = MomentSeq({0: 0.7, 1: 0.3, 2: 0.9}, L=2.0)
    a0, a1, a2 = exp_transform_moments(s, 2)
    x0, x1, x2 = 0.35, 0.15, 0.45
    assert a0 == pytest.approx(x0, rel=1e-15)
    assert a1 == pytest.approx(x1 - x0**2 / 2.0, rel=1e-14)
    assert a2 == pytest.approx(x2 - x0 * x1 + x0**3 / 6.0, rel=1e-14)


def test_exp_transform_errors() -> None:
    with pytest.raises(MissingMoment):
        exp_transform_moments(MomentSeq({0: 1.0}), 1)
    with pytest.raises(DomainError):
        exp_transform_moments(MomentSeq({0: 1.0}), 13)


def test_hankel() -> None:
    factorials = [1.0, 1.0, 2.0, 6.0, 24.0, 120.0]
    assert hankel_determinants(factorials, 1) == (1.0, 2.0)
    assert hankel_determinants(factorials, 0) == (1.0, 1.0)
    delta, shifted = hankel_determinants(factorials, 2)
    assert delta == pytest.approx(4.0)
    assert shifted == pytest.approx(24.0)
    with pytest.raises(InsufficientData, match="at least 4"):
        hankel_determinants([1.0, 2.0, 3.0], 1)
    with pytest.raises(DomainError):
        hankel_determinants(factorials, -1)


def test_hankel_of_unit_interval_transform() -> None:
    a = exp_transform_moments(interval_moments(0.0, 1.0, range(8)), 7)
    assert hankel_determinants(a, 1)[0] == pytest.approx(1.0 / 64.0, rel=1e-13)
    for m in range(4):
        delta, shifted = hankel_determinants(a, m)
        assert delta >= -1e-12
        assert shifted >= -1e-12


def test_missing_moments() -> None:
    report = check_critical_inequalities(interval_moments(0.0, 1.0, range(3)))
    assert [check.name for check in report.checks] == ["markov"]
    assert report.skipped == ["tanh", "sinh"]
    with pytest.raises(MissingMoment) as exc_info:
        check_critical_inequalities(interval_moments(0.0, 1.0, range(3)), names=["tanh"])
    assert exc_info.value.k == -1
    with pytest.raises(MissingMoment):
        check_critical_inequalities(MomentSeq({5: 1.0}))


def test_violations_are_logged(caplog: pytest.LogCaptureFixture) -> None:
    caplog.set_level(logging.DEBUG, logger="riesz_bounds.moments")
    check_critical_inequalities(MomentSeq({0: 1.0, 1: 0.5, 2: 1.0 / 3.0}))
    record = next(r for r in caplog.records if "violated" in r.getMessage())
    assert getattr(record, "inequality") == "markov"
    assert getattr(record, "slack") < 0.0
