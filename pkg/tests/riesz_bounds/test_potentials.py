import math

import numpy as np
import pytest

from riesz_bounds.exceptions import AdmissibilityError, DimensionError, DomainError, SupportError
from riesz_bounds.potentials import (
    BallSpec,
    Component,
    Density,
    ball_F,
    ball_H,
    density_functionals,
    density_functionals_monte_carlo,
    exp_transform_point,
    invert_ball,
    invert_density,
    newton_gradient,
    newton_potential,
    riesz_gradient,
    riesz_potential,
    split_by_sign,
)
from riesz_bounds.reduced import f0_of_log


def _mixture(n: int) -> Density:
    return Density(
        n,
        (
            Component(BallSpec.from_center_radius(n, 2.0, 1.0)),
            Component(BallSpec.from_center_radius(n, 4.5, 1.2), weight=0.4),
            Component(BallSpec.from_center_radius(n, 1.5, 0.5), weight=0.7, reflect=True),
        ),
    )


def test_ball_from_center_radius() -> None:
    ball = BallSpec.from_center_radius(3, 3.0, 1.0)
    assert ball.tau == 3.0
    assert ball.sigma == pytest.approx(math.sqrt(8.0), rel=1e-15)
    assert ball.radius == pytest.approx(1.0, rel=1e-14)
    assert ball.inner == pytest.approx(2.0, rel=1e-14)
    assert ball.outer == pytest.approx(4.0, rel=1e-14)
    assert ball.t == pytest.approx(3.0 / math.sqrt(8.0), rel=1e-15)


def test_ball_from_interval() -> None:
    ball = BallSpec.from_interval(1.0, 4.0)
    assert (ball.tau, ball.sigma, ball.n) == (2.5, 2.0, 1)
    assert ball.radius == pytest.approx(1.5, rel=1e-15)
    assert ball.inner == pytest.approx(1.0, rel=1e-15)


@pytest.mark.parametrize(
    "make, error",
    [
        (lambda: BallSpec(1.0, 2.0, 3), DomainError),
        (lambda: BallSpec(2.0, 0.0, 3), DomainError),
        (lambda: BallSpec(math.inf, 1.0, 3), DomainError),
        (lambda: BallSpec(2.0, 1.0, 0), DimensionError),
        (lambda: BallSpec.from_center_radius(3, 1.0, 2.0), DomainError),
        (lambda: BallSpec.from_interval(0.0, 1.0), DomainError),
    ],
    ids=["sigma-above-tau", "zero-sigma", "infinite", "dimension", "contains-origin", "interval-at-origin"],
)
def test_ball_errors(make, error) -> None:  # type: ignore
    with pytest.raises(error):
        make()


def test_density_admissibility() -> None:
    first = Component(BallSpec.from_center_radius(3, 3.0, 1.0))
    with pytest.raises(AdmissibilityError, match="overlap") as exc_info:
        Density(3, (first, Component(BallSpec.from_center_radius(3, 4.5, 1.0))))
    assert exc_info.value.component == 1
    # touching and mirrored balls are fine
    Density(3, (first, Component(BallSpec.from_center_radius(3, 5.0, 1.0))))
    Density(3, (first, Component(first.ball, reflect=True)))
    with pytest.raises(AdmissibilityError, match="weight"):
        Density(3, (Component(first.ball, weight=1.5),))
    with pytest.raises(AdmissibilityError, match="dimension"):
        Density(2, (first,))


def test_density_properties() -> None:
    rho = _mixture(3)
    assert rho.origin_gap == pytest.approx(1.0, rel=1e-14)
    assert not rho.is_empty
    assert Density(3).is_empty
    assert Density(3).origin_gap == math.inf
    assert [c.reflect for c in rho.reflected().components] == [True, True, False]


def test_interval_functionals() -> None:
    # chi_[1, 2] in dx / 2
    ball = BallSpec.from_interval(1.0, 2.0)
    alpha = 1.5
    assert ball_F(ball, alpha) == pytest.approx((2.0**alpha - 1.0) / (2.0 * alpha), rel=1e-13)
    assert ball_H(ball, alpha) == pytest.approx((2.0 ** (alpha - 1.0) - 1.0) / (2.0 * (alpha - 1.0)), rel=1e-13)


@pytest.mark.parametrize("n, alpha", [(1, 0.7), (2, 1.0), (3, 1.5), (4, 2.0)])
def test_analytic_against_quadrature(n: int, alpha: float) -> None:
    rho = _mixture(n)
    analytic = density_functionals(rho, alpha)
    quadrature = density_functionals(rho, alpha, method="quadrature")
    assert analytic.u == pytest.approx(quadrature.u, rel=1e-8)
    assert analytic.v == pytest.approx(quadrature.v, rel=1e-8)
    assert analytic.H == pytest.approx(quadrature.H, rel=1e-8)
    assert analytic.cauchy_slack > 0.0


def test_unknown_method() -> None:
    with pytest.raises(ValueError, match="unknown evaluation method"):
        density_functionals(_mixture(3), 1.0, method="spline")


def test_monte_carlo() -> None:
    rho = _mixture(3)
    serial = density_functionals_monte_carlo(rho, 1.2, samples=300000, seed=7, max_threads=1)
    threaded = density_functionals_monte_carlo(rho, 1.2, samples=300000, seed=7, max_threads=4)
    assert serial == threaded
    assert serial.samples == 300000
    analytic = density_functionals(rho, 1.2)
    assert abs(serial.values.u - analytic.u) <= 5.0 * serial.u_error
    assert abs(serial.values.v - analytic.v) <= 5.0 * serial.v_error
    assert abs(serial.values.H - analytic.H) <= 5.0 * serial.H_error
    other = density_functionals_monte_carlo(rho, 1.2, samples=300000, seed=8, max_threads=1)
    assert other.values.u != serial.values.u


def test_monte_carlo_empty() -> None:
    estimate = density_functionals_monte_carlo(Density(2), 1.0, samples=100)
    assert (estimate.values.u, estimate.values.v, estimate.values.H, estimate.samples) == (0.0, 0.0, 0.0, 0)


def test_scaling() -> None:
    rho = _mixture(3)
    alpha, factor = 1.3, 2.5
    base, scaled = density_functionals(rho, alpha), density_functionals(rho.scaled(factor), alpha)
    assert scaled.u == pytest.approx(factor**alpha * base.u, rel=1e-12)
    assert scaled.v == pytest.approx(factor ** (alpha - 2.0) * base.v, rel=1e-12)
    assert scaled.H == pytest.approx(factor ** (alpha - 1.0) * base.H, rel=1e-12)


def test_inversion() -> None:
    ball = BallSpec.from_center_radius(3, 2.0, 1.0)
    inverted = invert_ball(ball)
    # the image of the ball with centre 2 and radius 1 spans [1/3, 1] on the axis
    assert inverted.inner == pytest.approx(1.0 / 3.0, rel=1e-14)
    assert inverted.outer == pytest.approx(1.0, rel=1e-14)
    rho = _mixture(3)
    alpha = 0.8
    values, images = density_functionals(rho, alpha), invert_density(rho)
    assert density_functionals(images, -alpha).u == pytest.approx(values.u, rel=1e-10)
    assert density_functionals(images, 2.0 - alpha).H == pytest.approx(values.H, rel=1e-10)


def test_reflection_flips_H() -> None:
    rho = _mixture(3)
    values, mirrored = density_functionals(rho, 1.5), density_functionals(rho.reflected(), 1.5)
    assert mirrored.u == values.u
    assert mirrored.H == -values.H
    ball = BallSpec.from_center_radius(3, 2.0, 1.0)
    pair = Density(3, (Component(ball), Component(ball, reflect=True)))
    assert density_functionals(pair, 1.5).H == 0.0


def test_potential_at_origin() -> None:
    rho = _mixture(3)
    alpha = 1.4
    values = density_functionals(rho, alpha)
    assert riesz_potential(rho, [0.0, 0.0, 0.0], alpha) == pytest.approx(values.u, rel=1e-12)
    gradient = riesz_gradient(rho, np.zeros(3), alpha)
    assert gradient == pytest.approx(np.array([(3 - alpha) * values.H, 0.0, 0.0]), rel=1e-12, abs=1e-15)


@pytest.mark.parametrize("n, alpha", [(2, 0.6), (3, 1.2), (3, 2.0), (5, 1.7)])
def test_gradient_against_finite_differences(n: int, alpha: float) -> None:
    rho = _mixture(n)
    y = np.zeros(n)
    y[:3] = [0.3, -0.4, 0.2][:n]
    step = 1e-4
    expected = []
    for k in range(n):
        e = np.zeros(n)
        e[k] = step
        values = [riesz_potential(rho, y + j * e, alpha) for j in (-2, -1, 1, 2)]
        expected.append((values[0] - 8 * values[1] + 8 * values[2] - values[3]) / (12 * step))
    assert riesz_gradient(rho, y, alpha) == pytest.approx(np.array(expected), rel=1e-6, abs=1e-9)


def test_off_axis_quadrature() -> None:
    rho = _mixture(3)
    y = [0.3, -0.4, 0.2]
    assert riesz_potential(rho, y, 1.2, method="quadrature") == pytest.approx(riesz_potential(rho, y, 1.2), rel=1e-8)
    expected = riesz_gradient(rho, y, 1.2)
    assert riesz_gradient(rho, y, 1.2, method="quadrature") == pytest.approx(expected, rel=1e-7, abs=1e-10)


def test_point_errors() -> None:
    rho = _mixture(3)
    with pytest.raises(SupportError, match="component 0") as exc_info:
        riesz_potential(rho, [2.0, 0.0, 0.0], 1.0)
    assert exc_info.value.extra["component"] == 0
    with pytest.raises(SupportError):
        riesz_gradient(rho, [-1.5, 0.2, 0.0], 1.0)
    with pytest.raises(DimensionError, match="2 coordinates"):
        riesz_potential(rho, [0.0, 0.0], 1.0)


def test_exp_transform_point() -> None:
    assert exp_transform_point(Density(3), [0.0, 0.0, 0.0]) == 1.0
    # the unit-parameter ball D(2)
    rho = Density.single(BallSpec(2.0, 1.0, 3))
    assert exp_transform_point(rho, [0.0, 0.0, 0.0]) == pytest.approx(
        math.exp(-2.0 * f0_of_log(3, math.log(2.0))), rel=1e-12
    )
    value = exp_transform_point(_mixture(3), [0.1, 0.2, 0.3])
    assert 0.0 < value < 1.0


def test_newton() -> None:
    ball = BallSpec.from_center_radius(3, 3.0, 1.5)
    rho = Density.single(ball)
    # exterior potential of a ball of d_omega measure R^n
    assert newton_potential(rho, [0.0, 0.0, 0.0]) == pytest.approx(1.5**3 / 3.0, rel=1e-12)
    assert newton_gradient(rho, [0.0, 0.0, 0.0]) == pytest.approx(
        np.array([1.5**3 / 9.0, 0.0, 0.0]), rel=1e-12, abs=1e-15
    )
    assert np.linalg.norm(newton_gradient(rho, [0.0, 0.0, 0.0])) == pytest.approx(ball_H(ball, 2.0), rel=1e-12)
    assert newton_potential(Density(4), [0.0] * 4) == 0.0
    assert not newton_gradient(Density(4), [0.0] * 4).any()
    with pytest.raises(DimensionError, match="n >= 3"):
        newton_potential(Density(2), [0.0, 0.0])
    with pytest.raises(DimensionError):
        newton_gradient(Density(2), [0.0, 0.0])


def test_split_by_sign() -> None:
    positive, negative = split_by_sign(_mixture(3))
    assert len(positive.components) == 2
    assert len(negative.components) == 1
    assert not any(c.reflect for c in positive.components + negative.components)
    assert negative.components[0].weight == 0.7
