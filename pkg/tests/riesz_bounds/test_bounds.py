import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from riesz_bounds import series
from riesz_bounds.bounds import (
    M_n,
    M_n_ode,
    M_n_parametric,
    M_ode_residual,
    N_alpha,
    Phi_n,
    Phi_n_derivatives,
    Phi_ode_residual,
    ShapeFunctionTable,
    gradient_bound,
    newton_gradient_slack,
    phi2_taylor_coefficients,
    psi_shape,
    shape_value,
    solve_t,
    solve_y,
    truncated_cauchy_bound,
)
from riesz_bounds.exceptions import DimensionError, DomainError, RangeError
from riesz_bounds.potentials import BallSpec, Component, Density, density_functionals
from riesz_bounds.reduced import asymptotic_coefficient, f_alpha, f_alpha_y, h_alpha, h_alpha_y


@pytest.mark.parametrize("alpha", [0.0, -0.5, 2.5, math.nan])
def test_alpha_range(alpha: float) -> None:
    with pytest.raises(RangeError, match=r"alpha must lie in \(0,2\]"):
        N_alpha(3, alpha, 1.0, 1.0)


def test_degenerate() -> None:
    result = N_alpha(3, 1.5, 0.0, 2.0)
    assert (result.value, result.witness, result.gradient_bound) == (0.0, None, 0.0)
    with pytest.raises(DomainError):
        N_alpha(3, 1.5, -1.0, 2.0)
    with pytest.raises(DomainError):
        solve_t(3, 1.5, 0.0, 1.0)


@pytest.mark.parametrize(
    "n, alpha, t, sigma", [(1, 0.5, 1.5, 0.7), (2, 1.0, 3.0, 1.0), (3, 1.7, 1.05, 2.0), (5, 2.0, 4.0, 0.3)]
)
def test_sharp_on_balls(n: int, alpha: float, t: float, sigma: float) -> None:
    values = density_functionals(Density.single(BallSpec(sigma * t, sigma, n)), alpha)
    result = N_alpha(n, alpha, values.u, values.v)
    assert result.t0 == pytest.approx(t, rel=1e-9)
    assert result.sigma0 == pytest.approx(sigma, rel=1e-9)
    assert result.value == pytest.approx(values.H**2, rel=1e-9)
    assert result.witness is not None
    assert result.witness.tau == pytest.approx(sigma * t, rel=1e-9)
    assert result.cauchy_bound == pytest.approx(values.u * values.v)
    assert result.value < result.cauchy_bound


def test_bound_dominates_mixture() -> None:
    n, alpha = 3, 1.3
    rho = Density(
        n,
        (
            Component(BallSpec.from_center_radius(n, 2.0, 1.0)),
            Component(BallSpec.from_center_radius(n, 4.0, 0.8), weight=0.5),
            Component(BallSpec.from_center_radius(n, 2.0, 0.5), weight=0.2, reflect=True),
        ),
    )
    values = density_functionals(rho, alpha)
    assert N_alpha(n, alpha, values.u, values.v).value > values.H**2


def test_alpha_two_reduces_to_M() -> None:
    assert N_alpha(3, 2.0, 1.0, 1.0).value == pytest.approx(M_n(3, 1.0), rel=1e-10)
    assert N_alpha(3, 2.0, 2.5, 1.0).value == pytest.approx(2.5 * M_n(3, 1.0), rel=1e-10)


def test_alpha_one_reduces_to_Phi() -> None:
    assert N_alpha(2, 1.0, 4.0, 1.0).value == pytest.approx(Phi_n(2, 2.0) ** 2, rel=1e-10)


def test_homogeneity() -> None:
    n, alpha, u, v, lam = 3, 0.9, 1.7, 0.6, 2.3
    scaled = N_alpha(n, alpha, lam**alpha * u, lam ** (alpha - 2.0) * v).value
    assert scaled == pytest.approx(lam ** (2.0 * (alpha - 1.0)) * N_alpha(n, alpha, u, v).value, rel=1e-9)


def test_psi() -> None:
    n, alpha, u, v = 3, 1.2, 1.5, 0.8
    s = u ** (2.0 - alpha) * v**alpha
    assert psi_shape(n, alpha, s) * u * v == pytest.approx(N_alpha(n, alpha, u, v).value, rel=1e-9)
    assert psi_shape(n, alpha, 0.0) == 1.0
    assert 0.0 < psi_shape(n, alpha, 10.0) < psi_shape(n, alpha, 1.0) < 1.0
    with pytest.raises(DomainError):
        psi_shape(n, alpha, -1.0)


@pytest.mark.parametrize("v", [0.01, 0.5, 2.0, 8.0])
def test_M_closed_forms(v: float) -> None:
    assert M_n(1, v) == pytest.approx(math.tanh(v), rel=1e-14)
    assert M_n_parametric(1, v) == pytest.approx(math.tanh(v), rel=1e-10)
    assert M_n(2, v) == pytest.approx(1.0 - math.exp(-v), rel=1e-14)
    assert M_n_parametric(2, v) == pytest.approx(1.0 - math.exp(-v), rel=1e-10)


@pytest.mark.parametrize("v", [0.05, 1.0, 5.0])
def test_M3_against_mpmath(v: float) -> None:
    s = mpmath.findroot(lambda x: 3 * (mpmath.atanh(x) - x) - v, (0.01, 1 - 1e-12), solver="illinois")
    assert M_n(3, v) == pytest.approx(float(s**3), rel=1e-10)


@pytest.mark.parametrize("n", [1, 3, 4, 7])
def test_M_ode(n: int) -> None:
    for v in (0.3, 2.0):
        assert M_n_ode(n, v) == pytest.approx(M_n(n, v), rel=1e-9, abs=1e-12)
        assert M_ode_residual(n, v) < 1e-8
    assert M_n(n, 0.0) == M_n_ode(n, 0.0) == 0.0
    assert 0.0 < M_n(n, 1.0) < M_n(n, 2.0) < 1.0


def test_M_errors() -> None:
    with pytest.raises(DomainError):
        M_n(3, -0.1)
    with pytest.raises(DomainError):
        M_n_ode(3, -0.1)
    with pytest.raises(DomainError):
        M_ode_residual(3, 1e-6)


@pytest.mark.parametrize("s", [0.1, 1.0, 30.0])
def test_Phi1_is_asinh(s: float) -> None:
    assert Phi_n(1, s) == pytest.approx(math.asinh(s), rel=1e-14)
    value, first, second = Phi_n_derivatives(1, s)
    assert value == pytest.approx(math.asinh(s), rel=1e-12)
    assert first == pytest.approx(1.0 / math.sqrt(1.0 + s * s), rel=1e-12)
    assert second == pytest.approx(-s / (1.0 + s * s) ** 1.5, rel=1e-9)


def test_Phi_parametric() -> None:
    t = 2.7
    assert Phi_n(3, f_alpha(3, 1.0, t)) == pytest.approx(h_alpha(3, 1.0, t), rel=1e-11)
    assert Phi_n(2, 0.0) == 0.0
    with pytest.raises(DomainError):
        Phi_n(2, -1.0)
    with pytest.raises(DomainError):
        Phi_n_derivatives(2, 0.0)


@pytest.mark.parametrize("n", [1, 2, 3, 5])
@pytest.mark.parametrize("scale", [1.0, 0.25, 4.0])
def test_Phi_ode(n: int, scale: float) -> None:
    for s in (0.2, 1.5, 12.0):
        assert Phi_ode_residual(n, s, scale) < 1e-8


def test_Phi2_taylor_coefficients() -> None:
    coefficients = phi2_taylor_coefficients()
    assert coefficients == [
        Fraction(0),
        Fraction(1),
        Fraction(-1, 4),
        Fraction(1, 16),
        Fraction(-7, 512),
        Fraction(5, 2048),
        Fraction(-21, 65536),
        Fraction(3, 131072),
        Fraction(7, 2**24),
        Fraction(11, 2**26),
        Fraction(-959, 2**32),
    ]
    s = 0.05
    assert series.evaluate(coefficients, s) == pytest.approx(Phi_n(2, s), rel=1e-11)


def test_gradient_bound() -> None:
    n, alpha, u, v = 3, 1.5, 2.0, 0.7
    assert gradient_bound(n, alpha, u, v) == pytest.approx(1.5 * math.sqrt(N_alpha(n, alpha, u, v).value))
    with pytest.raises(DomainError, match="alpha != n"):
        gradient_bound(2, 2.0, 1.0, 1.0)
    with pytest.raises(RangeError):
        gradient_bound(3, 3.0, 1.0, 1.0)


def test_truncated_cauchy_bound() -> None:
    n = 3
    rho = Density.single(BallSpec.from_center_radius(n, 2.0, 1.0), weight=0.5)
    values = density_functionals(rho, 2.0)
    assert values.H**2 < truncated_cauchy_bound(values.u, 0.5)
    assert truncated_cauchy_bound(3.0) == 3.0


def test_newton_gradient_slack() -> None:
    n = 3
    ball = BallSpec.from_center_radius(n, 2.5, 1.0)
    assert abs(newton_gradient_slack(Density.single(ball), np.zeros(n))) < 1e-10
    rho = Density(n, (Component(ball), Component(BallSpec.from_center_radius(n, 1.5, 0.4), 0.6, reflect=True)))
    for y in ([0.0, 0.0, 0.0], [0.2, 1.0, -0.3], [2.5, 1.6, 0.0]):
        assert newton_gradient_slack(rho, y) > 0.0
    with pytest.raises(DimensionError):
        newton_gradient_slack(Density.single(BallSpec.from_center_radius(2, 2.0, 1.0)), [0.0, 0.0])


def test_shape_value() -> None:
    assert shape_value("M", 1, 0.5) == pytest.approx(math.tanh(0.5))
    assert shape_value("f", 3, 2.0, alpha=2.0) == f_alpha(3, 2.0, 2.0)
    with pytest.raises(DomainError, match="needs alpha"):
        shape_value("psi", 3, 1.0)
    with pytest.raises(DomainError, match="unknown table kind"):
        shape_value("g", 3, 1.0, alpha=1.0)


def test_table_from_arguments() -> None:
    table = ShapeFunctionTable.from_arguments("M", 1, [0.0, 0.5, 1.0, 2.0], max_threads=2)
    assert table.rows == [(0.0, 0.0)] + [(v, pytest.approx(math.tanh(v), rel=1e-14)) for v in (0.5, 1.0, 2.0)]
    assert table.is_monotone()
    psi = ShapeFunctionTable.from_arguments("psi", 3, [0.5, 1.0, 2.0], alpha=1.0, max_threads=1)
    assert psi.is_monotone()


def test_table_validation() -> None:
    with pytest.raises(DomainError, match="strictly increasing"):
        ShapeFunctionTable("M", 1, (0.0, 0.0), (0.0, 0.0))
    with pytest.raises(DomainError, match=r"\[0, 1\]"):
        ShapeFunctionTable("M", 1, (0.0,), (1.5,))
    with pytest.raises(ValueError, match="length"):
        ShapeFunctionTable("Phi", 1, (0.0, 1.0), (0.0,))


def test_adaptive_table() -> None:
    table = ShapeFunctionTable.adaptive("Phi", 2, 0.01, 50.0, tolerance=1e-7, max_threads=2)
    assert table.metadata["tolerance"] == 1e-7
    assert table.arguments[0] == pytest.approx(0.01)
    assert table.arguments[-1] == pytest.approx(50.0)
    assert table.is_monotone()
    assert len(table.rows) > 17
    for s, value in table.rows[::7]:
        assert value == pytest.approx(Phi_n(2, s), rel=1e-14)
    with pytest.raises(DomainError):
        ShapeFunctionTable.adaptive("Phi", 2, 0.0, 1.0)


@pytest.mark.parametrize("n, alpha", [(5, 2.0), (3, 1.0), (3, 1.5)], ids=["n5-a2", "n3-a1", "n3-a1.5"])
@pytest.mark.parametrize("y", [1e-6, 1e-8, 1e-12])
def test_sharp_near_the_boundary(n: int, alpha: float, y: float) -> None:
    # unit-radius ball at distance y from the hyperplane
    u, v = f_alpha_y(n, alpha, y), f_alpha_y(n, alpha - 2.0, y)
    assert solve_y(n, alpha, u, v) == pytest.approx(y, rel=1e-10)
    result = N_alpha(n, alpha, u, v)
    assert result.y0 == pytest.approx(y, rel=1e-10)
    assert result.sigma0 == pytest.approx(1.0, rel=1e-10)
    assert result.value == pytest.approx(h_alpha_y(n, alpha, y) ** 2, rel=1e-10)


def test_tiny_arguments() -> None:
    result = N_alpha(3, 1.0, 1e-60, 1e-60)
    assert math.isfinite(result.value)
    assert 0.0 < result.value <= result.cauchy_bound
    assert result.y0 > 0.0
    # the witness ball is thinner than the float spacing at t = 1
    assert result.t0 == 1.0
    assert result.witness is None


def test_huge_arguments() -> None:
    result = N_alpha(3, 1.5, 1e14, 1e14)
    assert math.isfinite(result.value)
    assert 0.0 < result.value <= result.cauchy_bound
    assert result.t0 > 1e8
    assert result.witness is not None


def test_Phi_large_argument() -> None:
    # Phi' = 1/t and f_1(t) ~ c t, so Phi grows like c ln s
    difference = Phi_n(3, 1e9) - Phi_n(3, 1e8)
    assert difference == pytest.approx(asymptotic_coefficient(3, 1.0) * math.log(10.0), rel=1e-6)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_Phi_near_origin(n: int) -> None:
    s = 1e-8
    leading = 1.0 - n / (2.0 * (n + 2)) * s ** (2.0 / n)
    assert abs(Phi_n(n, s) / s - leading) < 1e-10 + 10.0 * s ** (4.0 / n)


def test_M_table_at_saturation() -> None:
    table = ShapeFunctionTable.from_arguments("M", 1, [0.0, 10.0, 20.0, 25.0], max_threads=1)
    assert table.values[-1] == 1.0
    assert table.values[1] == pytest.approx(math.tanh(10.0), rel=1e-15)
