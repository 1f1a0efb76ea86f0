#
# Copyright (C) 2023 Intel Corporation
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#    http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#
"""
Sharp goal functions.

N_alpha(u, v) is the supremum of (H_alpha rho)^2 over admissible densities with F_alpha rho = u and
F_(alpha-2) rho = v. It is attained on an x1-ball B(sigma0 t0, sigma0), where t0 solves
f_alpha^(2-alpha)(t) f_(alpha-2)^alpha(t) = u^(2-alpha) v^alpha. The one-variable profiles M_n (alpha = 2),
Phi_n (alpha = 1) and psi (general alpha) are evaluated from their parametric representations; their ODEs are
only used as residual checks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate, interpolate, optimize

from riesz_bounds import series
from riesz_bounds.exceptions import ConvergenceError, DomainError, RangeError
from riesz_bounds.futures import map_in_parallel
from riesz_bounds.log import get_logger
from riesz_bounds.potentials import BallSpec, Density, newton_gradient, newton_potential, riesz_potential
from riesz_bounds.reduced import (
    df_alpha,
    f0_of_log,
    f_alpha,
    f_alpha_y,
    h_alpha,
    h_alpha_y,
    log_f_alpha_y,
    log_g_aux_y,
)

logger = get_logger(__name__)

ROOT_RTOL = 1e-13
# 1/t^2 stays a normal float up to here
T_MAX = 1e150
ODE_RTOL = 1e-12
ODE_ATOL = 1e-15
TABLE_TOLERANCE = 1e-8
TABLE_MAX_SAMPLES = 20000
FD_STEP = 1e-4

SHAPE_KINDS = ("M", "Phi", "psi", "f", "h")


def check_alpha(alpha: float) -> None:
    if not 0.0 < alpha <= 2.0:
        raise RangeError(alpha)


def _solve_increasing(func: Callable[[float], float], target: float, what: str) -> float:
    """
    Solve func(y) = target for y = t - 1 > 0, func increasing with func(0+) = -inf. The root is returned as y,
    so its relative accuracy survives when t is within rounding of 1.
    """

    def residual(y: float) -> float:
        return func(y) - target

    try:
        lo, hi = 0.5, 1.0
        if residual(hi) < 0.0:
            lo = hi
            while residual(hi) < 0.0:
                lo, hi = hi, 2.0 * hi
                if 1.0 + hi > T_MAX:
                    raise ConvergenceError(f"{what}: no bracket below t={T_MAX:g}", target=target)
        else:
            while residual(lo) >= 0.0:
                lo, hi = 0.5 * lo, lo
                if lo == 0.0:
                    raise ConvergenceError(f"{what}: root below the smallest representable t - 1", target=target)
        logger.debug("bracketed root", what=what, lo=lo, hi=hi)
        root, result = optimize.brentq(
            residual, lo, hi, xtol=1e-300, rtol=ROOT_RTOL, maxiter=500, full_output=True, disp=False
        )
    except (ArithmeticError, ValueError) as e:
        raise ConvergenceError(f"{what}: evaluation failed while bracketing: {e}", target=target) from e
    if not result.converged:
        raise ConvergenceError(f"{what}: root finder stopped after {result.iterations} iterations", target=target)
    return float(root)


def solve_y(n: int, alpha: float, u: float, v: float) -> float:
    """t - 1 for the unique t >= 1 with f_alpha^(2-alpha)(t) f_(alpha-2)^alpha(t) = u^(2-alpha) v^alpha."""
    check_alpha(alpha)
    if not (u > 0.0 and v > 0.0):
        raise DomainError(f"solve_t needs u, v > 0, got u={u!r} v={v!r}", n=n, alpha=alpha)
    target = (2.0 - alpha) * math.log(u) + alpha * math.log(v)
    return _solve_increasing(lambda y: log_g_aux_y(n, alpha, y), target, "solve_t")


def solve_t(n: int, alpha: float, u: float, v: float) -> float:
    return 1.0 + solve_y(n, alpha, u, v)


@dataclass(frozen=True)
class BoundResult:
    t0: float
    sigma0: float
    value: float
    # None when u or v vanishes; the bound is then attained only by rho = 0
    witness: Optional[BallSpec]
    alpha: float
    n: int
    u: float
    v: float
    # t0 - 1, resolved even where t0 itself rounds to 1
    y0: float = 0.0

    @property
    def gradient_bound(self) -> float:
        return abs(self.n - self.alpha) * math.sqrt(self.value)

    @property
    def cauchy_bound(self) -> float:
        return self.u * self.v


def N_alpha(n: int, alpha: float, u: float, v: float) -> BoundResult:
    check_alpha(alpha)
    if u < 0.0 or v < 0.0:
        raise DomainError(f"N_alpha needs u, v >= 0, got u={u!r} v={v!r}", n=n, alpha=alpha)
    if u == 0.0 or v == 0.0:
        return BoundResult(1.0, 0.0, 0.0, None, alpha, n, u, v)
    y0 = solve_y(n, alpha, u, v)
    t0 = 1.0 + y0
    sigma0 = (u / f_alpha_y(n, alpha, y0)) ** (1.0 / alpha)
    value = (sigma0 ** (alpha - 1.0) * h_alpha_y(n, alpha, y0)) ** 2
    # a ball thinner than the spacing of floats near 1 has no (tau, sigma) representation
    witness = BallSpec(sigma0 * t0, sigma0, n) if t0 > 1.0 else None
    return BoundResult(t0, sigma0, value, witness, alpha, n, u, v, y0)


def psi_shape(n: int, alpha: float, s: float) -> float:
    """psi(s) = h_alpha^2 / (f_alpha f_(alpha-2)) at the t with f_alpha^(2-alpha) f_(alpha-2)^alpha = s."""
    check_alpha(alpha)
    if s < 0.0:
        raise DomainError(f"psi needs s >= 0, got {s!r}", n=n, alpha=alpha)
    if s == 0.0:
        return 1.0
    y = _solve_increasing(lambda y: log_g_aux_y(n, alpha, y), math.log(s), "psi_shape")
    h = h_alpha_y(n, alpha, y)
    return (h / f_alpha_y(n, alpha, y)) * (h / f_alpha_y(n, alpha - 2.0, y))


def _log_t_for_f0(n: int, v: float) -> float:
    """u = ln t with f_0(t) = v."""
    hi = 1.0
    while f0_of_log(n, hi) < v:
        hi *= 2.0
    root, result = optimize.brentq(
        lambda u: f0_of_log(n, u) - v, 0.0, hi, xtol=1e-300, rtol=ROOT_RTOL, maxiter=500, full_output=True, disp=False
    )
    if not result.converged:
        raise ConvergenceError(f"M_n: root finder stopped after {result.iterations} iterations", n=n, v=v)
    return root


def M_n(n: int, v: float) -> float:
    """M_n(v) = (1 - t^-2)^(n/2) where f_0(t) = v; the solution of M' = 1 - M^(2/n), M(0) = 0."""
    if v < 0.0:
        raise DomainError(f"M_n needs v >= 0, got {v!r}", n=n)
    if v == 0.0:
        return 0.0
    if n == 1:
        return math.tanh(v)
    if n == 2:
        return -math.expm1(-v)
    return (-math.expm1(-2.0 * _log_t_for_f0(n, v))) ** (0.5 * n)


def M_n_parametric(n: int, v: float) -> float:
    """M_n without the n = 1, 2 closed forms."""
    if v == 0.0:
        return 0.0
    return (-math.expm1(-2.0 * _log_t_for_f0(n, v))) ** (0.5 * n)


def M_n_ode(n: int, v: float) -> float:
    """M_n(v) by integrating M' = 1 - M^(2/n) from M(0) = 0."""
    if v < 0.0:
        raise DomainError(f"M_n needs v >= 0, got {v!r}", n=n)
    if v == 0.0:
        return 0.0
    solution = integrate.solve_ivp(
        lambda _, m: 1.0 - np.maximum(m, 0.0) ** (2.0 / n),
        (0.0, v),
        [0.0],
        method="DOP853",
        rtol=ODE_RTOL,
        atol=ODE_ATOL,
    )
    if not solution.success:
        raise ConvergenceError(f"M_n ODE integration failed: {solution.message}", n=n, v=v)
    return float(solution.y[0, -1])


def M_ode_residual(n: int, v: float, step: float = FD_STEP) -> float:
    """|M_n' - (1 - M_n^(2/n))| at v > 0, M_n' by a five-point central difference of the parametric values."""
    h = step * max(1.0, v)
    if v - 2.0 * h <= 0.0:
        raise DomainError(f"M_n residual needs v > {2.0 * h!r}", n=n, v=v)
    derivative = (M_n(n, v - 2 * h) - 8 * M_n(n, v - h) + 8 * M_n(n, v + h) - M_n(n, v + 2 * h)) / (12 * h)
    return abs(derivative - (1.0 - M_n(n, v) ** (2.0 / n)))


def _y_for_f1(n: int, s: float) -> float:
    return _solve_increasing(lambda y: log_f_alpha_y(n, 1.0, y), math.log(s), "Phi_n")


def Phi_n(n: int, s: float) -> float:
    """Phi_n = h_1 o f_1^-1."""
    if s < 0.0:
        raise DomainError(f"Phi_n needs s >= 0, got {s!r}", n=n)
    if s == 0.0:
        return 0.0
    if n == 1:
        return math.asinh(s)
    return h_alpha_y(n, 1.0, _y_for_f1(n, s))


def Phi_n_derivatives(n: int, s: float) -> Tuple[float, float, float]:
    """(Phi, Phi', Phi'') at s > 0; Phi' = 1/t and Phi'' = -1/(t^2 f_1'(t))."""
    if not s > 0.0:
        raise DomainError(f"Phi_n derivatives need s > 0, got {s!r}", n=n)
    t = math.hypot(1.0, s) if n == 1 else 1.0 + _y_for_f1(n, s)
    return h_alpha(n, 1.0, t), 1.0 / t, -1.0 / (t * t * df_alpha(n, 1.0, t))


def Phi_ode_residual(n: int, s: float, scale: float = 1.0) -> float:
    """
    Residual of phi'' = phi' (phi'^2 - 1) / ((n - 1) phi phi' + s) for phi(s) = Phi_n(scale * s) / scale.
    Every homothetic rescaling solves the same equation.
    """
    value, first, second = Phi_n_derivatives(n, scale * s)
    value /= scale
    second *= scale
    return abs(second - first * (first * first - 1.0) / ((n - 1) * value * first + s))


def phi2_taylor_coefficients(order: int = 10) -> List[Fraction]:
    """
    Exact Taylor coefficients of Phi_2 at the origin.

    In x = t^2 - 1 the pair is s = x 2F1(1/2, 3/2; 2; -x) and Phi = x (1 + x)^(-1/2) 2F1(1/2, 1/2; 2; -x);
    reverting s(x) and composing gives Phi(s).
    """
    half = Fraction(1, 2)
    s_of_x = [Fraction(0)] + series.hyp2f1_coefficients(half, 3 * half, Fraction(2), order - 1, Fraction(-1))
    phi_of_x = [Fraction(0)] + series.mul(
        series.binomial_coefficients(-half, order - 1),
        series.hyp2f1_coefficients(half, half, Fraction(2), order - 1, Fraction(-1)),
        order - 1,
    )
    return series.compose(phi_of_x, series.reversion(s_of_x, order), order)


def gradient_bound(n: int, alpha: float, u: float, v: float) -> float:
    """Bound on |grad I_alpha rho| at a point where I_alpha rho = u and I_(alpha-2) rho = v."""
    check_alpha(alpha)
    if alpha == n:
        raise DomainError(f"gradient bound needs alpha != n, got alpha={alpha!r} n={n}", n=n, alpha=alpha)
    return N_alpha(n, alpha, u, v).gradient_bound


def truncated_cauchy_bound(u2: float, rho_max: float = 1.0) -> float:
    """||rho||_inf F_2 rho, a strict upper bound for (H_2 rho)^2 when rho is nontrivial."""
    return rho_max * u2


def newton_gradient_slack(rho: Density, y: Sequence[float]) -> float:
    """U(y) M_n(-ln E(y) / 2) - |grad U(y)|^2 / (n - 2), nonnegative for n >= 3."""
    potential = newton_potential(rho, y)
    gradient = newton_gradient(rho, y)
    critical = riesz_potential(rho, y, 0.0)
    return potential * M_n(rho.n, critical) - float(np.dot(gradient, gradient)) / (rho.n - 2)


def shape_value(kind: str, n: int, x: float, alpha: Optional[float] = None) -> float:
    if kind == "M":
        return M_n(n, x)
    if kind == "Phi":
        return Phi_n(n, x)
    if alpha is None:
        raise DomainError(f"table kind {kind!r} needs alpha")
    if kind == "psi":
        return psi_shape(n, alpha, x)
    if kind == "f":
        return f_alpha(n, alpha, x)
    if kind == "h":
        return h_alpha(n, alpha, x)
    raise DomainError(f"unknown table kind {kind!r}, expected one of {', '.join(SHAPE_KINDS)}")


@dataclass(frozen=True)
class ShapeFunctionTable:
    kind: str
    n: int
    arguments: Tuple[float, ...]
    values: Tuple[float, ...]
    alpha: Optional[float] = None
    metadata: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if len(self.arguments) != len(self.values):
            raise ValueError("arguments and values differ in length")
        if any(b <= a for a, b in zip(self.arguments, self.arguments[1:])):
            raise DomainError("table arguments must be strictly increasing")
        if self.kind == "M" and any(not 0.0 <= m <= 1.0 for m in self.values):
            raise DomainError("M_n values must lie in [0, 1]")

    @property
    def rows(self) -> List[Tuple[float, float]]:
        return list(zip(self.arguments, self.values))

    def is_monotone(self) -> bool:
        steps = np.diff(self.values)
        # psi decreases from 1, the other shape functions increase from 0
        return bool(np.all(steps < 0.0) if self.kind == "psi" else np.all(steps > 0.0))

    @classmethod
    def from_arguments(
        cls,
        kind: str,
        n: int,
        arguments: Sequence[float],
        alpha: Optional[float] = None,
        max_threads: Optional[int] = None,
    ) -> ShapeFunctionTable:
        values = map_in_parallel(lambda x: shape_value(kind, n, x, alpha), list(arguments), max_threads)
        return cls(kind, n, tuple(arguments), tuple(values), alpha)

    @classmethod
    def adaptive(
        cls,
        kind: str,
        n: int,
        lo: float,
        hi: float,
        alpha: Optional[float] = None,
        tolerance: float = TABLE_TOLERANCE,
        initial: int = 17,
        max_samples: int = TABLE_MAX_SAMPLES,
        max_threads: Optional[int] = None,
    ) -> ShapeFunctionTable:
        """
        Log-spaced samples on [lo, hi], refined at geometric midpoints until a cubic spline through the samples
        (in log-argument) reproduces every midpoint value to `tolerance`.
        """
        if not 0.0 < lo < hi:
            raise DomainError(f"adaptive tables need 0 < lo < hi, got lo={lo!r} hi={hi!r}")
        cache: Dict[float, float] = {}

        def evaluate(points: Sequence[float]) -> List[float]:
            missing = [p for p in points if p not in cache]
            fresh = map_in_parallel(lambda x: shape_value(kind, n, x, alpha), missing, max_threads)
            cache.update(zip(missing, fresh))
            return [cache[p] for p in points]

        arguments = list(np.geomspace(lo, hi, initial))
        values = evaluate(arguments)
        rounds = 0
        while True:
            rounds += 1
            spline = interpolate.CubicSpline(np.log(arguments), values)
            middles = [math.sqrt(a * b) for a, b in zip(arguments, arguments[1:])]
            exact = evaluate(middles)
            errors = np.abs(spline(np.log(middles)) - np.asarray(exact))
            bad = errors > tolerance * np.maximum(1.0, np.abs(exact))
            if not bad.any():
                break
            merged = sorted(set(arguments) | {m for m, b in zip(middles, bad) if b})
            if len(merged) > max_samples:
                raise ConvergenceError(f"{kind} table needs more than {max_samples} samples", n=n)
            arguments = merged
            values = evaluate(arguments)
        logger.debug("adaptive table ready", kind=kind, n=n, samples=len(arguments), rounds=rounds)
        metadata = {"tolerance": tolerance, "lo": lo, "hi": hi, "rounds": float(rounds)}
        return cls(kind, n, tuple(arguments), tuple(values), alpha, metadata)
