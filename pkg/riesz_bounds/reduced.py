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
Reduced ball functions.

For the unit-parameter ball D(t) = B(t, 1), centred at (t, 0, ..., 0) with radius sqrt(t^2 - 1):

    f_alpha(t) = int_{D(t)} |x|^(alpha-n) d_omega x
    h_alpha(t) = int_{D(t)} x_1 |x|^(alpha-n-2) d_omega x

Every functional of an x1-ball B(tau, sigma) reduces to these by homogeneity. The `_y` variants take y = t - 1,
so that thin balls (t close to 1) keep their full relative accuracy; after the Pfaff step both functions read
t^p w^(n/2) 2F1(...; w) with w = 1 - t^-2 = y (2 + y) / (1 + y)^2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from riesz_bounds.exceptions import DimensionError, DomainError, NonConvergent
from riesz_bounds.hypergeom import HyperParams, gauss_2f1, gauss_2f1_derivative, gauss_2f1_pair, ln_gamma
from riesz_bounds.log import get_logger
from riesz_bounds.quadrature import axial_ball_integral

logger = get_logger(__name__)

# S^2 = 1 - t^-2 above which the critical integral switches from its power series to the recursion
CRITICAL_SERIES_SPLIT = 0.9
CRITICAL_TERM_TOLERANCE = 1e-17


def _check_dimension(n: int) -> None:
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise DimensionError(n, "dimension must be a positive integer")


def _check(n: int, t: float) -> None:
    _check_dimension(n)
    if not t >= 1.0:
        raise DomainError(f"reduced functions need t >= 1, got t={t!r}", n=n, t=t)


def _check_y(n: int, y: float) -> None:
    _check_dimension(n)
    if not y >= 0.0:
        raise DomainError(f"reduced functions need y = t - 1 >= 0, got y={y!r}", n=n, y=y)


def _t2m1(t: float) -> float:
    return (t - 1.0) * (t + 1.0)


def _w(y: float) -> float:
    """1 - (1 + y)^-2."""
    t = 1.0 + y
    return (y / t) * ((2.0 + y) / t)


def arccosh1p(y: float) -> float:
    """arccosh(1 + y)."""
    return math.log1p(y + math.sqrt(y * (2.0 + y)))


def arccosh(t: float) -> float:
    return arccosh1p(t - 1.0)


def _critical_series(k: int, q: float) -> float:
    """sum_j q^j / (k + 1 + 2j)."""
    count = int(math.ceil(math.log(CRITICAL_TERM_TOLERANCE) / math.log(q))) + 1
    j = np.arange(max(count, 1), dtype=float)
    return float(np.sum(q**j / (k + 1.0 + 2.0 * j)))


def _critical_recursion(k: int, u: float, s: float) -> float:
    """int_0^s x^k / (1 - x^2) dx with 1 - s^2 = e^(-2u), from I_0 = u + log1p(s), I_1 = u and
    I_k = I_(k-2) - s^(k-1) / (k-1)."""
    value = u + math.log1p(s) if k % 2 == 0 else u
    for j in range(2 + k % 2, k + 1, 2):
        value -= s ** (j - 1) / (j - 1)
    return value


def f0_of_log(n: int, u: float) -> float:
    """
    f_0(e^u), the critical-order function as a function of u = ln t.

    With s = sqrt(1 - e^(-2u)), f_0 = n int_0^s x^(n-1) / (1 - x^2) dx: a power series in s^2 for moderate s and a
    short recursion from atanh(s) or u once s is close to 1.
    """
    if u < 0.0:
        raise DomainError(f"f0_of_log needs u >= 0, got {u!r}", n=n, u=u)
    if u == 0.0:
        return 0.0
    if n == 2:
        return 2.0 * u
    q = -math.expm1(-2.0 * u)
    if q <= CRITICAL_SERIES_SPLIT:
        return n * q ** (0.5 * n) * _critical_series(n - 1, q)
    return n * _critical_recursion(n - 1, u, math.sqrt(q))


def log_f0_of_log(n: int, u: float) -> float:
    """ln f_0(e^u) for u > 0, without underflow as u -> 0."""
    if not u > 0.0:
        raise DomainError(f"log_f0_of_log needs u > 0, got {u!r}", n=n, u=u)
    q = -math.expm1(-2.0 * u)
    if q <= CRITICAL_SERIES_SPLIT:
        return math.log(n) + 0.5 * n * math.log(q) + math.log(_critical_series(n - 1, q))
    return math.log(f0_of_log(n, u))


def f_alpha_quadrature(n: int, alpha: float, t: float) -> float:
    """f_alpha(t) by direct quadrature over D(t)."""
    _check(n, t)
    if t == 1.0:
        return 0.0
    exponent = 0.5 * (alpha - n)
    return axial_ball_integral(n, t, math.sqrt(_t2m1(t)), lambda x1, r: (x1 * x1 + r * r) ** exponent)


def h_alpha_quadrature(n: int, alpha: float, t: float) -> float:
    """h_alpha(t) by direct quadrature over D(t)."""
    _check(n, t)
    if t == 1.0:
        return 0.0
    exponent = 0.5 * (alpha - n - 2)
    return axial_ball_integral(n, t, math.sqrt(_t2m1(t)), lambda x1, r: x1 * (x1 * x1 + r * r) ** exponent)


def _f_params(n: int, alpha: float, t: float) -> HyperParams:
    return HyperParams(0.5 * (2.0 - alpha), 0.5 * (2.0 + alpha), 0.5 * (n + 2), 1.0 - t * t)


def _f_hyper(n: int, alpha: float, y: float) -> float:
    """2F1((2-alpha)/2, (n-alpha)/2; (n+2)/2; w), the Pfaff image of the f_alpha factor."""
    t = 1.0 + y
    return gauss_2f1_pair(0.5 * (2.0 - alpha), 0.5 * (n - alpha), 0.5 * (n + 2), _w(y), 1.0 / (t * t))


def _h_hyper(n: int, alpha: float, y: float) -> float:
    t = 1.0 + y
    return gauss_2f1_pair(0.5 * (2.0 - alpha), 0.5 * (n + 2 - alpha), 0.5 * (n + 2), _w(y), 1.0 / (t * t))


def f_alpha_y(n: int, alpha: float, y: float) -> float:
    """f_alpha(1 + y)."""
    _check_y(n, y)
    if y == 0.0:
        return 0.0
    alpha = abs(alpha)
    t = 1.0 + y
    if n == 1:
        xi = arccosh1p(y)
        return xi if alpha == 0.0 else math.sinh(alpha * xi) / alpha
    if alpha == 0.0:
        return f0_of_log(n, math.log1p(y))
    w = _w(y)
    if alpha == 2.0:
        return t * t * w ** (0.5 * n)
    try:
        return t**alpha * w ** (0.5 * n) * _f_hyper(n, alpha, y)
    except NonConvergent:
        logger.debug("f_alpha falling back to quadrature", exc_info=True, n=n, alpha=alpha, t=t)
        return f_alpha_quadrature(n, alpha, t)


def log_f_alpha_y(n: int, alpha: float, y: float) -> float:
    """ln f_alpha(1 + y) for y > 0; stays finite where f_alpha itself underflows."""
    _check_y(n, y)
    if y == 0.0:
        raise DomainError("ln f_alpha is only evaluated for y > 0", n=n, alpha=alpha)
    alpha = abs(alpha)
    if n == 1:
        xi = arccosh1p(y)
        return math.log(xi) if alpha == 0.0 else math.log(xi) + math.log(math.sinh(alpha * xi) / (alpha * xi))
    if alpha == 0.0:
        return log_f0_of_log(n, math.log1p(y))
    log_t, log_w = math.log1p(y), math.log(_w(y))
    if alpha == 2.0:
        return 2.0 * log_t + 0.5 * n * log_w
    try:
        return alpha * log_t + 0.5 * n * log_w + math.log(_f_hyper(n, alpha, y))
    except NonConvergent:
        logger.debug("ln f_alpha falling back to quadrature", exc_info=True, n=n, alpha=alpha, y=y)
        return math.log(f_alpha_quadrature(n, alpha, 1.0 + y))


def h_alpha_y(n: int, alpha: float, y: float) -> float:
    """h_alpha(1 + y)."""
    _check_y(n, y)
    if y == 0.0:
        return 0.0
    if alpha < 0.0:
        alpha = 2.0 - alpha
    if n == 1:
        return f_alpha_y(1, alpha - 1.0, y)
    t = 1.0 + y
    w = _w(y)
    if alpha == 2.0 or alpha == 0.0:
        return t * w ** (0.5 * n)
    try:
        return t ** (alpha - 1.0) * w ** (0.5 * n) * _h_hyper(n, alpha, y)
    except NonConvergent:
        logger.debug("h_alpha falling back to quadrature", exc_info=True, n=n, alpha=alpha, t=t)
        return h_alpha_quadrature(n, alpha, t)


def f_alpha(n: int, alpha: float, t: float) -> float:
    _check(n, t)
    return f_alpha_y(n, alpha, t - 1.0)


def h_alpha(n: int, alpha: float, t: float) -> float:
    _check(n, t)
    return h_alpha_y(n, alpha, t - 1.0)


def df_alpha(n: int, alpha: float, t: float, method: str = "hypergeometric") -> float:
    """
    f_alpha'(t) for t > 1.

    "hypergeometric" differentiates the 2F1 representation; "coarea" rearranges
    (n - alpha) h_alpha = (t^2 - 1) f_alpha' - alpha t f_alpha.
    """
    _check(n, t)
    if t == 1.0:
        raise DomainError("f_alpha' is only evaluated for t > 1", n=n, alpha=alpha, t=t)
    if method == "coarea":
        return ((n - alpha) * h_alpha(n, alpha, t) + alpha * t * f_alpha(n, alpha, t)) / _t2m1(t)
    if method != "hypergeometric":
        raise ValueError(f"unknown derivative method {method!r}")

    alpha = abs(alpha)
    if n == 1:
        xi = arccosh(t)
        return math.cosh(alpha * xi) / math.sinh(xi)
    x = _t2m1(t)
    if alpha == 0.0:
        return n * t ** (1 - n) * x ** (0.5 * (n - 2))
    prefactor = t ** (1 - n) * x ** (0.5 * n - 1.0)
    if alpha == 2.0:
        return prefactor * (2.0 * t * t + n - 2.0)
    p = _f_params(n, alpha, t)
    return prefactor * ((2.0 * t * t + n - 2.0) * gauss_2f1(p) - 2.0 * t * t * x * gauss_2f1_derivative(p))


def dh_alpha(n: int, alpha: float, t: float, method: str = "hypergeometric") -> float:
    """h_alpha'(t) from 2t h_alpha' = f_alpha' + f_{alpha-2}'."""
    return (df_alpha(n, alpha, t, method) + df_alpha(n, alpha - 2.0, t, method)) / (2.0 * t)


def asymptotic_coefficient(n: int, alpha: float) -> float:
    """lim f_alpha(t) / t^alpha as t -> infinity."""
    if not alpha > 0.0:
        raise DomainError(f"asymptotic coefficient needs alpha > 0, got {alpha!r}", n=n, alpha=alpha)
    return math.exp(
        ln_gamma(0.5 * n + 1.0) + ln_gamma(alpha) - ln_gamma(0.5 * (n + alpha)) - ln_gamma(0.5 * alpha + 1.0)
    )


def f_alpha_hyper2(n: int, alpha: float, t: float) -> float:
    """Second representation, t^-alpha w^(n/2) 2F1((n+alpha)/2, (2+alpha)/2; (n+2)/2; w), without the Pfaff step."""
    _check(n, t)
    if t == 1.0:
        return 0.0
    alpha = abs(alpha)
    y = t - 1.0
    w = _w(y)
    hyper = gauss_2f1_pair(0.5 * (n + alpha), 0.5 * (2.0 + alpha), 0.5 * (n + 2), w, 1.0 / (t * t))
    return t ** (-alpha) * w ** (0.5 * n) * hyper


def f_alpha_n1_algebraic(alpha: float, t: float) -> float:
    """((t + sqrt(t^2-1))^alpha - (t - sqrt(t^2-1))^alpha) / (2 alpha), the n=1 function without hyperbolics."""
    _check(1, t)
    root = math.sqrt(_t2m1(t))
    if alpha == 0.0:
        return math.log(t + root)
    # t - root = 1 / (t + root), which avoids cancellation for large t
    upper = t + root
    return (upper**alpha - upper ** (-alpha)) / (2.0 * alpha)


def g_aux(n: int, alpha: float, t: float) -> float:
    """f_alpha^(2-alpha) f_{alpha-2}^alpha, the left side of the equation fixing t."""
    return f_alpha(n, alpha, t) ** (2.0 - alpha) * f_alpha(n, alpha - 2.0, t) ** alpha


def log_g_aux_y(n: int, alpha: float, y: float) -> float:
    return (2.0 - alpha) * log_f_alpha_y(n, alpha, y) + alpha * log_f_alpha_y(n, alpha - 2.0, y)


def log_g_aux(n: int, alpha: float, t: float) -> float:
    _check(n, t)
    return log_g_aux_y(n, alpha, t - 1.0)


def g1_aux(n: int, alpha: float, t: float) -> float:
    """h_alpha^alpha / f_alpha^(alpha-1)."""
    return h_alpha(n, alpha, t) ** alpha / f_alpha(n, alpha, t) ** (alpha - 1.0)


def g2_aux(n: int, alpha: float, t: float) -> float:
    """h_alpha^(2-alpha) / f_{alpha-2}^(1-alpha)."""
    return h_alpha(n, alpha, t) ** (2.0 - alpha) / f_alpha(n, alpha - 2.0, t) ** (1.0 - alpha)


@dataclass(frozen=True)
class ReducedPoint:
    n: int
    alpha: float
    t: float
    f: float
    h: float
    # None at t = 1, where the derivatives are singular for n <= 2
    df: Optional[float]
    dh: Optional[float]

    @classmethod
    def evaluate(cls, n: int, alpha: float, t: float) -> ReducedPoint:
        f = f_alpha(n, alpha, t)
        h = h_alpha(n, alpha, t)
        if t == 1.0:
            return cls(n, alpha, t, f, h, None, None)
        return cls(n, alpha, t, f, h, df_alpha(n, alpha, t), dh_alpha(n, alpha, t))
