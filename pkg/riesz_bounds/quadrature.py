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
Deterministic quadrature of axially symmetric integrands over balls centred on the x1-axis.

Every functional in this package is invariant under rotations about the x1-axis, so an n-dimensional integral
over a ball collapses to the half-plane (x1, r), r = |(x2, ..., xn)|, with weight r^(n-2) |S^(n-2)| / omega_n
in the normalized measure d_omega x = dx / omega_n.
"""
import math
from typing import Callable

from scipy import integrate

from riesz_bounds.hypergeom import ln_gamma

AxialIntegrand = Callable[[float, float], float]

DEFAULT_EPSREL = 1e-10


def unit_ball_volume(n: int) -> float:
    """omega_n, the volume of the unit ball in R^n."""
    return math.exp(0.5 * n * math.log(math.pi) - ln_gamma(0.5 * n + 1.0))


def unit_sphere_area(m: int) -> float:
    """Surface area of the unit sphere S^m in R^(m+1); S^0 is two points."""
    return 2.0 * math.exp(0.5 * (m + 1) * math.log(math.pi) - ln_gamma(0.5 * (m + 1)))


def axial_weight(n: int) -> float:
    """|S^(n-2)| / omega_n, the factor in front of r^(n-2) dr dx1."""
    return unit_sphere_area(n - 2) / unit_ball_volume(n)


def axial_ball_integral(
    n: int, center: float, radius: float, integrand: AxialIntegrand, epsrel: float = DEFAULT_EPSREL
) -> float:
    """
    Integrate integrand(x1, r) over the ball of given radius centred at (center, 0, ..., 0), in d_omega x.

    The half-disk is parametrized by polar coordinates about its centre, x1 = center + q cos(phi), r = q sin(phi),
    which keeps the integration domain rectangular.
    """
    if n == 1:
        value, _ = integrate.quad(
            lambda x1: integrand(x1, 0.0), center - radius, center + radius, epsabs=0.0, epsrel=epsrel, limit=200
        )
        return value / 2.0

    def polar(q: float, phi: float) -> float:
        r = q * math.sin(phi)
        return integrand(center + q * math.cos(phi), r) * r ** (n - 2) * q

    value, _ = integrate.dblquad(polar, 0.0, math.pi, 0.0, radius, epsabs=0.0, epsrel=epsrel)
    return value * axial_weight(n)
