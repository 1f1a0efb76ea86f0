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
Brute-force optimizer for the extremal problem: maximize H_alpha rho subject to F_alpha rho = u, F_(alpha-2) rho = v
and 0 <= rho <= 1, over densities that are constant on the cells of a polar grid in the axial half-plane.

Cell coefficients are exact integrals of the kernels over each cell, so every grid density is itself admissible and
the optimum never assumes anything about the shape of the maximizer.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize, special

from riesz_bounds.exceptions import DimensionError, DomainError, Infeasible
from riesz_bounds.log import get_logger
from riesz_bounds.potentials import BallSpec
from riesz_bounds.quadrature import axial_weight

logger = get_logger(__name__)

DEFAULT_INNER = 0.05
DEFAULT_OUTER = 50.0
DEFAULT_CELLS = 100
# relative half-width of the bands replacing the equality constraints
DEFAULT_BAND = 1e-3
# cells with 0 < rho < 1 beyond this margin count as fractional
FRACTIONAL_MARGIN = 1e-7


def _radial_integral(edges: np.ndarray, power: float) -> np.ndarray:
    """int_{edges[i]}^{edges[i+1]} q^power dq."""
    lo, hi = edges[:-1], edges[1:]
    if power == -1.0:
        return np.log(hi / lo)
    return (hi ** (power + 1.0) - lo ** (power + 1.0)) / (power + 1.0)


def _sine_power_integral(k: int, theta: np.ndarray) -> np.ndarray:
    """int_0^theta sin^k for theta in [0, pi], from the regularized incomplete beta function."""
    half = 0.5 * (k + 1)
    full = special.beta(half, 0.5)
    folded = np.minimum(theta, math.pi - theta)
    partial = 0.5 * full * special.betainc(half, 0.5, np.sin(folded) ** 2)
    return np.where(theta <= 0.5 * math.pi, partial, full - partial)


def _angular_integrals(n: int, edges: np.ndarray) -> tuple:
    """(int sin^(n-2), int cos sin^(n-2)) over each angular cell."""
    lo, hi = edges[:-1], edges[1:]
    if n == 2:
        even = hi - lo
    else:
        even = np.diff(_sine_power_integral(n - 2, edges))
    odd = (np.sin(hi) ** (n - 1) - np.sin(lo) ** (n - 1)) / (n - 1)
    return even, odd


@dataclass(frozen=True)
class GridProblem:
    n: int
    alpha: float
    radial_edges: np.ndarray
    angular_edges: np.ndarray
    measure: np.ndarray
    coef_u: np.ndarray
    coef_v: np.ndarray
    coef_H: np.ndarray

    @classmethod
    def build(
        cls,
        n: int,
        alpha: float,
        inner: float = DEFAULT_INNER,
        outer: float = DEFAULT_OUTER,
        radial_cells: int = DEFAULT_CELLS,
        angular_cells: int = DEFAULT_CELLS,
    ) -> GridProblem:
        """
        Polar cells in (|x|, angle to the x1-axis): |x| log-spaced over [inner, outer], the angle uniform on [0, pi].
        For n = 1 the two "angles" are the half-lines x1 > 0 and x1 < 0.
        """
        if not isinstance(n, int) or n < 1:
            raise DimensionError(n, "dimension must be a positive integer")
        if not 0.0 < inner < outer:
            raise DomainError(f"grid needs 0 < inner < outer, got {inner!r}, {outer!r}")
        radial_edges = np.geomspace(inner, outer, radial_cells + 1)
        if n == 1:
            angular_edges = np.array([0.0, math.pi])
            even, odd, prefactor = np.array([0.5, 0.5]), np.array([0.5, -0.5]), 1.0
        else:
            angular_edges = np.linspace(0.0, math.pi, angular_cells + 1)
            even, odd = _angular_integrals(n, angular_edges)
            prefactor = axial_weight(n)

        def cells(radial: np.ndarray, angular: np.ndarray) -> np.ndarray:
            return prefactor * np.outer(radial, angular).ravel()

        return cls(
            n,
            alpha,
            radial_edges,
            angular_edges,
            measure=cells(_radial_integral(radial_edges, n - 1.0), even),
            coef_u=cells(_radial_integral(radial_edges, alpha - 1.0), even),
            coef_v=cells(_radial_integral(radial_edges, alpha - 3.0), even),
            coef_H=cells(_radial_integral(radial_edges, alpha - 2.0), odd),
        )

    @property
    def size(self) -> int:
        return int(self.measure.size)

    def contains(self, ball: BallSpec) -> bool:
        return self.radial_edges[0] <= ball.inner and ball.outer <= self.radial_edges[-1]

    def functionals(self, rho: np.ndarray) -> tuple:
        return float(self.coef_u @ rho), float(self.coef_v @ rho), float(self.coef_H @ rho)


@dataclass(frozen=True)
class LPResult:
    value: float
    rho: np.ndarray
    u: float
    v: float
    # share of the support measure carried by cells strictly between 0 and 1
    fractional_measure: float


def lp_oracle(gp: GridProblem, u: float, v: float, band: float = DEFAULT_BAND) -> LPResult:
    """Maximum of H over grid densities with u, v inside relative bands of width `band`."""
    if not (u > 0.0 and v > 0.0):
        raise DomainError(f"lp_oracle needs u, v > 0, got u={u!r} v={v!r}")
    a_ub = np.vstack([gp.coef_u, -gp.coef_u, gp.coef_v, -gp.coef_v])
    b_ub = np.array([u * (1.0 + band), -u * (1.0 - band), v * (1.0 + band), -v * (1.0 - band)])
    result = optimize.linprog(-gp.coef_H, A_ub=a_ub, b_ub=b_ub, bounds=(0.0, 1.0), method="highs-ds")
    logger.debug("LP solved", status=result.status, cells=gp.size, n=gp.n, alpha=gp.alpha)
    if result.status != 0:
        raise Infeasible(f"grid LP failed for u={u!r} v={v!r}: {result.message}", status=result.status)
    rho = np.clip(result.x, 0.0, 1.0)
    support = gp.measure[rho > FRACTIONAL_MARGIN].sum()
    fractional = (rho > FRACTIONAL_MARGIN) & (rho < 1.0 - FRACTIONAL_MARGIN)
    share = float(gp.measure[fractional].sum() / support) if support > 0.0 else 0.0
    u_grid, v_grid, _ = gp.functionals(rho)
    return LPResult(-float(result.fun), rho, u_grid, v_grid, share)


def ball_indicator(gp: GridProblem, ball: BallSpec, reflect: bool = False) -> np.ndarray:
    """Grid density equal to 1 on cells whose centre lies in the ball."""
    q = np.sqrt(gp.radial_edges[:-1] * gp.radial_edges[1:])
    theta = 0.5 * (gp.angular_edges[:-1] + gp.angular_edges[1:])
    if gp.n == 1:
        theta = np.array([0.0, math.pi])
    x1 = np.outer(q, np.cos(theta))
    r2 = np.outer(q**2, np.ones_like(theta))
    sign = -1.0 if reflect else 1.0
    inside = r2 - 2.0 * sign * ball.tau * x1 + ball.sigma**2 < 0.0
    return inside.ravel().astype(float)
