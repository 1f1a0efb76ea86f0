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
Admissible densities as disjoint weighted mixtures of x1-balls, and the Riesz-type functionals over them.

All component balls are centred on the x1-axis, at +tau or, when reflected, at -tau. Seen from an arbitrary
point y, a ball with centre c and radius R is again an x1-ball B(|c - y|, sqrt(|c - y|^2 - R^2)) about the axis
through y and c, so every pointwise potential reduces to the reduced functions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from riesz_bounds.exceptions import AdmissibilityError, DimensionError, DomainError, SupportError
from riesz_bounds.futures import map_in_parallel
from riesz_bounds.log import get_logger
from riesz_bounds.quadrature import axial_ball_integral
from riesz_bounds.reduced import f_alpha, h_alpha

logger = get_logger(__name__)

MONTE_CARLO_SAMPLES = 10**6
MONTE_CARLO_CHUNK = 2**16
# relative slack allowed when deciding that two balls merely touch
TOUCH_TOLERANCE = 1e-12


@dataclass(frozen=True)
class BallSpec:
    """The x1-ball B(tau, sigma) = {|x|^2 - 2 tau x1 + sigma^2 < 0} in R^n."""

    tau: float
    sigma: float
    n: int

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 1:
            raise DimensionError(self.n, "dimension must be a positive integer")
        if not 0.0 < self.sigma < self.tau or not math.isfinite(self.tau):
            raise DomainError(f"x1-ball needs 0 < sigma < tau, got tau={self.tau!r} sigma={self.sigma!r}")

    @classmethod
    def from_center_radius(cls, n: int, center: float, radius: float) -> BallSpec:
        if not 0.0 < radius < center:
            raise DomainError(f"ball of radius {radius!r} at {center!r} must exclude the origin")
        return cls(center, math.sqrt((center - radius) * (center + radius)), n)

    @classmethod
    def from_interval(cls, a: float, b: float) -> BallSpec:
        """The n=1 ball (a, b), 0 < a < b."""
        if not 0.0 < a < b:
            raise DomainError(f"interval ({a!r}, {b!r}) must lie in (0, inf)")
        return cls(0.5 * (a + b), math.sqrt(a * b), 1)

    @property
    def t(self) -> float:
        return self.tau / self.sigma

    @property
    def radius(self) -> float:
        return math.sqrt((self.tau - self.sigma) * (self.tau + self.sigma))

    @property
    def inner(self) -> float:
        """Distance from the origin to the closest point of the ball."""
        return self.sigma**2 / (self.tau + self.radius)

    @property
    def outer(self) -> float:
        return self.tau + self.radius


@dataclass(frozen=True)
class Component:
    ball: BallSpec
    weight: float = 1.0
    # reflected components sit on the negative x1 half-axis
    reflect: bool = False

    @property
    def sign(self) -> float:
        return -1.0 if self.reflect else 1.0

    def center(self) -> np.ndarray:
        c = np.zeros(self.ball.n)
        c[0] = self.sign * self.ball.tau
        return c


@dataclass(frozen=True)
class Density:
    n: int
    components: Tuple[Component, ...] = ()

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 1:
            raise DimensionError(self.n, "dimension must be a positive integer")
        object.__setattr__(self, "components", tuple(self.components))
        for index, component in enumerate(self.components):
            if component.ball.n != self.n:
                raise AdmissibilityError(f"component of dimension {component.ball.n} in R^{self.n}", index)
            if not 0.0 <= component.weight <= 1.0:
                raise AdmissibilityError(f"weight {component.weight!r} outside [0, 1]", index)
        for j, second in enumerate(self.components):
            for i, first in enumerate(self.components[:j]):
                distance = abs(first.sign * first.ball.tau - second.sign * second.ball.tau)
                radii = first.ball.radius + second.ball.radius
                if distance < radii * (1.0 - TOUCH_TOLERANCE):
                    raise AdmissibilityError(f"balls {i} and {j} overlap", j)

    @classmethod
    def single(cls, ball: BallSpec, weight: float = 1.0, reflect: bool = False) -> Density:
        return cls(ball.n, (Component(ball, weight, reflect),))

    @property
    def is_empty(self) -> bool:
        return all(c.weight == 0.0 for c in self.components)

    @property
    def origin_gap(self) -> float:
        """Minimal distance from the origin to the support."""
        return min((c.ball.inner for c in self.components), default=math.inf)

    def reflected(self) -> Density:
        return Density(self.n, tuple(Component(c.ball, c.weight, not c.reflect) for c in self.components))

    def scaled(self, factor: float) -> Density:
        """The density rho(x / factor)."""
        return Density(
            self.n,
            tuple(
                Component(BallSpec(c.ball.tau * factor, c.ball.sigma * factor, self.n), c.weight, c.reflect)
                for c in self.components
            ),
        )


@dataclass(frozen=True)
class FunctionalValues:
    """u = F_alpha rho, v = F_(alpha-2) rho, H = H_alpha rho."""

    u: float
    v: float
    H: float
    alpha: float
    n: int

    @property
    def cauchy_slack(self) -> float:
        return self.u * self.v - self.H**2


@dataclass(frozen=True)
class MonteCarloEstimate:
    values: FunctionalValues
    u_error: float
    v_error: float
    H_error: float
    samples: int
    seed: int


def ball_F(b: BallSpec, alpha: float) -> float:
    return b.sigma**alpha * f_alpha(b.n, alpha, b.t)


def ball_H(b: BallSpec, alpha: float) -> float:
    return b.sigma ** (alpha - 1.0) * h_alpha(b.n, alpha, b.t)


def invert_ball(b: BallSpec) -> BallSpec:
    """Image of B(tau, sigma) under x -> x / |x|^2."""
    return BallSpec(b.tau / b.sigma**2, 1.0 / b.sigma, b.n)


def invert_density(rho: Density) -> Density:
    return Density(rho.n, tuple(Component(invert_ball(c.ball), c.weight, c.reflect) for c in rho.components))


def density_functionals(rho: Density, alpha: float, method: str = "analytic") -> FunctionalValues:
    """
    u, v and H of rho at the origin, by linearity over the components.

    method "analytic" uses the reduced functions; "quadrature" integrates each ball in its axial frame.
    """
    if method == "analytic":
        F, H = ball_F, ball_H
    elif method == "quadrature":
        F, H = ball_F_quadrature, ball_H_quadrature
    else:
        raise ValueError(f"unknown evaluation method {method!r}")
    u = v = h = 0.0
    for c in rho.components:
        if c.weight == 0.0:
            continue
        u += c.weight * F(c.ball, alpha)
        v += c.weight * F(c.ball, alpha - 2.0)
        h += c.sign * c.weight * H(c.ball, alpha)
    return FunctionalValues(u, v, h, alpha, rho.n)


def ball_F_quadrature(b: BallSpec, alpha: float) -> float:
    exponent = 0.5 * (alpha - b.n)
    return axial_ball_integral(b.n, b.tau, b.radius, lambda x1, r: (x1 * x1 + r * r) ** exponent)


def ball_H_quadrature(b: BallSpec, alpha: float) -> float:
    exponent = 0.5 * (alpha - b.n - 2)
    return axial_ball_integral(b.n, b.tau, b.radius, lambda x1, r: x1 * (x1 * x1 + r * r) ** exponent)


def _uniform_ball_points(rng: np.random.Generator, n: int, count: int) -> np.ndarray:
    directions = rng.standard_normal((count, n))
    directions /= np.linalg.norm(directions, axis=1)[:, None]
    return directions * rng.random(count)[:, None] ** (1.0 / n)


def density_functionals_monte_carlo(
    rho: Density,
    alpha: float,
    samples: int = MONTE_CARLO_SAMPLES,
    seed: int = 0,
    max_threads: Optional[int] = None,
) -> MonteCarloEstimate:
    """
    Monte-Carlo u, v and H with standard errors.

    Samples are split evenly over the components and then into fixed chunks, each with its own generator
    spawned from `seed`; chunk sums are reduced in chunk order, so the result only depends on the seed.
    """
    active = [c for c in rho.components if c.weight != 0.0]
    if not active:
        return MonteCarloEstimate(FunctionalValues(0.0, 0.0, 0.0, alpha, rho.n), 0.0, 0.0, 0.0, 0, seed)
    per_component = max(1, samples // len(active))
    n = rho.n

    jobs: List[Tuple[int, int, np.random.SeedSequence]] = []
    children = iter(np.random.SeedSequence(seed).spawn(len(active) * (-(-per_component // MONTE_CARLO_CHUNK))))
    for index in range(len(active)):
        for start in range(0, per_component, MONTE_CARLO_CHUNK):
            jobs.append((index, min(MONTE_CARLO_CHUNK, per_component - start), next(children)))

    def run(job: Tuple[int, int, np.random.SeedSequence]) -> np.ndarray:
        index, count, seed_sequence = job
        c = active[index]
        x = _uniform_ball_points(np.random.default_rng(seed_sequence), n, count) * c.ball.radius
        x[:, 0] += c.sign * c.ball.tau
        r2 = np.einsum("ij,ij->i", x, x)
        values = np.stack(
            [r2 ** (0.5 * (alpha - n)), r2 ** (0.5 * (alpha - 2 - n)), x[:, 0] * r2 ** (0.5 * (alpha - n - 2))]
        )
        return np.concatenate([values.sum(axis=1), (values**2).sum(axis=1)])

    sums = map_in_parallel(run, jobs, max_threads)
    totals = np.zeros(3)
    variances = np.zeros(3)
    for index, c in enumerate(active):
        chunk_sums = sum(s for (i, _, _), s in zip(jobs, sums) if i == index)
        mean = chunk_sums[:3] / per_component
        var = np.maximum(chunk_sums[3:] / per_component - mean**2, 0.0) / per_component
        # the ball holds R^n of d_omega measure
        scale = c.weight * c.ball.radius**n
        totals += scale * mean
        variances += scale**2 * var
    errors = np.sqrt(variances)
    logger.debug("Monte-Carlo functionals done", samples=per_component * len(active), seed=seed, alpha=alpha)
    return MonteCarloEstimate(
        FunctionalValues(float(totals[0]), float(totals[1]), float(totals[2]), alpha, n),
        float(errors[0]),
        float(errors[1]),
        float(errors[2]),
        per_component * len(active),
        seed,
    )


def _point(rho: Density, y: Sequence[float]) -> np.ndarray:
    point = np.asarray(y, dtype=float).reshape(-1)
    if point.shape != (rho.n,):
        raise DimensionError(rho.n, f"evaluation point has {point.size} coordinates")
    return point


def _seen_from(rho: Density, point: np.ndarray) -> List[Tuple[Component, BallSpec, np.ndarray]]:
    """Each active component as an x1-ball about the axis from `point` to its centre, with that axis direction."""
    seen = []
    for index, c in enumerate(rho.components):
        if c.weight == 0.0:
            continue
        offset = c.center() - point
        distance = float(np.linalg.norm(offset))
        if distance <= c.ball.radius:
            raise SupportError(point.tolist(), index)
        seen.append((c, BallSpec.from_center_radius(rho.n, distance, c.ball.radius), offset / distance))
    return seen


def riesz_potential(rho: Density, y: Sequence[float], alpha: float, method: str = "analytic") -> float:
    """I_alpha rho(y) = int rho(x) |y - x|^(alpha - n) d_omega x."""
    F = ball_F if method == "analytic" else ball_F_quadrature
    return sum((c.weight * F(b, alpha) for c, b, _ in _seen_from(rho, _point(rho, y))), 0.0)


def riesz_gradient(rho: Density, y: Sequence[float], alpha: float, method: str = "analytic") -> np.ndarray:
    """grad I_alpha rho(y) = (n - alpha) int (x - y) rho(x) |y - x|^(alpha - n - 2) d_omega x."""
    H = ball_H if method == "analytic" else ball_H_quadrature
    gradient = np.zeros(rho.n)
    for c, b, direction in _seen_from(rho, _point(rho, y)):
        gradient += c.weight * H(b, alpha) * direction
    return (rho.n - alpha) * gradient


def exp_transform_point(rho: Density, y: Sequence[float], method: str = "analytic") -> float:
    """E_rho(y) = exp(-2 I_0 rho(y))."""
    return math.exp(-2.0 * riesz_potential(rho, y, 0.0, method))


def newton_potential(rho: Density, y: Sequence[float], method: str = "analytic") -> float:
    if rho.n <= 2:
        raise DimensionError(rho.n, "the Newtonian potential needs n >= 3")
    return riesz_potential(rho, y, 2.0, method) / (rho.n - 2)


def newton_gradient(rho: Density, y: Sequence[float], method: str = "analytic") -> np.ndarray:
    if rho.n <= 2:
        raise DimensionError(rho.n, "the Newtonian potential needs n >= 3")
    return riesz_gradient(rho, y, 2.0, method) / (rho.n - 2)


def split_by_sign(rho: Density) -> Tuple[Density, Density]:
    """(rho+, reflected rho-): the parts on each side of x1 = 0, both moved to the positive half-space."""
    positive = tuple(c for c in rho.components if not c.reflect)
    negative = tuple(Component(c.ball, c.weight, False) for c in rho.components if c.reflect)
    return Density(rho.n, positive), Density(rho.n, negative)
