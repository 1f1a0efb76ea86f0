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
Named property suites.

Every suite is a list of cases; case i of a randomized suite draws from its own generator seeded by
SeedSequence([seed, i]), and cases run through map_in_parallel, which keeps input order. Reports therefore only
depend on (suite, seed, scale).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate, special

from riesz_bounds.bounds import (
    M_n,
    M_n_ode,
    M_n_parametric,
    M_ode_residual,
    N_alpha,
    Phi_n,
    Phi_ode_residual,
    ShapeFunctionTable,
    newton_gradient_slack,
    phi2_taylor_coefficients,
    psi_shape,
    truncated_cauchy_bound,
)
from riesz_bounds.exceptions import RieszBoundsError, UnknownSuite
from riesz_bounds.futures import map_in_parallel
from riesz_bounds.hypergeom import HyperParams, gauss_2f1, limit_coefficient
from riesz_bounds.log import get_logger
from riesz_bounds.moments import (
    check_critical_inequalities,
    exp_transform_moments,
    hankel_determinants,
    interval_moments,
    invert_steps,
    step_moments,
)
from riesz_bounds.potentials import (
    BallSpec,
    Component,
    Density,
    ball_F,
    ball_H,
    density_functionals,
    invert_ball,
    invert_density,
    newton_potential,
    split_by_sign,
)
from riesz_bounds.reduced import (
    asymptotic_coefficient,
    df_alpha,
    dh_alpha,
    f_alpha,
    f_alpha_hyper2,
    f_alpha_n1_algebraic,
    g1_aux,
    g2_aux,
    g_aux,
    h_alpha,
)
from riesz_bounds import series
from riesz_bounds.verify.grid import GridProblem, lp_oracle

logger = get_logger(__name__)

SUITE_NAMES = ("identities", "hypergeom", "sharpness", "inequality-fuzz", "shape-functions", "moments", "lp")

DEFAULT_CASES = {
    "identities": 10**4,
    "hypergeom": 1000,
    "sharpness": 500,
    "inequality-fuzz": 10**4,
    "moments": 10**4,
    "lp": 10,
}

# share of the LP support that may sit in fractional cells
LP_FRACTIONAL_SHARE = 0.25
# third-party numerical failures inside a case are reported as that case's failure
CASE_ERRORS = (RieszBoundsError, ArithmeticError, ValueError, AssertionError, np.linalg.LinAlgError)


@dataclass(frozen=True)
class CheckOutcome:
    check: str
    residual: float
    tolerance: float
    inputs: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.residual <= self.tolerance


@dataclass
class SuiteReport:
    suite: str
    seed: int
    cases: int
    max_residual: float
    failures: List[Dict[str, Any]]
    parts: List[SuiteReport] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> Dict[str, Any]:
        result: Dict[str, Any] = {
            "suite": self.suite,
            "seed": self.seed,
            "cases": self.cases,
            "max_residual": self.max_residual,
            "failures": self.failures,
        }
        if self.parts:
            result["parts"] = [part.to_dict() for part in self.parts]
        return result

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


Case = Callable[[], List[CheckOutcome]]


def _rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, index]))


def _relative(value: float, reference: float, scale: Optional[float] = None) -> float:
    denominator = abs(reference) if scale is None else scale
    difference = abs(value - reference)
    return difference / denominator if denominator > 0.0 else difference


def _flag(ok: bool) -> float:
    return 0.0 if ok else 1.0


def _five_point(func: Callable[[float], float], x: float, step: float) -> float:
    return (func(x - 2 * step) - 8 * func(x - step) + 8 * func(x + step) - func(x + 2 * step)) / (12 * step)


def _draw_alpha(rng: np.random.Generator) -> float:
    choice = rng.random()
    if choice < 0.1:
        return 2.0
    if choice < 0.2:
        return 1.0
    return float(rng.uniform(0.05, 2.0))


def _log_uniform(rng: np.random.Generator, lo: float, hi: float) -> float:
    return float(math.exp(rng.uniform(math.log(lo), math.log(hi))))


def random_density(rng: np.random.Generator, n: int, max_components: int = 4, two_sided: bool = True) -> Density:
    """Disjoint balls stacked outwards along both half-axes, with random weights."""
    edges = {False: 0.0, True: 0.0}
    components = []
    for _ in range(int(rng.integers(1, max_components + 1))):
        reflect = two_sided and bool(rng.random() < 0.3)
        radius = _log_uniform(rng, 0.05, 2.0)
        center = edges[reflect] + float(rng.uniform(0.05, 1.0)) + radius
        edges[reflect] = center + radius
        weight = 1.0 if rng.random() < 0.3 else float(rng.uniform(0.05, 1.0))
        components.append(Component(BallSpec.from_center_radius(n, center, radius), weight, reflect))
    return Density(n, tuple(components))


def _neville_at_zero(xs: Sequence[float], ys: Sequence[float]) -> float:
    p = list(ys)
    for level in range(1, len(xs)):
        for i in range(len(xs) - level):
            p[i] = (xs[i + level] * p[i] - xs[i] * p[i + 1]) / (xs[i + level] - xs[i])
    return p[0]


def _identities_case(rng: np.random.Generator) -> List[CheckOutcome]:
    n = int(rng.integers(1, 6))
    alpha = _draw_alpha(rng)
    t = 1.0 + 19.0 * (1.0 - float(rng.random()))
    t_fd = _log_uniform(rng, 1.5, 20.0)
    inputs = {"n": n, "alpha": alpha, "t": t}
    fd_inputs = {"n": n, "alpha": alpha, "t": t_fd}
    outcomes = []

    f, fm, h = f_alpha(n, alpha, t), f_alpha(n, alpha - 2.0, t), h_alpha(n, alpha, t)
    terms = (2.0 * (alpha - 1.0) * t * h, alpha * f, (alpha - 2.0) * fm)
    outcomes.append(
        CheckOutcome("contiguity", abs(terms[0] - terms[1] - terms[2]) / max(map(abs, terms)), 1e-9, inputs)
    )
    outcomes.append(CheckOutcome("f-even", _relative(f_alpha(n, -alpha, t), f), 1e-15, inputs))
    outcomes.append(CheckOutcome("f-representations", _relative(f_alpha_hyper2(n, alpha, t), f), 1e-9, inputs))
    outcomes.append(CheckOutcome("h-reflection", _relative(h_alpha(n, 2.0 - alpha, t), h), 1e-9, inputs))
    if n == 1:
        outcomes.append(CheckOutcome("n1-algebraic", _relative(f_alpha_n1_algebraic(alpha, t), f), 1e-12, inputs))

    df = df_alpha(n, alpha, t)
    terms = ((n - alpha) * h, (t * t - 1.0) * df, alpha * t * f)
    outcomes.append(
        CheckOutcome("coarea-f", abs(terms[0] - terms[1] + terms[2]) / max(map(abs, terms)), 1e-9, inputs)
    )

    dh = dh_alpha(n, alpha, t)
    terms = ((t * t - 1.0) * dh / alpha, ((alpha - 1.0) * t * t + 1.0 - n) * h / (alpha * t))
    outcomes.append(
        CheckOutcome("f-from-h", _relative(terms[0] + terms[1], f, max(abs(f), *map(abs, terms))), 1e-9, inputs)
    )

    step = 1e-3 * t_fd
    dh_fd = _five_point(lambda x: h_alpha(n, alpha, x), t_fd, step)
    rhs = df_alpha(n, alpha, t_fd) + df_alpha(n, alpha - 2.0, t_fd)
    outcomes.append(CheckOutcome("coarea-h", _relative(2.0 * t_fd * dh_fd, rhs), 1e-8, fd_inputs))

    d2f = _five_point(lambda x: df_alpha(n, alpha, x), t_fd, step)
    terms = (
        t_fd * (t_fd**2 - 1.0) * d2f,
        (t_fd**2 - n + 1.0) * df_alpha(n, alpha, t_fd),
        t_fd * alpha**2 * f_alpha(n, alpha, t_fd),
    )
    outcomes.append(
        CheckOutcome("ode", abs(terms[0] + terms[1] - terms[2]) / max(map(abs, terms)), 1e-8, fd_inputs)
    )

    p, q, gamma = float(rng.uniform(-2, 2)), float(rng.uniform(-2, 2)), float(rng.uniform(0.0, 1.0))
    mixed = f_alpha(n, p, t) ** gamma * f_alpha(n, q, t) ** (1.0 - gamma)
    combined = f_alpha(n, gamma * p + (1.0 - gamma) * q, t)
    outcomes.append(
        CheckOutcome(
            "log-convexity", max(0.0, (combined - mixed) / combined), 1e-12, {**inputs, "p": p, "q": q, "gamma": gamma}
        )
    )

    outcomes.append(CheckOutcome("f-increasing", _flag(f_alpha(n, alpha, 1.1 * t) > f), 0.0, inputs))
    growth = f_alpha(n, alpha, 1e3) / f_alpha(n, alpha, 10.0)
    outcomes.append(CheckOutcome("f-unbounded", _flag(growth >= 0.5 * 100.0**alpha), 0.0, inputs))
    if alpha >= 0.75:
        big = 1e6
        ratio = f_alpha(n, alpha, big) / big**alpha
        outcomes.append(CheckOutcome("asymptote", _relative(ratio, asymptotic_coefficient(n, alpha)), 1e-6, inputs))

    ys, gs = [], []
    for k in range(2, 6):
        tk = 1.0 + 10.0 ** (-k)
        y = tk - 1.0
        ys.append(y)
        gs.append(f_alpha(n, alpha, tk) * (y * (tk + 1.0)) ** (-0.5 * n))
    outcomes.append(CheckOutcome("f-near-one", abs(_neville_at_zero(ys, gs) - 1.0), 1e-6, inputs))

    sigma = _log_uniform(rng, 0.3, 3.0)
    if t > 1.0 + 1e-9:
        ball = BallSpec(sigma * t, sigma, n)
        inverted = invert_ball(ball)
        F, F_inverted = ball_F(ball, alpha), ball_F(inverted, -alpha)
        H, H_inverted = ball_H(ball, alpha), ball_H(inverted, 2.0 - alpha)
        outcomes.append(CheckOutcome("inversion-F", _relative(F_inverted, F), 1e-9, inputs))
        outcomes.append(CheckOutcome("inversion-H", _relative(H_inverted, H), 1e-9, inputs))
    return outcomes


def _series_oracle(a: float, b: float, c: float, z: float) -> float:
    terms = [1.0]
    k = 0
    while abs(terms[-1]) > 1e-20 * abs(math.fsum(terms)):
        terms.append(terms[-1] * (a + k) * (b + k) / ((c + k) * (k + 1)) * z)
        k += 1
    return math.fsum(terms)


def _euler_oracle(a: float, b: float, c: float, z: float) -> float:
    value, _ = integrate.quad(
        lambda x: (1.0 - z * x) ** (-a), 0.0, 1.0, weight="alg", wvar=(b - 1.0, c - b - 1.0), epsabs=0.0, epsrel=1e-13
    )
    return value * math.exp(special.gammaln(c) - special.gammaln(b) - special.gammaln(c - b))


def _hypergeom_case(rng: np.random.Generator) -> List[CheckOutcome]:
    a, b = float(rng.uniform(0.1, 3.0)), float(rng.uniform(0.1, 3.0))
    c = b + float(rng.uniform(0.1, 3.0))
    region = int(rng.integers(0, 3))
    z = float(rng.uniform(*((-0.9, 0.9), (-50.0, -0.9), (0.9, 0.95))[region]))
    inputs = {"a": a, "b": b, "c": c, "z": z}
    oracle = _series_oracle(a, b, c, z) if region == 0 else _euler_oracle(a, b, c, z)
    outcomes = [CheckOutcome("oracle", _relative(gauss_2f1(HyperParams(a, b, c, z)), oracle), 1e-10, inputs)]

    w = float(rng.uniform(-0.9, 0.0))
    p = HyperParams(a, b, c, w)
    outcomes.append(
        CheckOutcome("pfaff", _relative(gauss_2f1(p), gauss_2f1(p, pfaff=False)), 1e-11, {**inputs, "z": w})
    )

    # (1-z)^(a+b-c) F -> limit_coefficient, extrapolated over 1 - z = 10^-k
    # a + b >= 2 keeps c > 0.1 and the exponent away from integers
    a2, b2 = float(rng.uniform(1.0, 2.5)), float(rng.uniform(1.0, 2.5))
    excess = float(rng.uniform(0.2, 0.8) if rng.random() < 0.5 else rng.uniform(1.2, 1.8))
    c2 = a2 + b2 - excess
    ys = [10.0 ** (-k) for k in range(3, 8)]
    values = [y**excess * gauss_2f1(HyperParams(a2, b2, c2, 1.0 - y)) for y in ys]
    basis = np.array([[1.0, y, y**excess, y ** (1.0 + excess), y * y] for y in ys])
    limit = float(np.linalg.solve(basis, np.array(values))[0])
    expected = limit_coefficient(a2, b2, c2)
    outcomes.append(CheckOutcome("limit", _relative(limit, expected), 1e-6, {"a": a2, "b": b2, "c": c2}))
    return outcomes


def _sharpness_case(rng: np.random.Generator) -> List[CheckOutcome]:
    n = int(rng.integers(1, 6))
    alpha = _draw_alpha(rng)
    t = _log_uniform(rng, 1.05, 20.0)
    sigma = _log_uniform(rng, 0.2, 5.0)
    ball = BallSpec(sigma * t, sigma, n)
    inputs = {"n": n, "alpha": alpha, "tau": ball.tau, "sigma": sigma}
    u, v, H = ball_F(ball, alpha), ball_F(ball, alpha - 2.0), ball_H(ball, alpha)
    result = N_alpha(n, alpha, u, v)
    assert result.witness is not None
    outcomes = [
        CheckOutcome("equality", _relative(result.value, H * H), 1e-8, inputs),
        CheckOutcome("witness-t", _relative(result.t0, t), 1e-9, inputs),
        CheckOutcome("witness-u", _relative(ball_F(result.witness, alpha), u), 1e-9, inputs),
        CheckOutcome("witness-v", _relative(ball_F(result.witness, alpha - 2.0), v), 1e-9, inputs),
    ]
    for name, g in (("g", g_aux), ("g1", g1_aux), ("g2", g2_aux)):
        outcomes.append(CheckOutcome(f"{name}-increasing", _flag(g(n, alpha, 1.05 * t) > g(n, alpha, t)), 0.0, inputs))
    return outcomes


def _fuzz_case(rng: np.random.Generator) -> List[CheckOutcome]:
    n = int(rng.integers(1, 6))
    alpha = _draw_alpha(rng)
    rho = random_density(rng, n)
    components = [[c.ball.tau, c.ball.sigma, c.weight, c.reflect] for c in rho.components]
    inputs = {"n": n, "alpha": alpha, "components": components}
    values = density_functionals(rho, alpha)
    bound = N_alpha(n, alpha, values.u, values.v).value
    cauchy = values.u * values.v
    H2 = values.H**2
    positive, negative = split_by_sign(rho)
    split = max(abs(density_functionals(positive, alpha).H), abs(density_functionals(negative, alpha).H))
    images = density_functionals(invert_density(rho), -alpha)
    newtonian = density_functionals(rho, 2.0)
    max_weight = max(c.weight for c in rho.components)
    outcomes = [
        CheckOutcome("sharp-bound", max(0.0, (H2 - bound) / bound), 1e-10, inputs),
        CheckOutcome("cauchy-bound", max(0.0, (bound - cauchy) / cauchy), 1e-12, inputs),
        CheckOutcome("strict-cauchy", _flag(H2 < cauchy), 0.0, inputs),
        CheckOutcome("sign-split", max(0.0, abs(values.H) - split) / max(split, 1e-300), 1e-12, inputs),
        CheckOutcome("inversion-density", _relative(images.u, values.u), 1e-9, inputs),
        CheckOutcome(
            "truncated-cauchy", _flag(newtonian.H**2 < truncated_cauchy_bound(newtonian.u, max_weight)), 0.0, inputs
        ),
        CheckOutcome(
            "critical-bound",
            max(0.0, newtonian.H**2 - M_n(n, newtonian.v) * newtonian.u) / (newtonian.H**2 or 1.0),
            1e-10,
            inputs,
        ),
    ]
    if n >= 3:
        outcomes.extend(_newton_checks(rng, rho, inputs))
    return outcomes


def _newton_checks(rng: np.random.Generator, rho: Density, inputs: Dict[str, Any]) -> List[CheckOutcome]:
    # the origin is never in the support
    y = np.zeros(rho.n)
    for _ in range(10):
        candidate = rng.uniform(-3.0, 3.0, rho.n)
        if all(np.linalg.norm(c.center() - candidate) > 1.01 * c.ball.radius for c in rho.components):
            y = candidate
            break
    point = {**inputs, "y": y.tolist()}
    potential = newton_potential(rho, y)
    slack = newton_gradient_slack(rho, y)
    # equality needs the indicator of a ball: keep the placement of component 0, drop its weight
    first = rho.components[0]
    single = Density(rho.n, (Component(first.ball, 1.0, first.reflect),))
    single_potential = newton_potential(single, y)
    return [
        CheckOutcome("newton-gradient", max(0.0, -slack) / potential, 1e-10, point),
        CheckOutcome("newton-equality", abs(newton_gradient_slack(single, y)) / single_potential, 1e-8, point),
    ]


def _random_steps(rng: np.random.Generator) -> List[Tuple[float, float, float]]:
    count = int(rng.integers(1, 5))
    points = sorted(_log_uniform(rng, 0.05, 10.0) for _ in range(2 * count))
    steps = []
    for i in range(count):
        weight = 1.0 if rng.random() < 0.3 else float(rng.uniform(0.05, 1.0))
        if points[2 * i] < points[2 * i + 1]:
            steps.append((points[2 * i], points[2 * i + 1], weight))
    return steps or [(1.0, 2.0, 1.0)]


def _moments_case(rng: np.random.Generator) -> List[CheckOutcome]:
    steps = _random_steps(rng)
    inputs = {"steps": [list(step) for step in steps]}
    s = step_moments(steps, range(-6, 5))
    outcomes = []
    for check in check_critical_inequalities(s).checks:
        outcomes.append(CheckOutcome(check.name, max(0.0, -check.slack) / max(1.0, abs(check.rhs)), 1e-10, inputs))

    inverted = step_moments(invert_steps(steps), range(-6, 5))
    for k in range(5):
        outcomes.append(CheckOutcome(f"inversion-s{k}", _relative(inverted[-k - 2], s[k]), 1e-12, inputs))

    rho = Density(1, tuple(Component(BallSpec.from_interval(a, b), w) for a, b, w in steps))
    values = density_functionals(rho, 1.0)
    outcomes.append(CheckOutcome("line-u", _relative(values.u, s[0]), 1e-11, inputs))
    outcomes.append(CheckOutcome("line-v", _relative(values.v, s[-2]), 1e-11, inputs))
    outcomes.append(CheckOutcome("line-H", _relative(values.H, s[-1]), 1e-11, inputs))
    bound = N_alpha(1, 1.0, s[0], s[-2]).value
    outcomes.append(CheckOutcome("line-bound", _relative(bound, Phi_n(1, math.sqrt(s[0] * s[-2])) ** 2), 1e-9, inputs))

    a, b, _ = steps[0]
    single = check_critical_inequalities(interval_moments(a, b, range(-2, 3)))
    for check in single.checks:
        scale = max(1.0, abs(check.rhs), abs(check.lhs))
        outcomes.append(CheckOutcome(f"{check.name}-interval", abs(check.slack) / scale, 1e-9, {"a": a, "b": b}))
    width, gap = float(rng.uniform(0.2, 2.0)), float(rng.uniform(1.2, 3.0))
    far = (1.0 + width) * gap
    split = step_moments([(1.0, 1.0 + width, 1.0), (far, far + width, 1.0)], range(-2, 3))
    for check in check_critical_inequalities(split, names=("tanh", "sinh")).checks:
        outcomes.append(CheckOutcome(f"{check.name}-gap", _flag(check.slack > 0.0), 0.0, {"width": width, "gap": gap}))
    return outcomes


def _lp_target(rng: np.random.Generator) -> Tuple[int, float, float, float, float, Dict[str, Any]]:
    """(n, alpha, u, v, sqrt N) for a ball well inside the default grid."""
    n = int(rng.integers(1, 4))
    alpha = float(rng.uniform(0.5, 2.0))
    t = float(rng.uniform(1.3, 3.0))
    sigma = float(rng.uniform(0.7, 1.5))
    ball = BallSpec(sigma * t, sigma, n)
    inputs = {"n": n, "alpha": alpha, "tau": ball.tau, "sigma": sigma}
    u, v = ball_F(ball, alpha), ball_F(ball, alpha - 2.0)
    return n, alpha, u, v, math.sqrt(N_alpha(n, alpha, u, v).value), inputs


def _lp_case(rng: np.random.Generator) -> List[CheckOutcome]:
    n, alpha, u, v, target, inputs = _lp_target(rng)
    result = lp_oracle(GridProblem.build(n, alpha), u, v)
    return [
        CheckOutcome("lp-agreement", _relative(result.value, target), 0.02, inputs),
        CheckOutcome("lp-upper", max(0.0, (result.value - target) / target), 0.02, inputs),
        # the maximizer is an indicator, so the optimal vertex leaves only a few cells fractional
        CheckOutcome("lp-bang-bang", result.fractional_measure, LP_FRACTIONAL_SHARE, inputs),
    ]


# grid sizes of the refinement sequence; the band width bounds how far the error can fall
REFINEMENT_CELLS = (25, 50, 100)


def _lp_refinement(rng: np.random.Generator) -> List[CheckOutcome]:
    n, alpha, u, v, target, inputs = _lp_target(rng)
    errors = []
    for cells in REFINEMENT_CELLS:
        result = lp_oracle(GridProblem.build(n, alpha, radial_cells=cells, angular_cells=cells), u, v)
        errors.append(_relative(result.value, target))
    inputs = {**inputs, "errors": errors}
    return [CheckOutcome("lp-refinement", _flag(errors[-1] <= max(0.75 * errors[0], 2e-3)), 0.0, inputs)]


def _shape_checks(scale: float) -> List[Case]:
    checks: List[Case] = []
    grid = np.linspace(0.0, 5.0, 26)

    def closed_forms() -> List[CheckOutcome]:
        outcomes = []
        for v in grid:
            v = float(v)
            outcomes.append(CheckOutcome("M1-parametric", abs(M_n_parametric(1, v) - math.tanh(v)), 1e-9, {"v": v}))
            outcomes.append(CheckOutcome("M1-ode", abs(M_n_ode(1, v) - math.tanh(v)), 1e-9, {"v": v}))
            outcomes.append(CheckOutcome("M2-parametric", abs(M_n_parametric(2, v) + math.expm1(-v)), 1e-9, {"v": v}))
            outcomes.append(CheckOutcome("M2-ode", abs(M_n_ode(2, v) + math.expm1(-v)), 1e-9, {"v": v}))
        return outcomes

    checks.append(closed_forms)

    def tables() -> List[CheckOutcome]:
        outcomes = []
        for n in range(1, 6):
            table = ShapeFunctionTable.from_arguments("M", n, [float(v) for v in grid], max_threads=1)
            outcomes.append(CheckOutcome("M-table-monotone", _flag(table.is_monotone()), 0.0, {"n": n}))
        return outcomes

    checks.append(tables)

    for n in (3, 4, 5):

        def parametric_vs_ode(n: int = n) -> List[CheckOutcome]:
            outcomes = []
            for v in grid[1:]:
                v = float(v)
                outcomes.append(CheckOutcome(f"M{n}-ode", abs(M_n(n, v) - M_n_ode(n, v)), 1e-9, {"v": v}))
                outcomes.append(CheckOutcome(f"M{n}-residual", M_ode_residual(n, v), 1e-7, {"v": v}))
            return outcomes

        checks.append(parametric_vs_ode)

    side = max(2, int(round(20 * math.sqrt(scale))))
    uv = np.geomspace(0.05, 20.0, side)
    for n in (2, 3, 4, 5):

        def alpha_two(n: int = n) -> List[CheckOutcome]:
            outcomes = []
            for u in map(float, uv):
                for v in map(float, uv):
                    residual = _relative(N_alpha(n, 2.0, u, v).value, u * M_n(n, v))
                    outcomes.append(CheckOutcome("alpha-two", residual, 1e-9, {"n": n, "u": u, "v": v}))
            return outcomes

        checks.append(alpha_two)

    def taylor() -> List[CheckOutcome]:
        coefficients = phi2_taylor_coefficients(10)
        return [
            CheckOutcome("phi2-taylor", abs(Phi_n(2, s) - series.evaluate(coefficients, s)), 1e-8, {"s": s})
            for s in map(float, np.linspace(0.0, 0.1, 11))
        ]

    checks.append(taylor)

    for n in (2, 3, 4, 5):

        def phi_checks(n: int = n) -> List[CheckOutcome]:
            c_n = asymptotic_coefficient(n, 1.0)
            low, high = Phi_n(n, 1e4), Phi_n(n, 1e6)
            s0 = 1e-8
            # Phi_n(s) / s = 1 - n s^(2/n) / (2(n+2)) + O(s^(4/n)) near the origin
            leading = 1.0 - n / (2.0 * (n + 2)) * s0 ** (2.0 / n)
            origin_tolerance = 1e-10 + 10.0 * s0 ** (4.0 / n)
            outcomes = [
                CheckOutcome("phi-slope", _relative((high - low) / math.log(100.0), c_n), 5e-3, {"n": n}),
                CheckOutcome(
                    "phi-ratio", _flag(abs(high / math.log(1e6) - c_n) < abs(low / math.log(1e4) - c_n)), 0.0, {"n": n}
                ),
                CheckOutcome("phi-origin", abs(Phi_n(n, s0) / s0 - leading), origin_tolerance, {"n": n}),
            ]
            for s in map(float, np.geomspace(0.1, 100.0, 7)):
                for c in (1.0, 0.5, 2.0):
                    residual = Phi_ode_residual(n, s / c, c)
                    outcomes.append(CheckOutcome("phi-ode", residual, 1e-7, {"n": n, "s": s, "scale": c}))
            return outcomes

        checks.append(phi_checks)

    def gamma_constant() -> List[CheckOutcome]:
        return [CheckOutcome("c2", _relative(asymptotic_coefficient(2, 1.0), 4.0 / math.pi), 1e-12)]

    checks.append(gamma_constant)

    side = max(3, int(round(50 * math.sqrt(scale))))
    for n, alpha in ((1, 0.5), (2, 1.0), (3, 1.5), (4, 2.0)):

        def monotone(n: int = n, alpha: float = alpha) -> List[CheckOutcome]:
            axis = np.geomspace(0.1, 10.0, side)
            table = np.array([[N_alpha(n, alpha, float(u), float(v)).value for v in axis] for u in axis])
            ok = bool(np.all(np.diff(table, axis=0) >= 0.0) and np.all(np.diff(table, axis=1) >= 0.0))
            outcomes = [CheckOutcome("N-monotone", _flag(ok), 0.0, {"n": n, "alpha": alpha})]
            values = [psi_shape(n, alpha, float(s)) for s in np.geomspace(1e-3, 1e3, 13)]
            decreasing = all(b < a < 1.0 for a, b in zip(values, values[1:]))
            outcomes.append(CheckOutcome("psi-decreasing", _flag(decreasing), 0.0, {"n": n}))
            for u, v in ((0.3, 2.0), (5.0, 0.7)):
                product = u * v * psi_shape(n, alpha, u ** (2.0 - alpha) * v**alpha)
                residual = _relative(product, N_alpha(n, alpha, u, v).value)
                outcomes.append(CheckOutcome("psi-consistency", residual, 1e-9, {"u": u, "v": v}))
            return outcomes

        checks.append(monotone)

    def alpha_one_symmetry() -> List[CheckOutcome]:
        outcomes = []
        for n in (1, 2, 3):
            for u, v in ((0.2, 3.0), (4.0, 1.0), (7.0, 0.05)):
                value = N_alpha(n, 1.0, u, v).value
                inputs = {"n": n, "u": u, "v": v}
                swapped = N_alpha(n, 1.0, v, u).value
                outcomes.append(CheckOutcome("alpha-one-swap", _relative(swapped, value), 1e-9, inputs))
                outcomes.append(
                    CheckOutcome("alpha-one-product", _relative(N_alpha(n, 1.0, u * v, 1.0).value, value), 1e-9, inputs)
                )
                outcomes.append(
                    CheckOutcome("alpha-one-phi", _relative(Phi_n(n, math.sqrt(u * v)) ** 2, value), 1e-9, inputs)
                )
        return outcomes

    checks.append(alpha_one_symmetry)
    return checks


def _hankel_checks() -> List[Case]:
    def unit_interval() -> List[CheckOutcome]:
        a = exp_transform_moments(interval_moments(0.0, 1.0, range(0, 8)), 7)
        outcomes = []
        for m in range(4):
            delta, shifted = hankel_determinants(a, m)
            outcomes.append(CheckOutcome("hankel", max(0.0, -delta), 1e-12, {"m": m}))
            outcomes.append(CheckOutcome("hankel-shifted", max(0.0, -shifted), 1e-12, {"m": m}))
        return outcomes

    return [unit_interval]


_RANDOM_SUITES: Dict[str, Callable[[np.random.Generator], List[CheckOutcome]]] = {
    "identities": _identities_case,
    "hypergeom": _hypergeom_case,
    "sharpness": _sharpness_case,
    "inequality-fuzz": _fuzz_case,
    "moments": _moments_case,
    "lp": _lp_case,
}


def _cases(name: str, seed: int, scale: float) -> List[Case]:
    cases: List[Case] = []
    if name in _RANDOM_SUITES:
        case = _RANDOM_SUITES[name]
        count = max(1, int(round(DEFAULT_CASES[name] * scale)))
        cases.extend((lambda index=index: case(_rng(seed, index))) for index in range(count))
    if name == "shape-functions":
        cases.extend(_shape_checks(scale))
    if name == "moments":
        cases.extend(_hankel_checks())
    if name == "lp":
        cases.append(lambda: _lp_refinement(_rng(seed, 0)))
    return cases


def _run_case(case: Case) -> List[CheckOutcome]:
    try:
        return case()
    except CASE_ERRORS as e:
        logger.warning("Verification case raised", exc_info=True, error_type=type(e).__name__)
        return [CheckOutcome("error", math.inf, 0.0, {"error": str(e), "type": type(e).__name__})]


def run_suite(name: str, seed: int = 0, scale: float = 1.0, max_threads: Optional[int] = None) -> SuiteReport:
    """
    Run a named suite. `scale` multiplies the number of randomized cases (and the grid sizes of the
    deterministic ones); "all" runs every suite in SUITE_NAMES order.
    """
    if name == "all":
        parts = [run_suite(part, seed, scale, max_threads) for part in SUITE_NAMES]
        return SuiteReport(
            "all",
            seed,
            sum(part.cases for part in parts),
            max((part.max_residual for part in parts), default=0.0),
            [{"suite": part.suite, **failure} for part in parts for failure in part.failures],
            parts,
        )
    if name not in SUITE_NAMES:
        raise UnknownSuite(name)

    cases = _cases(name, seed, scale)
    results = map_in_parallel(_run_case, cases, max_threads)
    max_residual = 0.0
    failures = []
    for index, outcomes in enumerate(results):
        for outcome in outcomes:
            max_residual = max(max_residual, outcome.residual)
            if not outcome.passed:
                failures.append(
                    {
                        "case": index,
                        "check": outcome.check,
                        "residual": outcome.residual,
                        "tolerance": outcome.tolerance,
                        "inputs": outcome.inputs,
                    }
                )
    logger.bind(suite=name, seed=seed).info("Suite finished", cases=len(cases), failures=len(failures))
    return SuiteReport(name, seed, len(cases), max_residual, failures)
