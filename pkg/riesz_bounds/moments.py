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
One-dimensional L-problem toolkit.

Moments are taken in the normalized measure d_omega x = dx / 2, s_k = int rho(x) x^k dx / 2, for step densities
0 <= rho <= L on (0, inf).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from riesz_bounds import series
from riesz_bounds.exceptions import AdmissibilityError, DomainError, InsufficientData, MissingMoment
from riesz_bounds.log import get_logger

logger = get_logger(__name__)

MAX_TRANSFORM_ORDER = 12
VIOLATION_TOLERANCE = 1e-10
# Hankel matrices up to this size use exact cofactor expansion
COFACTOR_MAX_M = 4

PLAIN_MEASURE_NOTE = (
    "moments use d_omega x = dx/2; with plain dx the sharp constants of the critical-exponent inequalities "
    "fail on intervals"
)

Step = Tuple[float, float, float]


@dataclass(frozen=True)
class MomentSeq:
    s: Dict[int, float]
    L: float = 1.0
    interval: Optional[Tuple[float, float]] = None

    def __post_init__(self) -> None:
        if not self.L > 0.0:
            raise DomainError(f"L must be positive, got {self.L!r}")
        for k, value in self.s.items():
            if not math.isfinite(value):
                raise DomainError(f"moment s_{k} is not finite", k=k)

    def __getitem__(self, k: int) -> float:
        try:
            return self.s[k]
        except KeyError:
            raise MissingMoment(k) from None

    def __contains__(self, k: int) -> bool:
        return k in self.s

    @classmethod
    def from_plain(cls, s: Dict[int, float], L: float = 1.0) -> MomentSeq:
        """Moments given with plain dx, converted to d_omega."""
        return cls({k: value / 2.0 for k, value in s.items()}, L)

    def normalized(self) -> Dict[int, float]:
        """Moments of rho / L."""
        return {k: value / self.L for k, value in self.s.items()}


def _interval_moment(a: float, b: float, k: int) -> float:
    if k == -1:
        return 0.5 * (math.log(b) - math.log(a))
    return (b ** (k + 1) - a ** (k + 1)) / (2.0 * (k + 1))


def interval_moments(a: float, b: float, k_range: Iterable[int]) -> MomentSeq:
    """Moments of the characteristic function of [a, b]."""
    ks = list(k_range)
    if not 0.0 <= a < b:
        raise DomainError(f"interval needs 0 <= a < b, got a={a!r} b={b!r}")
    if a == 0.0 and any(k < 0 for k in ks):
        raise DomainError("negative moments need an interval bounded away from 0", a=a)
    return MomentSeq({k: _interval_moment(a, b, k) for k in ks}, interval=(a, b))


def _check_steps(steps: Sequence[Step]) -> List[Step]:
    ordered = sorted(steps)
    for index, (a, b, w) in enumerate(ordered):
        if not 0.0 <= a < b:
            raise AdmissibilityError(f"step [{a!r}, {b!r}] must satisfy 0 <= a < b", index)
        if not 0.0 <= w <= 1.0:
            raise AdmissibilityError(f"step weight {w!r} outside [0, 1]", index)
        if index and a < ordered[index - 1][1]:
            raise AdmissibilityError("steps overlap", index)
    return ordered


def step_moments(steps: Sequence[Step], k_range: Iterable[int]) -> MomentSeq:
    """Moments of sum_i w_i chi_[a_i, b_i] for disjoint steps (a_i, b_i, w_i)."""
    ordered = _check_steps(steps)
    ks = list(k_range)
    s = {k: 0.0 for k in ks}
    for a, b, w in ordered:
        for k, value in interval_moments(a, b, ks).s.items():
            s[k] += w * value
    support = (ordered[0][0], ordered[-1][1]) if ordered else None
    return MomentSeq(s, interval=support)


def invert_steps(steps: Sequence[Step]) -> List[Step]:
    """Steps of rho(1/x); s_k(rho) = s_(-k-2)(rho(1/x))."""
    ordered = _check_steps(steps)
    if ordered and ordered[0][0] <= 0.0:
        raise DomainError("inversion needs steps bounded away from 0")
    return sorted((1.0 / b, 1.0 / a, w) for a, b, w in ordered)


def exp_transform_moments(s: MomentSeq, order: int) -> List[float]:
    """
    a_0..a_order with 1 - exp(-(1/L) sum_k s_k z^-(k+1)) = sum_k a_k z^-(k+1), by exact series composition in 1/z.
    """
    if not 0 <= order <= MAX_TRANSFORM_ORDER:
        raise DomainError(f"transform order must lie in [0, {MAX_TRANSFORM_ORDER}], got {order}")
    exponent = [0.0] + [-s[k] / s.L for k in range(order + 1)]
    return [-coefficient for coefficient in series.exp(exponent, order + 1)[1:]]


def _cofactor_det(matrix: List[List[float]]) -> float:
    if len(matrix) == 1:
        return matrix[0][0]
    total = 0.0
    for j, entry in enumerate(matrix[0]):
        if entry == 0.0:
            continue
        minor = [row[:j] + row[j + 1 :] for row in matrix[1:]]
        total += (-1) ** j * entry * _cofactor_det(minor)
    return total


def _det(matrix: List[List[float]]) -> float:
    if len(matrix) - 1 <= COFACTOR_MAX_M:
        return _cofactor_det(matrix)
    return float(np.linalg.det(np.asarray(matrix)))


def hankel_determinants(a: Sequence[float], m: int) -> Tuple[float, float]:
    """(det(a_(i+j)), det(a_(i+j+1))) for i, j = 0..m."""
    if m < 0:
        raise DomainError(f"Hankel order must be nonnegative, got {m}")
    if len(a) < 2 * m + 2:
        raise InsufficientData(2 * m + 2, len(a))
    delta = [[a[i + j] for j in range(m + 1)] for i in range(m + 1)]
    shifted = [[a[i + j + 1] for j in range(m + 1)] for i in range(m + 1)]
    return _det(delta), _det(shifted)


@dataclass(frozen=True)
class InequalityCheck:
    name: str
    lhs: float
    rhs: float

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs


@dataclass(frozen=True)
class CriticalReport:
    checks: List[InequalityCheck]
    tolerance: float = VIOLATION_TOLERANCE
    note: str = PLAIN_MEASURE_NOTE
    skipped: List[str] = field(default_factory=list)

    @property
    def violations(self) -> List[InequalityCheck]:
        return [check for check in self.checks if check.slack < -self.tolerance]

    @property
    def ok(self) -> bool:
        return not self.violations


def markov_check(s: Dict[int, float]) -> InequalityCheck:
    """
    s_0^4 <= 3 (s_0 s_2 - s_1^2), equality on every interval.

    In plain dx moments S_k = 2 s_k this reads S_0^4 <= 12 (S_0 S_2 - S_1^2), i.e. a_0 a_2 - a_1^2 >= 0 for the
    transform 1 - exp(-sum S_k z^-(k+1)) with L = 1.
    """
    return InequalityCheck("markov", s[0] ** 4, 3.0 * (s[0] * s[2] - s[1] ** 2))


def tanh_check(s: Dict[int, float]) -> InequalityCheck:
    """s_0^2 <= s_1 tanh(s_-1)."""
    return InequalityCheck("tanh", s[0] ** 2, s[1] * math.tanh(s[-1]))


def sinh_check(s: Dict[int, float]) -> InequalityCheck:
    """sinh^2(s_-1) <= s_0 s_-2."""
    return InequalityCheck("sinh", math.sinh(s[-1]) ** 2, s[0] * s[-2])


_CHECKS = {
    "markov": (markov_check, (0, 1, 2)),
    "tanh": (tanh_check, (-1, 0, 1)),
    "sinh": (sinh_check, (-2, -1, 0)),
}


def check_critical_inequalities(
    s: MomentSeq, names: Optional[Sequence[str]] = None, tolerance: float = VIOLATION_TOLERANCE
) -> CriticalReport:
    """
    Slacks of the critical-exponent inequalities for the density rho / L.

    With `names=None` every inequality whose moments are present is evaluated and the rest are listed as skipped;
    explicitly requested inequalities raise MissingMoment instead.
    """
    normalized = s.normalized()
    checks = []
    skipped = []
    for name, (check, needed) in _CHECKS.items():
        if names is not None and name not in names:
            continue
        missing = [k for k in needed if k not in normalized]
        if missing:
            if names is not None:
                raise MissingMoment(missing[0])
            skipped.append(name)
            continue
        checks.append(check(normalized))
    if not checks and skipped:
        raise MissingMoment(min(k for name in skipped for k in _CHECKS[name][1] if k not in normalized))
    report = CriticalReport(checks, tolerance, skipped=skipped)
    for violation in report.violations:
        logger.debug("critical inequality violated", inequality=violation.name, slack=violation.slack)
    return report
