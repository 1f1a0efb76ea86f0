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
Gauss hypergeometric function 2F1(a, b; c; z) on the real ranges used by the reduced ball functions.

The reduced functions only ever need z = 1 - t^2 <= 0 (mapped into [0, 1) by a Pfaff transformation) and
z = (t^2 - 1) / t^2 in [0, 1). Away from z = 1 the Gauss series is summed directly; close to z = 1 the
connection formula around z = 1 takes over, in its logarithmic form when c - a - b is (close to) an integer.
Both ends are carried as the pair (z, 1 - z) so that neither loses digits.
"""
import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from riesz_bounds.exceptions import DomainError, InvalidParams, NonConvergent
from riesz_bounds.log import get_logger

logger = get_logger(__name__)

MAX_TERMS = 10**6
TERM_TOLERANCE = 1e-16
# switch to the connection formula when the direct series would need more terms than this
CONNECTION_THRESHOLD = 10**4
# |c - a - b - round(c - a - b)| below this is treated as the logarithmic (integer) case
INTEGER_GAP = 1e-2
MAX_SHIFT_TERMS = 40
_BLOCK = 512


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0 and float(x).is_integer()


@dataclass(frozen=True)
class HyperParams:
    a: float
    b: float
    c: float
    z: float

    def __post_init__(self) -> None:
        if _is_nonpositive_integer(self.c):
            raise InvalidParams(self.a, self.b, self.c)
        if not self.z < 1.0:
            raise DomainError(f"2F1 argument z={self.z!r} outside the supported range z < 1", z=self.z)


def _series(a: float, b: float, c: float, z: float, max_terms: int = MAX_TERMS) -> float:
    """Sum the Gauss series in blocks of terms; stops at the first term below TERM_TOLERANCE * |partial sum|."""
    if z == 0.0 or a == 0.0 or b == 0.0:
        return 1.0
    total = 1.0
    term = 1.0
    k = 0
    while k < max_terms:
        ks = np.arange(k, min(k + _BLOCK, max_terms), dtype=float)
        terms = term * np.cumprod((a + ks) * (b + ks) / ((c + ks) * (ks + 1.0)) * z)
        partial = total + np.cumsum(terms)
        if not np.all(np.isfinite(partial)):
            break
        small = np.abs(terms) <= TERM_TOLERANCE * np.abs(partial)
        if small.any():
            return float(partial[int(np.argmax(small))])
        total = float(partial[-1])
        term = float(terms[-1])
        k += len(ks)
    raise NonConvergent("2F1 series", max_terms, a=a, b=b, c=c, z=z)


def _estimated_terms(y: float) -> float:
    """Terms the series at z = 1 - y needs before they drop below TERM_TOLERANCE."""
    if y >= 1.0:
        return 0.0
    if y <= 0.0:
        return math.inf
    return math.log(TERM_TOLERANCE) / math.log1p(-y)


def _connection(a: float, b: float, c: float, y: float) -> float:
    """
    2F1(a, b; c; 1 - y) for small y > 0 through the two-term connection formula around z = 1.
    Only valid when d = c - a - b is not an integer.
    """
    d = c - a - b
    first = special.gamma(c) * special.gamma(d) * special.rgamma(c - a) * special.rgamma(c - b)
    second = special.gamma(c) * special.gamma(-d) * special.rgamma(a) * special.rgamma(b)
    value = 0.0
    if first != 0.0:
        value += first * _series(a, b, 1.0 - d, y)
    if second != 0.0:
        value += second * y**d * _series(c - a, c - b, 1.0 + d, y)
    return float(value)


def _gamma_shift(x: np.ndarray, e: float) -> np.ndarray:
    """(ln Gamma(x + e) - ln Gamma(x)) / e as a polygamma series in e; digamma(x) at e = 0."""
    total = special.digamma(x)
    if e == 0.0:
        return total
    scale = 1.0
    for k in range(1, MAX_SHIFT_TERMS):
        scale *= e / (k + 1)
        term = special.polygamma(k, x) * scale
        total = total + term
        if np.all(np.abs(term) <= TERM_TOLERANCE * np.abs(total)):
            return total
    raise NonConvergent("log-gamma shift series", MAX_SHIFT_TERMS, e=e)


def _connection_integer(a: float, b: float, c: float, y: float, m: int, eps: float) -> float:
    """
    2F1(a, b; c; 1 - y) for small y > 0 when c - a - b = m + eps, m >= 0 an integer and eps small (or zero).

    The two connection terms have poles at eps = 0 that cancel. Combining them term by term leaves a finite sum
    of m terms plus a tail whose factors expm1(L) / sin(pi eps) stay finite; at eps = 0 they reduce to the
    digamma brackets of the logarithmic connection formula.
    """
    gamma_c = special.gamma(c)
    lower = special.rgamma(a + m + eps) * special.rgamma(b + m + eps)
    value = 0.0
    if m > 0:
        k = np.arange(m - 1, dtype=float)
        ratios = (a + k) * (b + k) / ((1.0 - m - eps + k) * (k + 1.0)) * y
        head = 1.0 + float(np.sum(np.cumprod(ratios)))
        value += gamma_c * special.gamma(m + eps) * lower * head

    count = int(math.ceil(math.log(TERM_TOLERANCE) / math.log(y))) + 2 if y < 1.0 else MAX_SHIFT_TERMS
    j = np.arange(min(count, MAX_TERMS), dtype=float)
    first = special.poch(a, m) * special.poch(b, m) / math.factorial(m) * special.rgamma(1.0 - eps)
    ratios = (a + m + j[:-1]) * (b + m + j[:-1]) / ((m + j[:-1] + 1.0) * (j[:-1] + 1.0 - eps)) * y
    coefficients = first * np.concatenate(([1.0], np.cumprod(ratios)))
    log_ratio = (
        math.log(y)
        + _gamma_shift(a + m + j, eps)
        + _gamma_shift(b + m + j, eps)
        - _gamma_shift(m + j + 1.0, eps)
        - _gamma_shift(j + 1.0, -eps)
    )
    brackets = log_ratio * special.exprel(eps * log_ratio) / np.sinc(eps)
    value -= gamma_c * (-1.0) ** m * y**m * lower * float(np.sum(coefficients * brackets))
    return float(value)


def _near_one(a: float, b: float, c: float, y: float) -> float:
    """2F1(a, b; c; 1 - y) for small y > 0, dispatching on how close c - a - b is to an integer."""
    d = c - a - b
    m = int(round(d))
    eps = d - m
    if abs(eps) >= INTEGER_GAP:
        return _connection(a, b, c, y)
    if m < 0:
        # Euler: 2F1(a, b; c; z) = (1 - z)^(c-a-b) 2F1(c-a, c-b; c; z)
        a, b, m, eps, scale = c - a, c - b, -m, -eps, y**d
    else:
        scale = 1.0
    if eps != 0.0 and min(a, b) + m <= 2.0 * abs(eps):
        return scale * _connection(a, b, c, y)
    logger.debug("2F1 logarithmic case near z=1", a=a, b=b, c=c, y=y, m=m)
    return scale * _connection_integer(a, b, c, y, m, eps)


def _evaluate(a: float, b: float, c: float, z: float, y: float, allow_connection: bool) -> float:
    """2F1(a, b; c; z) for 0 <= z < 1, with y = 1 - z given separately."""
    if z == 0.0 or a == 0.0 or b == 0.0:
        return 1.0
    # terminating series
    if _is_nonpositive_integer(a) or _is_nonpositive_integer(b):
        return _series(a, b, c, z)
    if allow_connection and _estimated_terms(y) > CONNECTION_THRESHOLD:
        return _near_one(a, b, c, y)
    return _series(a, b, c, z)


def gauss_2f1_pair(a: float, b: float, c: float, z: float, y: float, *, allow_connection: bool = True) -> float:
    """
    2F1(a, b; c; z) for 0 <= z <= 1 where the caller supplies y = 1 - z > 0; y is authoritative when z rounds to 1.

    :raises NonConvergent: If a series does not reach the term tolerance.
    :raises DomainError: If (z, y) is outside the range or the evaluation over- or underflows.
    """
    if _is_nonpositive_integer(c):
        raise InvalidParams(a, b, c)
    if not (0.0 <= z <= 1.0 and 0.0 < y <= 1.0):
        raise DomainError(f"2F1 pair needs 0 <= z <= 1 and 0 < y <= 1, got z={z!r} y={y!r}", z=z, y=y)
    try:
        return _evaluate(a, b, c, z, y, allow_connection)
    except (ArithmeticError, ValueError) as e:
        raise DomainError(f"2F1 evaluation failed: {e}", a=a, b=b, c=c, z=z) from e


def gauss_2f1(p: HyperParams, *, pfaff: bool = True, allow_connection: bool = True) -> float:
    """
    Evaluate 2F1(a, b; c; z) to about 1e-12 relative accuracy.

    For z < 0 the Pfaff transformation 2F1(a,b;c;z) = (1-z)^(-a) 2F1(a, c-b; c; z/(z-1)) maps the argument
    into [0, 1). `pfaff=False` sums the raw series instead, which only converges for -1 < z.

    :raises NonConvergent: If the series does not reach the term tolerance within MAX_TERMS terms.
    """
    a, b, c, z = p.a, p.b, p.c, p.z
    if z >= 0.0:
        return gauss_2f1_pair(a, b, c, z, 1.0 - z, allow_connection=allow_connection)
    if not pfaff:
        if z <= -1.0:
            raise DomainError(f"raw 2F1 series diverges at z={z!r}", a=a, b=b, c=c, z=z)
        return _series(a, b, c, z)
    try:
        prefactor = (1.0 - z) ** (-a)
    except ArithmeticError as e:
        raise DomainError(f"2F1 prefactor out of range at z={z!r}", a=a, b=b, c=c, z=z) from e
    # the mapped argument z/(z-1) has complement 1/(1-z) exactly
    return prefactor * gauss_2f1_pair(a, c - b, c, z / (z - 1.0), 1.0 / (1.0 - z), allow_connection=allow_connection)


def gauss_2f1_derivative(p: HyperParams) -> float:
    """d/dz 2F1(a, b; c; z) = (ab/c) 2F1(a+1, b+1; c+1; z)."""
    if p.a == 0.0 or p.b == 0.0:
        return 0.0
    return p.a * p.b / p.c * gauss_2f1(HyperParams(p.a + 1.0, p.b + 1.0, p.c + 1.0, p.z))


def ln_gamma(x: float) -> float:
    if not x > 0:
        raise DomainError(f"ln_gamma is only defined here for x > 0, got {x!r}", x=x)
    return float(special.gammaln(x))


def limit_coefficient(a: float, b: float, c: float) -> float:
    """
    Gamma(c) Gamma(a+b-c) / (Gamma(a) Gamma(b)), the coefficient of (1-z)^(c-a-b) in 2F1(a,b;c;z) as z -> 1-.
    """
    if c >= a + b:
        raise DomainError(f"limit identity needs c < a+b, got a={a!r} b={b!r} c={c!r}", a=a, b=b, c=c)
    for x in (a, b, c, a + b - c):
        if _is_nonpositive_integer(x):
            raise DomainError(f"gamma pole at {x!r}", a=a, b=b, c=c)
    return float(special.gamma(c) * special.gamma(a + b - c) / (special.gamma(a) * special.gamma(b)))
