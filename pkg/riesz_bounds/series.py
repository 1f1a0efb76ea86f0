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
Truncated formal power series, as coefficient lists [c_0, c_1, ..., c_order].

The helpers are generic over the coefficient type: Fraction gives exact rational results, float is used
for numeric moment data.
"""
from fractions import Fraction
from typing import Any, List, Sequence

Series = List[Any]


def _pad(p: Sequence[Any], order: int) -> Series:
    zero = p[0] * 0 if p else 0
    return [p[k] if k < len(p) else zero for k in range(order + 1)]


def mul(p: Sequence[Any], q: Sequence[Any], order: int) -> Series:
    p, q = _pad(p, order), _pad(q, order)
    return [sum((p[j] * q[k - j] for j in range(k + 1)), p[0] * 0) for k in range(order + 1)]


def compose(outer: Sequence[Any], inner: Sequence[Any], order: int) -> Series:
    """outer(inner(x)) truncated at `order`; inner must have no constant term."""
    inner = _pad(inner, order)
    if inner[0] != 0:
        raise ValueError("inner series must vanish at the origin")
    outer = _pad(outer, order)
    result = [outer[0]] + [outer[0] * 0] * order
    power = [inner[0] * 0 + 1] + [inner[0] * 0] * order
    for k in range(1, order + 1):
        power = mul(power, inner, order)
        for j in range(order + 1):
            result[j] += outer[k] * power[j]
    return result


def reversion(p: Sequence[Any], order: int) -> Series:
    """The compositional inverse q of p, p(q(x)) = x; p needs p_0 = 0 and p_1 != 0."""
    p = _pad(p, order)
    if p[0] != 0 or p[1] == 0:
        raise ValueError("series reversion needs p_0 = 0 and p_1 != 0")
    q = [p[0] * 0] * (order + 1)
    q[1] = 1 / p[1] if isinstance(p[1], float) else Fraction(1) / p[1]
    for k in range(2, order + 1):
        # with q_k still zero, the x^k coefficient of p(q) must be cancelled by p_1 q_k
        q[k] = -compose(p, q, k)[k] / p[1]
    return q


def exp(p: Sequence[Any], order: int) -> Series:
    """exp(p(x)) for p with p_0 = 0, by e_m = (1/m) sum_j j p_j e_(m-j)."""
    p = _pad(p, order)
    if p[0] != 0:
        raise ValueError("exp series needs p_0 = 0")
    e = [p[0] * 0 + 1] + [p[0] * 0] * order
    for m in range(1, order + 1):
        e[m] = sum((j * p[j] * e[m - j] for j in range(1, m + 1)), p[0] * 0) / m
    return e


def hyp2f1_coefficients(a: Fraction, b: Fraction, c: Fraction, order: int, scale: Fraction = Fraction(1)) -> Series:
    """Coefficients of 2F1(a, b; c; scale * x)."""
    coefficients = [Fraction(1)]
    for k in range(order):
        coefficients.append(coefficients[-1] * (a + k) * (b + k) / ((c + k) * (k + 1)) * scale)
    return coefficients


def binomial_coefficients(exponent: Fraction, order: int) -> Series:
    """Coefficients of (1 + x)^exponent."""
    coefficients = [Fraction(1)]
    for k in range(order):
        coefficients.append(coefficients[-1] * (exponent - k) / (k + 1))
    return coefficients


def evaluate(p: Sequence[Any], x: float) -> float:
    value = 0.0
    for coefficient in reversed(p):
        value = value * x + float(coefficient)
    return value
