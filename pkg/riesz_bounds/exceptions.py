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
from typing import Any, Optional


class RieszBoundsError(Exception):
    """
    Base class of all errors raised by riesz_bounds.

    Keyword arguments are kept in `extra` so that `ContextAdapter.exception(...)` attaches them to the log record.
    """

    def __init__(self, *args: Any, **extra: Any) -> None:
        super().__init__(*args)
        self.extra = extra


class InvalidParams(RieszBoundsError):
    def __init__(self, a: float, b: float, c: float) -> None:
        super().__init__(f"Hypergeometric parameter c={c!r} is a nonpositive integer", a=a, b=b, c=c)


class NonConvergent(RieszBoundsError):
    def __init__(self, what: str, iterations: int, **extra: Any) -> None:
        super().__init__(f"{what} did not converge within {iterations} iterations", iterations=iterations, **extra)


class DomainError(RieszBoundsError):
    pass


class RangeError(DomainError):
    def __init__(self, alpha: float) -> None:
        super().__init__(f"alpha must lie in (0,2], got {alpha!r}", alpha=alpha)
        self.alpha = alpha


class ConvergenceError(RieszBoundsError):
    pass


class DimensionError(RieszBoundsError):
    def __init__(self, n: int, reason: str) -> None:
        super().__init__(f"Dimension n={n} is not supported: {reason}", n=n)


class AdmissibilityError(RieszBoundsError):
    def __init__(self, reason: str, component: Optional[int] = None) -> None:
        super().__init__(f"Density is not admissible: {reason}", component=component)
        self.component = component


class SupportError(RieszBoundsError):
    def __init__(self, point: Any, component: int) -> None:
        super().__init__(f"Point {point!r} lies inside or on the support of component {component}", component=component)


class MissingMoment(RieszBoundsError):
    def __init__(self, k: int) -> None:
        super().__init__(f"Moment s_{k} is required but missing", k=k)
        self.k = k


class InsufficientData(RieszBoundsError):
    def __init__(self, needed: int, got: int) -> None:
        super().__init__(f"Need at least {needed} sequence entries, got {got}", needed=needed, got=got)


class Infeasible(RieszBoundsError):
    pass


class UnknownSuite(RieszBoundsError):
    def __init__(self, name: str) -> None:
        super().__init__(f"Unknown verification suite {name!r}", suite=name)


class DensityFileError(RieszBoundsError):
    def __init__(self, path: str, message: str, lineno: Optional[int] = None) -> None:
        location = f"{path}:{lineno}" if lineno is not None else path
        super().__init__(f"{location}: {message}", path=path, line=lineno)
        self.lineno = lineno
