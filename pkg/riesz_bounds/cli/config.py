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
import math
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, Extra, confloat, conint, root_validator, validator

from riesz_bounds.bounds import SHAPE_KINDS

DEFAULT_TOLERANCE = 1e-9

# arguments of the first table row when --min is not given
TABLE_ORIGIN = {"M": 0.0, "Phi": 0.0, "psi": 0.0, "f": 1.0, "h": 1.0}


class OutputFormat(str, Enum):
    human = "human"
    json = "json"
    csv = "csv"


class CommandConfig(BaseModel):
    """Validated options of one CLI invocation; one instance per subcommand run."""

    command: Literal["bound", "eval", "table", "verify", "moments"]
    format: OutputFormat = OutputFormat.human
    verbose: int = 0
    threads: Optional[conint(ge=1)] = None  # type: ignore
    tolerance: confloat(ge=0.0) = DEFAULT_TOLERANCE  # type: ignore

    n: Optional[conint(ge=1)] = None  # type: ignore
    alpha: Optional[float] = None
    u: Optional[confloat(ge=0.0)] = None  # type: ignore
    v: Optional[confloat(ge=0.0)] = None  # type: ignore
    witness_file: Optional[Path] = None

    density: Optional[Path] = None

    kind: Optional[str] = None
    min: Optional[float] = None
    max: Optional[float] = None
    step: Optional[confloat(gt=0.0)] = None  # type: ignore
    adaptive: bool = False

    suite: Optional[str] = None
    seed: int = 0
    scale: confloat(gt=0.0) = 1.0  # type: ignore
    output: Optional[Path] = None

    interval: List[Tuple[float, float, float]] = []
    moment: Dict[int, float] = {}
    plain_measure: bool = False
    L: confloat(gt=0.0) = 1.0  # type: ignore

    class Config:
        extra = Extra.forbid

    @validator("kind")
    def _known_kind(cls, kind: Optional[str]) -> Optional[str]:
        if kind is not None and kind not in SHAPE_KINDS:
            raise ValueError(f"unknown table kind {kind!r}, expected one of {', '.join(SHAPE_KINDS)}")
        return kind

    @validator("alpha", "min", "max")
    def _finite(cls, value: Optional[float]) -> Optional[float]:
        if value is not None and not math.isfinite(value):
            raise ValueError("must be finite")
        return value

    @root_validator(skip_on_failure=True)
    def _per_command(cls, values: Dict[str, Any]) -> Dict[str, Any]:
        command = values["command"]
        required = {
            "bound": ("n", "alpha", "u", "v"),
            "eval": ("density", "alpha"),
            "table": ("kind", "n", "max"),
            "verify": ("suite",),
            "moments": (),
        }[command]
        missing = [name for name in required if values.get(name) is None]
        if missing:
            raise ValueError(f"{command} needs --{', --'.join(name.replace('_', '-') for name in missing)}")

        if command == "table":
            kind = values["kind"]
            if kind in ("psi", "f", "h") and values["alpha"] is None:
                raise ValueError(f"{kind} tables need --alpha")
            if kind in ("M", "Phi") and values["alpha"] is not None:
                raise ValueError(f"{kind} tables do not take --alpha")
            if values["adaptive"] == (values["step"] is not None):
                raise ValueError("table needs exactly one of --step and --adaptive")
            if values["min"] is None:
                values["min"] = TABLE_ORIGIN[kind]
        if command == "moments":
            if bool(values["interval"]) == bool(values["moment"]):
                raise ValueError("moments needs either --interval or --moment, not both")
            if values["interval"] and (values["plain_measure"] or values["L"] != 1.0):
                raise ValueError("--plain-measure and --L only apply to --moment values")
        return values

    def table_arguments(self) -> List[float]:
        """min, min + step, ... up to max; empty when max < min."""
        assert self.min is not None and self.max is not None and self.step is not None
        if self.max < self.min:
            return []
        count = int(math.floor((self.max - self.min) / self.step + 1e-9)) + 1
        return [self.min + k * self.step for k in range(count)]
