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
Density files: JSON documents {"n": 3, "components": [{"tau": 2.0, "sigma": 1.0, "weight": 1.0, "reflect": false}]}.
"""
import json
from pathlib import Path
from typing import List, Sequence, Tuple, Union

from pydantic import BaseModel, Extra, ValidationError, confloat, conint

from riesz_bounds.exceptions import AdmissibilityError, DensityFileError, DimensionError, DomainError
from riesz_bounds.potentials import BallSpec, Component, Density

_WHITESPACE = " \t\r\n"
_decoder = json.JSONDecoder()

Loc = Sequence[Union[int, str]]


class ComponentDocument(BaseModel):
    tau: confloat(gt=0.0)  # type: ignore
    sigma: confloat(gt=0.0)  # type: ignore
    weight: confloat(ge=0.0, le=1.0) = 1.0  # type: ignore
    reflect: bool = False

    class Config:
        extra = Extra.forbid


class DensityDocument(BaseModel):
    n: conint(ge=1, strict=True)  # type: ignore
    components: List[ComponentDocument]

    class Config:
        extra = Extra.forbid

    def to_density(self) -> Density:
        components = []
        for index, c in enumerate(self.components):
            try:
                ball = BallSpec(c.tau, c.sigma, self.n)
            except DomainError as e:
                raise AdmissibilityError(str(e), index) from e
            components.append(Component(ball, c.weight, c.reflect))
        return Density(self.n, tuple(components))

    @classmethod
    def from_density(cls, rho: Density) -> "DensityDocument":
        return cls(
            n=rho.n,
            components=[
                ComponentDocument(tau=c.ball.tau, sigma=c.ball.sigma, weight=c.weight, reflect=c.reflect)
                for c in rho.components
            ],
        )


def _skip(text: str, pos: int) -> int:
    while pos < len(text) and text[pos] in _WHITESPACE:
        pos += 1
    return pos


def _children(text: str, pos: int) -> List[Tuple[Union[int, str], int]]:
    """(key or index, start offset) of the direct children of the array or object starting at `pos`."""
    opening = text[pos]
    closing = "]" if opening == "[" else "}"
    children: List[Tuple[Union[int, str], int]] = []
    pos = _skip(text, pos + 1)
    index = 0
    while pos < len(text) and text[pos] != closing:
        key: Union[int, str] = index
        if opening == "{":
            key, pos = _decoder.raw_decode(text, pos)
            pos = _skip(text, _skip(text, pos) + 1)
        children.append((key, pos))
        _, pos = _decoder.raw_decode(text, pos)
        pos = _skip(text, pos)
        if pos < len(text) and text[pos] == ",":
            pos = _skip(text, pos + 1)
        index += 1
    return children


def locate_line(text: str, loc: Loc) -> int:
    """1-based line of the value at `loc` in a valid JSON document; the deepest existing parent when it is missing."""
    pos = _skip(text, 0)
    for part in loc:
        if pos >= len(text) or text[pos] not in "[{":
            break
        matches = [start for key, start in _children(text, pos) if key == part]
        if not matches:
            break
        pos = matches[0]
    return text.count("\n", 0, pos) + 1


def parse_density(text: str, source: str = "<string>") -> Density:
    """
    Parse and validate a density document.

    :raises DensityFileError: On JSON syntax errors, schema violations and inadmissible densities (overlapping
        balls, sigma >= tau), with the line of the offending value.
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise DensityFileError(source, e.msg, e.lineno) from e
    try:
        document = DensityDocument.parse_obj(raw)
    except ValidationError as e:
        error = e.errors()[0]
        message = f"{'.'.join(map(str, error['loc']))}: {error['msg']}"
        raise DensityFileError(source, message, locate_line(text, error["loc"])) from e
    try:
        return document.to_density()
    except (AdmissibilityError, DimensionError) as e:
        component = getattr(e, "component", None)
        loc: List[Union[int, str]] = ["components", component] if component is not None else []
        raise DensityFileError(source, str(e), locate_line(text, loc)) from e


def load_density(path: Union[str, Path]) -> Density:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise DensityFileError(str(path), f"cannot read file: {e.strerror}") from e
    return parse_density(text, str(path))


def dump_density(rho: Density, path: Union[str, Path]) -> None:
    Path(path).write_text(DensityDocument.from_density(rho).json(indent=2) + "\n")
