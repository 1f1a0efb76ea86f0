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
Emitters for flat records and tables. Every format carries the same numbers: 15 significant digits in json and
csv, 6 in the human format.
"""
import csv
import json
import math
from typing import Any, Dict, Mapping, Sequence, TextIO

from riesz_bounds.cli.config import OutputFormat

STRUCTURED_DIGITS = 15
HUMAN_DIGITS = 6

Record = Mapping[str, Any]


def _round(value: Any, digits: int) -> Any:
    if isinstance(value, float) and math.isfinite(value):
        return float(f"{value:.{digits}g}")
    return value


def _text(value: Any, digits: int) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return f"{value:.{digits}g}"
    return str(value)


def structured_value(value: Any) -> Any:
    return _round(value, STRUCTURED_DIGITS)


def structured(record: Record) -> Dict[str, Any]:
    """The record as emitted in json, for callers that embed it in larger documents."""
    return {key: structured_value(value) for key, value in record.items()}


def emit_record(record: Record, fmt: OutputFormat, stream: TextIO) -> None:
    if fmt == OutputFormat.json:
        json.dump(structured(record), stream, indent=2)
        stream.write("\n")
    elif fmt == OutputFormat.csv:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(record.keys())
        writer.writerow([_text(value, STRUCTURED_DIGITS) for value in record.values()])
    else:
        width = max((len(key) for key in record), default=0)
        for key, value in record.items():
            stream.write(f"{key:<{width}}  {_text(value, HUMAN_DIGITS)}\n")


def emit_table(columns: Sequence[str], rows: Sequence[Sequence[Any]], fmt: OutputFormat, stream: TextIO) -> None:
    """Rows of equal length under `columns`; an empty table still gets its header (an empty list in json)."""
    if fmt == OutputFormat.json:
        json.dump([dict(zip(columns, map(structured_value, row))) for row in rows], stream, indent=2)
        stream.write("\n")
    elif fmt == OutputFormat.csv:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_text(value, STRUCTURED_DIGITS) for value in row])
    else:
        cells = [[_text(value, HUMAN_DIGITS) for value in row] for row in rows]
        widths = [max([len(column)] + [len(row[i]) for row in cells]) for i, column in enumerate(columns)]
        stream.write("  ".join(f"{column:>{w}}" for column, w in zip(columns, widths)).rstrip() + "\n")
        for row in cells:
            stream.write("  ".join(f"{cell:>{w}}" for cell, w in zip(row, widths)) + "\n")
