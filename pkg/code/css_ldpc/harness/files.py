# SPDX-FileCopyrightText: Copyright (c) 2024 NVIDIA CORPORATION & AFFILIATES. All rights reserved.
# SPDX-License-Identifier: Apache-2.0
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""File formats: alist matrices, YAML code metadata and sweep CSVs.

An alist file lists ``N M``, the largest column and row weights, the column weights, the row weights, then for each
column its 1-based row indices and for each row its 1-based column indices, each list padded with zeros to the
largest weight.

A code is stored as ``<name>.alist`` plus ``<name>.alist.meta.yaml`` holding its provenance.
"""
import csv
import datetime
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, TextIO, Tuple, Union

from dataclass_wizard import YAMLWizard

from css_ldpc import gf2core
from css_ldpc.constructions import CssCode, UnicycleStructure
from css_ldpc.designsets import DifferenceSet, DifferenceSetKind
from css_ldpc.errors import AlistParseError, InvalidArgumentError
from css_ldpc.gf2core import SparseBinaryMatrix
from css_ldpc.harness.simulation import GENERATOR_NAME, SweepResult, TrialSummary

_LOGGER = logging.getLogger(__name__)
PathLike = Union[str, os.PathLike]
CSV_COLUMNS = (
    "code_id",
    "channel",
    "param",
    "trials",
    "exact",
    "degenerate",
    "detected",
    "undetected",
    "bler",
    "two_sigma",
    "seed",
)
META_SUFFIX = ".meta.yaml"


def _padded(values: Sequence[int], width: int) -> str:
    return " ".join(str(v) for v in list(values) + [0] * (width - len(values)))


def format_alist(matrix: SparseBinaryMatrix) -> str:
    """Render a matrix in alist form."""
    col_weights = matrix.column_weights.tolist()
    row_weights = matrix.row_weights.tolist()
    max_col = max(col_weights, default=0)
    max_row = max(row_weights, default=0)
    columns: List[List[int]] = [[] for _ in range(matrix.n_cols)]
    for r, row in enumerate(matrix.rows):
        for c in row:
            columns[c].append(r + 1)
    lines = [
        f"{matrix.n_cols} {matrix.n_rows}",
        f"{max_col} {max_row}",
        " ".join(map(str, col_weights)),
        " ".join(map(str, row_weights)),
    ]
    lines += [_padded(col, max_col) for col in columns]
    lines += [_padded([c + 1 for c in row], max_row) for row in matrix.rows]
    return "\n".join(lines) + "\n"


def write_alist(matrix: SparseBinaryMatrix, path: PathLike) -> None:
    Path(path).write_text(format_alist(matrix), encoding="utf-8")
    _LOGGER.debug("wrote %r to %s", matrix, path)


class _Lines:
    """Numbered, non-empty lines of integers."""

    def __init__(self, text: str) -> None:
        self._items = [(no, raw.split()) for no, raw in enumerate(text.splitlines(), 1) if raw.strip()]
        self._pos = 0
        self.last_line = 0

    def next(self, what: str, count: Optional[int] = None) -> List[int]:
        if self._pos >= len(self._items):
            raise AlistParseError(self.last_line + 1, f"unexpected end of file, expected {what}")
        line_no, tokens = self._items[self._pos]
        self._pos += 1
        self.last_line = line_no
        try:
            values = [int(tok) for tok in tokens]
        except ValueError as err:
            raise AlistParseError(line_no, f"{what} must be integers: {err}") from err
        if count is not None and len(values) != count:
            raise AlistParseError(line_no, f"{what} needs {count} entries, found {len(values)}")
        return values

    def trailing(self) -> Optional[int]:
        return self._items[self._pos][0] if self._pos < len(self._items) else None


def _entries(values: List[int], weight: int, bound: int, line: int, what: str) -> List[int]:
    ones, padding = values[:weight], values[weight:]
    if any(v != 0 for v in padding):
        raise AlistParseError(line, f"{what} has more entries than its weight {weight}")
    if any(not 1 <= v <= bound for v in ones):
        raise AlistParseError(line, f"{what} has an index outside 1..{bound}: {ones}")
    if len(set(ones)) != len(ones):
        raise AlistParseError(line, f"{what} repeats an index: {ones}")
    return [v - 1 for v in ones]


def parse_alist(text: str) -> SparseBinaryMatrix:
    """Parse alist text.

    :raises AlistParseError: On malformed counts, out-of-range indices or inconsistent weights, naming the line.
    """
    lines = _Lines(text)
    n_cols, n_rows = lines.next("the dimensions", 2)
    if n_cols < 0 or n_rows < 0:
        raise AlistParseError(lines.last_line, f"negative dimensions {n_cols} {n_rows}")
    max_col, max_row = lines.next("the maximum weights", 2)
    col_weights = lines.next("the column weights", n_cols)
    if any(not 0 <= w <= max_col for w in col_weights):
        raise AlistParseError(lines.last_line, f"column weights must lie in 0..{max_col}")
    row_weights = lines.next("the row weights", n_rows)
    if any(not 0 <= w <= max_row for w in row_weights):
        raise AlistParseError(lines.last_line, f"row weights must lie in 0..{max_row}")

    columns = []
    for c in range(n_cols):
        values = lines.next(f"column {c + 1}")
        if len(values) not in (col_weights[c], max_col):
            raise AlistParseError(lines.last_line, f"column {c + 1} needs {max_col} entries, found {len(values)}")
        columns.append((lines.last_line, _entries(values, col_weights[c], n_rows, lines.last_line, f"column {c + 1}")))
    rows = []
    for r in range(n_rows):
        values = lines.next(f"row {r + 1}")
        if len(values) not in (row_weights[r], max_row):
            raise AlistParseError(lines.last_line, f"row {r + 1} needs {max_row} entries, found {len(values)}")
        rows.append(_entries(values, row_weights[r], n_cols, lines.last_line, f"row {r + 1}"))
    extra = lines.trailing()
    if extra is not None:
        raise AlistParseError(extra, "trailing content after the last row")

    for c, (line_no, members) in enumerate(columns):
        for r in members:
            if c not in rows[r]:
                raise AlistParseError(line_no, f"column {c + 1} lists row {r + 1}, which does not list it")
    if sum(col_weights) != sum(row_weights):
        raise AlistParseError(lines.last_line, "column and row weights count different numbers of ones")
    return SparseBinaryMatrix.from_rows(rows, n_cols)


def read_alist(path: PathLike) -> SparseBinaryMatrix:
    return parse_alist(Path(path).read_text(encoding="utf-8"))


@dataclass
class CodeMetadata(YAMLWizard):  # type: ignore[misc] # dataclass-wizard doesn't provide stubs
    """The YAML sidecar of an alist file."""

    code_id: str
    rank: int
    special_columns: List[int] = field(default_factory=list)
    provenance: Dict[str, Any] = field(default_factory=dict)


def metadata_path(alist_path: PathLike) -> Path:
    path = Path(alist_path)
    return path.with_name(path.name + META_SUFFIX)


def write_metadata(code: CssCode, alist_path: PathLike) -> Path:
    meta = CodeMetadata(code.code_id, code.rank_h, list(code.special_columns), dict(code.provenance))
    target = metadata_path(alist_path)
    meta.to_yaml_file(str(target))
    return target


def read_metadata(alist_path: PathLike) -> Optional[CodeMetadata]:
    """Read the sidecar next to ``alist_path``; None when there is none."""
    target = metadata_path(alist_path)
    if not target.exists():
        return None
    return CodeMetadata.from_yaml_file(str(target))  # type: ignore[no-any-return]


def save_code(code: CssCode, alist_path: PathLike) -> None:
    write_alist(code.h, alist_path)
    write_metadata(code, alist_path)


def load_code(alist_path: PathLike) -> CssCode:
    """Load an alist file and its sidecar into a validated code.

    A recorded unicycle special column rebuilds the two-subcode structure. Without a sidecar the provenance only
    names the file.

    :raises AlistParseError: If the alist file is malformed.
    :raises PreconditionError: If the matrix is not self-orthogonal.
    """
    h = read_alist(alist_path)
    meta = read_metadata(alist_path)
    if meta is None:
        return CssCode.from_matrix(h, {"family": "file", "source": Path(alist_path).name})
    provenance = dict(meta.provenance)
    subcode = None
    if provenance.get("family") == "unicycle" and meta.special_columns:
        special = int(meta.special_columns[0])
        dsc = gf2core.delete_columns(h, [special])
        diff_set = DifferenceSet.of(dsc.n_cols, provenance["difference_set"], DifferenceSetKind.PERFECT)
        subcode = UnicycleStructure(special, dsc, diff_set)
    code = CssCode.from_matrix(h, provenance, meta.special_columns, subcode)
    if code.rank_h != meta.rank:
        _LOGGER.warning("%s - recorded rank %d, computed %d", alist_path, meta.rank, code.rank_h)
    return code


def write_sweep_csv(
    result: Union[SweepResult, Sequence[TrialSummary]],
    stream: TextIO,
    *,
    timestamp: Optional[datetime.datetime] = None,
) -> None:
    """Write summaries as CSV; run details go in ``#`` comment lines ahead of the header.

    Only the timestamp comment varies between identical runs.
    """
    points = result.points if isinstance(result, SweepResult) else tuple(result)
    if not points:
        raise InvalidArgumentError("nothing to write")
    stamp = (timestamp or datetime.datetime.now(datetime.timezone.utc)).isoformat(timespec="seconds")
    stream.write(f"# decoder: {points[0].decoder}\n")
    stream.write(f"# generator: {GENERATOR_NAME}\n")
    stream.write(f"# timestamp: {stamp}\n")
    for point in points:
        stream.write(
            f"# point: param={point.param!r} stopped_early={str(point.stopped_early).lower()} "
            f"constituent_failures={point.constituent_failures[0]},{point.constituent_failures[1]}\n"
        )
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for point in points:
        writer.writerow(
            [
                point.code_id,
                point.channel,
                repr(point.param),
                point.trials,
                point.exact,
                point.degenerate,
                point.detected,
                point.undetected,
                f"{point.bler:.6g}",
                f"{point.two_sigma:.6g}",
                point.base_seed,
            ]
        )


def _comment_fields(comments: List[str]) -> Tuple[Dict[str, str], Dict[float, Dict[str, str]]]:
    header: Dict[str, str] = {}
    per_point: Dict[float, Dict[str, str]] = {}
    for line in comments:
        body = line.lstrip("#").strip()
        key, _, value = body.partition(":")
        if key == "point":
            fields = dict(item.split("=", 1) for item in value.split())
            per_point[float(fields["param"])] = fields
        else:
            header[key.strip()] = value.strip()
    return header, per_point


def read_sweep_csv(stream: TextIO) -> SweepResult:
    """Parse the output of :func:`write_sweep_csv`.

    :raises InvalidArgumentError: If the header is not the expected schema.
    """
    comments: List[str] = []
    body: List[str] = []
    for line in stream:
        (comments if line.startswith("#") else body).append(line)
    header_info, per_point = _comment_fields(comments)
    reader = csv.DictReader(body)
    if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
        raise InvalidArgumentError(f"unexpected CSV header {reader.fieldnames}")
    points = []
    for row in reader:
        param = float(row["param"])
        extra = per_point.get(param, {})
        failures = extra.get("constituent_failures", "0,0").split(",")
        points.append(
            TrialSummary(
                code_id=row["code_id"],
                channel=row["channel"],
                param=param,
                decoder=header_info.get("decoder", ""),
                trials=int(row["trials"]),
                exact=int(row["exact"]),
                degenerate=int(row["degenerate"]),
                detected=int(row["detected"]),
                undetected=int(row["undetected"]),
                base_seed=int(row["seed"]),
                stopped_early=extra.get("stopped_early") == "true",
                constituent_failures=(int(failures[0]), int(failures[1])),
            )
        )
    return SweepResult(tuple(points))
