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

"""The exceptions raised by the css_ldpc library.

Every error derives from :class:`CssLdpcError` so the command line can turn validation problems into exit code 1
without catching unrelated failures.
"""
from typing import Optional, Tuple


class CssLdpcError(Exception):
    """Base class for all library errors."""


class InvalidArgumentError(CssLdpcError, ValueError):
    """An argument is out of range, has the wrong shape, or names something unknown."""


class PreconditionError(InvalidArgumentError):
    """An operation was called on a value that does not satisfy its precondition."""


class RankDeficientError(PreconditionError):
    """A full-rank parity-check matrix was required."""

    def __init__(self, rank: int, n_rows: int) -> None:
        super().__init__(
            f"parity-check matrix has rank {rank} but {n_rows} rows; "
            "delete the dependent rows first (see gf2core.independent_rows)"
        )
        self.rank = rank
        self.n_rows = n_rows


class StabilizerValidationError(CssLdpcError, ValueError):
    """Two stabilizer generators anticommute."""

    def __init__(self, pair: Tuple[int, int], message: Optional[str] = None) -> None:
        super().__init__(message or f"stabilizer rows {pair[0]} and {pair[1]} anticommute")
        self.pair = pair


class SearchFailureError(CssLdpcError, RuntimeError):
    """A randomized search used up its budget."""

    def __init__(self, message: str, attempts: int) -> None:
        super().__init__(f"{message} (gave up after {attempts} attempts)")
        self.attempts = attempts


class AlistParseError(CssLdpcError, ValueError):
    """An alist file is malformed."""

    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


class DomainError(InvalidArgumentError):
    """A closed-form curve was evaluated outside the interval where it is defined."""

    def __init__(self, curve: str, value: float, domain: Tuple[float, float]) -> None:
        super().__init__(f"{curve} is undefined at {value!r}; domain is {domain}")
        self.curve = curve
        self.value = value
        self.domain = domain
