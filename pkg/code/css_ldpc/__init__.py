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

"""Dual-containing sparse-graph codes for quantum error correction.

Build dual-containing parity-check matrices, turn them into CSS stabilizer codes, decode qubit errors with
sum-product message passing and measure block error rates by Monte Carlo simulation.
"""

import logging
import os
import sys
from typing import Optional

_LOG_FMT = f"[{os.getpid()}] %(asctime)15s [%(levelname)7s] - %(name)s - %(message)s"
_LOG_DATE_FMT = "%b %d %H:%M:%S"
_LOGGER = logging.getLogger(__name__)


def bootstrap_logging(verbosity: int = 0, log_file: Optional[str] = None) -> None:
    """Configure Python's logger according to the given verbosity level.

    Records go to stderr, and also to ``log_file`` when one is given; stdout stays free for tables and CSV.

    :param verbosity: The desired verbosity level. Must be one of 0, 1, or 2.
    :type verbosity: typing.Literal[0, 1, 2]
    :param log_file: An optional file that receives a copy of the log.
    :type log_file: Optional[str]
    """
    verbosity = min(2, max(0, verbosity))
    log_level = [logging.WARN, logging.INFO, logging.DEBUG][verbosity]

    handlers = [logging.StreamHandler(sys.stderr)]
    if log_file:
        handlers.append(logging.FileHandler(log_file, mode="w", encoding="utf-8"))
    logging.basicConfig(format=_LOG_FMT, datefmt=_LOG_DATE_FMT, level=log_level, handlers=handlers, force=True)
    # numba's compiler logs at DEBUG
    logging.getLogger("numba").setLevel(logging.WARNING)
    _LOGGER.debug("logging configured at %s", logging.getLevelName(log_level))
