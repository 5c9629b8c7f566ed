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

"""Closed-form benchmark rates, codeword error estimates and counting formulas.

Rate curves are functions of the marginal flip probability ``f_m`` except ``c4``, which takes the 4-ary symbol
error probability ``f``. Quantum versions use ``R_Q = 2 R - 1``.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Tuple

import numpy as np
from scipy import optimize, special

from css_ldpc.errors import DomainError, InvalidArgumentError

_LOGGER = logging.getLogger(__name__)
ROOT_XTOL = 1e-5
_LOG2_3 = float(np.log2(3.0))


@dataclass(frozen=True)
class RatePoint:
    f_m: float
    value: float


def h2(p: float) -> float:
    """Binary entropy in bits, with ``0 log 0 = 0``.

    :raises InvalidArgumentError: If ``p`` is outside [0, 1].
    """
    if not 0.0 <= p <= 1.0:
        raise InvalidArgumentError(f"h2 needs 0 <= p <= 1, got {p}")
    return float((special.entr(p) + special.entr(1.0 - p)) / np.log(2.0))


def _c4(f: float) -> float:
    return 2.0 - (h2(f) + f * _LOG2_3)


_CURVES: Dict[str, Tuple[Callable[[float], float], Tuple[float, float]]] = {
    "c_bsc": (lambda f: 1.0 - h2(f), (0.0, 0.5)),
    "r_gv": (lambda f: 1.0 - h2(2.0 * f), (0.0, 0.25)),
    "c4": (_c4, (0.0, 0.75)),
    "c4b": (lambda f: 0.5 * _c4(1.5 * f), (0.0, 0.5)),
    "cq_bsc": (lambda f: 1.0 - 2.0 * h2(f), (0.0, 0.5)),
    "rq_gv": (lambda f: 1.0 - 2.0 * h2(2.0 * f), (0.0, 0.25)),
    "c4q": (lambda f: _c4(1.5 * f) - 1.0, (0.0, 0.5)),
    "rq_gv4": (lambda f: 1.0 - (h2(2.0 * f) + 2.0 * f * _LOG2_3), (0.0, 1.0 / 6.0)),
}
CURVE_NAMES = tuple(_CURVES)


def curve_domain(name: str) -> Tuple[float, float]:
    try:
        return _CURVES[name][1]
    except KeyError as err:
        raise InvalidArgumentError(f"unknown curve {name!r}; choose from {CURVE_NAMES}") from err


def rate_curve(name: str, f_m: float) -> float:
    """Evaluate a named benchmark rate.

    :param name: One of ``c_bsc``, ``r_gv``, ``c4``, ``c4b``, ``cq_bsc``, ``rq_gv``, ``c4q``, ``rq_gv4``.
    :type name: str
    :param f_m: The noise level; the symbol error probability ``f`` for ``c4``.
    :type f_m: float
    :returns: The rate, negative where the curve dips below zero.
    :rtype: float
    :raises DomainError: If ``f_m`` lies outside the curve's domain.
    """
    low, high = curve_domain(name)
    if not low <= f_m <= high:
        raise DomainError(name, f_m, (low, high))
    return float(_CURVES[name][0](f_m))


def curve_points(name: str, start: float, stop: float, step: float) -> List[RatePoint]:
    """Sample a curve on ``start, start + step, ...`` up to ``stop``, skipping points outside its domain."""
    if step <= 0.0 or stop < start:
        raise InvalidArgumentError(f"need step > 0 and stop >= start, got {start}..{stop} by {step}")
    low, high = curve_domain(name)
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    grid = start + step * np.arange(count)
    return [RatePoint(float(f), rate_curve(name, float(f))) for f in grid if low <= f <= high]


def curve_root(name: str, rate: float = 0.0) -> float:
    """The noise level at which a curve equals ``rate``, by bisection to ``1e-5``.

    :raises InvalidArgumentError: If the curve does not cross ``rate`` on its domain.
    """
    low, high = curve_domain(name)
    gap = lambda f: rate_curve(name, f) - rate  # noqa: E731
    at_low, at_high = gap(low), gap(high)
    if at_low == 0.0:
        return low
    if at_high == 0.0:
        return high
    if np.sign(at_low) == np.sign(at_high):
        raise InvalidArgumentError(f"{name} does not reach rate {rate} on {low}..{high}")
    return float(optimize.bisect(gap, low, high, xtol=ROOT_XTOL))


def threshold_of(name: str) -> float:
    """The noise level where a curve reaches rate zero."""
    return curve_root(name, 0.0)


def max_noise_shannon(rate: float) -> float:
    """Largest ``f`` with ``1 - H2(f) >= rate``: the noise an optimal decoder tolerates."""
    return curve_root("c_bsc", rate)


def max_noise_bounded_distance(rate: float) -> float:
    """Largest ``f`` with ``1 - H2(2 f) >= rate``: a bounded-distance decoder on a Gilbert-Varshamov code.

    It is half of :func:`max_noise_shannon`.
    """
    return curve_root("r_gv", rate)


def max_noise_for_distance(d: int, n: int) -> float:
    """``(d / 2) / n``, the noise level a bounded-distance decoder of distance ``d`` tolerates."""
    if d < 0 or n < 1:
        raise InvalidArgumentError(f"need d >= 0 and n >= 1, got d={d}, n={n}")
    return (d / 2.0) / n


def single_codeword_error_estimate(count: float, d: int, f: float) -> float:
    """``A C(d, d/2) f^(d/2) (1 - f)^(d/2)``: error rate caused by ``A`` codewords of even weight ``d``.

    Evaluated in log space so values far below ``1e-300`` do not underflow before the final exponent.

    :raises InvalidArgumentError: If ``d`` is odd or ``f`` is outside (0, 1).
    """
    if d < 0 or d % 2:
        raise InvalidArgumentError(f"d must be even, got {d}")
    if not 0.0 < f < 1.0:
        raise InvalidArgumentError(f"f must lie in (0, 1), got {f}")
    if count <= 0:
        return 0.0
    half = d // 2
    log_binom = special.gammaln(d + 1) - 2.0 * special.gammaln(half + 1)
    return float(np.exp(np.log(count) + log_binom + half * (np.log(f) + np.log1p(-f))))


def bhattacharyya_bsc(f: float) -> float:
    """``2 sqrt(f (1 - f))``; pairs of codewords at distance ``d`` are confused with probability about ``beta^d``."""
    if not 0.0 <= f <= 1.0:
        raise InvalidArgumentError(f"f must lie in [0, 1], got {f}")
    return float(2.0 * np.sqrt(f * (1.0 - f)))


def dual_count_exponent(j: int) -> float:
    """``j - j (j - 1) / 4``; the number of random dual-containing (j, k) matrices grows with N only if positive."""
    if j < 1:
        raise InvalidArgumentError(f"j must be at least 1, got {j}")
    return j - j * (j - 1) / 4.0


def freedom_margin(j: int, k: int) -> float:
    """``(k - 1)(j - 1) - k C(j, 2) / 2``; permutation-matrix constructions have spare freedom only if positive."""
    if j < 1 or k < 2:
        raise InvalidArgumentError(f"need j >= 1 and k >= 2, got j={j}, k={k}")
    return (k - 1) * (j - 1) - k * j * (j - 1) / 4.0


def _pair_term(j: int, n: int, m: int) -> Tuple[float, float]:
    if j < 1 or n < 1 or m < 1:
        raise InvalidArgumentError(f"need positive j, N and M, got {j}, {n}, {m}")
    pairs = n * j * (j - 1) / 2.0
    return n * j * (j - 1) / 4.0, (np.log(pairs) - 2.0 * np.log(m)) if pairs else 0.0


def log_count_estimate(j: int, n: int, m: int) -> float:
    """Natural log of ``(N j (j - 1) / 2 / M²)^(N j (j - 1) / 4)``, the chance a random column-weight-j matrix is
    dual-containing."""
    exponent, log_base = _pair_term(j, n, m)
    return float(exponent * log_base)


def count_estimate(j: int, n: int, m: int) -> float:
    """:func:`log_count_estimate` exponentiated; underflows to 0 for large N."""
    return float(np.exp(log_count_estimate(j, n, m)))


def log_dual_containing_count(j: int, n: int, m: int) -> float:
    """Natural log of the expected number of dual-containing matrices with column weight j.

    ``jN ln M - N ln j!`` counts the matrices; :func:`log_count_estimate` is the fraction that are dual-containing.
    """
    return float(j * n * np.log(m) - n * special.gammaln(j + 1) + log_count_estimate(j, n, m))
