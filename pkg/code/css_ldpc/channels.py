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

"""Classical stand-ins for qubit noise and the priors handed to the decoders.

Three channel families are modelled:

- ``bscpair``: X and Z flips are independent with probability ``f_m`` each.
- ``4ary``: X, Y and Z each occur with probability ``f / 3``; a Y sets both components.
- ``gauss``: each component sees ``y ~ N(1, sigma²)`` and flips when ``y < 0``; the decoder is told the posterior
  flip probability of every bit.

A family can also be indexed by its marginal flip probability ``f_m`` (:func:`channel_at`), which is how sweeps and
threshold searches move along it.
"""
import logging
import re
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy import special

from css_ldpc._kernels import PROB_FLOOR
from css_ldpc.errors import InvalidArgumentError
from css_ldpc.gf2core import BitVec

_LOGGER = logging.getLogger(__name__)
_CHANNEL_RE = re.compile(r"^(?P<family>[a-z0-9]+):(?P<key>[a-z_]+)=(?P<value>[-+0-9.eE]+)$")
CHANNEL_FAMILIES = ("bscpair", "4ary", "gauss")


@dataclass(frozen=True)
class BscPair:
    """Independent X and Z flips with probability ``f_m`` each."""

    f_m: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.f_m <= 0.5:
            raise InvalidArgumentError(f"bscpair needs 0 <= f_m <= 1/2, got {self.f_m}")

    def describe(self) -> str:
        return f"bscpair:fm={self.f_m:g}"


@dataclass(frozen=True)
class FourArySymmetric:
    """X, Y and Z errors with probability ``f / 3`` each."""

    f: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.f <= 0.75:
            raise InvalidArgumentError(f"4ary needs 0 <= f <= 3/4, got {self.f}")

    def describe(self) -> str:
        return f"4ary:f={self.f:g}"


@dataclass(frozen=True)
class GaussianDiversity:
    """Per-bit reliabilities from a Gaussian channel with noise level ``sigma``."""

    sigma: float

    def __post_init__(self) -> None:
        if not self.sigma > 0.0:
            raise InvalidArgumentError(f"gauss needs sigma > 0, got {self.sigma}")

    def describe(self) -> str:
        return f"gauss:sigma={self.sigma:g}"


ChannelModel = Union[BscPair, FourArySymmetric, GaussianDiversity]


@dataclass(frozen=True, eq=False)
class QubitPriors:
    """Prior knowledge about each qubit's error.

    :cvar flip_x: Marginal probability that the X component of each qubit is flipped.
    :cvar flip_z: Marginal probability that the Z component is flipped.
    :cvar joint: A 2x2 table ``P(e_x, e_z)`` shared by every qubit, or None when the components are independent.
    """

    flip_x: np.ndarray
    flip_z: np.ndarray
    joint: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        for name in ("flip_x", "flip_z"):
            probs = getattr(self, name)
            if probs.ndim != 1 or np.any(probs < 0.0) or np.any(probs > 1.0):
                raise InvalidArgumentError(f"{name} must be a vector of probabilities")
        if self.flip_x.shape != self.flip_z.shape:
            raise InvalidArgumentError("flip_x and flip_z must have equal length")
        if self.joint is not None:
            if self.joint.shape != (2, 2) or np.any(self.joint < 0.0) or not np.isclose(self.joint.sum(), 1.0):
                raise InvalidArgumentError(f"joint must be a 2x2 probability table, got {self.joint}")

    @property
    def n(self) -> int:
        return self.flip_x.shape[0]

    @classmethod
    def uniform(cls, n: int, flip: float, joint: Optional[np.ndarray] = None) -> "QubitPriors":
        return cls(np.full(n, float(flip)), np.full(n, float(flip)), joint)

    def joint_table(self) -> np.ndarray:
        """Per-qubit tables ``P(e_x, e_z)`` with shape ``(n, 2, 2)``."""
        if self.joint is not None:
            return np.broadcast_to(self.joint, (self.n, 2, 2)).copy()
        px = np.stack((1.0 - self.flip_x, self.flip_x), axis=1)
        pz = np.stack((1.0 - self.flip_z, self.flip_z), axis=1)
        return px[:, :, None] * pz[:, None, :]

    def log_joint(self) -> np.ndarray:
        """Floored log priors, shape ``(n, 4)``, column ``2 e_x + e_z``."""
        return np.log(np.maximum(self.joint_table().reshape(self.n, 4), PROB_FLOOR))


@dataclass(frozen=True, eq=False)
class ErrorPattern:
    """A sampled error with the priors of the law that produced it."""

    e_x: BitVec
    e_z: BitVec
    priors: QubitPriors

    @property
    def n(self) -> int:
        return self.e_x.shape[0]

    @property
    def weight(self) -> int:
        return int(np.count_nonzero(self.e_x | self.e_z))


def phi(z: float) -> float:
    """Upper tail of the standard normal, ``P(N(0, 1) > z)``."""
    return float(0.5 * special.erfc(z / np.sqrt(2.0)))


def phi_inverse(p: float) -> float:
    """Inverse of :func:`phi` on (0, 1)."""
    if not 0.0 < p < 1.0:
        raise InvalidArgumentError(f"phi_inverse needs 0 < p < 1, got {p}")
    return float(np.sqrt(2.0) * special.erfcinv(2.0 * p))


def f_n_from_y(abs_y: np.ndarray, sigma: float) -> np.ndarray:
    """Posterior flip probability ``1 / (1 + exp(2 |y| / sigma²))`` of a received value."""
    return special.expit(-2.0 * np.asarray(abs_y, dtype=np.float64) / sigma**2)


def abs_y_from_f_n(f_n: np.ndarray, sigma: float) -> np.ndarray:
    """Invert :func:`f_n_from_y`."""
    return -0.5 * sigma**2 * special.logit(np.asarray(f_n, dtype=np.float64))


def marginal_fm(channel: ChannelModel) -> float:
    """The flip probability of one component, the common noise axis of every family."""
    if isinstance(channel, BscPair):
        return channel.f_m
    if isinstance(channel, FourArySymmetric):
        return 2.0 * channel.f / 3.0
    if isinstance(channel, GaussianDiversity):
        return phi(1.0 / channel.sigma)
    raise InvalidArgumentError(f"unknown channel {channel!r}")


def joint_prior(channel: ChannelModel) -> np.ndarray:
    """The table ``P(e_x, e_z)`` of one qubit; only the 4-ary family correlates the components."""
    if isinstance(channel, FourArySymmetric):
        third = channel.f / 3.0
        return np.array([[1.0 - channel.f, third], [third, third]])
    f_m = marginal_fm(channel)
    single = np.array([1.0 - f_m, f_m])
    return np.outer(single, single)


def sample(channel: ChannelModel, n: int, rng: np.random.Generator) -> ErrorPattern:
    """Draw an error on ``n`` qubits.

    :param channel: The noise law.
    :type channel: ChannelModel
    :param n: The number of qubits.
    :type n: int
    :param rng: The generator; equal states give equal patterns.
    :type rng: np.random.Generator
    :returns: The error and the decoder priors for it.
    :rtype: ErrorPattern
    """
    if n < 1:
        raise InvalidArgumentError(f"need at least one qubit, got {n}")
    if isinstance(channel, BscPair):
        draws = rng.random((2, n)) < channel.f_m
        priors = QubitPriors.uniform(n, channel.f_m)
        return ErrorPattern(draws[0].astype(np.uint8), draws[1].astype(np.uint8), priors)
    if isinstance(channel, FourArySymmetric):
        u = rng.random(n)
        third = channel.f / 3.0
        # [0, f/3) is X, [f/3, 2f/3) is Y, [2f/3, f) is Z
        e_x = u < 2.0 * third
        e_z = (u >= third) & (u < channel.f)
        priors = QubitPriors.uniform(n, 2.0 * third, joint_prior(channel))
        return ErrorPattern(e_x.astype(np.uint8), e_z.astype(np.uint8), priors)
    if isinstance(channel, GaussianDiversity):
        y = 1.0 + channel.sigma * rng.standard_normal((2, n))
        f_n = f_n_from_y(np.abs(y), channel.sigma)
        priors = QubitPriors(f_n[0], f_n[1])
        return ErrorPattern((y[0] < 0.0).astype(np.uint8), (y[1] < 0.0).astype(np.uint8), priors)
    raise InvalidArgumentError(f"unknown channel {channel!r}")


def sample_fixed_weight(n: int, weight: int, rng: np.random.Generator) -> ErrorPattern:
    """Flip exactly ``weight`` random positions in each component; the priors are ``weight / n``."""
    if not 0 <= weight <= n:
        raise InvalidArgumentError(f"weight must lie in [0, {n}], got {weight}")
    comps = np.zeros((2, n), dtype=np.uint8)
    for comp in comps:
        comp[rng.choice(n, size=weight, replace=False)] = 1
    return ErrorPattern(comps[0], comps[1], QubitPriors.uniform(n, weight / n))


def parse_channel(text: str) -> ChannelModel:
    """Parse ``bscpair:fm=0.02``, ``4ary:f=0.03`` or ``gauss:sigma=1.0``.

    :raises InvalidArgumentError: On an unknown family or key, or an out-of-range value.
    """
    match = _CHANNEL_RE.match(text.strip().lower())
    if match is None:
        raise InvalidArgumentError(f"cannot parse channel {text!r}; expected family:key=value")
    family, key, value = match["family"], match["key"], float(match["value"])
    expected = {"bscpair": "fm", "4ary": "f", "gauss": "sigma"}
    if family not in expected:
        raise InvalidArgumentError(f"unknown channel family {family!r}; choose from {CHANNEL_FAMILIES}")
    if key != expected[family]:
        raise InvalidArgumentError(f"{family} takes {expected[family]}=..., got {key}=")
    if family == "bscpair":
        return BscPair(value)
    if family == "4ary":
        return FourArySymmetric(value)
    return GaussianDiversity(value)


def channel_at(family: str, f_m: float) -> ChannelModel:
    """The member of ``family`` whose marginal flip probability is ``f_m``."""
    if family == "bscpair":
        return BscPair(f_m)
    if family == "4ary":
        return FourArySymmetric(1.5 * f_m)
    if family == "gauss":
        if not 0.0 < f_m < 0.5:
            raise InvalidArgumentError(f"gauss needs 0 < f_m < 1/2, got {f_m}")
        return GaussianDiversity(1.0 / phi_inverse(f_m))
    raise InvalidArgumentError(f"unknown channel family {family!r}; choose from {CHANNEL_FAMILIES}")


def channel_family(channel: ChannelModel) -> str:
    return channel.describe().split(":", 1)[0]
