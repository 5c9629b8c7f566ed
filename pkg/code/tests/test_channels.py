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

"""Tests for the channel models, samplers and priors."""
import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from css_ldpc import channels
from css_ldpc.channels import BscPair, FourArySymmetric, GaussianDiversity, QubitPriors
from css_ldpc.errors import InvalidArgumentError


@pytest.mark.parametrize(
    "text, expected",
    [
        ("bscpair:fm=0.02", BscPair(0.02)),
        ("4ary:f=0.03", FourArySymmetric(0.03)),
        ("GAUSS:sigma=1.5", GaussianDiversity(1.5)),
        (" bscpair:fm=1e-3 ", BscPair(0.001)),
    ],
)
def test_parse_channel(text: str, expected) -> None:
    assert channels.parse_channel(text) == expected


def test_describe_parses_back() -> None:
    for channel in (BscPair(0.02), FourArySymmetric(0.3), GaussianDiversity(0.8)):
        assert channels.parse_channel(channel.describe()) == channel


@pytest.mark.parametrize(
    "text", ["bscpair", "bscpair:f=0.1", "bscpair:fm=0.6", "4ary:f=0.8", "gauss:sigma=0", "erasure:p=0.1"]
)
def test_parse_channel_rejects(text: str) -> None:
    with pytest.raises(InvalidArgumentError):
        channels.parse_channel(text)


def test_channel_at_matches_marginal() -> None:
    assert channels.channel_at("4ary", 0.02).f == pytest.approx(0.03)
    for family in channels.CHANNEL_FAMILIES:
        channel = channels.channel_at(family, 0.07)
        assert channels.marginal_fm(channel) == pytest.approx(0.07, rel=1e-9)
        assert channels.channel_family(channel) == family
    with pytest.raises(InvalidArgumentError):
        channels.channel_at("gauss", 0.5)
    with pytest.raises(InvalidArgumentError):
        channels.channel_at("erasure", 0.1)


def test_joint_prior_tables() -> None:
    table = channels.joint_prior(FourArySymmetric(0.3))
    assert table.sum() == pytest.approx(1.0)
    assert table[1].sum() == pytest.approx(0.2)
    assert table[:, 1].sum() == pytest.approx(0.2)
    assert_allclose(channels.joint_prior(BscPair(0.1)), [[0.81, 0.09], [0.09, 0.01]])
    assert_allclose(channels.joint_prior(FourArySymmetric(0.06)), [[0.94, 0.02], [0.02, 0.02]])


def test_phi_and_inverse() -> None:
    assert channels.phi(0.0) == pytest.approx(0.5)
    assert channels.phi(1.0) == pytest.approx(0.158655, abs=1e-6)
    assert channels.phi_inverse(channels.phi(1.3)) == pytest.approx(1.3)
    with pytest.raises(InvalidArgumentError):
        channels.phi_inverse(0.0)


def test_posterior_flip_probability_inverts() -> None:
    abs_y = np.array([0.0, 0.3, 1.0, 2.5])
    f_n = channels.f_n_from_y(abs_y, 0.8)
    assert f_n[0] == pytest.approx(0.5)
    assert np.all(np.diff(f_n) < 0)
    assert_allclose(channels.abs_y_from_f_n(f_n, 0.8), abs_y, atol=1e-12)


def test_sampling_is_reproducible() -> None:
    for channel in (BscPair(0.1), FourArySymmetric(0.2), GaussianDiversity(0.9)):
        first = channels.sample(channel, 50, np.random.default_rng(5))
        second = channels.sample(channel, 50, np.random.default_rng(5))
        assert_array_equal(first.e_x, second.e_x)
        assert_array_equal(first.e_z, second.e_z)
        assert_array_equal(first.priors.flip_x, second.priors.flip_x)


def test_bscpair_flip_rate(rng) -> None:
    n = 1_000_000
    pattern = channels.sample(BscPair(0.05), n, rng)
    tolerance = 4 * np.sqrt(0.05 * 0.95 / n)
    assert abs(pattern.e_x.mean() - 0.05) < tolerance
    assert abs(pattern.e_z.mean() - 0.05) < tolerance
    assert pattern.priors.joint is None


def test_four_ary_sampler_frequencies(rng) -> None:
    n = 1_000_000
    pattern = channels.sample(FourArySymmetric(0.3), n, rng)
    x_only = np.mean((pattern.e_x == 1) & (pattern.e_z == 0))
    y = np.mean((pattern.e_x == 1) & (pattern.e_z == 1))
    z_only = np.mean((pattern.e_x == 0) & (pattern.e_z == 1))
    tolerance = 4 * np.sqrt(0.1 * 0.9 / n)
    for freq in (x_only, y, z_only):
        assert abs(freq - 0.1) < tolerance
    assert_allclose(pattern.priors.joint, channels.joint_prior(FourArySymmetric(0.3)))


def test_four_ary_marginals_are_two_thirds_of_f(rng) -> None:
    n = 1_000_000
    f = 0.06
    pattern = channels.sample(FourArySymmetric(f), n, rng)
    marginal = 2 * f / 3
    tolerance = 4 * np.sqrt(marginal * (1 - marginal) / n)
    assert abs(pattern.e_x.mean() - marginal) < tolerance
    assert abs(pattern.e_z.mean() - marginal) < tolerance
    both = np.mean(pattern.e_x & pattern.e_z)
    assert abs(both - f / 3) < 4 * np.sqrt(f / 3 * (1 - f / 3) / n)
    # Y flips correlate the components
    assert both > pattern.e_x.mean() * pattern.e_z.mean()


def test_gaussian_sampler_is_calibrated(rng) -> None:
    n = 1_000_000
    sigma = 0.8
    pattern = channels.sample(GaussianDiversity(sigma), n, rng)
    expected = channels.phi(1.0 / sigma)
    tolerance = 4 * np.sqrt(expected * (1 - expected) / n)
    assert abs(pattern.e_x.mean() - expected) < tolerance
    assert abs(pattern.e_z.mean() - expected) < tolerance
    # the posterior flip probabilities average to the flip rate; their variance is below p(1 - p)
    assert abs(pattern.priors.flip_x.mean() - expected) < tolerance
    assert np.all(pattern.priors.flip_z <= 0.5)


def test_fixed_weight_sampler(rng) -> None:
    pattern = channels.sample_fixed_weight(40, 6, rng)
    assert int(pattern.e_x.sum()) == 6
    assert int(pattern.e_z.sum()) == 6
    assert_allclose(pattern.priors.flip_x, np.full(40, 0.15))
    assert 6 <= pattern.weight <= 12
    with pytest.raises(InvalidArgumentError):
        channels.sample_fixed_weight(40, 41, rng)


def test_qubit_priors_validation() -> None:
    priors = QubitPriors.uniform(3, 0.1)
    assert priors.n == 3
    assert_allclose(priors.joint_table()[0], [[0.81, 0.09], [0.09, 0.01]])
    assert priors.log_joint().shape == (3, 4)
    with pytest.raises(InvalidArgumentError):
        QubitPriors(np.array([0.1, 1.2]), np.array([0.1, 0.1]))
    with pytest.raises(InvalidArgumentError):
        QubitPriors(np.array([0.1]), np.array([0.1, 0.1]))
    with pytest.raises(InvalidArgumentError):
        QubitPriors.uniform(2, 0.1, np.array([[0.5, 0.5], [0.5, 0.5]]))


def test_sample_needs_qubits(rng) -> None:
    with pytest.raises(InvalidArgumentError):
        channels.sample(BscPair(0.1), 0, rng)
