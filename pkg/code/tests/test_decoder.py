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

"""Tests for the sum-product decoders, the brute-force oracle and classification."""
import numpy as np
import pytest
from numpy.testing import assert_array_equal

from css_ldpc import constructions, decoder, gf2core, pauli
from css_ldpc.channels import BscPair, ErrorPattern, QubitPriors
from css_ldpc.configuration import DecoderConfig
from css_ldpc.decoder import ComponentOutcome, DecodeOutcome, DecodeStatus, TrialClass
from css_ldpc.errors import InvalidArgumentError, PreconditionError
from css_ldpc.gf2core import SparseBinaryMatrix

CHAIN = SparseBinaryMatrix.from_dense([[1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1]])


def _bits(*values: int) -> np.ndarray:
    return np.array(values, dtype=np.uint8)


@pytest.fixture(scope="module")
def steane() -> constructions.CssCode:
    return constructions.CssCode.from_matrix(pauli.steane_parity_check(), {"family": "steane"})


@pytest.fixture(scope="module")
def small_unicycle() -> constructions.CssCode:
    return constructions.unicycle(4)


def test_zero_syndrome_converges_on_the_prior() -> None:
    outcome = decoder.sp_decode_binary(CHAIN, _bits(0, 0, 0), 0.1)
    assert outcome.converged
    assert outcome.iterations_used == 0
    assert not outcome.hard.any()


def test_tree_decodes_to_the_lightest_error() -> None:
    outcome = decoder.sp_decode_binary(CHAIN, _bits(1, 0, 0), 0.1, max_iter=20)
    assert outcome.status is DecodeStatus.CONVERGED
    assert_array_equal(outcome.estimate, _bits(1, 0, 0, 0))
    assert outcome.iterations_used >= 1


def test_zero_iterations_reports_failure() -> None:
    outcome = decoder.sp_decode_binary(CHAIN, _bits(1, 0, 0), 0.1, max_iter=0)
    assert not outcome.converged
    assert outcome.estimate is None


def test_binary_decoder_rejects_bad_input() -> None:
    with pytest.raises(InvalidArgumentError):
        decoder.sp_decode_binary(CHAIN, _bits(1, 0), 0.1)
    with pytest.raises(InvalidArgumentError):
        decoder.sp_decode_binary(CHAIN, _bits(1, 0, 0), [0.1, 0.1])
    with pytest.raises(InvalidArgumentError):
        decoder.sp_decode_binary(CHAIN, _bits(1, 0, 0), 1.5)
    with pytest.raises(InvalidArgumentError):
        decoder.sp_decode_binary(CHAIN, _bits(1, 0, 0), 0.1, max_iter=-1)


def test_prior_llr_signs() -> None:
    llr = decoder.prior_llr([0.1, 0.5, 0.9], 3)
    assert llr[0] > 0
    assert llr[1] == pytest.approx(0.0)
    assert llr[2] < 0


def test_quaternary_with_product_prior_matches_binary() -> None:
    priors = QubitPriors.uniform(4, 0.1)
    joint = decoder.sp_decode_quaternary(CHAIN, _bits(1, 0, 0), _bits(0, 0, 0), priors, max_iter=20)
    binary = decoder.sp_decode_binary(CHAIN, _bits(1, 0, 0), 0.1, max_iter=20)
    assert joint.converged
    assert_array_equal(joint.hard_x, binary.hard)
    assert not joint.hard_z.any()


def test_quaternary_uses_correlation() -> None:
    # under a Y-heavy prior an X flip at qubit 0 makes a Z flip there likely too
    joint = np.array([[0.85, 0.01], [0.01, 0.13]])
    priors = QubitPriors.uniform(4, 0.14, joint)
    outcome = decoder.sp_decode_quaternary(CHAIN, _bits(1, 0, 0), _bits(1, 0, 0), priors, max_iter=20)
    assert outcome.converged
    assert_array_equal(outcome.hard_x, _bits(1, 0, 0, 0))
    assert_array_equal(outcome.hard_z, _bits(1, 0, 0, 0))
    with pytest.raises(InvalidArgumentError):
        decoder.sp_decode_quaternary(CHAIN, _bits(1, 0, 0), _bits(0, 0, 0), QubitPriors.uniform(5, 0.1))


def test_unicycle_zero_syndrome(small_unicycle) -> None:
    outcome = decoder.unicycle_decode(small_unicycle, np.zeros(small_unicycle.m, dtype=np.uint8), 0.05)
    assert outcome.converged
    assert not outcome.hard.any()
    assert outcome.hypothesis_log_likelihoods[0] is not None
    assert not outcome.tie_broken


def test_unicycle_special_column_error(small_unicycle) -> None:
    code = small_unicycle
    error = np.zeros(code.n, dtype=np.uint8)
    error[code.subcode.special_column] = 1
    syndrome = gf2core.syndrome(code.h, error)
    assert syndrome.all()
    outcome = decoder.unicycle_decode(code, syndrome, 0.05)
    assert outcome.converged
    assert_array_equal(outcome.hard, error)


def test_unicycle_decode_needs_structure(steane) -> None:
    with pytest.raises(PreconditionError):
        decoder.unicycle_decode(steane, np.zeros(3, dtype=np.uint8), 0.05)


def test_decode_dispatches_on_kind(small_unicycle) -> None:
    code = small_unicycle
    zeros = np.zeros(code.m, dtype=np.uint8)
    priors = QubitPriors.uniform(code.n, 0.05)
    for kind in ("binary", "quaternary", "unicycle"):
        outcome = decoder.decode(code, zeros, zeros, priors, DecoderConfig(kind=kind, max_iter=30))
        assert outcome.converged
        assert not outcome.hard_x.any() and not outcome.hard_z.any()
    outcome = decoder.decode(code, zeros, zeros, priors, DecoderConfig(kind="unicycle", max_iter=30))
    assert outcome.hypothesis_log_likelihoods is not None
    assert len(outcome.components) == 2
    with pytest.raises(InvalidArgumentError):
        decoder.decode(code, zeros, zeros, priors, DecoderConfig(kind="bp", max_iter=30))


def test_decode_pattern_uses_the_error_syndromes(steane) -> None:
    e_x = _bits(0, 0, 0, 0, 1, 0, 0)
    e_z = np.zeros(7, dtype=np.uint8)
    pattern = ErrorPattern(e_x, e_z, QubitPriors.uniform(7, 0.02))
    outcome = decoder.decode_pattern(steane, pattern)
    assert outcome.converged
    assert decoder.classify(steane, pattern, outcome).is_success


def test_classify_cases(steane) -> None:
    h = steane.h
    truth = ErrorPattern(_bits(1, 0, 0, 0, 0, 0, 0), np.zeros(7, dtype=np.uint8), QubitPriors.uniform(7, 0.02))
    zeros = np.zeros(7, dtype=np.uint8)

    def outcome(hard_x: np.ndarray, status: DecodeStatus = DecodeStatus.CONVERGED) -> DecodeOutcome:
        return DecodeOutcome(status, hard_x, zeros, 3)

    stabilizer = np.zeros(7, dtype=np.uint8)
    stabilizer[list(h.rows[0])] = 1
    logical = _bits(1, 1, 1, 0, 0, 0, 0)
    assert decoder.classify(steane, truth, outcome(truth.e_x)) is TrialClass.EXACT_SUCCESS
    assert decoder.classify(h, truth, outcome(truth.e_x ^ stabilizer)) is TrialClass.DEGENERATE_SUCCESS
    assert decoder.classify(steane, truth, outcome(truth.e_x ^ logical)) is TrialClass.UNDETECTED_ERROR
    failed = outcome(zeros, DecodeStatus.FAILED)
    assert decoder.classify(steane, truth, failed) is TrialClass.DETECTED_ERROR
    assert not TrialClass.DETECTED_ERROR.is_success


def test_classify_component(steane) -> None:
    truth = _bits(0, 1, 0, 0, 0, 0, 0)
    exact = ComponentOutcome(DecodeStatus.CONVERGED, truth.copy(), 2)
    assert decoder.classify_component(steane.h, truth, exact) is TrialClass.EXACT_SUCCESS
    failed = ComponentOutcome(DecodeStatus.FAILED, truth.copy(), 2)
    assert decoder.classify_component(steane.h, truth, failed) is TrialClass.DETECTED_ERROR


def test_brute_force_returns_single_flips(steane) -> None:
    for position in range(7):
        error = np.zeros(7, dtype=np.uint8)
        error[position] = 1
        estimate = decoder.brute_force_coset_decode(steane.h, gf2core.syndrome(steane.h, error), 0.02)
        assert_array_equal(estimate, error)


def test_brute_force_limits() -> None:
    with pytest.raises(InvalidArgumentError):
        decoder.brute_force_coset_decode(gf2core.identity(17), np.zeros(17, dtype=np.uint8), 0.1)
    with pytest.raises(InvalidArgumentError):
        decoder.brute_force_coset_decode(SparseBinaryMatrix.from_dense([[0, 0]]), _bits(1), 0.1)


def _girth_six_matrix(rng: np.random.Generator, n_rows: int, n_cols: int) -> SparseBinaryMatrix:
    # each column is a distinct pair of rows, so no two columns share two checks
    pairs = [(a, b) for a in range(n_rows) for b in range(a + 1, n_rows)]
    while True:
        dense = np.zeros((n_rows, n_cols), dtype=np.uint8)
        for col, pick in enumerate(rng.choice(len(pairs), n_cols, replace=False)):
            dense[list(pairs[pick]), col] = 1
        if dense.sum(axis=1).min() > 0:
            return SparseBinaryMatrix.from_dense(dense)


def _enumerated_span(h: SparseBinaryMatrix) -> set:
    coeffs = (np.arange(2**h.n_rows)[:, None] >> np.arange(h.n_rows)) & 1
    return {tuple(word) for word in ((coeffs @ h.to_dense().astype(np.int64)) % 2).tolist()}


def _enumerated_class(span: set, truth: np.ndarray, outcome: ComponentOutcome) -> TrialClass:
    if not outcome.converged:
        return TrialClass.DETECTED_ERROR
    residual = truth ^ outcome.hard
    if not residual.any():
        return TrialClass.EXACT_SUCCESS
    return TrialClass.DEGENERATE_SUCCESS if tuple(residual.tolist()) in span else TrialClass.UNDETECTED_ERROR


def test_sum_product_is_close_to_the_coset_oracle(rng) -> None:
    flip = 0.02
    trials = 0
    oracle_wins = sp_wins = 0
    for n_cols in (10, 11, 12, 13, 14):
        h = _girth_six_matrix(rng, 6, n_cols)
        span = _enumerated_span(h)
        for _ in range(400):
            trials += 1
            error = (rng.random(n_cols) < flip).astype(np.uint8)
            syndrome = gf2core.syndrome(h, error)
            best = decoder.brute_force_coset_decode(h, syndrome, flip)
            assert_array_equal(gf2core.syndrome(h, best), syndrome)
            oracle_wins += tuple((best ^ error).tolist()) in span
            outcome = decoder.sp_decode_binary(h, syndrome, flip, max_iter=50)
            verdict = decoder.classify_component(h, error, outcome)
            assert verdict is _enumerated_class(span, error, outcome)
            sp_wins += verdict.is_success
    assert trials == 2000
    assert oracle_wins >= 0.95 * trials
    assert sp_wins <= oracle_wins + 0.02 * trials
    assert sp_wins >= oracle_wins - 0.05 * trials


def test_classify_matches_enumerated_cosets_on_both_components(steane, rng) -> None:
    h = steane.h
    span = _enumerated_span(h)
    for _ in range(300):
        pattern = ErrorPattern(
            (rng.random(7) < 0.1).astype(np.uint8), (rng.random(7) < 0.1).astype(np.uint8), QubitPriors.uniform(7, 0.1)
        )
        outcome = decoder.decode_pattern(steane, pattern, DecoderConfig(kind="binary", max_iter=30))
        truths = (pattern.e_x, pattern.e_z)
        parts = [_enumerated_class(span, truth, part) for truth, part in zip(truths, outcome.components)]
        if TrialClass.DETECTED_ERROR in parts:
            expected = TrialClass.DETECTED_ERROR
        elif TrialClass.UNDETECTED_ERROR in parts:
            expected = TrialClass.UNDETECTED_ERROR
        elif TrialClass.DEGENERATE_SUCCESS in parts:
            expected = TrialClass.DEGENERATE_SUCCESS
        else:
            expected = TrialClass.EXACT_SUCCESS
        assert decoder.classify(steane, pattern, outcome) is expected


def test_sum_product_commutes_with_column_permutations(rng) -> None:
    for _ in range(5):
        h = _girth_six_matrix(rng, 6, 12)
        perm = rng.permutation(12)
        permuted = SparseBinaryMatrix.from_dense(h.to_dense()[:, perm])
        priors = rng.uniform(0.01, 0.2, 12)
        for _ in range(40):
            error = (rng.random(12) < 0.08).astype(np.uint8)
            syndrome = gf2core.syndrome(h, error)
            assert_array_equal(gf2core.syndrome(permuted, error[perm]), syndrome)
            plain = decoder.sp_decode_binary(h, syndrome, priors, max_iter=30)
            moved = decoder.sp_decode_binary(permuted, syndrome, priors[perm], max_iter=30)
            assert moved.status is plain.status
            if plain.converged:
                assert moved.iterations_used == plain.iterations_used
                assert_array_equal(moved.hard, plain.hard[perm])


def test_decoding_bscpair_noise_on_a_bicycle_code(rng) -> None:
    from css_ldpc import channels

    code = constructions.bicycle(400, 150, 10, seed=11)
    successes = 0
    for _ in range(20):
        pattern = channels.sample(BscPair(0.005), code.n, rng)
        outcome = decoder.decode_pattern(code, pattern, DecoderConfig(kind="binary", max_iter=60))
        successes += decoder.classify(code, pattern, outcome).is_success
    assert successes >= 16
