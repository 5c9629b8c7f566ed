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

"""Sum-product syndrome decoding and trial classification.

The decoders infer an error from its syndrome. For a CSS code built from ``H`` the X component is inferred from
``syndrome_x = H e_x`` and the Z component from ``syndrome_z = H e_z``; the two are separate binary problems unless
a joint prior couples them (:func:`sp_decode_quaternary`).

A converged estimate always reproduces the observed syndrome; this is checked after every decode.
"""
import enum
import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional, Tuple, Union

import numpy as np
import numpy.typing as npt

from css_ldpc import _kernels, gf2core
from css_ldpc.channels import ErrorPattern, QubitPriors
from css_ldpc.configuration import DECODER_KINDS, DecoderConfig
from css_ldpc.errors import InvalidArgumentError, PreconditionError
from css_ldpc.gf2core import BitVec, SparseBinaryMatrix

if TYPE_CHECKING:
    from css_ldpc.constructions import CssCode

_LOGGER = logging.getLogger(__name__)
BRUTE_FORCE_MAX_N = 16


class DecodeStatus(str, enum.Enum):
    CONVERGED = "converged"
    FAILED = "failed"


class TrialClass(str, enum.Enum):
    """How a decoding trial ended."""

    EXACT_SUCCESS = "exact_success"
    DEGENERATE_SUCCESS = "degenerate_success"
    DETECTED_ERROR = "detected_error"
    UNDETECTED_ERROR = "undetected_error"

    @property
    def is_success(self) -> bool:
        return self in (TrialClass.EXACT_SUCCESS, TrialClass.DEGENERATE_SUCCESS)


@dataclass(frozen=True, eq=False)
class ComponentOutcome:
    """The result of decoding one binary component.

    :cvar status: Whether the syndrome was reproduced.
    :cvar hard: The last hard decision; the estimate when converged.
    :cvar iterations_used: Iterations run, 0 when the prior alone satisfied the syndrome.
    :cvar hypothesis_log_likelihoods: Unicycle only, log-likelihood of each extra-bit hypothesis (None if it failed).
    :cvar tie_broken: Unicycle only, both hypotheses converged with equal likelihood.
    """

    status: DecodeStatus
    hard: BitVec
    iterations_used: int
    hypothesis_log_likelihoods: Optional[Tuple[Optional[float], Optional[float]]] = None
    tie_broken: bool = False

    @property
    def converged(self) -> bool:
        return self.status is DecodeStatus.CONVERGED

    @property
    def estimate(self) -> Optional[BitVec]:
        return self.hard if self.converged else None


@dataclass(frozen=True, eq=False)
class DecodeOutcome:
    """The result of decoding both components of a qubit error.

    :cvar status: Converged only if both syndromes were reproduced.
    :cvar hard_x: Last hard decision on the X component.
    :cvar hard_z: Last hard decision on the Z component.
    :cvar iterations_used: The largest iteration count of the components.
    :cvar components: Per-component outcomes when the components were decoded separately.
    """

    status: DecodeStatus
    hard_x: BitVec
    hard_z: BitVec
    iterations_used: int
    components: Optional[Tuple[ComponentOutcome, ComponentOutcome]] = None

    @property
    def converged(self) -> bool:
        return self.status is DecodeStatus.CONVERGED

    @property
    def estimate(self) -> Optional[Tuple[BitVec, BitVec]]:
        return (self.hard_x, self.hard_z) if self.converged else None

    @property
    def hypothesis_log_likelihoods(self) -> Optional[Tuple[Tuple[Optional[float], Optional[float]], ...]]:
        if self.components is None or self.components[0].hypothesis_log_likelihoods is None:
            return None
        return tuple(comp.hypothesis_log_likelihoods for comp in self.components)  # type: ignore[misc]


def _as_probs(priors: npt.ArrayLike, n: int) -> np.ndarray:
    probs = np.asarray(priors, dtype=np.float64)
    if probs.ndim == 0:
        probs = np.full(n, float(probs))
    if probs.shape != (n,):
        raise InvalidArgumentError(f"priors must have length {n}, got shape {probs.shape}")
    if np.any(probs < 0.0) or np.any(probs > 1.0) or np.any(np.isnan(probs)):
        raise InvalidArgumentError("priors must be probabilities")
    return np.clip(probs, _kernels.PROB_FLOOR, 1.0 - _kernels.PROB_FLOOR)


def prior_llr(priors: npt.ArrayLike, n: int) -> np.ndarray:
    """Log-likelihood ratios ``log (1 - p) / p`` of flip probabilities, clipped like the messages."""
    probs = _as_probs(priors, n)
    return np.clip(np.log1p(-probs) - np.log(probs), -_kernels.LLR_CLIP, _kernels.LLR_CLIP)


def _check_max_iter(max_iter: int) -> None:
    if max_iter < 0:
        raise InvalidArgumentError(f"max_iter must not be negative, got {max_iter}")


def _assert_reproduces(h: SparseBinaryMatrix, hard: BitVec, syndrome: BitVec) -> None:
    if not np.array_equal(gf2core.syndrome(h, hard), syndrome):
        raise RuntimeError("decoder reported convergence on an estimate with the wrong syndrome")


def sp_decode_binary(
    h: SparseBinaryMatrix, syndrome: npt.ArrayLike, priors: npt.ArrayLike, max_iter: int = 100
) -> ComponentOutcome:
    """Find a likely error with the given syndrome by flooding sum-product.

    :param h: The parity-check matrix.
    :type h: SparseBinaryMatrix
    :param syndrome: The observed ``H e``.
    :type syndrome: npt.ArrayLike
    :param priors: Flip probability of each bit, or one probability for all.
    :type priors: npt.ArrayLike
    :param max_iter: The iteration cap.
    :type max_iter: int
    :returns: The outcome; stops at the first iteration whose hard decision satisfies the syndrome.
    :rtype: ComponentOutcome
    :raises InvalidArgumentError: On a length mismatch or invalid priors.
    """
    _check_max_iter(max_iter)
    syn = gf2core.as_bitvec(syndrome, h.n_rows, "syndrome")
    llr = prior_llr(priors, h.n_cols)
    var_ptr, var_edge = h.edge_index
    hard, iterations, converged = _kernels.sp_binary(h.indptr, h.indices, var_ptr, var_edge, syn, llr, max_iter)
    if converged:
        _assert_reproduces(h, hard, syn)
    _LOGGER.debug("binary decode - converged=%s after %d iterations", converged, iterations)
    status = DecodeStatus.CONVERGED if converged else DecodeStatus.FAILED
    return ComponentOutcome(status, hard, int(iterations))


def sp_decode_quaternary(
    h: SparseBinaryMatrix,
    syndrome_x: npt.ArrayLike,
    syndrome_z: npt.ArrayLike,
    priors: QubitPriors,
    max_iter: int = 100,
) -> DecodeOutcome:
    """Decode both components at once, each qubit a 4-state variable under the joint prior.

    With a product-form prior the result equals two :func:`sp_decode_binary` runs.
    """
    _check_max_iter(max_iter)
    syn_x = gf2core.as_bitvec(syndrome_x, h.n_rows, "syndrome_x")
    syn_z = gf2core.as_bitvec(syndrome_z, h.n_rows, "syndrome_z")
    if priors.n != h.n_cols:
        raise InvalidArgumentError(f"priors cover {priors.n} qubits, the code has {h.n_cols}")
    var_ptr, var_edge = h.edge_index
    hard_x, hard_z, iterations, converged = _kernels.sp_quaternary(
        h.indptr, h.indices, var_ptr, var_edge, syn_x, syn_z, priors.log_joint(), max_iter
    )
    if converged:
        _assert_reproduces(h, hard_x, syn_x)
        _assert_reproduces(h, hard_z, syn_z)
    _LOGGER.debug("quaternary decode - converged=%s after %d iterations", converged, iterations)
    status = DecodeStatus.CONVERGED if converged else DecodeStatus.FAILED
    return DecodeOutcome(status, hard_x, hard_z, int(iterations))


def _word_log_likelihood(word: BitVec, probs: np.ndarray) -> float:
    return float(np.sum(np.where(word == 1, np.log(probs), np.log1p(-probs))))


def unicycle_decode(
    code: "CssCode", syndrome: npt.ArrayLike, priors: npt.ArrayLike, max_iter: int = 100
) -> ComponentOutcome:
    """Decode a unicycle code as two cyclic codes, one per value of the all-ones-column bit.

    Every row holds the special column, so hypothesis ``b`` decodes the cyclic matrix against ``syndrome ^ b``.
    Among converged hypotheses the word with the higher log-likelihood wins; equal likelihoods go to ``b = 0``.

    :raises PreconditionError: If the code was not built as a unicycle code.
    """
    structure = code.subcode
    if structure is None:
        raise PreconditionError(f"{code.code_id} has no unicycle structure")
    _check_max_iter(max_iter)
    syn = gf2core.as_bitvec(syndrome, code.m, "syndrome")
    probs = _as_probs(priors, code.n)
    special = structure.special_column
    sub_probs = np.delete(probs, special)

    attempts = []
    for bit in (0, 1):
        outcome = sp_decode_binary(structure.dsc, syn ^ bit, sub_probs, max_iter)
        full = np.insert(outcome.hard, special, bit).astype(np.uint8)
        loglik = _word_log_likelihood(full, probs) if outcome.converged else None
        attempts.append((outcome, full, loglik))
    logliks = (attempts[0][2], attempts[1][2])
    iterations = attempts[0][0].iterations_used + attempts[1][0].iterations_used

    converged = [idx for idx, (_, _, loglik) in enumerate(attempts) if loglik is not None]
    if not converged:
        return ComponentOutcome(DecodeStatus.FAILED, attempts[0][1], iterations, logliks)
    tie = len(converged) == 2 and logliks[0] == logliks[1]
    if tie:
        _LOGGER.warning("unicycle hypotheses tie at log-likelihood %.6g - keeping extra bit 0", logliks[0])
    best = max(converged, key=lambda idx: (attempts[idx][2], -idx))
    full = attempts[best][1]
    _assert_reproduces(code.h, full, syn)
    return ComponentOutcome(DecodeStatus.CONVERGED, full, iterations, logliks, tie)


def decode(
    code: "CssCode",
    syndrome_x: npt.ArrayLike,
    syndrome_z: npt.ArrayLike,
    priors: QubitPriors,
    config: Optional[DecoderConfig] = None,
) -> DecodeOutcome:
    """Decode both components with the decoder ``config.kind`` names.

    ``binary`` and ``unicycle`` treat the components separately and keep both component outcomes; ``quaternary``
    decodes them jointly.

    :raises InvalidArgumentError: On an unknown decoder kind.
    """
    config = config or DecoderConfig()
    if config.kind not in DECODER_KINDS:
        raise InvalidArgumentError(f"unknown decoder {config.kind!r}; choose from {DECODER_KINDS}")
    if config.kind == "quaternary":
        return sp_decode_quaternary(code.h, syndrome_x, syndrome_z, priors, config.max_iter)
    if config.kind == "unicycle":
        comp_x = unicycle_decode(code, syndrome_x, priors.flip_x, config.max_iter)
        comp_z = unicycle_decode(code, syndrome_z, priors.flip_z, config.max_iter)
    else:
        comp_x = sp_decode_binary(code.h, syndrome_x, priors.flip_x, config.max_iter)
        comp_z = sp_decode_binary(code.h, syndrome_z, priors.flip_z, config.max_iter)
    status = DecodeStatus.CONVERGED if comp_x.converged and comp_z.converged else DecodeStatus.FAILED
    return DecodeOutcome(
        status,
        comp_x.hard,
        comp_z.hard,
        max(comp_x.iterations_used, comp_z.iterations_used),
        (comp_x, comp_z),
    )


def decode_pattern(code: "CssCode", pattern: ErrorPattern, config: Optional[DecoderConfig] = None) -> DecodeOutcome:
    """Measure the syndromes of a sampled error and decode them with the error's own priors."""
    return decode(
        code, gf2core.syndrome(code.h, pattern.e_x), gf2core.syndrome(code.h, pattern.e_z), pattern.priors, config
    )


def classify_component(h: SparseBinaryMatrix, truth: npt.ArrayLike, outcome: ComponentOutcome) -> TrialClass:
    """Classify one component: a residual in the row space of ``h`` is harmless."""
    if not outcome.converged:
        return TrialClass.DETECTED_ERROR
    residual = gf2core.as_bitvec(truth, h.n_cols, "truth") ^ outcome.hard
    if not residual.any():
        return TrialClass.EXACT_SUCCESS
    if gf2core.in_row_space(h, residual):
        return TrialClass.DEGENERATE_SUCCESS
    return TrialClass.UNDETECTED_ERROR


def classify(
    code: Union["CssCode", SparseBinaryMatrix], truth: ErrorPattern, outcome: DecodeOutcome
) -> TrialClass:
    """Classify a trial.

    Failure to converge is a detected error. Otherwise the residuals ``truth ^ estimate`` decide: both zero is an
    exact success, both in the row space of ``H`` a degenerate success, anything else an undetected error.
    """
    h = code if isinstance(code, SparseBinaryMatrix) else code.h
    if not outcome.converged:
        return TrialClass.DETECTED_ERROR
    res_x = truth.e_x ^ outcome.hard_x
    res_z = truth.e_z ^ outcome.hard_z
    if not res_x.any() and not res_z.any():
        return TrialClass.EXACT_SUCCESS
    if gf2core.in_row_space(h, res_x) and gf2core.in_row_space(h, res_z):
        return TrialClass.DEGENERATE_SUCCESS
    return TrialClass.UNDETECTED_ERROR


def _kernel_basis(h: SparseBinaryMatrix) -> np.ndarray:
    """Rows spanning ``{x : H x = 0}``, one per non-pivot column."""
    basis = h.row_basis
    reduced = basis.dense(h.n_cols)
    free = np.setdiff1d(np.arange(h.n_cols), basis.pivots)
    kernel = np.zeros((free.size, h.n_cols), dtype=np.uint8)
    kernel[np.arange(free.size), free] = 1
    kernel[:, basis.pivots] = reduced[:, free].T
    return kernel


def brute_force_coset_decode(h: SparseBinaryMatrix, syndrome: npt.ArrayLike, priors: npt.ArrayLike) -> BitVec:
    """Exact maximum-likelihood coset decoding by enumeration.

    All errors with the observed syndrome are grouped by their coset of the row space of ``h``; the coset with the
    largest total probability wins and its most probable member is returned.

    :raises InvalidArgumentError: If ``h`` has more than 16 columns.
    """
    n = h.n_cols
    if n > BRUTE_FORCE_MAX_N:
        raise InvalidArgumentError(f"brute force decoding is limited to {BRUTE_FORCE_MAX_N} bits, got {n}")
    syn = gf2core.as_bitvec(syndrome, h.n_rows, "syndrome")
    probs = _as_probs(priors, n)

    words = ((np.arange(2**n, dtype=np.int64)[:, None] >> np.arange(n)) & 1).astype(np.uint8)
    syndromes = (words.astype(np.int64) @ h.to_dense().T.astype(np.int64)) % 2
    candidates = words[np.all(syndromes == syn, axis=1)]
    if candidates.shape[0] == 0:
        raise InvalidArgumentError("no error pattern produces this syndrome")
    log_p = np.where(candidates == 1, np.log(probs), np.log1p(-probs)).sum(axis=1)

    kernel = _kernel_basis(h)
    # x lies in the row space iff it is orthogonal to the whole kernel
    keys = (candidates.astype(np.int64) @ kernel.T.astype(np.int64)) % 2
    key_ids = keys @ (1 << np.arange(kernel.shape[0], dtype=np.int64)) if kernel.size else np.zeros(len(keys), int)
    labels, inverse = np.unique(key_ids, return_inverse=True)
    weights = np.exp(log_p - log_p.max())
    coset_mass = np.bincount(inverse, weights=weights, minlength=labels.size)
    best = int(np.argmax(coset_mass))
    members = np.flatnonzero(inverse == best)
    return candidates[members[np.argmax(log_p[members])]].copy()
