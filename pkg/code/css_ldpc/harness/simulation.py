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

"""Monte Carlo block error rate estimation.

Trial ``i`` draws its error from a Philox generator keyed by ``(base_seed, i)``, so a trial's outcome does not depend
on which worker runs it. Workers process contiguous chunks of trial indices and the results are reduced in index
order; early stopping truncates at the exact trial that reached the failure limit. Serial and parallel runs therefore
give identical summaries.
"""
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from css_ldpc import channels, decoder, gf2core
from css_ldpc.channels import ChannelModel
from css_ldpc.configuration import DecoderConfig
from css_ldpc.constructions import CssCode
from css_ldpc.decoder import DecodeOutcome, TrialClass
from css_ldpc.errors import InvalidArgumentError

_LOGGER = logging.getLogger(__name__)
GENERATOR_NAME = "philox4x64/seedseq"
CHUNK_SIZE = 64
MIN_POINT_TRIALS = 200


def trial_rng(base_seed: int, index: int) -> np.random.Generator:
    """The generator of trial ``index``: Philox keyed by a seed sequence over ``(base_seed, index)``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(base_seed), int(index)])))


@dataclass(frozen=True)
class TrialSummary:
    """Counts of a Monte Carlo run at one noise point.

    ``bler`` counts detected and undetected errors; degenerate successes are successes. ``constituent_failures``
    counts, per component, the trials whose X (resp. Z) part was not corrected.
    """

    code_id: str
    channel: str
    param: float
    decoder: str
    trials: int
    exact: int
    degenerate: int
    detected: int
    undetected: int
    base_seed: int
    stopped_early: bool = False
    constituent_failures: Tuple[int, int] = (0, 0)

    def __post_init__(self) -> None:
        if self.exact + self.degenerate + self.detected + self.undetected != self.trials:
            raise InvalidArgumentError(f"class counts do not add up to {self.trials} trials")

    @property
    def failures(self) -> int:
        return self.detected + self.undetected

    @property
    def bler(self) -> float:
        return self.failures / self.trials if self.trials else 0.0

    @property
    def two_sigma(self) -> float:
        if not self.trials:
            return 0.0
        return 2.0 * math.sqrt(self.bler * (1.0 - self.bler) / self.trials)

    @property
    def constituent_bler(self) -> float:
        """Failure rate of the X constituent alone."""
        return self.constituent_failures[0] / self.trials if self.trials else 0.0


@dataclass(frozen=True)
class SweepResult:
    """Summaries along a noise grid, in strictly increasing order of the noise parameter."""

    points: Tuple[TrialSummary, ...]

    def __post_init__(self) -> None:
        params = [point.param for point in self.points]
        if any(b <= a for a, b in zip(params, params[1:])):
            raise InvalidArgumentError(f"noise parameters must increase strictly, got {params}")

    @property
    def params(self) -> List[float]:
        return [point.param for point in self.points]


@dataclass(frozen=True)
class _TrialTask:
    code: CssCode
    channel: Optional[ChannelModel]
    config: DecoderConfig
    base_seed: int
    fixed_weight: Optional[int] = None


def _component_failed(h: gf2core.SparseBinaryMatrix, truth: np.ndarray, hard: np.ndarray, converged: bool) -> bool:
    if not converged:
        return True
    residual = truth ^ hard
    return bool(residual.any()) and not gf2core.in_row_space(h, residual)


def _constituents(task: _TrialTask, pattern: channels.ErrorPattern, outcome: DecodeOutcome) -> Tuple[bool, bool]:
    h = task.code.h
    if outcome.components is not None:
        comp_x, comp_z = outcome.components
        return (
            _component_failed(h, pattern.e_x, comp_x.hard, comp_x.converged),
            _component_failed(h, pattern.e_z, comp_z.hard, comp_z.converged),
        )
    return (
        _component_failed(h, pattern.e_x, outcome.hard_x, outcome.converged),
        _component_failed(h, pattern.e_z, outcome.hard_z, outcome.converged),
    )


def _run_range(task: _TrialTask, start: int, stop: int) -> List[Tuple[TrialClass, bool, bool]]:
    results = []
    n = task.code.n
    for index in range(start, stop):
        rng = trial_rng(task.base_seed, index)
        if task.fixed_weight is not None:
            pattern = channels.sample_fixed_weight(n, task.fixed_weight, rng)
        else:
            pattern = channels.sample(task.channel, n, rng)  # type: ignore[arg-type]
        outcome = decoder.decode_pattern(task.code, pattern, task.config)
        trial_class = decoder.classify(task.code, pattern, outcome)
        x_failed, z_failed = _constituents(task, pattern, outcome)
        _LOGGER.debug("trial %d - weight %d - %s", index, pattern.weight, trial_class.value)
        results.append((trial_class, x_failed, z_failed))
    return results


def _run_chunk(args: Tuple[_TrialTask, int, int]) -> List[Tuple[TrialClass, bool, bool]]:
    return _run_range(*args)


def _chunks(trials: int) -> Iterator[Tuple[int, int]]:
    for start in range(0, trials, CHUNK_SIZE):
        yield start, min(trials, start + CHUNK_SIZE)


def _channel_label(channel: Optional[ChannelModel], fixed_weight: Optional[int]) -> Tuple[str, float]:
    if fixed_weight is not None:
        return f"fixed:w={fixed_weight}", float(fixed_weight)
    if channel is None:
        raise InvalidArgumentError("a channel or a fixed weight is required")
    return channel.describe(), channels.marginal_fm(channel)


def run_trials(
    code: CssCode,
    channel: Optional[ChannelModel],
    config: Optional[DecoderConfig] = None,
    trials: int = 1000,
    base_seed: int = 1,
    *,
    workers: int = 1,
    early_stop_failures: int = 0,
    fixed_weight: Optional[int] = None,
) -> TrialSummary:
    """Simulate, decode and classify ``trials`` independent errors.

    :param code: The code; shared read-only by the workers.
    :type code: CssCode
    :param channel: The noise law; ignored when ``fixed_weight`` is given.
    :type channel: Optional[ChannelModel]
    :param config: The decoder to run.
    :type config: Optional[DecoderConfig]
    :param trials: The number of trials.
    :type trials: int
    :param base_seed: The seed every trial stream derives from.
    :type base_seed: int
    :param workers: Worker processes; 1 runs in-process.
    :type workers: int
    :param early_stop_failures: Stop at the trial that brings the failures to this number; 0 runs every trial.
    :type early_stop_failures: int
    :param fixed_weight: Flip exactly this many positions per component instead of sampling the channel.
    :type fixed_weight: Optional[int]
    :returns: The counts; equal arguments give equal summaries whatever the worker count.
    :rtype: TrialSummary
    """
    if trials < 1:
        raise InvalidArgumentError(f"trials must be at least 1, got {trials}")
    if workers < 1:
        raise InvalidArgumentError(f"workers must be at least 1, got {workers}")
    config = config or DecoderConfig()
    label, param = _channel_label(channel, fixed_weight)
    task = _TrialTask(code, channel, config, base_seed, fixed_weight)
    counts: Dict[TrialClass, int] = {cls: 0 for cls in TrialClass}
    constituents = [0, 0]
    done = 0
    stopped = False

    def absorb(results: Sequence[Tuple[TrialClass, bool, bool]]) -> bool:
        nonlocal done
        for trial_class, x_failed, z_failed in results:
            counts[trial_class] += 1
            constituents[0] += x_failed
            constituents[1] += z_failed
            done += 1
            failures = counts[TrialClass.DETECTED_ERROR] + counts[TrialClass.UNDETECTED_ERROR]
            if early_stop_failures and failures >= early_stop_failures:
                return True
        return False

    chunks = [(task, start, stop) for start, stop in _chunks(trials)]
    if workers == 1:
        for chunk in chunks:
            if absorb(_run_chunk(chunk)):
                stopped = True
                break
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for offset in range(0, len(chunks), 4 * workers):
                batch = chunks[offset : offset + 4 * workers]
                if any(absorb(results) for results in pool.map(_run_chunk, batch)):
                    stopped = True
                    break

    stopped = stopped and done < trials
    if stopped:
        _LOGGER.warning(
            "%s at %s stopped early after %d failures in %d trials", code.code_id, label, early_stop_failures, done
        )
    summary = TrialSummary(
        code_id=code.code_id,
        channel=label,
        param=param,
        decoder=config.describe(),
        trials=done,
        exact=counts[TrialClass.EXACT_SUCCESS],
        degenerate=counts[TrialClass.DEGENERATE_SUCCESS],
        detected=counts[TrialClass.DETECTED_ERROR],
        undetected=counts[TrialClass.UNDETECTED_ERROR],
        base_seed=base_seed,
        stopped_early=stopped,
        constituent_failures=(constituents[0], constituents[1]),
    )
    _LOGGER.info("%s %s - %d trials, bler %.4g +- %.2g", code.code_id, label, done, summary.bler, summary.two_sigma)
    return summary


def sweep(
    code: CssCode,
    family: str,
    grid: Sequence[float],
    trials: int,
    base_seed: int = 1,
    config: Optional[DecoderConfig] = None,
    *,
    workers: int = 1,
    early_stop_failures: int = 100,
) -> SweepResult:
    """Run :func:`run_trials` at every marginal flip probability of ``grid``.

    Every point reuses ``base_seed``, so neighbouring points see coupled noise.

    :raises InvalidArgumentError: If the grid is empty or not strictly increasing.
    """
    if len(grid) == 0:
        raise InvalidArgumentError("the noise grid is empty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise InvalidArgumentError(f"noise grid must increase strictly, got {list(grid)}")
    points = []
    for f_m in grid:
        channel = channels.channel_at(family, float(f_m))
        points.append(
            run_trials(
                code,
                channel,
                config,
                trials,
                base_seed,
                workers=workers,
                early_stop_failures=early_stop_failures,
            )
        )
    return SweepResult(tuple(points))


@dataclass(frozen=True)
class ThresholdEstimate:
    """The outcome of :func:`find_noise_at_target`.

    :cvar f_m: The estimate, the geometric centre of the final bracket.
    :cvar low: Lower end of the bracket, where the measured rate was at most the target.
    :cvar high: Upper end, where it exceeded the target.
    :cvar target: The requested block error rate.
    :cvar measured_target: The rate actually compared: half the target per constituent for separate decoders.
    :cvar per_constituent: Whether the X constituent alone was measured.
    :cvar trials_used: Trials spent.
    :cvar inconclusive: The budget ran out, or the bracket never left one of its initial ends.
    :cvar points: Every evaluated summary, in evaluation order.
    """

    f_m: float
    low: float
    high: float
    target: float
    measured_target: float
    per_constituent: bool
    trials_used: int
    inconclusive: bool
    points: Tuple[TrialSummary, ...] = field(default_factory=tuple)

    @property
    def relative_width(self) -> float:
        return self.high / self.low - 1.0


def find_noise_at_target(
    code: CssCode,
    family: str,
    config: Optional[DecoderConfig] = None,
    target_bler: float = 1e-1,
    rel_tol: float = 0.1,
    trial_budget: int = 100_000,
    base_seed: int = 1,
    *,
    bracket: Tuple[float, float] = (1e-3, 0.25),
    workers: int = 1,
    early_stop_failures: int = 100,
) -> ThresholdEstimate:
    """Bisect for the marginal flip probability at which the block error rate equals ``target_bler``.

    Midpoints are geometric. When the components are decoded separately (``binary`` or ``unicycle``) each is held
    to half the target and the X constituent is measured. Each point runs ``max(200, ceil(10 / target))`` trials,
    stopping early at ``early_stop_failures`` failures.

    :raises InvalidArgumentError: If the target or the bracket is out of range.
    """
    config = config or DecoderConfig()
    low, high = bracket
    if not 0.0 < target_bler < 1.0:
        raise InvalidArgumentError(f"target must lie in (0, 1), got {target_bler}")
    if not 0.0 < low < high or rel_tol <= 0.0 or trial_budget < 1:
        raise InvalidArgumentError(f"invalid bracket {bracket}, rel_tol {rel_tol} or budget {trial_budget}")
    per_constituent = config.kind in ("binary", "unicycle")
    measured_target = target_bler / 2.0 if per_constituent else target_bler
    point_trials = max(MIN_POINT_TRIALS, math.ceil(10.0 / measured_target))

    used = 0
    points: List[TrialSummary] = []
    budget_hit = False
    while high / low - 1.0 > rel_tol:
        if used + point_trials > trial_budget:
            budget_hit = True
            break
        mid = math.sqrt(low * high)
        summary = run_trials(
            code,
            channels.channel_at(family, mid),
            config,
            point_trials,
            base_seed,
            workers=workers,
            early_stop_failures=early_stop_failures,
        )
        used += summary.trials
        points.append(summary)
        measured = summary.constituent_bler if per_constituent else summary.bler
        if measured > measured_target:
            high = mid
        else:
            low = mid

    at_edge = low == bracket[0] or high == bracket[1]
    inconclusive = budget_hit or at_edge
    if inconclusive:
        _LOGGER.warning(
            "threshold search for %s inconclusive - bracket %.4g..%.4g after %d trials", code.code_id, low, high, used
        )
    return ThresholdEstimate(
        math.sqrt(low * high),
        low,
        high,
        target_bler,
        measured_target,
        per_constituent,
        used,
        inconclusive,
        tuple(points),
    )
