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

"""The definition of the application configuration."""
from css_ldpc.configuration_wizard import ConfigWizard, configclass, configfield

DECODER_KINDS = ("binary", "quaternary", "unicycle")


@configclass
class DecoderConfig(ConfigWizard):
    """Configuration of the sum-product decoders.

    :cvar kind: Which decoder runs.
    :cvar max_iter: The iteration cap.
    """

    kind: str = configfield(
        "kind",
        default="binary",
        help_txt="The decoder: binary, quaternary or unicycle.",
    )
    max_iter: int = configfield(
        "maxIter",
        default=100,
        help_txt="The maximum number of sum-product iterations.",
    )

    def describe(self) -> str:
        return f"{self.kind}:max_iter={self.max_iter}"


@configclass
class SimulationConfig(ConfigWizard):
    """Configuration of Monte Carlo runs."""

    trials: int = configfield(
        "trials",
        default=1000,
        help_txt="Trials per noise point.",
    )
    workers: int = configfield(
        "workers",
        default=1,
        help_txt="Worker processes; results do not depend on it.",
    )
    early_stop_failures: int = configfield(
        "earlyStopFailures",
        default=100,
        help_txt="Stop a sweep point after this many failures, 0 to disable.",
    )
    seed: int = configfield(
        "seed",
        default=1,
        help_txt="Base seed of every random stream.",
    )


@configclass
class SearchConfig(ConfigWizard):
    """Budgets of the combinatorial searches."""

    difference_set_budget: int = configfield(
        "differenceSetBudget",
        default=1_000_000,
        help_txt="Attempts allowed for unique-difference set searches.",
    )
    matched_budget: int = configfield(
        "matchedBudget",
        default=10_000,
        help_txt="Attempts allowed for matched collection searches.",
    )
    regular_budget: int = configfield(
        "regularBudget",
        default=200_000,
        help_txt="Metropolis proposals allowed for the regular matrix search.",
    )
    audit_effort: int = configfield(
        "auditEffort",
        default=200,
        help_txt="Randomized trials of the low-weight codeword audit.",
    )


@configclass
class LogConfig(ConfigWizard):
    """Logging destinations."""

    file: str = configfield(
        "file",
        default="",
        help_txt="Also write the log to this file; empty logs to stderr only.",
    )


@configclass
class AppConfig(ConfigWizard):
    """Configuration class for the application.

    :cvar decoder: The decoder configuration.
    :type decoder: DecoderConfig
    :cvar simulation: The Monte Carlo configuration.
    :type simulation: SimulationConfig
    :cvar search: The search budgets.
    :type search: SearchConfig
    :cvar log: The logging configuration.
    :type log: LogConfig
    """

    decoder: DecoderConfig = configfield(
        "decoder",
        env=False,
        help_txt="The decoder configuration.",
        default_factory=DecoderConfig,
    )
    simulation: SimulationConfig = configfield(
        "simulation",
        env=False,
        help_txt="The Monte Carlo configuration.",
        default_factory=SimulationConfig,
    )
    search: SearchConfig = configfield(
        "search",
        env=False,
        help_txt="Budgets of the difference-set, matched-collection and regular-matrix searches.",
        default_factory=SearchConfig,
    )
    log: LogConfig = configfield(
        "log",
        env=False,
        help_txt="The logging configuration.",
        default_factory=LogConfig,
    )
