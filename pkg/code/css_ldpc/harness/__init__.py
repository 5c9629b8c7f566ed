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

"""Monte Carlo simulation, threshold search and the file formats the command line reads and writes."""
from css_ldpc.harness.files import (
    load_code,
    read_alist,
    read_metadata,
    read_sweep_csv,
    save_code,
    write_alist,
    write_metadata,
    write_sweep_csv,
)
from css_ldpc.harness.simulation import (
    GENERATOR_NAME,
    SweepResult,
    ThresholdEstimate,
    TrialSummary,
    find_noise_at_target,
    run_trials,
    sweep,
    trial_rng,
)

__all__ = [
    "GENERATOR_NAME",
    "SweepResult",
    "ThresholdEstimate",
    "TrialSummary",
    "find_noise_at_target",
    "load_code",
    "read_alist",
    "read_metadata",
    "read_sweep_csv",
    "run_trials",
    "save_code",
    "sweep",
    "trial_rng",
    "write_alist",
    "write_metadata",
    "write_sweep_csv",
]
