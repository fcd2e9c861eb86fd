# Copyright 2026 The rba Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Response-based approachability: solvers, target sets and scenario runs."""

from ._rba import (
    CertificationError,
    Error,
    SolverError,
    TargetSet,
    ValidationError,
    echo,
    regret_matching,
    run,
    solve_zero_sum,
    sweep,
)

__all__ = [
    "CertificationError",
    "Error",
    "SolverError",
    "TargetSet",
    "ValidationError",
    "echo",
    "regret_matching",
    "run",
    "solve_zero_sum",
    "sweep",
]
