# Copyright 2026 The reframe Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Interferometry with internal quantum reference frames."""

from ._reframe import (
    ConfigError,
    StateError,
    binom,
    compare,
    default_truncation,
    fermion_relational_check,
    jaynes_cummings_ramsey,
    postselect_and_fidelity,
    relational_protocol_check,
    rf_disturbance,
    run_boson_ramsey,
    run_fermion_ramsey,
    run_ramsey,
    run_sweep,
    two_system_phase_test,
)

__all__ = [
    "ConfigError",
    "StateError",
    "binom",
    "compare",
    "default_truncation",
    "fermion_relational_check",
    "jaynes_cummings_ramsey",
    "postselect_and_fidelity",
    "relational_protocol_check",
    "rf_disturbance",
    "run_boson_ramsey",
    "run_fermion_ramsey",
    "run_ramsey",
    "run_sweep",
    "two_system_phase_test",
]
