// Copyright 2026 The reframe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef REFRAME_RAMSEY_HPP_
#define REFRAME_RAMSEY_HPP_

#include <array>
#include <span>
#include <vector>

#include "reframe/core_states.hpp"

/// Two-level Ramsey interferometer driven by an external classical field.
/// This is the reference every internal-frame experiment converges to.
namespace reframe::ramsey {

struct TwoLevelState {
    Complex c_g{1.0, 0.0};
    Complex c_e{0.0, 0.0};

    static TwoLevelState ground() { return {}; }
    static TwoLevelState excited() { return {{0.0, 0.0}, {1.0, 0.0}}; }

    double norm_squared() const { return std::norm(c_g) + std::norm(c_e); }
    /// Throws StateError unless |c_g|^2 + |c_e|^2 = 1 within 1e-12.
    void validate() const;
};

struct RamseyParams {
    double omega = 1.0;
    double pulse_time = 0.0;  ///< pi / (2 omega) for a pi/2-pulse
    double delta = 1.0;
    double tau = 0.0;

    static RamseyParams for_phase(double phi, double omega = 1.0, double delta = 1.0);
    double phi() const;  ///< delta * tau, reduced to [0, 2 pi)
};

/// exp(-i (omega t / 2) sigma_x) in the {g, e} basis.
TwoLevelState ramsey_pulse(const TwoLevelState &s, double omega, double t);
/// Multiplies c_e by exp(-i phi).
TwoLevelState free_phase(const TwoLevelState &s, double phi);

struct RamseyOutcome {
    double p_g = 0.0;
    double p_e = 0.0;
    std::array<TwoLevelState, 4> stages{};
};

/// pi/2-pulse, free phase, pi/2-pulse on |g>.
RamseyOutcome run_ramsey(double phi);
RamseyOutcome run_ramsey(const RamseyParams &params);

struct FringePoint {
    double phi = 0.0;
    double p_g = 0.0;
    double p_e = 0.0;
};

std::vector<FringePoint> fringe_sweep(std::span<const double> phis);

/// max - min over a sampled fringe.
double visibility(std::span<const double> probabilities);

}  // namespace reframe::ramsey

#endif  // REFRAME_RAMSEY_HPP_
