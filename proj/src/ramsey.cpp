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

#include "reframe/ramsey.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace reframe::ramsey {

void TwoLevelState::validate() const {
    if (std::abs(norm_squared() - 1.0) > 1e-12)
        throw StateError("invalid state: two-level state is not normalized");
}

RamseyParams RamseyParams::for_phase(double phi, double omega, double delta) {
    if (!(omega > 0.0))
        throw StateError("Rabi rate must be positive");
    return {omega, std::numbers::pi / (2.0 * omega), delta, phi / delta};
}

double RamseyParams::phi() const {
    const double two_pi = 2.0 * std::numbers::pi;
    double p = std::fmod(delta * tau, two_pi);
    return p < 0.0 ? p + two_pi : p;
}

TwoLevelState ramsey_pulse(const TwoLevelState &s, double omega, double t) {
    const double angle = 0.5 * omega * t;
    const double c = std::cos(angle);
    const Complex mis{0.0, -std::sin(angle)};
    return {c * s.c_g + mis * s.c_e, mis * s.c_g + c * s.c_e};
}

TwoLevelState free_phase(const TwoLevelState &s, double phi) {
    return {s.c_g, s.c_e * std::polar(1.0, -phi)};
}

RamseyOutcome run_ramsey(const RamseyParams &params) {
    RamseyOutcome out;
    out.stages[0] = TwoLevelState::ground();
    out.stages[1] = ramsey_pulse(out.stages[0], params.omega, params.pulse_time);
    out.stages[2] = free_phase(out.stages[1], params.delta * params.tau);
    out.stages[3] = ramsey_pulse(out.stages[2], params.omega, params.pulse_time);
    out.p_g = std::norm(out.stages[3].c_g);
    out.p_e = std::norm(out.stages[3].c_e);
    return out;
}

RamseyOutcome run_ramsey(double phi) {
    return run_ramsey(RamseyParams::for_phase(phi));
}

std::vector<FringePoint> fringe_sweep(std::span<const double> phis) {
    std::vector<FringePoint> out;
    out.reserve(phis.size());
    for (double phi : phis) {
        const RamseyOutcome r = run_ramsey(phi);
        out.push_back({phi, r.p_g, r.p_e});
    }
    return out;
}

double visibility(std::span<const double> probabilities) {
    if (probabilities.empty())
        return 0.0;
    const auto [lo, hi] = std::minmax_element(probabilities.begin(), probabilities.end());
    return *hi - *lo;
}

}  // namespace reframe::ramsey
