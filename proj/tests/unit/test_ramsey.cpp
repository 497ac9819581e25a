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

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "reframe/ramsey.hpp"
#include "support/oracles.hpp"

using namespace reframe;
using std::numbers::pi;

namespace {

// exp(-i H t) for H = (omega / 2) sigma_x, by matrix exponential.
oracle::Matrix pulse_matrix(double omega, double t) {
    oracle::Matrix h = oracle::Matrix::Zero(2, 2);
    h(0, 1) = h(1, 0) = 0.5 * omega;
    return oracle::expm_i(h, t);
}

}  // namespace

TEST_CASE("fringe follows sin^2(phi / 2)") {
    for (int i = 0; i <= 200; ++i) {
        const double phi = 2 * pi * i / 200;
        const auto r = ramsey::run_ramsey(phi);
        CHECK(std::abs(r.p_g - std::pow(std::sin(phi / 2), 2)) < 1e-12);
        CHECK(std::abs(r.p_g + r.p_e - 1.0) < 1e-12);
    }
}

TEST_CASE("sequence equals the composed matrix product") {
    for (double omega : {0.5, 1.0, 3.0}) {
        for (double phi : {0.0, 0.4, 2.0, pi}) {
            const auto params = ramsey::RamseyParams::for_phase(phi, omega);
            oracle::Matrix phase = oracle::Matrix::Identity(2, 2);
            phase(1, 1) = std::polar(1.0, -phi);
            const oracle::Matrix u = pulse_matrix(omega, params.pulse_time);
            const Eigen::VectorXcd final_state = u * phase * u * Eigen::Vector2cd(1.0, 0.0);
            const auto r = ramsey::run_ramsey(params);
            CHECK(std::abs(r.stages[3].c_g - final_state(0)) < 1e-12);
            CHECK(std::abs(r.stages[3].c_e - final_state(1)) < 1e-12);
        }
    }
}

TEST_CASE("pulse examples") {
    const auto half = ramsey::ramsey_pulse(ramsey::TwoLevelState::ground(), 1.0, pi / 2);
    CHECK(std::abs(half.c_g - std::complex<double>(1 / std::sqrt(2.0), 0)) < 1e-15);
    CHECK(std::abs(half.c_e - std::complex<double>(0, -1 / std::sqrt(2.0))) < 1e-15);
    const auto r0 = ramsey::run_ramsey(0.0);
    CHECK(r0.p_e == doctest::Approx(1.0).epsilon(1e-15));
    const auto rpi = ramsey::run_ramsey(pi);
    CHECK(rpi.p_g == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("free phase is periodic") {
    const ramsey::TwoLevelState s{{0.6, 0.0}, {0.0, 0.8}};
    const auto t = ramsey::free_phase(s, 2 * pi);
    CHECK(std::abs(t.c_e - s.c_e) < 1e-15);
    CHECK(ramsey::free_phase(s, 0.0).c_e == s.c_e);
}

TEST_CASE("params reduce the phase and validate") {
    const auto p = ramsey::RamseyParams::for_phase(5 * pi, 2.0, 0.5);
    CHECK(p.pulse_time == doctest::Approx(pi / 4));
    CHECK(p.phi() == doctest::Approx(pi));
    CHECK_THROWS_AS(ramsey::RamseyParams::for_phase(1.0, 0.0), StateError);
    const ramsey::TwoLevelState bad{{1.0, 0.0}, {0.1, 0.0}};
    CHECK_THROWS_AS(bad.validate(), StateError);
    CHECK_NOTHROW(ramsey::TwoLevelState::excited().validate());
}

TEST_CASE("visibility of a sampled fringe") {
    std::vector<double> phis;
    for (int i = 0; i < 64; ++i)
        phis.push_back(2 * pi * i / 64);
    const auto sweep = ramsey::fringe_sweep(phis);
    std::vector<double> p;
    for (const auto &pt : sweep)
        p.push_back(pt.p_e);
    CHECK(ramsey::visibility(p) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ramsey::visibility(std::vector<double>{}) == 0.0);
}

TEST_CASE("worked examples") {
    const auto g = ramsey::TwoLevelState::ground();
    const auto full = ramsey::ramsey_pulse(g, 1.0, pi);
    CHECK(std::abs(full.c_g) < 1e-15);
    CHECK(std::abs(full.c_e - std::complex<double>(0, -1)) < 1e-15);
    CHECK(ramsey::ramsey_pulse(g, 1.0, 0.0).c_g == std::complex<double>(1, 0));
    const auto flipped = ramsey::free_phase(ramsey::TwoLevelState::excited(), pi);
    CHECK(std::abs(flipped.c_e + 1.0) < 1e-15);

    const std::vector<double> phis{0.0, pi / 2, pi};
    const auto sweep = ramsey::fringe_sweep(phis);
    REQUIRE(sweep.size() == 3);
    CHECK(sweep[0].p_g == doctest::Approx(0.0));
    CHECK(sweep[1].p_g == doctest::Approx(0.5));
    CHECK(sweep[2].p_g == doctest::Approx(1.0));
    CHECK(ramsey::fringe_sweep(std::vector<double>{}).empty());
}
