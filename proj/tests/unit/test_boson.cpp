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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "reframe/boson.hpp"
#include "support/oracles.hpp"

using namespace reframe;
using std::numbers::pi;

namespace {

Matrix atom_projector() {
    Matrix a = Matrix::Zero(2, 2);
    a(0, 0) = 1.0;
    return a;
}

// Dense laboratory stages from matrix exponentials of the full Hamiltonian.
std::vector<Matrix> dense_stages(double nbar, int n_max, double phi) {
    const auto p = oracle::poisson(nbar, n_max);
    Matrix rf = Matrix::Zero(n_max + 1, n_max + 1);
    for (int n = 0; n <= n_max; ++n)
        rf(n, n) = p[static_cast<std::size_t>(n)];
    std::vector<Matrix> out{oracle::kron(atom_projector(), rf)};
    const Matrix u = oracle::expm_i(oracle::feshbach_hamiltonian(n_max, 1.0), pi / (2 * std::sqrt(nbar)));
    const Matrix v = oracle::expm_i(oracle::detuning_hamiltonian(n_max, 1.0), phi);
    out.push_back(u * out.back() * u.adjoint());
    out.push_back(v * out.back() * v.adjoint());
    out.push_back(u * out.back() * u.adjoint());
    return out;
}

boson::BosonOutcome boson_p(double nbar, double phi) {
    return boson::run_boson_ramsey(boson::BosonRefParams::with_default_truncation(nbar),
                                   boson::FreeEvolutionParams::for_phase(phi));
}

std::vector<double> grid(int n) {
    std::vector<double> g;
    for (int i = 0; i < n; ++i)
        g.push_back(2 * pi * i / (n - 1));
    return g;
}

}  // namespace

TEST_CASE("poisson weights match the direct formula") {
    for (double nbar : {0.5, 4.0, 30.0, 400.0}) {
        const int n_max = boson::default_truncation(nbar);
        const auto p = boson::poisson_weights(nbar, n_max);
        const auto q = oracle::poisson(nbar, n_max);
        double total = 0.0;
        for (int n = 0; n <= n_max; ++n) {
            CHECK(p[static_cast<std::size_t>(n)] == doctest::Approx(q[static_cast<std::size_t>(n)]).epsilon(1e-9));
            total += p[static_cast<std::size_t>(n)];
        }
        CHECK(std::abs(total + boson::poisson_tail(nbar, n_max) - 1.0) < 1e-12);
    }
}

TEST_CASE("default truncation keeps the tail below 1e-10") {
    for (double nbar : {0.1, 1.0, 2.0, 9.0, 25.0, 400.0, 1600.0}) {
        const int n_max = boson::default_truncation(nbar);
        CHECK(n_max >= static_cast<int>(std::ceil(nbar + 10 * std::sqrt(nbar))));
        CHECK(boson::poisson_tail(nbar, n_max) < 1e-10);
        CHECK_NOTHROW(boson::BosonRefParams::with_default_truncation(nbar).validate());
    }
    // At nbar = 1 the plain rule leaves a tail near 8e-10 and must be raised.
    CHECK(boson::poisson_tail(1.0, 11) > 1e-10);
    CHECK(boson::default_truncation(1.0) > 11);
}

TEST_CASE("too small a truncation is rejected") {
    const boson::BosonRefParams p{100.0, 0.0, 150};
    CHECK_THROWS_WITH_AS(p.validate(), "N_max too small", StateError);
}

TEST_CASE("twirl of a coherent state ignores its phase") {
    const double nbar = 6.0;
    const int n_max = boson::default_truncation(nbar);
    const auto reference = boson::BosonLabState::initial({nbar, 0.0, n_max}).to_dense();
    for (double beta_phase : {0.0, 0.9, 2.5}) {
        const auto psi = boson::coherent_state({nbar, beta_phase, n_max});
        const Matrix rf = psi.amplitudes() * psi.amplitudes().adjoint();
        const DensityOperator lab(HilbertSpec({2, static_cast<std::size_t>(n_max) + 1}),
                                  oracle::kron(atom_projector(), rf), psi.norm_squared());
        const auto twirled = boson::twirl(lab).to_dense();
        CHECK(oracle::trace_distance(twirled.matrix(), reference.matrix()) < 1e-12);
    }
}

TEST_CASE("twirl is idempotent and removes inter-sector coherence") {
    std::mt19937_64 rng(21);
    const int n_max = 5;
    const HilbertSpec spec({2, static_cast<std::size_t>(n_max) + 1});
    for (int trial = 0; trial < 5; ++trial) {
        const DensityOperator rho(spec, oracle::random_density(2 * (n_max + 1), rng));
        const auto once = boson::twirl(rho).to_dense();
        const auto twice = boson::twirl(once).to_dense();
        CHECK((once.matrix() - twice.matrix()).cwiseAbs().maxCoeff() < 1e-14);
        // |A>|n} and |M>|n} sit in different sectors.
        for (int n = 0; n <= n_max; ++n)
            CHECK(std::abs(once(static_cast<std::size_t>(n), static_cast<std::size_t>(n_max + 1 + n))) == 0.0);
        CHECK(once.trace() == doctest::Approx(1.0));
    }
}

TEST_CASE("block engine agrees with dense evolution") {
    for (double nbar : {1.0, 4.0, 9.0}) {
        for (int n_max : {boson::default_truncation(nbar), 40}) {
            if (n_max < boson::default_truncation(nbar))
                continue;
            for (double phi : {0.0, 1.1, pi}) {
                const boson::BosonRefParams ref{nbar, 0.0, n_max};
                const auto out = boson::run_boson_ramsey(ref, boson::FreeEvolutionParams::for_phase(phi));
                const auto dense = dense_stages(nbar, n_max, phi);
                for (std::size_t s = 0; s < 4; ++s)
                    CHECK(oracle::trace_distance(out.stage_states[s].to_dense().matrix(), dense[s]) < 1e-9);
            }
        }
    }
}

TEST_CASE("final populations follow the sector average") {
    for (double nbar : {16.0, 100.0}) {
        const auto ref = boson::BosonRefParams::with_default_truncation(nbar);
        const auto p = oracle::poisson(nbar, ref.n_max);
        double contrast = 0.0, total = 0.0;
        for (int N = 0; N <= ref.n_max; ++N) {
            contrast += p[static_cast<std::size_t>(N)] * std::pow(std::sin(pi * std::sqrt(N / nbar) / 2), 2);
            total += p[static_cast<std::size_t>(N)];
        }
        for (double phi : {0.0, 0.7, 2.0, pi}) {
            const auto out = boson::run_boson_ramsey(ref, boson::FreeEvolutionParams::for_phase(phi));
            CHECK(out.p_M == doctest::Approx(contrast * std::pow(std::cos(phi / 2), 2)).epsilon(1e-10));
            CHECK(out.p_A + out.p_M == doctest::Approx(total).epsilon(1e-12));
        }
    }
}

TEST_CASE("reduced system state never carries coherence") {
    const auto ref = boson::BosonRefParams::with_default_truncation(50.0);
    const auto out = boson::run_boson_ramsey(ref, boson::FreeEvolutionParams::for_phase(0.8));
    for (const auto &rho : out.rho_S_stages) {
        CHECK(rho(0, 1) == Complex(0.0, 0.0));
        CHECK(rho(1, 0) == Complex(0.0, 0.0));
    }
}

TEST_CASE("sector weights are invariant under the sequence") {
    const auto ref = boson::BosonRefParams::with_default_truncation(30.0);
    const auto out = boson::run_boson_ramsey(ref, boson::FreeEvolutionParams::for_phase(1.3));
    for (std::size_t s = 1; s < 4; ++s) {
        const auto w0 = out.stage_states[0].block_weights();
        const auto ws = out.stage_states[s].block_weights();
        CHECK(std::equal(w0.begin(), w0.end(), ws.begin(), ws.end()));
        CHECK_NOTHROW(out.stage_states[s].validate());
    }
}

TEST_CASE("cavity coupling reproduces the BEC engine exactly") {
    for (double nbar : {10.0, 100.0}) {
        const auto ref = boson::BosonRefParams::with_default_truncation(nbar);
        for (double phi : {0.0, 1.0, 2.5}) {
            const auto f = boson::FreeEvolutionParams::for_phase(phi);
            const auto a = boson::run_boson_ramsey(ref, f);
            const auto b = boson::jaynes_cummings_ramsey(ref, f);
            CHECK(a.p_A == b.p_A);
            CHECK(a.p_M == b.p_M);
            CHECK(b.labels.lower == "g");
            for (int N = 1; N <= ref.n_max; ++N)
                CHECK(a.stage_states[3].block(N) == b.stage_states[3].block(N));
        }
    }
}

TEST_CASE("visibility grows with the BEC occupation") {
    const auto phis = grid(41);
    double previous = 0.0;
    for (double nbar : {25.0, 100.0, 400.0}) {
        const double v = boson::fringe_visibility(nbar, phis);
        CHECK(v > previous);
        previous = v;
    }
    CHECK(previous > 0.99);
}

TEST_CASE("BEC state is barely disturbed at large occupation") {
    const auto f = boson::FreeEvolutionParams::for_phase(pi / 2);
    std::array<double, 4> previous{0, 0, 0, 0};
    for (double nbar : {25.0, 100.0, 400.0}) {
        const auto fid = boson::rf_disturbance(boson::BosonRefParams::with_default_truncation(nbar), f);
        CHECK(fid[0] == doctest::Approx(1.0).epsilon(1e-9));
        previous[0] = fid[0];
        for (std::size_t s = 1; s < 4; ++s) {
            CHECK(fid[s] > previous[s]);
            previous[s] = fid[s];
        }
    }
    for (double x : previous)
        CHECK(x >= 0.99);
}

TEST_CASE("free evolution phase is reduced modulo 2 pi") {
    const auto f = boson::FreeEvolutionParams::for_phase(-pi / 2);
    CHECK(f.phi() == doctest::Approx(1.5 * pi));
    const auto g = boson::FreeEvolutionParams{2.0, pi};
    CHECK(g.phi() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("coherent amplitudes") {
    const auto one = boson::coherent_state({1.0, 0.0, 12});
    CHECK(std::abs(one.amplitudes()(0) - std::exp(-0.5)) < 1e-15);
    CHECK(std::abs(one.amplitudes()(1) - std::exp(-0.5)) < 1e-15);
    const auto vacuum = boson::coherent_state({0.0, 0.0, 3});
    CHECK(std::abs(vacuum.amplitudes()(0) - 1.0) < 1e-15);
    CHECK(vacuum.amplitudes().tail(3).norm() == 0.0);
}

TEST_CASE("single-sector pulse examples") {
    boson::BosonLabState w(3);
    w.set_block(1, 1.0, boson::Block{{1.0, 0.0}, {0.0, 0.0}});
    // kappa t sqrt(N) / 2 = pi / 2 in sector 1: complete transfer.
    const auto moved = boson::feshbach_pulse(w, {1.0, pi});
    CHECK(std::abs(moved.block(1)(1, 1) - 1.0) < 1e-15);

    boson::BosonLabState vac(3);
    vac.set_vacuum_weight(1.0);
    const auto kept = boson::feshbach_pulse(vac, {1.0, 0.7});
    CHECK(kept.vacuum_weight() == 1.0);
    CHECK(kept.block_weight(1) == 0.0);

    const auto stage1 = boson::feshbach_pulse(boson::BosonLabState::initial({9.0, 0.0, 40}), {1.0, 0.3});
    const auto stage2 = boson::free_evolve(stage1, boson::FreeEvolutionParams::for_phase(0.8));
    for (int N = 1; N <= 40; ++N)
        CHECK(std::abs(stage2.block(N)(0, 1) - stage1.block(N)(0, 1) * std::polar(1.0, 0.8)) < 1e-15);
    const auto same = boson::free_evolve(stage1, boson::FreeEvolutionParams::for_phase(2 * pi));
    for (int N = 1; N <= 40; ++N)
        CHECK((same.block(N) - stage1.block(N)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("fringe extremes at nbar = 400") {
    CHECK(boson_p(400.0, pi).p_A >= 0.97);
    CHECK(boson_p(400.0, 0.0).p_M >= 0.97);
    const auto jc = boson::jaynes_cummings_ramsey(boson::BosonRefParams::with_default_truncation(400.0),
                                                  boson::FreeEvolutionParams::for_phase(pi / 2));
    CHECK(std::abs(jc.p_A - 0.5) <= 0.03);
}

TEST_CASE("finite-occupation fringe stays within 2 / sqrt(nbar)") {
    for (double nbar : {25.0, 100.0}) {
        double worst = 0.0;
        for (double phi : grid(65))
            worst = std::max(worst, std::abs(boson_p(nbar, phi).p_M - std::pow(std::cos(phi / 2), 2)));
        CHECK(worst <= 2 / std::sqrt(nbar));
        // The dense cross-check confirms the block values this bound is measured on.
        const int n_max = boson::default_truncation(nbar);
        const auto dense = dense_stages(nbar, n_max, 0.0);
        const Matrix d = dense[3];
        double p_M = 0.0;
        for (int n = 0; n <= n_max; ++n)
            p_M += d(n_max + 1 + n, n_max + 1 + n).real();
        CHECK(std::abs(p_M - boson_p(nbar, 0.0).p_M) < 1e-9);
    }
}

TEST_CASE("disturbance examples") {
    const auto f = boson::FreeEvolutionParams::for_phase(pi / 2);
    const auto small = boson::rf_disturbance(boson::BosonRefParams::with_default_truncation(4.0), f);
    const auto large = boson::rf_disturbance(boson::BosonRefParams::with_default_truncation(400.0), f);
    const double loss_small = 1 - *std::min_element(small.begin(), small.end());
    const double loss_large = 1 - *std::min_element(large.begin(), large.end());
    CHECK(loss_small > 10 * loss_large);
    const auto idle = boson::rf_disturbance(boson::BosonRefParams::with_default_truncation(50.0), f, {1.0, 0.0});
    for (double x : idle)
        CHECK(x == doctest::Approx(1.0).epsilon(1e-12));
    const auto still = boson::jaynes_cummings_ramsey(boson::BosonRefParams::with_default_truncation(50.0),
                                                     boson::FreeEvolutionParams::for_phase(1.0), {0.5, 0.0});
    CHECK(still.p_A == doctest::Approx(1.0).epsilon(1e-12));
}
