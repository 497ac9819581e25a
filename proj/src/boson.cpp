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

#include "reframe/boson.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace reframe::boson {

namespace {

constexpr double kTailLimit = 1e-10;
// Sectors lighter than this carry no usable conditional state.
constexpr double kNegligibleWeight = 1e-300;

double log_poisson(double nbar, int n) {
    if (nbar == 0.0)
        return n == 0 ? 0.0 : -INFINITY;
    return -nbar + n * std::log(nbar) - std::lgamma(n + 1.0);
}

Block pulse_unitary(int N, const PulseParams &p) {
    const double angle = 0.5 * p.kappa * std::sqrt(static_cast<double>(N)) * p.t;
    const double c = std::cos(angle);
    const Complex mis{0.0, -std::sin(angle)};
    Block u;
    u << c, mis, mis, c;
    return u;
}

}  // namespace

std::vector<double> poisson_weights(double nbar, int n_max) {
    if (nbar < 0.0 || n_max < 0)
        throw StateError("invalid Poisson parameters");
    std::vector<double> p(static_cast<std::size_t>(n_max) + 1, 0.0);
    if (nbar == 0.0) {
        p[0] = 1.0;
        return p;
    }
    // Anchor at the mode and walk outward with p_{n+1} = p_n nbar / (n + 1).
    const int mode = std::min(n_max, static_cast<int>(std::floor(nbar)));
    p[static_cast<std::size_t>(mode)] = std::exp(log_poisson(nbar, mode));
    for (int n = mode; n < n_max; ++n)
        p[static_cast<std::size_t>(n) + 1] = p[static_cast<std::size_t>(n)] * nbar / (n + 1.0);
    for (int n = mode; n > 0; --n)
        p[static_cast<std::size_t>(n) - 1] = p[static_cast<std::size_t>(n)] * n / nbar;
    return p;
}

double poisson_tail(double nbar, int n_max) {
    if (nbar == 0.0)
        return 0.0;
    // Terms are evaluated independently in log space so a start far below
    // the mode cannot underflow the whole sum.
    const int n_end = std::max(n_max + 1, static_cast<int>(std::ceil(nbar + 40.0 * std::sqrt(nbar) + 50.0)));
    double tail = 0.0;
    for (int n = n_max + 1; n <= n_end; ++n)
        tail += std::exp(log_poisson(nbar, n));
    return tail;
}

int default_truncation(double nbar) {
    if (nbar < 0.0)
        throw StateError("nbar must be non-negative");
    int n_max = static_cast<int>(std::ceil(nbar + 10.0 * std::sqrt(nbar)));
    while (poisson_tail(nbar, n_max) >= kTailLimit)
        ++n_max;
    return n_max;
}

BosonRefParams BosonRefParams::with_default_truncation(double nbar, double beta_phase) {
    return {nbar, beta_phase, default_truncation(nbar)};
}

void BosonRefParams::validate() const {
    if (!(nbar >= 0.0) || !std::isfinite(nbar))
        throw StateError("nbar must be non-negative");
    if (n_max < 0 || n_max + 1e-9 < nbar + 10.0 * std::sqrt(nbar) || poisson_tail(nbar, n_max) >= kTailLimit)
        throw StateError("N_max too small");
}

PulseParams PulseParams::quarter_period(double nbar, double kappa) {
    if (!(nbar > 0.0) || !(kappa > 0.0))
        throw StateError("pulse needs nbar > 0 and kappa > 0");
    return {kappa, std::numbers::pi / (2.0 * kappa * std::sqrt(nbar))};
}

FreeEvolutionParams FreeEvolutionParams::for_phase(double phi, double delta_int) {
    return {delta_int, phi / delta_int};
}

double FreeEvolutionParams::phi() const {
    const double two_pi = 2.0 * std::numbers::pi;
    double p = std::fmod(delta_int * tau, two_pi);
    return p < 0.0 ? p + two_pi : p;
}

JcPulseParams JcPulseParams::quarter_period(double nbar, double chi) {
    if (!(nbar > 0.0) || !(chi > 0.0))
        throw StateError("pulse needs nbar > 0 and chi > 0");
    return {chi, std::numbers::pi / (4.0 * chi * std::sqrt(nbar))};
}

BosonLabState::BosonLabState(int n_max)
    : n_max_(n_max), weights_(static_cast<std::size_t>(std::max(n_max, 0)), 0.0),
      blocks_(static_cast<std::size_t>(std::max(n_max, 0)), Block::Zero()) {
    if (n_max < 0)
        throw StateError("n_max must be non-negative");
    for (auto &b : blocks_)
        b(0, 0) = 1.0;
}

BosonLabState BosonLabState::initial(const BosonRefParams &params) {
    params.validate();
    const auto p = poisson_weights(params.nbar, params.n_max);
    BosonLabState w(params.n_max);
    w.vacuum_weight_ = p[0];
    Block a = Block::Zero();
    a(0, 0) = 1.0;
    for (int N = 1; N <= params.n_max; ++N)
        w.set_block(N, p[static_cast<std::size_t>(N)], a);
    return w;
}

void BosonLabState::set_block(int N, double weight, const Block &conditional) {
    if (N < 1 || N > n_max_)
        throw StateError("sector index out of range");
    weights_[static_cast<std::size_t>(N - 1)] = weight;
    blocks_[static_cast<std::size_t>(N - 1)] = conditional;
}

double BosonLabState::total_weight() const {
    double total = vacuum_weight_ + edge_weight_;
    for (double w : weights_)
        total += w;
    return total;
}

void BosonLabState::validate() const {
    const auto &tol = tolerances();
    if (vacuum_weight_ < -tol.state_validity || edge_weight_ < -tol.state_validity)
        throw StateError("invalid state: negative sector weight");
    if (std::abs(total_weight() - 1.0) > tol.state_validity)
        throw StateError("invalid state: sector weights do not sum to 1");
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        if (weights_[i] < -tol.state_validity)
            throw StateError("invalid state: negative sector weight");
        if (weights_[i] <= kNegligibleWeight)
            continue;
        const Block &b = blocks_[i];
        if ((b - b.adjoint()).cwiseAbs().maxCoeff() > tol.atol)
            throw StateError("invalid state: sector block not Hermitian");
        if (std::abs(b.trace().real() - 1.0) > tol.state_validity)
            throw StateError("invalid state: sector block not normalized");
        const double det = (b(0, 0) * b(1, 1) - b(0, 1) * b(1, 0)).real();
        if (b(0, 0).real() < -tol.state_validity || b(1, 1).real() < -tol.state_validity ||
            det < -tol.state_validity)
            throw StateError("invalid state: sector block not positive");
    }
}

DensityOperator BosonLabState::to_dense() const {
    const auto rf = static_cast<Eigen::Index>(n_max_) + 1;
    check_entry_cap(static_cast<std::size_t>(2 * rf));
    Matrix m = Matrix::Zero(2 * rf, 2 * rf);
    m(0, 0) = vacuum_weight_;
    m(rf + n_max_, rf + n_max_) = edge_weight_;
    for (int N = 1; N <= n_max_; ++N) {
        const Eigen::Index idx[2] = {N, rf + N - 1};
        const double w = block_weight(N);
        const Block &b = block(N);
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c)
                m(idx[r], idx[c]) += w * b(r, c);
    }
    return DensityOperator(HilbertSpec({2, static_cast<std::size_t>(rf)}, {"system", "bec"}), std::move(m),
                           total_weight());
}

PureState coherent_state(const BosonRefParams &params) {
    params.validate();
    const auto p = poisson_weights(params.nbar, params.n_max);
    Vector c(params.n_max + 1);
    for (int n = 0; n <= params.n_max; ++n)
        c(n) = std::polar(std::sqrt(p[static_cast<std::size_t>(n)]), n * params.beta_phase);
    // The truncated tail (< 1e-10) is left out rather than renormalized.
    return PureState(HilbertSpec::single(static_cast<std::size_t>(params.n_max) + 1, "bec"), std::move(c),
                     false);
}

BosonLabState twirl(const DensityOperator &rho) {
    const auto &dims = rho.spec().dims();
    if (dims.size() != 2 || dims[0] != 2)
        throw StateError("twirl expects a {system(2), bec} state");
    const int n_max = static_cast<int>(dims[1]) - 1;
    const auto rf = static_cast<Eigen::Index>(dims[1]);
    const Matrix &m = rho.matrix();
    BosonLabState w(n_max);
    w.set_vacuum_weight(m(0, 0).real());
    w.set_edge_weight(m(rf + n_max, rf + n_max).real());
    for (int N = 1; N <= n_max; ++N) {
        const Eigen::Index a = N, b = rf + N - 1;
        Block sub;
        sub << m(a, a), m(a, b), m(b, a), m(b, b);
        const double weight = sub.trace().real();
        if (weight > kNegligibleWeight) {
            w.set_block(N, weight, sub / weight);
        } else {
            Block empty = Block::Zero();
            empty(0, 0) = 1.0;
            w.set_block(N, std::max(weight, 0.0), empty);
        }
    }
    return w;
}

BosonLabState feshbach_pulse(const BosonLabState &w, const PulseParams &p) {
    BosonLabState out = w;
    for (int N = 1; N <= w.n_max(); ++N) {
        const Block u = pulse_unitary(N, p);
        out.set_block(N, w.block_weight(N), u * w.block(N) * u.adjoint());
    }
    return out;
}

BosonLabState free_evolve(const BosonLabState &w, const FreeEvolutionParams &f) {
    const Complex phase = std::polar(1.0, f.delta_int * f.tau);
    BosonLabState out = w;
    for (int N = 1; N <= w.n_max(); ++N) {
        Block b = w.block(N);
        b(0, 1) *= phase;
        b(1, 0) *= std::conj(phase);
        out.set_block(N, w.block_weight(N), b);
    }
    return out;
}

DensityOperator reduced_system(const BosonLabState &w) {
    double p_a = w.vacuum_weight();
    double p_m = w.edge_weight();
    for (int N = 1; N <= w.n_max(); ++N) {
        p_a += w.block_weight(N) * w.block(N)(0, 0).real();
        p_m += w.block_weight(N) * w.block(N)(1, 1).real();
    }
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = p_a;
    m(1, 1) = p_m;
    return DensityOperator(HilbertSpec::single(2, "system"), std::move(m), w.total_weight());
}

std::vector<double> reduced_rf(const BosonLabState &w) {
    const int n_max = w.n_max();
    std::vector<double> q(static_cast<std::size_t>(n_max) + 1, 0.0);
    q[0] += w.vacuum_weight();
    q[static_cast<std::size_t>(n_max)] += w.edge_weight();
    for (int N = 1; N <= n_max; ++N) {
        q[static_cast<std::size_t>(N)] += w.block_weight(N) * w.block(N)(0, 0).real();
        q[static_cast<std::size_t>(N) - 1] += w.block_weight(N) * w.block(N)(1, 1).real();
    }
    return q;
}

namespace {

BosonOutcome run_engine(const BosonRefParams &ref, const FreeEvolutionParams &f, const PulseParams &pulse,
                        LevelLabels labels) {
    BosonOutcome out;
    out.labels = std::move(labels);
    out.stage_states.reserve(4);
    out.stage_states.push_back(BosonLabState::initial(ref));
    out.stage_states.push_back(feshbach_pulse(out.stage_states[0], pulse));
    out.stage_states.push_back(free_evolve(out.stage_states[1], f));
    out.stage_states.push_back(feshbach_pulse(out.stage_states[2], pulse));
    for (const auto &s : out.stage_states) {
        out.rho_S_stages.push_back(reduced_system(s));
        out.rho_rf_stages.push_back(reduced_rf(s));
    }
    const DensityOperator &final_system = out.rho_S_stages[3];
    out.p_A = final_system(0, 0).real();
    out.p_M = final_system(1, 1).real();
    return out;
}

}  // namespace

BosonOutcome run_boson_ramsey(const BosonRefParams &ref, const FreeEvolutionParams &f, const PulseParams &pulse) {
    return run_engine(ref, f, pulse, LevelLabels{"A", "M"});
}

BosonOutcome run_boson_ramsey(const BosonRefParams &ref, const FreeEvolutionParams &f) {
    return run_boson_ramsey(ref, f, PulseParams::quarter_period(ref.nbar));
}

std::array<double, 4> rf_disturbance(const BosonRefParams &ref, const FreeEvolutionParams &f,
                                     const PulseParams &pulse) {
    const BosonOutcome o = run_boson_ramsey(ref, f, pulse);
    const auto initial = poisson_weights(ref.nbar, ref.n_max);
    std::array<double, 4> out{};
    for (std::size_t i = 0; i < 4; ++i)
        out[i] = fidelity_diagonal(initial, o.rho_rf_stages[i]);
    return out;
}

std::array<double, 4> rf_disturbance(const BosonRefParams &ref, const FreeEvolutionParams &f) {
    return rf_disturbance(ref, f, PulseParams::quarter_period(ref.nbar));
}

BosonOutcome jaynes_cummings_ramsey(const BosonRefParams &ref, const FreeEvolutionParams &f,
                                    const JcPulseParams &pulse) {
    return run_engine(ref, f, PulseParams{2.0 * pulse.chi, pulse.t}, LevelLabels{"g", "e"});
}

BosonOutcome jaynes_cummings_ramsey(const BosonRefParams &ref, const FreeEvolutionParams &f) {
    return jaynes_cummings_ramsey(ref, f, JcPulseParams::quarter_period(ref.nbar));
}

double fringe_visibility(double nbar, std::span<const double> phis) {
    const auto ref = BosonRefParams::with_default_truncation(nbar);
    const auto pulse = PulseParams::quarter_period(nbar);
    std::vector<double> p_m;
    p_m.reserve(phis.size());
    for (double phi : phis)
        p_m.push_back(run_boson_ramsey(ref, FreeEvolutionParams::for_phase(phi), pulse).p_M);
    if (p_m.empty())
        return 0.0;
    const auto [lo, hi] = std::minmax_element(p_m.begin(), p_m.end());
    return *hi - *lo;
}

}  // namespace reframe::boson
