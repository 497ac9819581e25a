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

#include "reframe/relational.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace reframe::relational {

namespace {

constexpr double kVacuumLimit = 1e-9;

// Half trace norm of a Hermitian 2x2 matrix from its closed-form spectrum.
double half_trace_norm_2x2(const Block &h) {
    const double mean = 0.5 * (h(0, 0).real() + h(1, 1).real());
    const double half_gap = 0.5 * (h(0, 0).real() - h(1, 1).real());
    const double radius = std::sqrt(half_gap * half_gap + std::norm(h(0, 1)));
    return 0.5 * (std::abs(mean + radius) + std::abs(mean - radius));
}

double distance(const Block &a, const Block &b) {
    return half_trace_norm_2x2(a - b);
}

Block rotation(double angle) {
    const double c = std::cos(angle);
    const Complex mis{0.0, -std::sin(angle)};
    Block u;
    u << c, mis, mis, c;
    return u;
}

Block atom_projector() {
    Block a = Block::Zero();
    a(0, 0) = 1.0;
    return a;
}

Block molecule_projector() {
    Block m = Block::Zero();
    m(1, 1) = 1.0;
    return m;
}

}  // namespace

RelationalState::RelationalState(const Block &rho) : rho_(rho) {
    const auto &tol = tolerances();
    if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > tol.atol)
        throw StateError("invalid state: relational state not Hermitian");
    if (std::abs(rho_.trace().real() - 1.0) > tol.state_validity)
        throw StateError("invalid state: relational state trace != 1");
    const double det = (rho_(0, 0) * rho_(1, 1) - rho_(0, 1) * rho_(1, 0)).real();
    if (rho_(0, 0).real() < -tol.state_validity || rho_(1, 1).real() < -tol.state_validity ||
        det < -tol.state_validity)
        throw StateError("invalid state: relational state not positive");
}

RelationalState RelationalState::pure(Complex a, Complex m) {
    Eigen::Vector2cd v(a, m);
    return RelationalState(v * v.adjoint());
}

double RelationalState::purity() const {
    return (rho_ * rho_).trace().real();
}

DensityOperator RelationalState::to_density() const {
    return DensityOperator(HilbertSpec::single(2, "rel"), Matrix(rho_));
}

DensityOperator RelationalDecomposition::joint_dense() const {
    const auto n_gl = static_cast<Eigen::Index>(conditional.size());
    check_entry_cap(static_cast<std::size_t>(2 * n_gl));
    Matrix m = Matrix::Zero(2 * n_gl, 2 * n_gl);
    for (Eigen::Index g = 0; g < n_gl; ++g) {
        const double w = rho_gl.weights[static_cast<std::size_t>(g)];
        const Block &b = conditional[static_cast<std::size_t>(g)];
        for (Eigen::Index r = 0; r < 2; ++r)
            for (Eigen::Index c = 0; c < 2; ++c)
                m(r * n_gl + g, c * n_gl + g) = w * b(r, c);
    }
    return DensityOperator(HilbertSpec({2, static_cast<std::size_t>(n_gl)}, {"rel", "gl"}), std::move(m));
}

RelationalDecomposition to_relational(const boson::BosonLabState &w) {
    if (w.vacuum_weight() > kVacuumLimit)
        throw StateError("map undefined on |A>|0}");
    const int n_max = w.n_max();

    RelationalDecomposition out;
    out.conditional.reserve(static_cast<std::size_t>(n_max) + 1);
    out.rho_gl.weights.reserve(static_cast<std::size_t>(n_max) + 1);
    Block rel = Block::Zero();
    for (int N = 1; N <= n_max; ++N) {
        out.conditional.push_back(w.block(N));
        out.rho_gl.weights.push_back(w.block_weight(N));
        rel += w.block_weight(N) * w.block(N);
    }
    // N = n_max + 1 holds only |M>|n_max}.
    out.conditional.push_back(molecule_projector());
    out.rho_gl.weights.push_back(w.edge_weight());
    rel += w.edge_weight() * molecule_projector();

    // Normalizing by the accumulated trace keeps pure stage-0 states exact.
    const double total = rel.trace().real();
    rel /= total;
    for (double &p : out.rho_gl.weights)
        p /= total;

    out.rho_rel = RelationalState(rel);
    double defect = 0.0;
    for (std::size_t i = 0; i < out.conditional.size(); ++i)
        if (out.rho_gl.weights[i] > 0.0)
            defect += out.rho_gl.weights[i] * distance(out.conditional[i], rel);
    out.product_defect = defect;
    return out;
}

DensityOperator relabel_dense(const DensityOperator &lab) {
    const auto &dims = lab.spec().dims();
    if (dims.size() != 2 || dims[0] != 2)
        throw StateError("relabel_dense expects a {system(2), bec} state");
    const auto rf = static_cast<Eigen::Index>(dims[1]);
    const Matrix &m = lab.matrix();
    if (m.row(0).cwiseAbs().maxCoeff() > kVacuumLimit)
        throw StateError("map undefined on |A>|0}");

    // Lab index of the vector mapped to rel index r (-1: outside truncation).
    auto source = [rf](Eigen::Index r) -> Eigen::Index {
        const Eigen::Index s = r / rf, g = r % rf;  // g = N - 1
        if (s == 0)
            return g + 1 < rf ? g + 1 : -1;  // |A>|N}
        return rf + g;                       // |M>|N-1}
    };
    Matrix out = Matrix::Zero(2 * rf, 2 * rf);
    for (Eigen::Index r = 0; r < 2 * rf; ++r) {
        const Eigen::Index i = source(r);
        if (i < 0)
            continue;
        for (Eigen::Index c = 0; c < 2 * rf; ++c) {
            const Eigen::Index j = source(c);
            if (j >= 0)
                out(r, c) = m(i, j);
        }
    }
    return DensityOperator(HilbertSpec({2, static_cast<std::size_t>(rf)}, {"rel", "gl"}), std::move(out),
                           lab.trace() - m(0, 0).real());
}

RelationalState effective_rel_channel(const RelationalState &rho, double nbar, double kappa_t) {
    const int n_max = boson::default_truncation(nbar);
    const auto p = boson::poisson_weights(nbar, n_max);
    Block acc = Block::Zero();
    double total = 0.0;
    for (int N = 0; N <= n_max; ++N) {
        const double w = p[static_cast<std::size_t>(N)];
        if (w == 0.0)
            continue;
        const Block u = rotation(0.5 * kappa_t * std::sqrt(static_cast<double>(N)));
        acc += w * (u * rho.matrix() * u.adjoint());
        total += w;
    }
    return RelationalState(acc / total);
}

RelationalState external_ramsey_pulse(const RelationalState &rho, double nbar, double kappa_t) {
    const Block u = rotation(0.5 * kappa_t * std::sqrt(nbar));
    return RelationalState(u * rho.matrix() * u.adjoint());
}

std::array<RelationalState, 4> ideal_stages(double phi) {
    const double r = 1.0 / std::numbers::sqrt2;
    const Complex mi{0.0, -1.0};
    return {RelationalState(atom_projector()), RelationalState::pure(r, mi * r),
            RelationalState::pure(r, mi * std::polar(r, -phi)),
            RelationalState::pure(std::sin(0.5 * phi), -std::cos(0.5 * phi))};
}

ProtocolCheck relational_protocol_check(double nbar, double phi) {
    const auto ref = boson::BosonRefParams::with_default_truncation(nbar);
    const auto outcome = boson::run_boson_ramsey(ref, boson::FreeEvolutionParams::for_phase(phi));
    const auto ideal = ideal_stages(phi);
    ProtocolCheck check;
    for (std::size_t i = 0; i < 4; ++i) {
        const auto dec = to_relational(outcome.stage_states[i]);
        check.deviations[i] = distance(dec.rho_rel.matrix(), ideal[i].matrix());
        check.system_coherence[i] = std::abs(outcome.rho_S_stages[i](0, 1));
        check.relational_coherence[i] = std::abs(dec.rho_rel.coherence());
        check.product_defects[i] = dec.product_defect;
    }
    check.worst = *std::max_element(check.deviations.begin(), check.deviations.end());
    return check;
}

}  // namespace reframe::relational
