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

#include "reframe/core_states.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace reframe {

const Tolerances &tolerances() {
    static const Tolerances tol{};
    return tol;
}

HilbertSpec::HilbertSpec(std::vector<std::size_t> dims, std::vector<std::string> labels)
    : dims_(std::move(dims)), labels_(std::move(labels)) {
    if (labels_.empty())
        labels_.resize(dims_.size());
    if (labels_.size() != dims_.size())
        throw StateError("factor label count does not match factor count");
    for (std::size_t d : dims_) {
        if (d == 0)
            throw StateError("factor dimensions must be >= 1");
        if (dimension_ > tolerances().max_entries / d)
            throw StateError("state too large");
        dimension_ *= d;
    }
}

HilbertSpec HilbertSpec::single(std::size_t dim, std::string label) {
    return HilbertSpec({dim}, {std::move(label)});
}

HilbertSpec HilbertSpec::concat(const HilbertSpec &other) const {
    auto dims = dims_;
    auto labels = labels_;
    dims.insert(dims.end(), other.dims_.begin(), other.dims_.end());
    labels.insert(labels.end(), other.labels_.begin(), other.labels_.end());
    return HilbertSpec(std::move(dims), std::move(labels));
}

HilbertSpec HilbertSpec::subset(std::span<const std::size_t> factors) const {
    std::vector<std::size_t> dims;
    std::vector<std::string> labels;
    for (std::size_t f : factors) {
        dims.push_back(dims_.at(f));
        labels.push_back(labels_.at(f));
    }
    return HilbertSpec(std::move(dims), std::move(labels));
}

PureState::PureState(HilbertSpec spec, Vector amplitudes, bool normalized)
    : spec_(std::move(spec)), amplitudes_(std::move(amplitudes)), normalized_(normalized) {
    if (static_cast<std::size_t>(amplitudes_.size()) != spec_.dimension())
        throw StateError("amplitude count does not match Hilbert space dimension");
    if (normalized_ && std::abs(amplitudes_.squaredNorm() - 1.0) > tolerances().atol)
        throw StateError("invalid state: pure state is not normalized");
}

void check_entry_cap(std::size_t dimension) {
    if (dimension != 0 && dimension > tolerances().max_entries / dimension)
        throw StateError("state too large");
}

DensityOperator::DensityOperator(HilbertSpec spec, Matrix matrix, double expected_trace)
    : spec_(std::move(spec)), matrix_(std::move(matrix)) {
    const auto n = static_cast<Eigen::Index>(spec_.dimension());
    check_entry_cap(spec_.dimension());
    if (matrix_.rows() != n || matrix_.cols() != n)
        throw StateError("matrix shape does not match Hilbert space dimension");
    const auto &tol = tolerances();
    if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > tol.atol)
        throw StateError("invalid state: not Hermitian");
    if (std::abs(trace() - expected_trace) > tol.state_validity)
        throw StateError("invalid state: trace " + std::to_string(trace()) + " != " +
                         std::to_string(expected_trace));
    // Symmetrize away rounding before the spectral check.
    matrix_ = 0.5 * (matrix_ + matrix_.adjoint()).eval();
    bool diagonal = true;
    for (Eigen::Index i = 0; i < n && diagonal; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (i != j && matrix_(i, j) != Complex{}) {
                diagonal = false;
                break;
            }
    double min_eig;
    if (diagonal)
        min_eig = n ? matrix_.diagonal().real().minCoeff() : 0.0;
    else
        min_eig = Eigen::SelfAdjointEigenSolver<Matrix>(matrix_, Eigen::EigenvaluesOnly)
                      .eigenvalues()
                      .minCoeff();
    if (min_eig < -tol.state_validity)
        throw StateError("invalid state: negative eigenvalue " + std::to_string(min_eig));
}

DensityOperator DensityOperator::from_pure(const PureState &psi) {
    const Vector &a = psi.amplitudes();
    return DensityOperator(psi.spec(), a * a.adjoint(), psi.norm_squared());
}

DensityOperator DensityOperator::maximally_mixed(const HilbertSpec &spec) {
    const auto n = static_cast<Eigen::Index>(spec.dimension());
    return DensityOperator(spec, Matrix::Identity(n, n) / static_cast<double>(n));
}

DensityOperator DensityOperator::diagonal(const HilbertSpec &spec, std::span<const double> probs) {
    if (probs.size() != spec.dimension())
        throw StateError("population count does not match Hilbert space dimension");
    const auto n = static_cast<Eigen::Index>(probs.size());
    Matrix m = Matrix::Zero(n, n);
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        m(i, i) = probs[static_cast<std::size_t>(i)];
        total += probs[static_cast<std::size_t>(i)];
    }
    return DensityOperator(spec, std::move(m), total);
}

double DensityOperator::expectation(const Matrix &op) const {
    return (matrix_ * op).trace().real();
}

double DensityOperator::purity() const {
    return (matrix_ * matrix_).trace().real();
}

DensityOperator tensor(const DensityOperator &a, const DensityOperator &b) {
    HilbertSpec spec = a.spec().concat(b.spec());
    check_entry_cap(spec.dimension());
    const Matrix &ma = a.matrix();
    const Matrix &mb = b.matrix();
    const Eigen::Index nb = mb.rows();
    Matrix out(ma.rows() * nb, ma.cols() * nb);
    for (Eigen::Index i = 0; i < ma.rows(); ++i)
        for (Eigen::Index j = 0; j < ma.cols(); ++j)
            out.block(i * nb, j * nb, nb, nb) = ma(i, j) * mb;
    return DensityOperator(std::move(spec), std::move(out), a.trace() * b.trace());
}

PureState tensor(const PureState &a, const PureState &b) {
    HilbertSpec spec = a.spec().concat(b.spec());
    const Vector &va = a.amplitudes();
    const Vector &vb = b.amplitudes();
    Vector out(va.size() * vb.size());
    for (Eigen::Index i = 0; i < va.size(); ++i)
        out.segment(i * vb.size(), vb.size()) = va(i) * vb;
    return PureState(std::move(spec), std::move(out), a.normalized() && b.normalized());
}

DensityOperator partial_trace(const DensityOperator &rho, std::span<const std::size_t> keep) {
    const HilbertSpec &spec = rho.spec();
    if (keep.empty())
        throw StateError("must keep at least one factor");
    std::vector<std::size_t> kept(keep.begin(), keep.end());
    std::sort(kept.begin(), kept.end());
    kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
    if (kept.back() >= spec.factor_count())
        throw StateError("factor index out of range");

    std::vector<bool> is_kept(spec.factor_count(), false);
    for (std::size_t f : kept)
        is_kept[f] = true;

    const std::size_t dim = spec.dimension();
    std::size_t kept_dim = 1;
    for (std::size_t f : kept)
        kept_dim *= spec.dims()[f];
    const std::size_t traced_dim = dim / kept_dim;

    // Split every full index into (kept index, traced index).
    std::vector<std::size_t> kept_index(dim), traced_index(dim);
    std::vector<std::size_t> digits(spec.factor_count());
    for (std::size_t i = 0; i < dim; ++i) {
        std::size_t rem = i;
        for (std::size_t f = spec.factor_count(); f-- > 0;) {
            digits[f] = rem % spec.dims()[f];
            rem /= spec.dims()[f];
        }
        std::size_t k = 0, t = 0;
        for (std::size_t f = 0; f < spec.factor_count(); ++f) {
            if (is_kept[f])
                k = k * spec.dims()[f] + digits[f];
            else
                t = t * spec.dims()[f] + digits[f];
        }
        kept_index[i] = k;
        traced_index[i] = t;
    }

    std::vector<std::vector<std::size_t>> by_traced(traced_dim);
    for (std::size_t i = 0; i < dim; ++i)
        by_traced[traced_index[i]].push_back(i);

    const Matrix &m = rho.matrix();
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(kept_dim), static_cast<Eigen::Index>(kept_dim));
    for (const auto &group : by_traced)
        for (std::size_t i : group)
            for (std::size_t j : group)
                out(static_cast<Eigen::Index>(kept_index[i]), static_cast<Eigen::Index>(kept_index[j])) +=
                    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    return DensityOperator(spec.subset(kept), std::move(out), rho.trace());
}

DensityOperator partial_trace(const DensityOperator &rho, std::initializer_list<std::size_t> keep) {
    return partial_trace(rho, std::span<const std::size_t>(keep.begin(), keep.size()));
}

Matrix psd_sqrt(const Matrix &m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * ev.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

Matrix unitary_from_hamiltonian(const Matrix &h, double t) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    Vector phases = (es.eigenvalues() * (-t)).unaryExpr([](double x) { return std::polar(1.0, x); });
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

double half_trace_norm(const Matrix &hermitian) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

namespace {

void require_same_spec(const DensityOperator &rho, const DensityOperator &sigma) {
    if (!(rho.spec() == sigma.spec()))
        throw StateError("states are defined on different Hilbert spaces");
}

}  // namespace

double fidelity(const DensityOperator &rho, const DensityOperator &sigma) {
    require_same_spec(rho, sigma);
    const Matrix root = psd_sqrt(rho.matrix());
    Matrix inner = root * sigma.matrix() * root;
    inner = 0.5 * (inner + inner.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> es(inner, Eigen::EigenvaluesOnly);
    const double f = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    return std::clamp(f, 0.0, 1.0);
}

double trace_distance(const DensityOperator &rho, const DensityOperator &sigma) {
    require_same_spec(rho, sigma);
    return std::clamp(half_trace_norm(rho.matrix() - sigma.matrix()), 0.0, 1.0);
}

double fidelity_diagonal(std::span<const double> r, std::span<const double> s) {
    if (r.size() != s.size())
        throw StateError("states are defined on different Hilbert spaces");
    const double slack = tolerances().state_validity;
    double f = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i] < -slack || s[i] < -slack)
            throw StateError("invalid state: negative population");
        f += std::sqrt(std::max(r[i], 0.0) * std::max(s[i], 0.0));
    }
    return std::clamp(f, 0.0, 1.0);
}

double trace_distance_diagonal(std::span<const double> r, std::span<const double> s) {
    if (r.size() != s.size())
        throw StateError("states are defined on different Hilbert spaces");
    double d = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i)
        d += std::abs(r[i] - s[i]);
    return std::clamp(0.5 * d, 0.0, 1.0);
}

}  // namespace reframe
