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

#ifndef REFRAME_CORE_STATES_HPP_
#define REFRAME_CORE_STATES_HPP_

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace reframe {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Raised for any violated state invariant or malformed request
/// ("state too large", "invalid state", ...).
class StateError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Numerical tolerances shared by every module.
struct Tolerances {
    double atol = 1e-10;            ///< Hermiticity and norm checks.
    double state_validity = 1e-9;   ///< Trace and negative-eigenvalue slack.
    std::size_t max_entries = std::size_t{1} << 22;  ///< Dense matrix cap.
};

const Tolerances &tolerances();

/// Ordered tensor-factor layout of a composite Hilbert space.
class HilbertSpec {
  public:
    HilbertSpec() = default;
    HilbertSpec(std::vector<std::size_t> dims, std::vector<std::string> labels = {});

    static HilbertSpec single(std::size_t dim, std::string label = "");

    std::size_t dimension() const { return dimension_; }
    std::size_t factor_count() const { return dims_.size(); }
    const std::vector<std::size_t> &dims() const { return dims_; }
    const std::vector<std::string> &labels() const { return labels_; }

    HilbertSpec concat(const HilbertSpec &other) const;
    HilbertSpec subset(std::span<const std::size_t> factors) const;

    bool operator==(const HilbertSpec &other) const { return dims_ == other.dims_; }

  private:
    std::vector<std::size_t> dims_;
    std::vector<std::string> labels_;
    std::size_t dimension_ = 1;
};

/// Pure state. Unnormalized branches are allowed but must say so.
class PureState {
  public:
    PureState(HilbertSpec spec, Vector amplitudes, bool normalized = true);

    const HilbertSpec &spec() const { return spec_; }
    const Vector &amplitudes() const { return amplitudes_; }
    bool normalized() const { return normalized_; }
    double norm_squared() const { return amplitudes_.squaredNorm(); }

  private:
    HilbertSpec spec_;
    Vector amplitudes_;
    bool normalized_;
};

/// Dense density operator. Construction validates Hermiticity, trace
/// (against `expected_trace`, 1 for a normalized state) and positivity.
class DensityOperator {
  public:
    DensityOperator(HilbertSpec spec, Matrix matrix, double expected_trace = 1.0);

    static DensityOperator from_pure(const PureState &psi);
    static DensityOperator maximally_mixed(const HilbertSpec &spec);
    /// Diagonal state with the given populations.
    static DensityOperator diagonal(const HilbertSpec &spec, std::span<const double> probs);

    const HilbertSpec &spec() const { return spec_; }
    const Matrix &matrix() const { return matrix_; }
    std::size_t dimension() const { return spec_.dimension(); }
    double trace() const { return matrix_.trace().real(); }
    Complex operator()(std::size_t i, std::size_t j) const { return matrix_(i, j); }

    /// Tr(rho P) for a Hermitian operator P.
    double expectation(const Matrix &op) const;
    double purity() const;

  private:
    HilbertSpec spec_;
    Matrix matrix_;
};

void check_entry_cap(std::size_t dimension);

DensityOperator tensor(const DensityOperator &a, const DensityOperator &b);
PureState tensor(const PureState &a, const PureState &b);

/// Reduced state on the factors listed in `keep` (kept in ascending order).
DensityOperator partial_trace(const DensityOperator &rho, std::span<const std::size_t> keep);
DensityOperator partial_trace(const DensityOperator &rho, std::initializer_list<std::size_t> keep);

/// Uhlmann fidelity Tr sqrt(sqrt(rho) sigma sqrt(rho)), in [0, 1].
double fidelity(const DensityOperator &rho, const DensityOperator &sigma);
/// Half the trace norm of rho - sigma.
double trace_distance(const DensityOperator &rho, const DensityOperator &sigma);

/// Fidelity of two states diagonal in the same basis: sum_i sqrt(r_i s_i).
double fidelity_diagonal(std::span<const double> r, std::span<const double> s);
double trace_distance_diagonal(std::span<const double> r, std::span<const double> s);

/// Hermitian PSD square root with eigenvalues clamped at zero.
Matrix psd_sqrt(const Matrix &m);
/// exp(-i H t) for Hermitian H, via eigendecomposition.
Matrix unitary_from_hamiltonian(const Matrix &h, double t);
/// Half the trace norm of a Hermitian matrix.
double half_trace_norm(const Matrix &hermitian);

}  // namespace reframe

#endif  // REFRAME_CORE_STATES_HPP_
