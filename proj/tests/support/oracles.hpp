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

// Independent reference computations for the tests.  Nothing here calls
// the engines under test: Hamiltonians are built from ladder operators and
// exponentiated with Eigen's MatrixFunctions module.

#ifndef REFRAME_TESTS_ORACLES_HPP_
#define REFRAME_TESTS_ORACLES_HPP_

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

namespace oracle {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

inline Matrix expm_i(const Matrix &h, double t) {
    const Matrix a = Complex(0.0, -t) * h;
    return a.exp();
}

inline Matrix kron(const Matrix &a, const Matrix &b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Trace norm / 2 via singular values; independent of the library's route.
inline double trace_distance(const Matrix &a, const Matrix &b) {
    return 0.5 * Eigen::JacobiSVD<Matrix>(a - b).singularValues().sum();
}

// ------------------------------------------------------------------ bosons

// Truncated annihilation operator on n_max + 1 Fock states.
inline Matrix annihilation(int n_max) {
    Matrix a = Matrix::Zero(n_max + 1, n_max + 1);
    for (int n = 1; n <= n_max; ++n)
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

// (kappa / 2)(|M><A| (x) b + h.c.) with |A> = 0, |M> = 1.
inline Matrix feshbach_hamiltonian(int n_max, double kappa) {
    Matrix lower = Matrix::Zero(2, 2);
    lower(1, 0) = 1.0;  // |M><A|
    const Matrix h = kron(lower, annihilation(n_max));
    return 0.5 * kappa * (h + h.adjoint());
}

// Delta |M><M| (x) 1.
inline Matrix detuning_hamiltonian(int n_max, double delta) {
    Matrix m = Matrix::Zero(2, 2);
    m(1, 1) = delta;
    return kron(m, Matrix::Identity(n_max + 1, n_max + 1));
}

inline std::vector<double> poisson(double nbar, int n_max) {
    std::vector<double> p;
    for (int n = 0; n <= n_max; ++n)
        p.push_back(std::exp(-nbar + n * std::log(nbar) - std::lgamma(n + 1.0)));
    return p;
}

// ---------------------------------------------------------------- fermions

// Qubit operators on `n` factors, factor 0 most significant.
inline Matrix embed(const Matrix &op, int site, int n) {
    Matrix out = Matrix::Identity(1, 1);
    for (int k = 0; k < n; ++k)
        out = kron(out, k == site ? op : Matrix(Matrix::Identity(2, 2)));
    return out;
}

inline Matrix lowering() {
    Matrix s = Matrix::Zero(2, 2);
    s(0, 1) = 1.0;  // |0><1|
    return s;
}

inline Matrix parity_z() {
    Matrix z = Matrix::Zero(2, 2);
    z(0, 0) = 1.0;
    z(1, 1) = -1.0;
    return z;
}

// Jordan-Wigner annihilator for fermionic factor `site`; fermionic
// factors are [first, n) and strings run over those before `site`.
inline Matrix jw_annihilator(int site, int first, int n, bool strings) {
    Matrix out = Matrix::Identity(1, 1);
    for (int k = 0; k < n; ++k) {
        Matrix f = Matrix::Identity(2, 2);
        if (k == site)
            f = lowering();
        else if (strings && k >= first && k < site)
            f = parity_z();
        out = kron(out, f);
    }
    return out;
}

// kappa/2 (b_M^dag f_j f_A + h.c.) on (M, A, modes 1..K); boson M is a
// 0/1 qubit, A and the modes are fermionic.
inline Matrix fermion_pulse_hamiltonian(int K, int j, double kappa, bool strings) {
    const int n = K + 2;
    const Matrix b = embed(lowering(), 0, n);
    const Matrix fa = jw_annihilator(1, 1, n, strings);
    const Matrix fj = jw_annihilator(1 + j, 1, n, strings);
    const Matrix term = b.adjoint() * fj * fa;
    return 0.5 * kappa * (term + term.adjoint());
}

// Binomial probabilities from the weighted Pascal recursion.
inline std::vector<double> pascal_binomial(int K, double p) {
    std::vector<double> row{1.0};
    for (int k = 1; k <= K; ++k) {
        std::vector<double> next(static_cast<std::size_t>(k) + 1, 0.0);
        for (int n = 0; n < k; ++n) {
            next[static_cast<std::size_t>(n)] += row[static_cast<std::size_t>(n)] * (1.0 - p);
            next[static_cast<std::size_t>(n) + 1] += row[static_cast<std::size_t>(n)] * p;
        }
        row = std::move(next);
    }
    return row;
}

// ------------------------------------------------------------------ random

inline Matrix random_density(int dim, std::mt19937_64 &rng, int rank = -1) {
    std::normal_distribution<double> g;
    const int r = rank < 0 ? dim : rank;
    Matrix a(dim, r);
    for (int i = 0; i < dim; ++i)
        for (int k = 0; k < r; ++k)
            a(i, k) = Complex(g(rng), g(rng));
    Matrix rho = a * a.adjoint();
    rho /= rho.trace().real();
    return 0.5 * (rho + rho.adjoint());
}

inline Eigen::VectorXcd random_pure(int dim, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    Eigen::VectorXcd v(dim);
    for (int i = 0; i < dim; ++i)
        v(i) = Complex(g(rng), g(rng));
    return v / v.norm();
}

}  // namespace oracle

#endif  // REFRAME_TESTS_ORACLES_HPP_
