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

#include "reframe/fermion.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include <Eigen/SparseCore>

#include "reframe/boson.hpp"
#include "reframe/relational.hpp"

namespace reframe::fermion {

namespace {

constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;
constexpr double kEmptyBranch = 1e-14;
constexpr Complex kMinusI{0.0, -1.0};

using Index = std::size_t;
using Sparse = Eigen::SparseMatrix<Complex>;

// Pulse and phase unitaries have at most two entries per row, so the
// conjugations below go through sparse products.
Matrix conjugate(const Sparse &v, const Matrix &rho) {
    const Matrix left = v * rho;
    return left * Sparse(v.adjoint());
}

void require_dense(int K) {
    if (K < 1 || K > kMaxDenseModes)
        throw StateError("state too large: dense path limited to K <= " + std::to_string(kMaxDenseModes));
}

Index mode_bit(int K, int j) { return Index{1} << (K - j); }
Index atom_bit(int K) { return Index{1} << K; }
Index molecule_bit(int K) { return Index{1} << (K + 1); }
Index ref_mask(int K) { return (Index{1} << K) - 1; }

double occupancy_prob(const FermionRefParams &p, bool occupied) {
    return occupied ? p.occupation() : p.epsilon;
}

// Product probability of the reference configuration `config`, skipping
// mode `skip` (0 for none).
double config_weight(const FermionRefParams &p, Index config, int skip) {
    double w = 1.0;
    for (int j = 1; j <= p.K; ++j)
        if (j != skip)
            w *= occupancy_prob(p, (config & mode_bit(p.K, j)) != 0);
    return w;
}

// Sign of the coupling between |A>|1}_j |config} and |M>|0}_j |config}.
double coupling_sign(int K, int j, Index config, SignConvention signs) {
    if (signs == SignConvention::none)
        return 1.0;
    const Index before = ref_mask(K) ^ ((mode_bit(K, j) << 1) - 1);
    return (std::popcount(config & before) & 1) ? -1.0 : 1.0;
}

Matrix phase_unitary(int K, double phi) {
    const Index dim = Index{1} << (K + 2);
    Vector d = Vector::Ones(static_cast<Eigen::Index>(dim));
    const Complex ph = std::polar(1.0, -phi);
    for (Index i = 0; i < dim; ++i)
        if (i & molecule_bit(K))
            d(static_cast<Eigen::Index>(i)) = ph;
    return d.asDiagonal();
}

Sparse sequence_unitary(int K, int j, int stage, double phi, SignConvention signs) {
    const auto dim = static_cast<Eigen::Index>(Index{1} << (K + 2));
    Sparse v(dim, dim);
    v.setIdentity();
    if (stage >= 1)
        v = Sparse(pulse_unitary(K, j, signs).sparseView()) * v;
    if (stage >= 2)
        v = Sparse(phase_unitary(K, phi).sparseView()) * v;
    if (stage >= 3)
        v = Sparse(pulse_unitary(K, j, signs).sparseView()) * v;
    return v;
}

void check_stage(int stage) {
    if (stage < 0 || stage > 3)
        throw StateError("stage must be in 0..3");
}

// [eps |A><A| (x) |0}{0|_j + (1 - eps)|psi><psi|] (x) sigma on the other modes.
Matrix placement(const FermionRefParams &p, Complex alpha, Complex beta, int j) {
    const int K = p.K;
    const auto dim = static_cast<Eigen::Index>(Index{1} << (K + 2));
    Matrix m = Matrix::Zero(dim, dim);
    const Index bj = mode_bit(K, j);
    const Complex amp[2] = {alpha, beta};
    for (Index g = 0; g <= ref_mask(K); ++g) {
        if (g & bj)
            continue;
        const double w = config_weight(p, g, j);
        const auto vac = static_cast<Eigen::Index>(atom_bit(K) | g);
        m(vac, vac) += p.epsilon * w;
        const Eigen::Index idx[2] = {static_cast<Eigen::Index>(atom_bit(K) | g | bj),
                                     static_cast<Eigen::Index>(molecule_bit(K) | g)};
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c)
                m(idx[r], idx[c]) += p.occupation() * w * amp[r] * std::conj(amp[c]);
    }
    return m;
}

// Index maps for every permutation of the K reference modes.
std::vector<std::vector<Index>> permutation_maps(int K, int extra_bits) {
    std::vector<int> perm(static_cast<std::size_t>(K));
    std::iota(perm.begin(), perm.end(), 0);
    const Index dim = Index{1} << (K + extra_bits);
    std::vector<std::vector<Index>> maps;
    do {
        std::vector<Index> map(dim);
        for (Index i = 0; i < dim; ++i) {
            Index out = i & ~ref_mask(K);
            for (int m = 0; m < K; ++m)
                if (i & (Index{1} << m))
                    out |= Index{1} << perm[static_cast<std::size_t>(m)];
            map[i] = out;
        }
        maps.push_back(std::move(map));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return maps;
}

Matrix symmetrize(const Matrix &rho, int K, int extra_bits) {
    const auto maps = permutation_maps(K, extra_bits);
    Matrix out = Matrix::Zero(rho.rows(), rho.cols());
    for (const auto &map : maps)
        for (Eigen::Index c = 0; c < rho.cols(); ++c)
            for (Eigen::Index r = 0; r < rho.rows(); ++r)
                out(static_cast<Eigen::Index>(map[static_cast<Index>(r)]),
                    static_cast<Eigen::Index>(map[static_cast<Index>(c)])) += rho(r, c);
    return out / static_cast<double>(maps.size());
}

double binomial_coefficient(int K, int n) {
    double c = 1.0;
    for (int i = 1; i <= n; ++i)
        c = c * (K - n + i) / i;
    return c;
}

std::array<FermionLabState, 4> compressed_stages(const FermionRefParams &params, double phi) {
    std::array<FermionLabState, 4> s;
    s[0] = FermionLabState::initial(params);
    s[1] = random_mode_pi2(s[0]);
    s[2] = free_phase_M(s[1], phi);
    s[3] = random_mode_pi2(s[2]);
    return s;
}

}  // namespace

// ------------------------------------------------------------- binomials

double binom(int K, int n, double p) {
    if (K < 0 || n < 0 || n > K)
        throw StateError("invalid index");
    if (!(p >= 0.0 && p <= 1.0))
        throw StateError("probability must lie in [0, 1]");
    if (p == 0.0)
        return n == 0 ? 1.0 : 0.0;
    if (p == 1.0)
        return n == K ? 1.0 : 0.0;
    const double log_c = std::lgamma(K + 1.0) - std::lgamma(n + 1.0) - std::lgamma(K - n + 1.0);
    return std::exp(log_c + n * std::log(p) + (K - n) * std::log1p(-p));
}

std::vector<double> binomial_pmf(int K, double p) {
    if (K < 0)
        throw StateError("invalid index");
    if (!(p >= 0.0 && p <= 1.0))
        throw StateError("probability must lie in [0, 1]");
    std::vector<double> v(static_cast<std::size_t>(K) + 1, 0.0);
    if (p == 0.0 || p == 1.0) {
        v[p == 0.0 ? 0 : static_cast<std::size_t>(K)] = 1.0;
        return v;
    }
    // Unit value at the mode, ratios outward, then normalize.
    const int mode = std::clamp(static_cast<int>(std::floor((K + 1) * p)), 0, K);
    const double odds = p / (1.0 - p);
    v[static_cast<std::size_t>(mode)] = 1.0;
    for (int n = mode; n < K; ++n)
        v[static_cast<std::size_t>(n) + 1] = v[static_cast<std::size_t>(n)] * (K - n) / (n + 1.0) * odds;
    for (int n = mode; n > 0; --n)
        v[static_cast<std::size_t>(n) - 1] = v[static_cast<std::size_t>(n)] * n / (K - n + 1.0) / odds;
    const double total = std::accumulate(v.begin(), v.end(), 0.0);
    for (double &x : v)
        x /= total;
    return v;
}

double binom_at_mean(int K, double p) {
    const double mean = K * p;
    const int lo = std::clamp(static_cast<int>(std::floor(mean)), 0, K);
    const int hi = std::clamp(static_cast<int>(std::ceil(mean)), 0, K);
    return std::max(binom(K, lo, p), binom(K, hi, p));
}

void FermionRefParams::validate() const {
    if (K < 1)
        throw StateError("invalid reference parameters: K must be >= 1");
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
        throw StateError("invalid reference parameters: epsilon must lie in [0, 1]");
}

// ----------------------------------------------------------------- dense

HilbertSpec dense_spec(int K) {
    require_dense(K);
    std::vector<std::size_t> dims(static_cast<std::size_t>(K) + 2, 2);
    std::vector<std::string> labels{"M", "A"};
    for (int j = 1; j <= K; ++j)
        labels.push_back("f" + std::to_string(j));
    return HilbertSpec(std::move(dims), std::move(labels));
}

std::size_t dense_index(int K, int n_M, int n_A, std::span<const int> modes) {
    if (static_cast<int>(modes.size()) != K)
        throw StateError("invalid index");
    Index i = (n_M ? molecule_bit(K) : 0) | (n_A ? atom_bit(K) : 0);
    for (int j = 1; j <= K; ++j)
        if (modes[static_cast<std::size_t>(j) - 1])
            i |= mode_bit(K, j);
    return i;
}

DenseFermionLab DenseFermionLab::initial(const FermionRefParams &params) {
    params.validate();
    const int K = params.K;
    const HilbertSpec spec = dense_spec(K);
    std::vector<double> probs(spec.dimension(), 0.0);
    for (Index g = 0; g <= ref_mask(K); ++g)
        probs[atom_bit(K) | g] = config_weight(params, g, 0);
    return {K, DensityOperator::diagonal(spec, probs)};
}

double DenseFermionLab::p_A() const {
    double p = 0.0;
    for (Index i = 0; i < rho.dimension(); ++i)
        if ((i & atom_bit(K)) && !(i & molecule_bit(K)))
            p += rho(i, i).real();
    return p;
}

double DenseFermionLab::p_M() const {
    double p = 0.0;
    for (Index i = 0; i < rho.dimension(); ++i)
        if (i & molecule_bit(K))
            p += rho(i, i).real();
    return p;
}

Matrix pulse_unitary(int K, int j, SignConvention signs) {
    require_dense(K);
    if (j < 1 || j > K)
        throw StateError("invalid mode index " + std::to_string(j));
    const auto dim = static_cast<Eigen::Index>(Index{1} << (K + 2));
    Matrix u = Matrix::Identity(dim, dim);
    const Index bj = mode_bit(K, j);
    for (Index g = 0; g <= ref_mask(K); ++g) {
        if (!(g & bj))
            continue;
        const auto b = static_cast<Eigen::Index>(atom_bit(K) | g);
        const auto p = static_cast<Eigen::Index>(molecule_bit(K) | (g & ~bj));
        const Complex off = kMinusI * (coupling_sign(K, j, g, signs) * kInvSqrt2);
        u(b, b) = kInvSqrt2;
        u(p, p) = kInvSqrt2;
        u(b, p) = off;
        u(p, b) = off;
    }
    return u;
}

DenseFermionLab pi2_pulse_on_mode(const DenseFermionLab &w, int j, SignConvention signs) {
    const Matrix u = pulse_unitary(w.K, j, signs);
    return {w.K, DensityOperator(w.rho.spec(), conjugate(Sparse(u.sparseView()), w.rho.matrix()))};
}

DenseFermionLab random_mode_pi2(const DenseFermionLab &w, SignConvention signs) {
    Matrix acc = Matrix::Zero(w.rho.matrix().rows(), w.rho.matrix().cols());
    for (int j = 1; j <= w.K; ++j) {
        const Matrix u = pulse_unitary(w.K, j, signs);
        acc += conjugate(Sparse(u.sparseView()), w.rho.matrix());
    }
    return {w.K, DensityOperator(w.rho.spec(), acc / static_cast<double>(w.K))};
}

DenseFermionLab free_phase_M(const DenseFermionLab &w, double phi) {
    const Matrix u = phase_unitary(w.K, phi);
    return {w.K, DensityOperator(w.rho.spec(), conjugate(Sparse(u.sparseView()), w.rho.matrix()))};
}

DenseFermionLab dense_mode_term(const FermionRefParams &params, double phi, int stage, int j,
                                SignConvention signs) {
    check_stage(stage);
    const DenseFermionLab w0 = DenseFermionLab::initial(params);
    const Sparse v = sequence_unitary(params.K, j, stage, phi, signs);
    return {params.K, DensityOperator(w0.rho.spec(), conjugate(v, w0.rho.matrix()))};
}

DenseFermionLab dense_protocol_stage(const FermionRefParams &params, double phi, int stage,
                                     SignConvention signs) {
    check_stage(stage);
    const DenseFermionLab w0 = DenseFermionLab::initial(params);
    Matrix acc = Matrix::Zero(w0.rho.matrix().rows(), w0.rho.matrix().cols());
    for (int j = 1; j <= params.K; ++j) {
        const Sparse v = sequence_unitary(params.K, j, stage, phi, signs);
        acc += conjugate(v, w0.rho.matrix());
    }
    return {params.K, DensityOperator(w0.rho.spec(), acc / static_cast<double>(params.K))};
}

DenseFermionLab shuffled_construction(const FermionRefParams &params, double phi, int stage) {
    check_stage(stage);
    const FermionLabState s = compressed_stages(params, phi)[static_cast<std::size_t>(stage)];
    const FermionLabState tracked(params, s.alpha(), s.beta(), false);
    return shuffle(tracked.expand_to_dense());
}

DenseFermionLab shuffle(const DenseFermionLab &w) {
    require_dense(w.K);
    return {w.K, DensityOperator(w.rho.spec(), symmetrize(w.rho.matrix(), w.K, 2))};
}

DensityOperator shuffle_rf(const DensityOperator &rf) {
    const int K = static_cast<int>(rf.spec().factor_count());
    require_dense(K);
    if (rf.dimension() != (Index{1} << K))
        throw StateError("shuffle_rf expects K two-level factors");
    return DensityOperator(rf.spec(), symmetrize(rf.matrix(), K, 0), rf.trace());
}

SymmetricRfState SymmetricRfState::from_diagonal(std::span<const double> populations) {
    const Index dim = populations.size();
    if (dim == 0 || !std::has_single_bit(dim))
        throw StateError("population vector length must be a power of two");
    SymmetricRfState s;
    s.K = std::countr_zero(dim);
    s.number_probs.assign(static_cast<std::size_t>(s.K) + 1, 0.0);
    for (Index c = 0; c < dim; ++c)
        s.number_probs[static_cast<std::size_t>(std::popcount(c))] += populations[c];
    return s;
}

std::vector<double> SymmetricRfState::to_diagonal() const {
    require_dense(K);
    std::vector<double> pops(Index{1} << K);
    for (Index c = 0; c < pops.size(); ++c) {
        const int n = std::popcount(c);
        pops[c] = number_probs[static_cast<std::size_t>(n)] / binomial_coefficient(K, n);
    }
    return pops;
}

// ------------------------------------------------------------ compressed

FermionLabState::FermionLabState(FermionRefParams params, Complex alpha, Complex beta, bool shuffled)
    : params_(params), alpha_(alpha), beta_(beta), shuffled_(shuffled) {
    params_.validate();
    if (std::abs(std::norm(alpha_) + std::norm(beta_) - 1.0) > 1e-12)
        throw StateError("invalid state: active branch not normalized");
}

FermionLabState FermionLabState::initial(const FermionRefParams &params) {
    return FermionLabState(params, 1.0, 0.0, false);
}

std::vector<double> FermionLabState::spectator_distribution() const {
    return binomial_pmf(params_.K - 1, params_.occupation());
}

double FermionLabState::p_A() const {
    return params_.epsilon + active_weight() * std::norm(alpha_);
}

double FermionLabState::p_M() const {
    return active_weight() * std::norm(beta_);
}

DenseFermionLab FermionLabState::expand_to_dense() const {
    const int K = params_.K;
    const HilbertSpec spec = dense_spec(K);
    Matrix m;
    if (shuffled_) {
        m = placement(params_, alpha_, beta_, 1);
        for (int j = 2; j <= K; ++j)
            m += placement(params_, alpha_, beta_, j);
        m /= static_cast<double>(K);
    } else {
        m = placement(params_, alpha_, beta_, 1);
    }
    return {K, DensityOperator(spec, std::move(m))};
}

FermionLabState random_mode_pi2(const FermionLabState &w) {
    const Complex a = kInvSqrt2 * (w.alpha() + kMinusI * w.beta());
    const Complex b = kInvSqrt2 * (kMinusI * w.alpha() + w.beta());
    return FermionLabState(w.params(), a, b, true);
}

FermionLabState free_phase_M(const FermionLabState &w, double phi) {
    return FermionLabState(w.params(), w.alpha(), w.beta() * std::polar(1.0, -phi), w.shuffled());
}

FermionOutcome run_fermion_ramsey(const FermionRefParams &params, double phi) {
    params.validate();
    FermionOutcome out;
    out.stage_states = compressed_stages(params, phi);
    out.p_A = out.stage_states[3].p_A();
    out.p_M = out.stage_states[3].p_M();
    // p_A is affine in cos(phi), so its extremes sit at 0 and pi.
    const double lo = compressed_stages(params, 0.0)[3].p_A();
    const double hi = compressed_stages(params, std::numbers::pi)[3].p_A();
    out.visibility = std::abs(hi - lo);
    return out;
}

DenseFermionOutcome run_fermion_ramsey_dense(const FermionRefParams &params, double phi, SignConvention signs) {
    params.validate();
    DenseFermionOutcome out;
    for (int stage = 0; stage <= 3; ++stage)
        out.stage_states.push_back(dense_protocol_stage(params, phi, stage, signs));
    out.p_A = out.stage_states.back().p_A();
    out.p_M = out.stage_states.back().p_M();
    return out;
}

// --------------------------------------------------------- postselection

PostselectionResult postselect_stage(const FermionLabState &w) {
    const FermionRefParams &p = w.params();
    const int K = p.K;
    const double q = p.occupation();
    PostselectionResult r;
    r.p_A = w.p_A();
    r.p_M = w.p_M();
    if (r.p_A < kEmptyBranch || r.p_M < kEmptyBranch)
        throw StateError("empty branch");

    const std::vector<double> spect = w.spectator_distribution();  // n = 0..K-1
    const auto size = static_cast<std::size_t>(K) + 1;
    r.rho_M_rf.assign(size, 0.0);
    r.rho_tilde_A_rf.assign(size, 0.0);
    r.rho_A_rf.assign(size, 0.0);
    const double active_A = w.active_weight() * std::norm(w.alpha());
    for (std::size_t n = 0; n < spect.size(); ++n) {
        r.rho_M_rf[n] = spect[n];
        r.rho_tilde_A_rf[n + 1] = spect[n];
    }
    for (std::size_t n = 0; n < size; ++n)
        r.rho_A_rf[n] = (p.epsilon * r.rho_M_rf[n] + active_A * r.rho_tilde_A_rf[n]) / r.p_A;
    r.rho_0_rf = binomial_pmf(K, q);

    r.F_AM = fidelity_diagonal(r.rho_tilde_A_rf, r.rho_M_rf);
    r.F_A0 = fidelity_diagonal(r.rho_0_rf, r.rho_A_rf);
    r.F_M0 = fidelity_diagonal(r.rho_0_rf, r.rho_M_rf);
    r.bound = 1.0 - binom(K - 1, 0, q) - binom(K - 1, K - 1, q) - binom_at_mean(K - 1, q);
    return r;
}

PostselectionResult postselect_and_fidelity(const FermionRefParams &params, double phi) {
    return postselect_stage(run_fermion_ramsey(params, phi).stage_states[3]);
}

// ------------------------------------------------------------ relational

FermionRelationalCheck fermion_relational_check(const FermionRefParams &params, double phi,
                                                SignConvention signs) {
    params.validate();
    const auto ideal = relational::ideal_stages(phi);
    const auto stages = compressed_stages(params, phi);
    FermionRelationalCheck out;
    for (int stage = 0; stage <= 3; ++stage) {
        Eigen::Matrix2cd acc = Eigen::Matrix2cd::Zero();
        if (params.K <= kMaxDenseModes) {
            const int K = params.K;
            for (int j = 1; j <= K; ++j) {
                const Matrix w = dense_mode_term(params, phi, stage, j, signs).rho.matrix();
                const Index bj = mode_bit(K, j);
                for (Index g = 0; g <= ref_mask(K); ++g) {
                    if (g & bj)
                        continue;
                    const auto ia = static_cast<Eigen::Index>(atom_bit(K) | g | bj);
                    const auto im = static_cast<Eigen::Index>(molecule_bit(K) | g);
                    const double s = coupling_sign(K, j, g | bj, signs);
                    acc(0, 0) += w(ia, ia);
                    acc(0, 1) += s * w(ia, im);
                    acc(1, 0) += s * w(im, ia);
                    acc(1, 1) += w(im, im);
                }
            }
            acc /= static_cast<double>(K);
        } else {
            const auto &st = stages[static_cast<std::size_t>(stage)];
            const Eigen::Vector2cd v(st.alpha(), st.beta());
            acc = st.active_weight() * (v * v.adjoint());
        }
        const double weight = acc.trace().real();
        if (weight < kEmptyBranch)
            throw StateError("empty branch");
        const Eigen::Matrix2cd rel = acc / weight;
        Eigen::Matrix2cd with_vacancy = acc;
        with_vacancy(0, 0) += 1.0 - weight;
        const auto &target = ideal[static_cast<std::size_t>(stage)].matrix();
        const auto i = static_cast<std::size_t>(stage);
        out.paired_weight[i] = weight;
        out.deviations[i] = half_trace_norm(Matrix(rel - target));
        out.deviations_vacancy_as_atom[i] = half_trace_norm(Matrix(with_vacancy - target));
    }
    out.worst = *std::max_element(out.deviations.begin(), out.deviations.end());
    out.worst_vacancy_as_atom =
        *std::max_element(out.deviations_vacancy_as_atom.begin(), out.deviations_vacancy_as_atom.end());
    return out;
}

// ----------------------------------------------------------- two systems

namespace {

// Two systems (A = 0, M = 1) and n_modes fermion modes, index
// s1 * 2^(n+1) + s2 * 2^n + mode bits.  mode_of[s] is the mode system s
// couples to (0-based, most significant first).
struct TwoSystemFermionModel {
    int n_modes;
    std::array<int, 2> mode_of;

    Eigen::Index dim() const { return Eigen::Index{4} << n_modes; }
    Index system_bit(int s) const { return Index{1} << (n_modes + 1 - s); }
    Index mode_bit_of(int s) const { return Index{1} << (n_modes - 1 - mode_of[static_cast<std::size_t>(s)]); }

    Matrix pulse(int s) const {
        Matrix u = Matrix::Identity(dim(), dim());
        const Index sb = system_bit(s), mb = mode_bit_of(s);
        for (Index i = 0; i < static_cast<Index>(dim()); ++i) {
            if ((i & sb) || !(i & mb))
                continue;  // needs system s in |A> and its mode occupied
            const auto a = static_cast<Eigen::Index>(i);
            const auto m = static_cast<Eigen::Index>((i | sb) & ~mb);
            u(a, a) = kInvSqrt2;
            u(m, m) = kInvSqrt2;
            u(a, m) = kMinusI * kInvSqrt2;
            u(m, a) = kMinusI * kInvSqrt2;
        }
        return u;
    }

    double p_symmetric(double epsilon, double phi, PulseOrder order) const {
        Matrix rho = Matrix::Zero(dim(), dim());
        for (Index g = 0; g < (Index{1} << n_modes); ++g) {
            double w = 1.0;
            for (int m = 0; m < n_modes; ++m)
                w *= (g & (Index{1} << m)) ? 1.0 - epsilon : epsilon;
            rho(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(g)) = w;
        }
        const Matrix u1 = pulse(0), u2 = pulse(1);
        Matrix v = order == PulseOrder::first_then_second ? Matrix(u2 * u1) : Matrix(u1 * u2);
        Vector ph = Vector::Ones(dim());
        for (Index i = 0; i < static_cast<Index>(dim()); ++i)
            if (i & system_bit(1))
                ph(static_cast<Eigen::Index>(i)) = std::polar(1.0, -phi);
        v = ph.asDiagonal() * v;
        rho = v * rho * v.adjoint();

        // Reduce to the systems and project onto (1 + SWAP) / 2.
        Eigen::Matrix4cd sys = Eigen::Matrix4cd::Zero();
        const Index modes = Index{1} << n_modes;
        for (Index a = 0; a < 4; ++a)
            for (Index b = 0; b < 4; ++b)
                for (Index g = 0; g < modes; ++g)
                    sys(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) +=
                        rho(static_cast<Eigen::Index>(a * modes + g), static_cast<Eigen::Index>(b * modes + g));
        // Basis AA, AM, MA, MM.
        return (sys(0, 0) + sys(3, 3) + 0.5 * (sys(1, 1) + sys(2, 2) + sys(1, 2) + sys(2, 1))).real();
    }
};

double boson_symmetric_probability(double nbar, double phi, PulseOrder order) {
    if (!(nbar > 0.0))
        throw StateError("nbar must be positive");
    const int n_max = boson::default_truncation(nbar);
    const auto weights = boson::poisson_weights(nbar, n_max);
    // Rotation angle per sector is (pi / 4) sqrt(rate / nbar).
    auto angle = [nbar](int rate) { return 0.25 * std::numbers::pi * std::sqrt(std::max(rate, 0) / nbar); };
    auto rotate = [](Complex &x, Complex &y, double theta) {
        const double c = std::cos(theta);
        const Complex mis{0.0, -std::sin(theta)};
        const Complex nx = c * x + mis * y;
        y = mis * x + c * y;
        x = nx;
    };
    const Complex ph = std::polar(1.0, -phi);
    double total = 0.0, p_sym = 0.0;
    for (int N = 0; N <= n_max; ++N) {
        const double w = weights[static_cast<std::size_t>(N)];
        if (w == 0.0)
            continue;
        // Amplitudes on AA (n = N), AM, MA (n = N - 1), MM (n = N - 2).
        Complex aa{1.0, 0.0}, am{0.0, 0.0}, ma{0.0, 0.0}, mm{0.0, 0.0};
        auto pulse_first = [&] {
            rotate(aa, ma, angle(N));
            rotate(am, mm, angle(N - 1));
        };
        auto pulse_second = [&] {
            rotate(aa, am, angle(N));
            rotate(ma, mm, angle(N - 1));
        };
        if (order == PulseOrder::first_then_second) {
            pulse_first();
            pulse_second();
        } else {
            pulse_second();
            pulse_first();
        }
        am *= ph;
        mm *= ph;
        p_sym += w * (std::norm(aa) + std::norm(mm) + 0.5 * std::norm(am + ma));
        total += w;
    }
    return p_sym / total;
}

}  // namespace

double symmetric_probability(const FrameKind &frame, double phi, PulseOrder order) {
    if (const auto *b = std::get_if<BosonFrame>(&frame))
        return boson_symmetric_probability(b->nbar, phi, order);
    const auto &f = std::get<FermionFrame>(frame);
    FermionRefParams{f.K, f.epsilon}.validate();
    const TwoSystemFermionModel shared{1, {0, 0}};
    if (f.K == 1)
        return shared.p_symmetric(f.epsilon, phi, order);
    const TwoSystemFermionModel separate{2, {0, 1}};
    const double p_distinct = separate.p_symmetric(f.epsilon, phi, order);
    if (f.draw == ModeDraw::distinct)
        return p_distinct;
    const double collision = 1.0 / f.K;
    return (1.0 - collision) * p_distinct + collision * shared.p_symmetric(f.epsilon, phi, order);
}

TwoSystemResult two_system_phase_test(const FrameKind &frame, std::span<const double> phis, PulseOrder order) {
    if (phis.empty())
        throw StateError("phi grid must be nonempty");
    TwoSystemResult r;
    r.phis.assign(phis.begin(), phis.end());
    for (double phi : phis)
        r.p_symmetric.push_back(symmetric_probability(frame, phi, order));
    const auto [lo, hi] = std::minmax_element(r.p_symmetric.begin(), r.p_symmetric.end());
    r.flatness = *hi - *lo;
    return r;
}

}  // namespace reframe::fermion
