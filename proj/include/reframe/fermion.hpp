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

#ifndef REFRAME_FERMION_HPP_
#define REFRAME_FERMION_HPP_

#include <array>
#include <span>
#include <variant>
#include <vector>

#include "reframe/core_states.hpp"

// Boson/fermion interferometer with a K-mode fermionic reference frame.
//
// The system is either a fermionic atom |A> or a bosonic molecule |M>.  A
// pulse on mode j exchanges |A>|1}_j with |M>|0}_j; which mode takes part
// is unknown, so every pulse sequence is an equal mixture over j.
//
// Dense layout: occupation qubits (M, A, mode 1, ..., mode K), factor 0
// most significant.  The dense path is for validation and stops at K = 6.
namespace reframe::fermion {

inline constexpr int kMaxDenseModes = 6;

// Binomial probability C(K, n) p^n (1 - p)^(K - n), evaluated in log space.
double binom(int K, int n, double p);
// All K + 1 binomial probabilities, normalized to sum to one.
std::vector<double> binomial_pmf(int K, double p);
// Larger of the probabilities at floor and ceil of the mean K p.
double binom_at_mean(int K, double p);

struct FermionRefParams {
    int K = 1;
    double epsilon = 0.0;  // vacancy probability of each mode

    void validate() const;
    double occupation() const { return 1.0 - epsilon; }
};

// Jordan-Wigner strings give the coupling to mode j the sign
// (-1)^(occupied modes before j).  `none` drops them.
enum class SignConvention { jordan_wigner, none };

// ---------------------------------------------------------------- dense

struct DenseFermionLab {
    int K;
    DensityOperator rho;

    // |A><A| (x) sigma^(x)K with sigma = eps |0}{0| + (1 - eps) |1}{1|.
    static DenseFermionLab initial(const FermionRefParams &params);

    double p_A() const;
    double p_M() const;
};

HilbertSpec dense_spec(int K);
// Basis index of |n_M, n_A, modes>; modes[j - 1] is the occupation of j.
std::size_t dense_index(int K, int n_M, int n_A, std::span<const int> modes);

// Unitary of a pi/2-pulse on mode j (1-based).
Matrix pulse_unitary(int K, int j, SignConvention signs = SignConvention::none);
DenseFermionLab pi2_pulse_on_mode(const DenseFermionLab &w, int j,
                                  SignConvention signs = SignConvention::none);
// (1/K) sum_j U_j W U_j^dag.
DenseFermionLab random_mode_pi2(const DenseFermionLab &w, SignConvention signs = SignConvention::none);
// exp(-i phi) on every |M> amplitude.
DenseFermionLab free_phase_M(const DenseFermionLab &w, double phi);

// Stage-i state of the protocol driven through mode j alone.
DenseFermionLab dense_mode_term(const FermionRefParams &params, double phi, int stage, int j,
                                SignConvention signs = SignConvention::none);
// (1/K) sum_j of the above: the protocol state at stage i (0..3).
DenseFermionLab dense_protocol_stage(const FermionRefParams &params, double phi, int stage,
                                     SignConvention signs = SignConvention::none);
// Mode 1 tracked explicitly, then the reference modes symmetrized.
DenseFermionLab shuffled_construction(const FermionRefParams &params, double phi, int stage);

// (1/K!) sum over mode permutations, acting on the reference factors only.
DenseFermionLab shuffle(const DenseFermionLab &w);
// Same symmetrizer for a reference-only state on K modes.
DensityOperator shuffle_rf(const DensityOperator &rf);

// Permutation-symmetric diagonal reference state, stored as the
// distribution of the total occupation number.
struct SymmetricRfState {
    int K = 0;
    std::vector<double> number_probs;  // n = 0..K

    // Shuffle of a diagonal state given by its 2^K populations.
    static SymmetricRfState from_diagonal(std::span<const double> populations);
    std::vector<double> to_diagonal() const;
};

// ----------------------------------------------------------- compressed

// Compressed laboratory state
//   S[(eps |A><A| (x) |0}{0|_j + (1 - eps) |psi><psi|) (x) sigma^(x)(K-1)]
// with |psi> = alpha |A>|1}_j + beta |M>|0}_j on the tracked mode j.
// `shuffled` records that j is uniformly random.
class FermionLabState {
  public:
    FermionLabState() = default;
    FermionLabState(FermionRefParams params, Complex alpha, Complex beta, bool shuffled);

    static FermionLabState initial(const FermionRefParams &params);

    const FermionRefParams &params() const { return params_; }
    Complex alpha() const { return alpha_; }
    Complex beta() const { return beta_; }
    bool shuffled() const { return shuffled_; }

    double vacancy_weight() const { return params_.epsilon; }
    double active_weight() const { return 1.0 - params_.epsilon; }
    // Occupation-number distribution of the K - 1 spectator modes.
    std::vector<double> spectator_distribution() const;

    double p_A() const;
    double p_M() const;

    // Dense equivalent (no sign strings); K <= 6.
    DenseFermionLab expand_to_dense() const;

  private:
    FermionRefParams params_;
    Complex alpha_{1.0, 0.0};
    Complex beta_{0.0, 0.0};
    bool shuffled_ = false;
};

// Pulse on the tracked mode, whose index becomes uniformly random.
FermionLabState random_mode_pi2(const FermionLabState &w);
FermionLabState free_phase_M(const FermionLabState &w, double phi);

struct FermionOutcome {
    double p_A = 0.0;
    double p_M = 0.0;
    double visibility = 0.0;  // p_A(pi) - p_A(0)
    std::array<FermionLabState, 4> stage_states{};
};

FermionOutcome run_fermion_ramsey(const FermionRefParams &params, double phi);

struct DenseFermionOutcome {
    double p_A = 0.0;
    double p_M = 0.0;
    std::vector<DenseFermionLab> stage_states;
};

// Dense twin of run_fermion_ramsey, K <= 6.
DenseFermionOutcome run_fermion_ramsey_dense(const FermionRefParams &params, double phi,
                                             SignConvention signs = SignConvention::none);

// ---------------------------------------------------------- postselection

// Reference-frame states after measuring the system.  Every state here is
// permutation symmetric, so each is stored as its occupation distribution
// over n = 0..K and fidelities reduce to sum_n sqrt(p_n q_n).
struct PostselectionResult {
    double p_A = 0.0;
    double p_M = 0.0;
    std::vector<double> rho_A_rf;
    std::vector<double> rho_M_rf;
    std::vector<double> rho_tilde_A_rf;  // A outcome from the active branch only
    std::vector<double> rho_0_rf;
    double F_AM = 0.0;  // F(rho_tilde_A, rho_M)
    double F_A0 = 0.0;
    double F_M0 = 0.0;
    double bound = 0.0;  // 1 - c_0 - c_{K-1} - c_max, all at K - 1 modes
};

// Throws StateError("empty branch") when either outcome has probability 0.
PostselectionResult postselect_stage(const FermionLabState &w);
PostselectionResult postselect_and_fidelity(const FermionRefParams &params, double phi);

// ------------------------------------------------------------ relational

struct FermionRelationalCheck {
    std::array<double, 4> deviations{};  // vacancy branch discarded
    std::array<double, 4> deviations_vacancy_as_atom{};
    std::array<double, 4> paired_weight{};  // weight outside the vacancy branch
    double worst = 0.0;
    double worst_vacancy_as_atom = 0.0;
};

// Relational states are read off mode by mode: for each j the pair
// |A>|1}_j |g} and U-partner |M>|0}_j |g} (g = spectator occupations)
// defines |A>_rel |g}, |M>_rel |g}.  Dense for K <= 6, compressed above.
FermionRelationalCheck fermion_relational_check(const FermionRefParams &params, double phi,
                                                SignConvention signs = SignConvention::jordan_wigner);

// ------------------------------------------------------------ two systems

enum class ModeDraw {
    distinct,     // the two systems couple to different modes
    independent,  // each system draws its own mode; collisions allowed
};

enum class PulseOrder { first_then_second, second_then_first };

struct BosonFrame {
    double nbar = 0.0;
};

struct FermionFrame {
    int K = 1;
    double epsilon = 0.0;
    ModeDraw draw = ModeDraw::distinct;
};

using FrameKind = std::variant<BosonFrame, FermionFrame>;

// Both systems start in |A>, each gets a pi/2-pulse from the shared frame,
// the second acquires phase phi, and the pair is projected onto the
// symmetric subspace of span{|A>, |M>}^(x)2.
double symmetric_probability(const FrameKind &frame, double phi,
                             PulseOrder order = PulseOrder::first_then_second);

struct TwoSystemResult {
    std::vector<double> phis;
    std::vector<double> p_symmetric;
    double flatness = 0.0;  // max - min over the grid
};

TwoSystemResult two_system_phase_test(const FrameKind &frame, std::span<const double> phis,
                                      PulseOrder order = PulseOrder::first_then_second);

}  // namespace reframe::fermion

#endif  // REFRAME_FERMION_HPP_
