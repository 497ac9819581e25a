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

#ifndef REFRAME_BOSON_HPP_
#define REFRAME_BOSON_HPP_

#include <array>
#include <span>
#include <string>
#include <vector>

#include "reframe/core_states.hpp"

/// Atom/molecule interferometer whose pulses are supplied by a single-mode
/// BEC held in a phase-averaged coherent state.
///
/// Laboratory basis ordering: system factor first (|A> = 0, |M> = 1), then
/// the BEC Fock state |n}, n = 0..n_max.  Total type-2 number N = n + n_M is
/// conserved by every operation here, so states live in 2x2 blocks
/// span{|A>|N}, |M>|N-1}} plus two one-dimensional edge sectors: the vacuum
/// |A>|0} and the truncation edge |M>|n_max}.
namespace reframe::boson {

using Block = Eigen::Matrix2cd;

/// ceil(nbar + 10 sqrt(nbar)), raised until the Poisson tail is < 1e-10.
int default_truncation(double nbar);
/// Poisson weights p_n(nbar) for n = 0..n_max.
std::vector<double> poisson_weights(double nbar, int n_max);
/// sum_{n > n_max} p_n(nbar), summed directly (no 1 - x cancellation).
double poisson_tail(double nbar, int n_max);

struct BosonRefParams {
    double nbar = 0.0;
    double beta_phase = 0.0;
    int n_max = 0;

    static BosonRefParams with_default_truncation(double nbar, double beta_phase = 0.0);
    /// Throws StateError("N_max too small") when the truncation policy fails.
    void validate() const;
};

struct PulseParams {
    double kappa = 1.0;
    double t = 0.0;

    /// t = pi / (2 kappa sqrt(nbar)).
    static PulseParams quarter_period(double nbar, double kappa = 1.0);
    double kappa_t() const { return kappa * t; }
};

struct FreeEvolutionParams {
    double delta_int = 1.0;
    double tau = 0.0;

    static FreeEvolutionParams for_phase(double phi, double delta_int = 1.0);
    double phi() const;  ///< delta_int * tau reduced to [0, 2 pi)
};

/// Twirled laboratory state stored per conserved sector.
class BosonLabState {
  public:
    explicit BosonLabState(int n_max);

    /// |A><A| (x) sum_n p_n |n}{n|: the twirled initial laboratory state.
    static BosonLabState initial(const BosonRefParams &params);

    int n_max() const { return n_max_; }
    double vacuum_weight() const { return vacuum_weight_; }
    double edge_weight() const { return edge_weight_; }
    /// Probability p_N of sector N (1 <= N <= n_max).
    double block_weight(int N) const { return weights_.at(static_cast<std::size_t>(N - 1)); }
    /// Normalized conditional state in sector N, basis {|A>|N}, |M>|N-1}}.
    const Block &block(int N) const { return blocks_.at(static_cast<std::size_t>(N - 1)); }
    std::span<const double> block_weights() const { return weights_; }

    void set_vacuum_weight(double w) { vacuum_weight_ = w; }
    void set_edge_weight(double w) { edge_weight_ = w; }
    void set_block(int N, double weight, const Block &conditional);

    double total_weight() const;
    /// Throws StateError if weights or blocks are not a valid state.
    void validate() const;

    /// Dense form on {system(2), rf(n_max + 1)}; validation only.
    DensityOperator to_dense() const;

  private:
    int n_max_;
    double vacuum_weight_ = 0.0;
    double edge_weight_ = 0.0;
    std::vector<double> weights_;
    std::vector<Block> blocks_;
};

/// Amplitudes c_n = exp(-nbar/2) beta^n / sqrt(n!), n = 0..n_max.
PureState coherent_state(const BosonRefParams &params);

/// Exact projection onto the conserved-number sectors.  The input must be
/// defined on {system(2), rf(n_max + 1)}.
BosonLabState twirl(const DensityOperator &rho);

/// Per-sector rotation exp(-i (kappa sqrt(N) t / 2) sigma_x).
BosonLabState feshbach_pulse(const BosonLabState &w, const PulseParams &p);
/// The |M> row/column of each sector acquires exp(-i phi).
BosonLabState free_evolve(const BosonLabState &w, const FreeEvolutionParams &f);

/// Reduced system state. Its A/M coherence is zero by construction: the
/// two components of any sector carry different BEC occupations.
DensityOperator reduced_system(const BosonLabState &w);
/// Diagonal of the reduced BEC state, n = 0..n_max.
std::vector<double> reduced_rf(const BosonLabState &w);

struct LevelLabels {
    std::string lower = "A";
    std::string upper = "M";
};

struct BosonOutcome {
    LevelLabels labels;
    double p_A = 0.0;  ///< population of the lower level after the sequence
    double p_M = 0.0;
    std::vector<BosonLabState> stage_states;       ///< stages 0..3
    std::vector<DensityOperator> rho_S_stages;     ///< reduced system states
    std::vector<std::vector<double>> rho_rf_stages;  ///< reduced BEC diagonals
};

/// pulse, free evolution, pulse starting from BosonLabState::initial.
BosonOutcome run_boson_ramsey(const BosonRefParams &ref, const FreeEvolutionParams &f,
                              const PulseParams &pulse);
BosonOutcome run_boson_ramsey(const BosonRefParams &ref, const FreeEvolutionParams &f);

/// F(rho_0^rf, rho_rf) at each of the four stages.
std::array<double, 4> rf_disturbance(const BosonRefParams &ref, const FreeEvolutionParams &f,
                                     const PulseParams &pulse);
std::array<double, 4> rf_disturbance(const BosonRefParams &ref, const FreeEvolutionParams &f);

/// Jaynes-Cummings coupling hbar chi (|g><e| a^dag + |e><g| a) in the
/// absorbing orientation; the rotation per sector is chi sqrt(N) t, which
/// maps onto the Feshbach engine with kappa = 2 chi.
struct JcPulseParams {
    double chi = 0.5;
    double t = 0.0;

    static JcPulseParams quarter_period(double nbar, double chi = 0.5);
};

/// Same engine as run_boson_ramsey with {g, e} labels.
BosonOutcome jaynes_cummings_ramsey(const BosonRefParams &ref, const FreeEvolutionParams &f,
                                    const JcPulseParams &pulse);
BosonOutcome jaynes_cummings_ramsey(const BosonRefParams &ref, const FreeEvolutionParams &f);

/// max_phi p_M - min_phi p_M over the grid.
double fringe_visibility(double nbar, std::span<const double> phis);

}  // namespace reframe::boson

#endif  // REFRAME_BOSON_HPP_
