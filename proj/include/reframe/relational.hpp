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

#ifndef REFRAME_RELATIONAL_HPP_
#define REFRAME_RELATIONAL_HPP_

#include <array>
#include <vector>

#include "reframe/boson.hpp"
#include "reframe/core_states.hpp"

/// Relational re-factorization of the atom/molecule + BEC laboratory.
///
/// On the complement of |A>|0} the pair (n_M, N_2 = n_2 + n_M) labels every
/// basis vector, giving
///     |A>|N}   -> |A>_rel |N>_gl,
///     |M>|N-1} -> |M>_rel |N>_gl,   N >= 1.
/// The global index runs over N = 1..n_max + 1; the last value holds only
/// the truncation edge |M>|n_max}.
namespace reframe::relational {

using Block = Eigen::Matrix2cd;

/// 2x2 state in the basis {|A>_rel, |M>_rel}.
class RelationalState {
  public:
    explicit RelationalState(const Block &rho);

    static RelationalState atom() { return RelationalState(Block{{1.0, 0.0}, {0.0, 0.0}}); }
    static RelationalState pure(Complex a, Complex m);

    const Block &matrix() const { return rho_; }
    Complex coherence() const { return rho_(0, 1); }  ///< <A|rho_rel|M>
    double purity() const;
    DensityOperator to_density() const;

  private:
    Block rho_;
};

/// Distribution over total type-2 number N >= 1 (index 0 is N = 1).
struct GlobalState {
    std::vector<double> weights;
};

/// rho_rel (x) rho_gl structure of a mapped laboratory state.  The joint
/// state is block diagonal in N; `conditional[N - 1]` is the relational
/// state in sector N and `weights` its probability.
struct RelationalDecomposition {
    std::vector<Block> conditional;
    GlobalState rho_gl;
    RelationalState rho_rel = RelationalState::atom();
    double product_defect = 0.0;  ///< D(joint, rho_rel (x) rho_gl)

    /// Dense joint state on {rel(2), gl(n_max + 1)}; small cases only.
    DensityOperator joint_dense() const;
};

/// Throws StateError("map undefined on |A>|0}") when the vacuum carries
/// more than 1e-9 of the weight.  rho_rel is normalized on the complement.
RelationalDecomposition to_relational(const boson::BosonLabState &w);

/// Basis relabeling of a dense laboratory state on {system(2), bec(n_max+1)}
/// into {rel(2), gl(n_max + 1)}; no block structure assumed.
DensityOperator relabel_dense(const DensityOperator &lab);

/// E(rho) = sum_N p_N(nbar) U_N rho U_N^dag with
/// U_N = exp(-i (kappa t sqrt(N) / 2) sigma_x).
RelationalState effective_rel_channel(const RelationalState &rho, double nbar, double kappa_t);
/// exp(-i H_Ram t) rho exp(i H_Ram t), H_Ram = (kappa sqrt(nbar) / 2) sigma_x.
RelationalState external_ramsey_pulse(const RelationalState &rho, double nbar, double kappa_t);

/// Ideal relational states at each stage of the sequence with phase phi.
std::array<RelationalState, 4> ideal_stages(double phi);

struct ProtocolCheck {
    std::array<double, 4> deviations{};  ///< D(rho_rel(stage), ideal)
    std::array<double, 4> system_coherence{};  ///< |<A|rho_S|M>|
    std::array<double, 4> relational_coherence{};  ///< |<A|rho_rel|M>|
    std::array<double, 4> product_defects{};
    double worst = 0.0;
};

ProtocolCheck relational_protocol_check(double nbar, double phi);

}  // namespace reframe::relational

#endif  // REFRAME_RELATIONAL_HPP_
