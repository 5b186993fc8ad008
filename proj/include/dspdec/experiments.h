// Copyright 2026 The dspdec developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DSPDEC_EXPERIMENTS_H
#define DSPDEC_EXPERIMENTS_H

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dspdec/channels.h"
#include "dspdec/dsp_space.h"
#include "dspdec/entropy.h"
#include "dspdec/rng.h"
#include "dspdec/sampling.h"

namespace dspdec {

// ---------------------------------------------------------------------------
// Experiment configuration.

enum class ExperimentMode {
  kNonrandomizedPd,  // block-random unitaries, arbitrary decomposition
  kRandomizedPd,     // block-random unitaries + block permutation
  kDecouplingJ1,     // randomized pipeline restricted to a single block
  kDequantization,   // randomized pipeline restricted to right dimension 1
};

std::string mode_name(ExperimentMode mode);
std::optional<ExperimentMode> mode_from_name(const std::string& name);

// A fully declarative experiment: states and channels are named specs plus
// seeds, so a config round-trips through text and a run is reproducible.
//
// State specs by mode:
//   nonrandomized-pd:  "random" | "maximally-entangled" | "averaged-random"
//   randomized modes:  "random-classically-coherent" | "maximally-correlated"
// Channel specs are the channel_preset language.  reference_dim is the
// reference dimension d_R (the quantum part d_{R_r} in randomized modes,
// where the classical copy R_c always has the block dimension J).
struct ExperimentConfig {
  ExperimentMode mode = ExperimentMode::kNonrandomizedPd;
  DspDecomposition decomp;
  std::string state = "random";
  std::uint64_t state_seed = 1;
  Index reference_dim = 2;
  std::string channel = "identity";
  Index samples = 2000;
  std::uint64_t seed = 0;
  std::string conditioner = "optimal";  // "optimal" | "uniform"

  friend bool operator==(const ExperimentConfig&,
                         const ExperimentConfig&) = default;
};

// Throws std::invalid_argument naming the violated constraint.  The
// randomized-mode structure requirement (every block of shape (1, r) with a
// common r) is named CC1; the classically coherent state requirement is CC2.
void validate(const ExperimentConfig& config);

// ---------------------------------------------------------------------------
// Reports.

struct RhsTerm {
  std::string name;
  double value = 0.0;
};

struct ExperimentReport {
  std::string mode;
  std::string decomposition;  // decomposition literal
  Index block_count = 1;
  Index right_dim = 1;  // largest right-factor dimension
  Index reference_dim = 1;
  Index env_dim = 1;
  Index samples = 0;
  std::uint64_t seed = 0;
  double lhs_mean = 0.0;
  double lhs_stderr = 0.0;
  std::vector<RhsTerm> rhs_terms;
  double rhs_total = 0.0;
  // rhs_total + 3 stderr - lhs_mean; recorded even when negative.
  double margin = 0.0;
  bool retried = false;
  // Wall time is reported in the run manifest only, so report payloads are
  // byte-identical across reruns.
  double wall_seconds = 0.0;
};

// An estimated quantity compared against an exact (or exactly computed)
// bound, with the statistical slack that was allowed.
struct InequalityReport {
  std::string name;
  double estimated = 0.0;
  double bound = 0.0;
  double slack = 0.0;  // additive allowance on the bound
  bool pass = false;
};

// ---------------------------------------------------------------------------
// Monte Carlo estimators and exact bounds.

struct LhsEstimate {
  double mean = 0.0;
  double stderr_of_mean = 0.0;
  Index samples = 0;
};

// Sample mean/standard error of || T(U Psi U^dag) - T(Psi_av) ||_1 over
// block-Haar draws U, with the exact averaged state.  Psi lives on
// [a-factor, reference factors]; the a-factor must be the first factor.
LhsEstimate estimate_lhs_nonrandomized(
    const DensityOperator& psi, const CpMap& channel,
    const DspDecomposition& decomp, Index samples, std::uint64_t seed,
    const Tolerances& tol = default_tolerances());

// Sample mean/standard error of
// || T(G U Psi U^dag G^dag) - T(G Psi_av G^dag) ||_1 over joint draws of a
// block-Haar U and a uniformly random block permutation G.
LhsEstimate estimate_lhs_randomized(
    const ClassicallyCoherentState& psi, const CpMap& channel,
    const DspDecomposition& decomp, Index samples, std::uint64_t seed,
    const Tolerances& tol = default_tolerances());

struct RhsBound {
  std::vector<RhsTerm> terms;
  double total = 0.0;
};

// The one-shot bound 2^{-1/2 Hmin} from the min-entropy of the flattened
// joint operator of (Psi, T), conditioned on the reference and channel
// output; also evaluates the tighter collision-entropy reference at the
// conditioner selected by `policy` ("optimal": the min-entropy SDP optimizer;
// "uniform": the maximally mixed conditioner).
RhsBound bound_rhs_nonrandomized(const DensityOperator& psi,
                                 const CpMap& channel,
                                 const DspDecomposition& decomp,
                                 const std::string& policy = "optimal",
                                 const Tolerances& tol = default_tolerances());

// The two-term randomized bound
//   sqrt(alpha(J)) 2^{-1/2 H_I} + beta(r) 2^{-1/2 H_II},
// with H_I/H_II sums of state and channel min-entropies; the channel
// entropies are evaluated on the checked representation that copies the
// block index of the input into a classical register (the form valid for
// arbitrary CP maps), and the dephased variants pinch that block index.
RhsBound bound_rhs_randomized(const ClassicallyCoherentState& psi,
                              const CpMap& channel,
                              const DspDecomposition& decomp,
                              const Tolerances& tol = default_tolerances());

// Full pipeline: materializes the state and channel from the config,
// estimates the LHS, computes the RHS, and reports the margin
// rhs_total + 3 stderr - lhs_mean.  A negative margin is retried once at 4N
// samples before being reported.  The reduced modes run exactly the
// randomized pipeline, so their reports coincide with randomized-pd ones.
ExperimentReport run_experiment(const ExperimentConfig& config,
                                const Tolerances& tol = default_tolerances());

// ---------------------------------------------------------------------------
// Self-verification drivers.

// Monte Carlo check of the exact averaged squared weighted two-norm:
// estimates E_U || T(G_{sigma^{-1}} U X U^dag G_{sigma^{-1}}^dag)
// ||^2_{2,sigma_w} and compares against exact_average_2norm, requiring
// estimate <= exact + 3 SE.  X must have vanishing right-factor partial
// traces on its diagonal blocks.
InequalityReport verify_average_2norm(const LabeledOperator& x,
                                      const std::string& a_label,
                                      const CpMap& t,
                                      const DensityOperator& sigma_w,
                                      const std::vector<Index>& sigma,
                                      const DspDecomposition& decomp,
                                      Index samples, std::uint64_t seed,
                                      const Tolerances& tol =
                                          default_tolerances());

// Empirical second moments of block unitaries against the exact twisted
// twirls: the direct, crossed and diagonal patterns plus one vanishing mixed
// pattern, each on a random supported operator of unit Frobenius norm with a
// spectator factor.  Frobenius distances are required to be
// <= 10 / sqrt(samples).
std::vector<InequalityReport> verify_twirl(
    const DspDecomposition& decomp, Index samples, std::uint64_t seed,
    const Tolerances& tol = default_tolerances());

// ---------------------------------------------------------------------------
// Random instance builders (generic full-rank draws).

// Partial trace of a Haar-random pure state over a purifier of the same
// total dimension; full rank with probability one.
DensityOperator random_state(const SubsystemLayout& layout, RngStream& rng,
                             const Tolerances& tol = default_tolerances());

// Classically coherent state from a trace-normalized Ginibre parent.
ClassicallyCoherentState random_classically_coherent_state(
    Index block_count, Index right_dim, Index reference_dim, RngStream& rng,
    const Tolerances& tol = default_tolerances());

}  // namespace dspdec

#endif  // DSPDEC_EXPERIMENTS_H
