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

#ifndef DSPDEC_CHANNELS_H
#define DSPDEC_CHANNELS_H

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dspdec/dsp_space.h"
#include "dspdec/operators.h"

namespace dspdec {

// A completely positive map held as its Choi operator
//
//   tau = (T (x) id)(Phi)   on  [input, output],
//
// built from the normalized maximally entangled state, so Tr tau = 1 exactly
// when the map preserves trace and Tr tau <= 1 when it is trace-nonincreasing.
class CpMap {
 public:
  CpMap() = default;

  static CpMap from_choi(Matrix choi, Index input_dim, Index output_dim,
                         const std::string& input_label = "A",
                         const std::string& output_label = "E",
                         const Tolerances& tol = default_tolerances());
  static CpMap from_kraus(const std::vector<Matrix>& kraus,
                          const std::string& input_label = "A",
                          const std::string& output_label = "E",
                          const Tolerances& tol = default_tolerances());

  const DensityOperator& choi() const { return choi_; }
  Index input_dim() const { return input_dim_; }
  Index output_dim() const { return output_dim_; }
  const std::string& input_label() const { return input_label_; }
  const std::string& output_label() const { return output_label_; }
  bool trace_preserving() const { return trace_preserving_; }
  bool trace_nonincreasing() const { return trace_nonincreasing_; }

 private:
  DensityOperator choi_;
  Index input_dim_ = 0;
  Index output_dim_ = 0;
  std::string input_label_;
  std::string output_label_;
  bool trace_preserving_ = false;
  bool trace_nonincreasing_ = false;
};

// Builds the Choi representation by evaluating the action on matrix units.
// Throws if the resulting operator is not positive semidefinite (the action
// is not completely positive).
CpMap choi_of(const std::function<Matrix(const Matrix&)>& action,
              Index input_dim, Index output_dim,
              const std::string& input_label = "A",
              const std::string& output_label = "E",
              const Tolerances& tol = default_tolerances());

// Applies the map to the factor of x named by the map's input label; the
// result carries the map's output label in its place (moved to the front).
// Inverse of the Choi construction:
// T(rho) = d_in * Tr_in[(rho^{T_in} (x) I_out)(tau (x) I_rest)].
LabeledOperator apply_channel(const CpMap& t, const LabeledOperator& x);
// Same, but acting on `in_factor` and emitting `out_factor` (for operators
// whose labels differ from the map's, or to avoid name collisions).
LabeledOperator apply_channel(const CpMap& t, const LabeledOperator& x,
                              const std::string& in_factor,
                              const std::string& out_factor);

// A minimal Stinespring dilation of t, exposing the complementary map and the
// joint pure state whose marginals are the two Choi operators.
struct ComplementaryChannel {
  CpMap map;            // input -> b_label, Choi = Tr_out |ket><ket|
  Vector purified_ket;  // on [input, output, b_label]
  SubsystemLayout ket_layout;
  Index env_dim = 0;  // numerical rank of t's Choi operator
};

ComplementaryChannel complementary(const CpMap& t,
                                   const std::string& b_label = "B",
                                   const Tolerances& tol = default_tolerances());

// Monte Carlo lower bound on the block-restricted channel distance
// sup ||((T1 - T2) (x) id)(xi)||_1 over inputs xi purifying block states of
// the form (+)_j q_j w_j (x) pi_j.  Samples q from the flat simplex measure,
// w_j from the trace-normalized Ginibre ensemble, and purifies with an
// ancilla of the input dimension; returns the best value seen.  A lower
// bound only.
double dsp_norm_lower_bound(const CpMap& t1, const CpMap& t2,
                            const DspDecomposition& decomp, Index trials,
                            std::uint64_t seed);

// Named channel presets used by experiment configurations:
//   identity | depolarizing(p) | dephasing | partial-trace(keep) |
//   random-kraus(k, seed) | random-tp(out, k, seed)
// Output dimension: input dimension for identity/depolarizing/dephasing and
// random-kraus; `keep` for partial-trace (which requires keep | input_dim);
// explicit for random-tp (which requires k * out >= input_dim).
CpMap channel_preset(const std::string& text, Index input_dim,
                     const std::string& input_label = "A",
                     const std::string& output_label = "E",
                     const Tolerances& tol = default_tolerances());

// Random trace-preserving map with `kraus_count` Ginibre-derived Kraus
// operators and explicit output dimension (the generator behind the
// random-kraus preset and the experiment instance sampler).
CpMap random_trace_preserving_map(Index input_dim, Index output_dim,
                                  Index kraus_count, std::uint64_t seed,
                                  const std::string& input_label = "A",
                                  const std::string& output_label = "E",
                                  const Tolerances& tol = default_tolerances());

}  // namespace dspdec

#endif  // DSPDEC_CHANNELS_H
