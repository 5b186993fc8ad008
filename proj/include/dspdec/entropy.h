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

#ifndef DSPDEC_ENTROPY_H
#define DSPDEC_ENTROPY_H

#include <optional>
#include <string>
#include <vector>

#include "dspdec/operators.h"

namespace dspdec {

// A conditional-entropy value in bits.  Optimized quantities carry a
// primal/dual interval for the underlying semidefinite program and the gap
// log2(primal/dual) in bits; closed-form evaluations carry no certificate.
struct EntropyResult {
  double value_bits = 0.0;
  // The supplied conditioner, or the optimizer found by the program
  // (normalized to unit trace).  For the max-entropy optimization this is the
  // optimizer on the internal purifier system, labeled "purifier".
  DensityOperator conditioner;
  std::optional<double> duality_gap;  // bits; present for optimized values
  double primal = 0.0;  // certified interval for the program optimum
  double dual = 0.0;    // (linear scale; primal >= optimum >= dual)
};

// All quantities below condition the named `a_labels` factors of rho on the
// remaining factors; logarithms are base 2.  Subnormalized and unnormalized
// positive inputs are accepted.  Under scaling the values shift by the
// homogeneity degree of each definition: h_min(c rho) = h_min(rho) - log2 c,
// h2(c rho) = h2(rho) - 2 log2 c, and h_max(c rho) = h_max(rho) + log2 c.

// -log2 lambda_max((I (x) s)^{-1/2} rho (I (x) s)^{-1/2}) for a fixed
// full-rank conditioner s on the non-A factors.
EntropyResult h_min_fixed(const LabeledOperator& rho,
                          const std::vector<std::string>& a_labels,
                          const DensityOperator& sigma,
                          const Tolerances& tol = default_tolerances());

// -log2 of the optimum of  min{Tr s : I (x) s >= rho, s >= 0},  solved by a
// self-contained barrier method; the result interval [dual, primal] is
// certified by an explicit feasible pair and log2(primal/dual) <= gap_tol.
// Throws std::runtime_error on non-convergence within the iteration budget.
EntropyResult h_min_opt(const LabeledOperator& rho,
                        const std::vector<std::string>& a_labels,
                        double gap_tol = 1e-7,
                        const Tolerances& tol = default_tolerances());

// log2 ||sqrt(rho) sqrt(I (x) s)||_1^2 for a fixed conditioner s.
EntropyResult h_max_fixed(const LabeledOperator& rho,
                          const std::vector<std::string>& a_labels,
                          const DensityOperator& sigma,
                          const Tolerances& tol = default_tolerances());

// sup over conditioners, computed through the purification duality
// h_max(A|B) = -h_min(A|C) on any pure extension to a minimal purifier C.
// Requires Tr rho <= 1 (the duality is stated for subnormalized states).
EntropyResult h_max_opt(const LabeledOperator& rho,
                        const std::vector<std::string>& a_labels,
                        double gap_tol = 1e-7,
                        const Tolerances& tol = default_tolerances());

// Collision entropy -log2 Tr[((I (x) s)^{-1/4} rho (I (x) s)^{-1/4})^2] for a
// fixed full-rank conditioner s.
EntropyResult h2_fixed(const LabeledOperator& rho,
                       const std::vector<std::string>& a_labels,
                       const DensityOperator& sigma,
                       const Tolerances& tol = default_tolerances());

// Dimension cap for the optimized quantities (total dimension of rho).
inline constexpr Index kMaxEntropyDim = 512;

}  // namespace dspdec

#endif  // DSPDEC_ENTROPY_H
