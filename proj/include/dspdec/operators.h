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

#ifndef DSPDEC_OPERATORS_H
#define DSPDEC_OPERATORS_H

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dspdec/layout.h"
#include "dspdec/tolerances.h"

namespace dspdec {

using Cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// A square complex matrix together with the tensor-factor layout of the space
// it acts on.  This is the common currency of the library; the validated
// Hermitian and density refinements below derive from it.
struct LabeledOperator {
  Matrix mat;
  SubsystemLayout layout;

  LabeledOperator() = default;
  LabeledOperator(Matrix m, SubsystemLayout l);

  Index dim() const { return mat.rows(); }
};

// A labeled operator validated to be Hermitian (and symmetrized, so later
// eigendecompositions see an exactly Hermitian matrix).
class HermitianOperator : public LabeledOperator {
 public:
  HermitianOperator() = default;
  HermitianOperator(Matrix m, SubsystemLayout l,
                    const Tolerances& tol = default_tolerances());
};

enum class Normalization {
  kNormalized,           // trace equal to 1
  kSubnormalized,        // trace at most 1
  kUnnormalizedPositive  // any positive semidefinite operator
};

// A positive semidefinite labeled operator with a declared normalization.
class DensityOperator : public HermitianOperator {
 public:
  DensityOperator() = default;
  DensityOperator(Matrix m, SubsystemLayout l,
                  Normalization normalization = Normalization::kNormalized,
                  const Tolerances& tol = default_tolerances());

  Normalization normalization() const { return normalization_; }

 private:
  Normalization normalization_ = Normalization::kNormalized;
};

// ---------------------------------------------------------------------------
// Layout-aware rearrangement.

// Reorders tensor factors so that the named factors come first, in the order
// given.  Pure relabeling: the operator is physically unchanged.
LabeledOperator moved_to_front(const LabeledOperator& x,
                               const std::vector<std::string>& front);

// The named factors merged into a single factor (must be adjacent, in order).
LabeledOperator merged_factors(const LabeledOperator& x,
                               const std::vector<std::string>& names,
                               const std::string& merged_name);

// (op tensor identity) written on the full space, with `op` acting on the
// factors of its own layout, located inside `full` by name.
Matrix embedded_on(const LabeledOperator& op, const SubsystemLayout& full);

// ---------------------------------------------------------------------------
// Algebra.

// Kronecker product; layouts are concatenated and must not share names.
LabeledOperator tensor(const LabeledOperator& x, const LabeledOperator& y);

// Reduction to the named factors (trace over the rest).  The result's layout
// lists the kept factors in the order given.
LabeledOperator partial_trace(const LabeledOperator& x,
                              const std::vector<std::string>& keep);

// ---------------------------------------------------------------------------
// Hermitian matrix functions (eigendecomposition based).

// Square root of a positive semidefinite matrix.  Eigenvalues in
// [tol.psd_floor, 0) are clipped to zero; anything below throws.
Matrix hermitian_sqrt(const Matrix& x,
                      const Tolerances& tol = default_tolerances());

// x^p for Hermitian positive definite x.  For negative p, all eigenvalues
// must exceed tol.full_rank_floor; otherwise throws (singular conditioner).
Matrix hermitian_power(const Matrix& x, double p,
                       const Tolerances& tol = default_tolerances());

// ---------------------------------------------------------------------------
// Norms and distances.

// Sum of absolute eigenvalues of a Hermitian matrix.
double trace_norm(const Matrix& x);
inline double trace_norm(const LabeledOperator& x) { return trace_norm(x.mat); }

// Hilbert-Schmidt (Frobenius) norm.
double hs_norm(const Matrix& x);
inline double hs_norm(const LabeledOperator& x) { return hs_norm(x.mat); }

// || sigma^{-1/4} X sigma^{-1/4} ||_2 with the conjugation acting only on the
// factors named in sigma's layout (identity on the rest of x's space).
// sigma must be full rank.
double weighted_two_norm(const LabeledOperator& x, const DensityOperator& sigma,
                         const Tolerances& tol = default_tolerances());

// || sqrt(rho) sqrt(sigma) ||_1, evaluated as Tr sqrt(sqrt(sigma) rho
// sqrt(sigma)); valid for positive semidefinite inputs.
double root_fidelity(const Matrix& rho, const Matrix& sigma,
                     const Tolerances& tol = default_tolerances());

// Generalized fidelity of subnormalized states:
//   root_fidelity + sqrt((1 - Tr rho)(1 - Tr sigma)).
double generalized_fidelity(const DensityOperator& rho,
                            const DensityOperator& sigma,
                            const Tolerances& tol = default_tolerances());

// Purified distance sqrt(1 - generalized_fidelity^2), a metric on
// subnormalized states taking values in [0, 1].
double purified_distance(const DensityOperator& rho,
                         const DensityOperator& sigma,
                         const Tolerances& tol = default_tolerances());

// ---------------------------------------------------------------------------
// Small constructors.

LabeledOperator identity_operator(const SubsystemLayout& layout);

// |ket><bra| as a labeled operator.
LabeledOperator outer(const Vector& ket, const Vector& bra,
                      const SubsystemLayout& layout);

}  // namespace dspdec

#endif  // DSPDEC_OPERATORS_H
