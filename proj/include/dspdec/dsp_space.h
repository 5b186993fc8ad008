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

#ifndef DSPDEC_DSP_SPACE_H
#define DSPDEC_DSP_SPACE_H

#include <string>
#include <utility>
#include <vector>

#include "dspdec/operators.h"

namespace dspdec {

// A rectangular linear map between two labeled spaces (isometries, the
// flattening map, Stinespring dilations).
struct LabeledMap {
  Matrix mat;
  SubsystemLayout row_layout;
  SubsystemLayout col_layout;

  LabeledMap() = default;
  LabeledMap(Matrix m, SubsystemLayout rows, SubsystemLayout cols);
};

// The shape of a direct-sum-product decomposition
//
//   H^A = (+)_{j} H_j^{A_l} (x) H_j^{A_r},
//
// i.e. an ordered list of block dimension pairs (l_j, r_j).  Basis vectors of
// block j occupy the contiguous index range [offset_j, offset_j + l_j * r_j),
// ordered with the left factor as the major index.  Blocks are indexed from 0.
class DspDecomposition {
 public:
  DspDecomposition() = default;
  explicit DspDecomposition(std::vector<std::pair<Index, Index>> dims);

  // J blocks with l_j = 1 and a common right dimension r: the shape used by
  // the randomized (permutation + block unitary) experiments.
  static DspDecomposition uniform_randomized(Index block_count, Index right_dim);

  Index block_count() const { return static_cast<Index>(dims_.size()); }
  Index left_dim(Index j) const;
  Index right_dim(Index j) const;
  Index block_dim(Index j) const;   // l_j * r_j
  Index block_offset(Index j) const;
  Index total_dim() const;          // sum_j l_j * r_j

  Index max_left_dim() const;
  Index max_right_dim() const;

  // True when every l_j = 1 and all r_j agree: block permutations and central
  // dephasing are then available.
  bool randomized_case() const;
  // The common right dimension in the randomized case; throws otherwise.
  Index uniform_right_dim() const;

  // The flattened space (+)_j H_j^{A_r} (x) H_j^{A_r'}, itself a
  // direct-sum-product decomposition with blocks (r_j, r_j).
  DspDecomposition flattened_space() const;

  bool operator==(const DspDecomposition& other) const = default;

  // Canonical literal, e.g. "J=[(1,2),(2,1)]".
  std::string to_literal() const;
  static DspDecomposition from_literal(const std::string& text);

 private:
  void check(Index j) const;
  std::vector<std::pair<Index, Index>> dims_;
  std::vector<Index> offsets_;
};

// ---------------------------------------------------------------------------
// Projectors and block extraction.

// Projector onto block j, as an operator on the named ambient factor.
LabeledOperator block_projector(const DspDecomposition& decomp,
                                const std::string& a_label, Index j);

// X_{jk} := Pi_j X Pi_k, embedded in the ambient space (projectors act on the
// named factor; other factors of x ride along).
LabeledOperator block_project(const LabeledOperator& x,
                              const DspDecomposition& decomp,
                              const std::string& a_label, Index j, Index k);

// Sum of the diagonal blocks Pi_j X Pi_j (removes all off-block coherence).
LabeledOperator pinch_blocks(const LabeledOperator& x,
                             const DspDecomposition& decomp,
                             const std::string& a_label);

// The completely dephasing channel on the block index, available in the
// randomized case (all l_j = 1), where blocks are points of a classical
// register.  Idempotent; throws if the decomposition has l_j > 1.
LabeledOperator dephase_central(const LabeledOperator& x,
                                const DspDecomposition& decomp,
                                const std::string& a_label);

// ---------------------------------------------------------------------------
// Fixed maximally entangled state and embeddings.

// The fixed maximally entangled state (+)_j sqrt(l_j r_j / d_A)
// |Phi_j^l>|Phi_j^r> on A (x) A', with the per-block states built on the
// standard computational basis of each block.  All transposes and Choi
// representations in this library are taken relative to this state's Schmidt
// basis, which is the standard basis of the ambient space.
Vector dsp_maximally_entangled_ket(const DspDecomposition& decomp);
DensityOperator dsp_maximally_entangled(const DspDecomposition& decomp,
                                        const std::string& a_label,
                                        const std::string& ap_label);

// The isometry W: A -> A_c (x) A_l (x) A_r that lays every block out on a
// rectangular register triple (block index, left factor, right factor), using
// the standard-basis injection for each block.  Satisfies W^dag W = I and
// W W^dag = sum_j |j><j| (x) Pi_j^{A_l} (x) Pi_j^{A_r}.
LabeledMap embedding_isometry(const DspDecomposition& decomp,
                              const std::string& a_label,
                              const std::string& ac_label,
                              const std::string& al_label,
                              const std::string& ar_label);

// The flattening map F: A (x) Abar -> A*, where
// A* = (+)_j H_j^{A_r} (x) H_j^{Abar_r} and
// F = (+)_j sqrt(d_A l_j / r_j) <Phi_j^l| (Pi_j (x) Pi_j).
LabeledMap flatten_map(const DspDecomposition& decomp,
                       const std::string& astar_label,
                       const std::string& a_label,
                       const std::string& abar_label);

// ---------------------------------------------------------------------------
// The flattened joint operator Lambda and its blocks.

// Lambda(psi, tau) := F (psi (x) tau) F^dag, with F acting on the named
// factor of psi and the named factor of tau.  The result lives on
// [astar_label, remaining psi factors, remaining tau factors].
LabeledOperator build_lambda(const LabeledOperator& psi,
                             const std::string& a_label,
                             const LabeledOperator& tau,
                             const std::string& abar_label,
                             const DspDecomposition& decomp,
                             const std::string& astar_label);

// The unscaled block contraction
//
//   Tr_{A_l}[ X_{sigma(j) sigma(k)}^{A_l^T ...} tau_{jk} ],
//
// embedded as the (j,k) block of an operator on [astar_label, rest of x,
// rest of tau].  The left-factor transpose is taken in the standard basis.
// sigma must preserve the block dimension profile; pass the identity
// permutation for the non-permuted case.  Scaled by d_A / sqrt(r_j r_k) these
// are exactly the blocks Pi_j Lambda Pi_k of build_lambda's output.
LabeledOperator flattened_block(const LabeledOperator& x,
                                const std::string& a_label,
                                const LabeledOperator& tau,
                                const std::string& abar_label,
                                const DspDecomposition& decomp,
                                const std::string& astar_label, Index j,
                                Index k, const std::vector<Index>& sigma);

// The same contraction without the ambient embedding: rows indexed by
// ((t, v), rest of x, rest of tau) over the (j, k) block only, with
// t, v < r_j on rows and t', v' < r_k on columns.  The cheap core behind
// flattened_block and the exact-average evaluations.
Matrix flattened_block_compact(const LabeledOperator& x,
                               const std::string& a_label,
                               const LabeledOperator& tau,
                               const std::string& abar_label,
                               const DspDecomposition& decomp, Index j, Index k,
                               const std::vector<Index>& sigma);

std::vector<Index> identity_permutation(Index n);

// ---------------------------------------------------------------------------
// Averaged state.

// The exact average of U X U^dag over block unitaries drawn from the product
// Haar measure:  (+)_j X_{jj}^{A_l ...} (x) pi_j^{A_r}.  Computed
// analytically; sampling is used only to validate this in tests.
LabeledOperator averaged_state(const LabeledOperator& x,
                               const DspDecomposition& decomp,
                               const std::string& a_label);

// ---------------------------------------------------------------------------
// Classically coherent states.

// A state on (A_c A_r) (x) (R_c R_r) that vanishes on mismatched classical
// labels of A_c and R_c:  rho = sum_{k,k'} |k><k'| (x) |k><k'| (x) rho_{kk'}.
struct ClassicallyCoherentState {
  DensityOperator state;  // layout [Ac, Ar, Rc, Rr]
  Index block_count = 0;  // dimension of Ac and Rc
  Index right_dim = 0;    // dimension of Ar
  Index reference_dim = 0;  // dimension of Rr

  // The operator block rho_{kk'} on Ar (x) Rr.
  Matrix block(Index k, Index kp) const;
};

// Builds the classically coherent state with blocks rho_{kk'} read off a
// positive semidefinite parent operator on [K, Ar, Rr] (K of dimension
// block_count), normalized to unit trace.  Throws if the parent has zero
// trace or is not positive semidefinite.
ClassicallyCoherentState classically_coherent_from_parent(
    const Matrix& parent, Index block_count, Index right_dim,
    Index reference_dim, const Tolerances& tol = default_tolerances());

// Validates the defining property on an arbitrary state (entries with
// mismatched Ac/Rc labels below tol.trace_normalization in magnitude).
bool is_classically_coherent(const LabeledOperator& state,
                             const std::string& ac_label,
                             const std::string& rc_label,
                             const Tolerances& tol = default_tolerances());

}  // namespace dspdec

#endif  // DSPDEC_DSP_SPACE_H
