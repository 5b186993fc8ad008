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

#ifndef DSPDEC_SAMPLING_H
#define DSPDEC_SAMPLING_H

#include <optional>
#include <string>
#include <vector>

#include "dspdec/channels.h"
#include "dspdec/dsp_space.h"
#include "dspdec/operators.h"
#include "dspdec/rng.h"

namespace dspdec {

enum class UnitaryKind { kHaarFull, kHaarDsp, kPermutation, kComposed };

// A unitary together with the structure it respects.  Factories validate
// unitarity; haar-dsp draws commute with every block projector and act as the
// identity on each left factor.
struct StructuredUnitary {
  UnitaryKind kind = UnitaryKind::kHaarFull;
  Matrix mat;
  std::optional<DspDecomposition> decomp;
};

// Haar-distributed unitary: complex Gaussian matrix, QR orthonormalization,
// then the diagonal phase fix that makes the triangular factor's diagonal
// positive (without the fix the distribution is not Haar).
StructuredUnitary haar_unitary(Index d, RngStream& rng);

// Block-structured draw (+)_j I^{A_l}_j (x) U_j with independent Haar U_j on
// each right factor.  Blocks with r_j = 1 receive a Haar-uniform phase.
StructuredUnitary dsp_unitary(const DspDecomposition& decomp, RngStream& rng);

// The block-permutation unitary sum_j |sigma(j)><j| (x) I^{A_r}; requires the
// randomized case (every block of shape (1, r)).
StructuredUnitary permutation_unitary(const std::vector<Index>& sigma,
                                      const DspDecomposition& decomp);

// Matrix product a * b, tagged as a composed draw.
StructuredUnitary composed(const StructuredUnitary& a,
                           const StructuredUnitary& b);

// Uniformly random permutation of {0, ..., n-1} (Fisher-Yates).
std::vector<Index> random_permutation(Index n, RngStream& rng);
std::vector<Index> inverse_permutation(const std::vector<Index>& sigma);

// ---------------------------------------------------------------------------
// Twisted twirling: exact second moments of products of block Haar unitaries.
//
// Operators live on [ar_label, arp_label, spectators...] where both twirled
// factors have dimension max_right_dim() and block j occupies the first r_j
// coordinates of a factor.  The input must be supported on the row blocks
// (j, k) and column blocks named by the pattern; spectator factors ride along.

enum class TwirlPattern {
  kDirect,    // E[(U_j (x) U_k) M (U_j (x) U_k)^dag],  j != k
  kCrossed,   // E[(U_j (x) U_k) M (U_k (x) U_j)^dag],  j != k
  kDiagonal,  // E[(U_j (x) U_j) M (U_j (x) U_j)^dag]
};

// Closed forms:
//   direct:   (P_j (x) P_k) / (r_j r_k)  (x)  Tr_{ArAr'}[(P_j (x) P_k) M]
//   crossed:  (F_{jk} / (r_j r_k))       (x)  Tr_{ArAr'}[F_{kj} M]
//   diagonal: [ (r_j I - F) (x) M_I + (r_j F - I) (x) M_F ] / (r_j (r_j^2-1))
// with F the swap restricted to the named blocks.  The diagonal case with
// r_j = 1 returns M itself (the unitary is a phase and cancels).
LabeledOperator twisted_twirl_exact(const LabeledOperator& m,
                                    const DspDecomposition& decomp, Index j,
                                    Index k, TwirlPattern pattern,
                                    const std::string& ar_label = "Ar",
                                    const std::string& arp_label = "Arp");

// The full second-moment map for an arbitrary index pattern
// E[(U_j (x) U_k) M (U_m (x) U_n)^dag]: dispatches to the three nonzero cases
// and returns the zero operator for every other pattern.
LabeledOperator twisted_twirl_pattern(const LabeledOperator& m,
                                      const DspDecomposition& decomp, Index j,
                                      Index k, Index mm, Index n,
                                      const std::string& ar_label = "Ar",
                                      const std::string& arp_label = "Arp");

// ---------------------------------------------------------------------------

// Exact value of the averaged squared weighted two-norm bound
//
//   sum_{jk} (d_A^2 / (r_j r_k)) ||Tr_{A_l}[X_{sigma(j)sigma(k)}^{A_l^T ...}
//                                            tau_{jk}]||^2_{2,sigma_w}
//
// for Hermitian X on [a_label, reference...] whose diagonal blocks have
// vanishing right-factor partial trace (checked), tau the Choi operator of t,
// and sigma_w a weighting state on the non-A* factors.  This is the exact
// average that dominates E_U || T(G_{sigma^{-1}} U X U^dag G_{sigma^{-1}}^dag)
// ||^2_{2,sigma_w}; Monte Carlo estimates of the left side validate it.
double exact_average_2norm(const LabeledOperator& x, const std::string& a_label,
                           const CpMap& t, const DensityOperator& sigma_w,
                           const std::vector<Index>& sigma,
                           const DspDecomposition& decomp,
                           const Tolerances& tol = default_tolerances());

}  // namespace dspdec

#endif  // DSPDEC_SAMPLING_H
