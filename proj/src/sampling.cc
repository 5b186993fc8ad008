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

#include "dspdec/sampling.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace dspdec {

namespace {

void require(bool cond, const std::string& message) {
  if (!cond) {
    throw std::invalid_argument(message);
  }
}

void check_unitary(const Matrix& u, const Tolerances& tol) {
  const Matrix gap =
      u.adjoint() * u - Matrix::Identity(u.rows(), u.cols());
  if (gap.norm() > 100 * tol.hermiticity) {
    throw std::runtime_error("sampled matrix failed the unitarity check");
  }
}

}  // namespace

StructuredUnitary haar_unitary(Index d, RngStream& rng) {
  require(d >= 1, "dimension must be positive");
  const Matrix g = ginibre(d, d, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix u = qr.householderQ();
  // Phase fix: absorb the phases of the triangular factor's diagonal so the
  // decomposition is unique and the draw is Haar.
  const Matrix r = qr.matrixQR();
  for (Index i = 0; i < d; ++i) {
    const Cplx rii = r(i, i);
    const double mag = std::abs(rii);
    u.col(i) *= mag == 0.0 ? Cplx(1.0, 0.0) : rii / mag;
  }
  check_unitary(u, default_tolerances());
  return StructuredUnitary{UnitaryKind::kHaarFull, std::move(u), std::nullopt};
}

StructuredUnitary dsp_unitary(const DspDecomposition& decomp, RngStream& rng) {
  const Index d = decomp.total_dim();
  Matrix u = Matrix::Zero(d, d);
  for (Index j = 0; j < decomp.block_count(); ++j) {
    const Index l = decomp.left_dim(j);
    const Index r = decomp.right_dim(j);
    const Index off = decomp.block_offset(j);
    const StructuredUnitary uj = haar_unitary(r, rng);
    for (Index s = 0; s < l; ++s) {
      u.block(off + s * r, off + s * r, r, r) = uj.mat;
    }
  }
  check_unitary(u, default_tolerances());
  return StructuredUnitary{UnitaryKind::kHaarDsp, std::move(u), decomp};
}

StructuredUnitary permutation_unitary(const std::vector<Index>& sigma,
                                      const DspDecomposition& decomp) {
  require(decomp.randomized_case(),
          "block permutations require every block to have shape (1, r)");
  const Index n = decomp.block_count();
  require(static_cast<Index>(sigma.size()) == n,
          "permutation has the wrong length");
  std::vector<bool> seen(static_cast<size_t>(n), false);
  for (Index j = 0; j < n; ++j) {
    const Index m = sigma[static_cast<size_t>(j)];
    require(m >= 0 && m < n && !seen[static_cast<size_t>(m)],
            "not a permutation");
    seen[static_cast<size_t>(m)] = true;
  }
  const Index r = decomp.uniform_right_dim();
  const Index d = decomp.total_dim();
  Matrix g = Matrix::Zero(d, d);
  for (Index j = 0; j < n; ++j) {
    for (Index t = 0; t < r; ++t) {
      g(sigma[static_cast<size_t>(j)] * r + t, j * r + t) = Cplx(1.0, 0.0);
    }
  }
  return StructuredUnitary{UnitaryKind::kPermutation, std::move(g), decomp};
}

StructuredUnitary composed(const StructuredUnitary& a,
                           const StructuredUnitary& b) {
  require(a.mat.cols() == b.mat.rows(), "composition dimension mismatch");
  return StructuredUnitary{UnitaryKind::kComposed, a.mat * b.mat,
                           a.decomp ? a.decomp : b.decomp};
}

std::vector<Index> random_permutation(Index n, RngStream& rng) {
  require(n >= 1, "permutation length must be positive");
  std::vector<Index> sigma(static_cast<size_t>(n));
  std::iota(sigma.begin(), sigma.end(), Index{0});
  for (Index i = n - 1; i > 0; --i) {
    std::swap(sigma[static_cast<size_t>(i)],
              sigma[static_cast<size_t>(rng.uniform_index(i + 1))]);
  }
  return sigma;
}

std::vector<Index> inverse_permutation(const std::vector<Index>& sigma) {
  std::vector<Index> inv(sigma.size());
  for (size_t j = 0; j < sigma.size(); ++j) {
    inv[static_cast<size_t>(sigma[j])] = static_cast<Index>(j);
  }
  return inv;
}

// ---------------------------------------------------------------------------

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// Projector onto the first r coordinates of a d-dimensional factor.
Matrix head_projector(Index d, Index r) {
  Matrix p = Matrix::Zero(d, d);
  for (Index i = 0; i < r; ++i) {
    p(i, i) = Cplx(1.0, 0.0);
  }
  return p;
}

// The swap on the two twirled factors, restricted to row blocks (a, b) and
// column blocks (b, a).
Matrix restricted_swap(Index d, Index r_rows_first, Index r_rows_second) {
  Matrix f = Matrix::Zero(d * d, d * d);
  for (Index a = 0; a < r_rows_first; ++a) {
    for (Index b = 0; b < r_rows_second; ++b) {
      f(a * d + b, b * d + a) = Cplx(1.0, 0.0);
    }
  }
  return f;
}

// Asserts m is supported on rows (P_rj (x) P_rk) and columns
// (P_rm (x) P_rn) of the two twirled factors.
void check_support(const LabeledOperator& m_fronted, Index d, Index r_j,
                   Index r_k, Index r_m, Index r_n, const Tolerances& tol) {
  const Index d_rest = m_fronted.dim() / (d * d);
  double worst = 0.0;
  for (Index a = 0; a < d; ++a) {
    for (Index b = 0; b < d; ++b) {
      const bool row_in = a < r_j && b < r_k;
      for (Index c = 0; c < d; ++c) {
        for (Index e = 0; e < d; ++e) {
          const bool col_in = c < r_m && e < r_n;
          if (row_in && col_in) {
            continue;
          }
          worst = std::max(
              worst, m_fronted.mat
                         .block(((a * d) + b) * d_rest, ((c * d) + e) * d_rest,
                                d_rest, d_rest)
                         .cwiseAbs()
                         .maxCoeff());
        }
      }
    }
  }
  if (worst > 100 * tol.hermiticity) {
    throw std::invalid_argument(
        "operator is not supported on the twirled blocks");
  }
}

// Tensor of a two-factor operator with a spectator operator, arranged as
// [ar, arp, spectators...] and then restored to the original factor order.
LabeledOperator assemble(const Matrix& pair_op, const LabeledOperator& rest,
                         const LabeledOperator& original,
                         const std::string& ar_label,
                         const std::string& arp_label, Index d) {
  const LabeledOperator pair(
      pair_op, SubsystemLayout({{ar_label, d}, {arp_label, d}}));
  const LabeledOperator together = tensor(pair, rest);
  return moved_to_front(together, original.layout.factor_names());
}

}  // namespace

LabeledOperator twisted_twirl_exact(const LabeledOperator& m,
                                    const DspDecomposition& decomp, Index j,
                                    Index k, TwirlPattern pattern,
                                    const std::string& ar_label,
                                    const std::string& arp_label) {
  const Tolerances& tol = default_tolerances();
  const Index d = decomp.max_right_dim();
  require(m.layout.dim_of(ar_label) == d && m.layout.dim_of(arp_label) == d,
          "twirled factors must have the maximal right dimension");
  const Index r_j = decomp.right_dim(j);
  const Index r_k = decomp.right_dim(k);
  const LabeledOperator mf = moved_to_front(m, {ar_label, arp_label});
  const std::vector<std::string> rest_names =
      mf.layout.without({ar_label, arp_label}).factor_names();

  const auto contract = [&](const Matrix& probe) {
    // Tr_{ArAr'}[(probe (x) I) m] on the spectator factors.
    const LabeledOperator probe_op(
        probe, SubsystemLayout({{ar_label, d}, {arp_label, d}}));
    const Matrix probed =
        embedded_on(probe_op, mf.layout) * mf.mat;
    if (rest_names.empty()) {
      Matrix scalar(1, 1);
      scalar(0, 0) = probed.trace();
      return LabeledOperator(scalar, SubsystemLayout{});
    }
    return partial_trace(LabeledOperator(probed, mf.layout), rest_names);
  };

  switch (pattern) {
    case TwirlPattern::kDirect: {
      require(j != k, "direct pattern requires distinct blocks");
      check_support(mf, d, r_j, r_k, r_j, r_k, tol);
      const Matrix proj = kron(head_projector(d, r_j), head_projector(d, r_k));
      const LabeledOperator m_i = contract(proj);
      const Matrix pair = proj / static_cast<double>(r_j * r_k);
      return assemble(pair, m_i, m, ar_label, arp_label, d);
    }
    case TwirlPattern::kCrossed: {
      require(j != k, "crossed pattern requires distinct blocks");
      check_support(mf, d, r_j, r_k, r_k, r_j, tol);
      // F_{jk}: columns in blocks (k, j), rows in blocks (j, k);
      // F_{kj} is its adjoint.
      const Matrix f_jk = restricted_swap(d, r_j, r_k);
      const LabeledOperator m_f = contract(f_jk.adjoint());
      const Matrix pair = f_jk / static_cast<double>(r_j * r_k);
      return assemble(pair, m_f, m, ar_label, arp_label, d);
    }
    case TwirlPattern::kDiagonal: {
      require(j == k, "diagonal pattern acts on one block");
      check_support(mf, d, r_j, r_j, r_j, r_j, tol);
      if (r_j == 1) {
        // A single phase cancels between the two sides.
        return m;
      }
      const Matrix proj = kron(head_projector(d, r_j), head_projector(d, r_j));
      const Matrix f_jj = restricted_swap(d, r_j, r_j);
      const LabeledOperator m_i = contract(proj);
      const LabeledOperator m_f = contract(f_jj);
      const double r = static_cast<double>(r_j);
      const double denom = r * (r * r - 1.0);
      const LabeledOperator term_i = assemble(
          (r * proj - f_jj) / denom, m_i, m, ar_label, arp_label, d);
      const LabeledOperator term_f = assemble(
          (r * f_jj - proj) / denom, m_f, m, ar_label, arp_label, d);
      return LabeledOperator(term_i.mat + term_f.mat, term_i.layout);
    }
  }
  throw std::logic_error("unreachable twirl pattern");
}

LabeledOperator twisted_twirl_pattern(const LabeledOperator& m,
                                      const DspDecomposition& decomp, Index j,
                                      Index k, Index mm, Index n,
                                      const std::string& ar_label,
                                      const std::string& arp_label) {
  if (j == k && k == mm && mm == n) {
    return twisted_twirl_exact(m, decomp, j, k, TwirlPattern::kDiagonal,
                               ar_label, arp_label);
  }
  if (j != k && mm == j && n == k) {
    return twisted_twirl_exact(m, decomp, j, k, TwirlPattern::kDirect, ar_label,
                               arp_label);
  }
  if (j != k && mm == k && n == j) {
    return twisted_twirl_exact(m, decomp, j, k, TwirlPattern::kCrossed,
                               ar_label, arp_label);
  }
  // Every other index pattern averages to zero (an unmatched Haar factor
  // integrates to zero by phase invariance).
  return LabeledOperator(Matrix::Zero(m.dim(), m.dim()), m.layout);
}

// ---------------------------------------------------------------------------

double exact_average_2norm(const LabeledOperator& x, const std::string& a_label,
                           const CpMap& t, const DensityOperator& sigma_w,
                           const std::vector<Index>& sigma,
                           const DspDecomposition& decomp,
                           const Tolerances& tol) {
  const Index d_a = decomp.total_dim();
  require(x.layout.dim_of(a_label) == d_a && t.input_dim() == d_a,
          "operator and map must match the decomposition dimension");

  // Diagonal blocks must have vanishing right-factor partial trace.
  const LabeledOperator xf = moved_to_front(x, {a_label});
  const Index d_rest = xf.dim() / d_a;
  for (Index j = 0; j < decomp.block_count(); ++j) {
    const Index l = decomp.left_dim(j);
    const Index r = decomp.right_dim(j);
    const Index off = decomp.block_offset(j);
    for (Index s = 0; s < l; ++s) {
      for (Index sp = 0; sp < l; ++sp) {
        Matrix traced = Matrix::Zero(d_rest, d_rest);
        for (Index u = 0; u < r; ++u) {
          traced += xf.mat.block((off + s * r + u) * d_rest,
                                 (off + sp * r + u) * d_rest, d_rest, d_rest);
        }
        if (traced.cwiseAbs().maxCoeff() > tol.trace_normalization) {
          throw std::invalid_argument(
              "diagonal blocks must have vanishing right-factor trace");
        }
      }
    }
  }

  // Weighting operator on the non-flattened factors, shared by every block.
  const SubsystemLayout rest_layout =
      xf.layout.without({a_label})
          .concatenated(
              t.choi().layout.without({t.input_label()}));
  const LabeledOperator w_op(hermitian_power(sigma_w.mat, -0.25, tol),
                             sigma_w.layout);
  const Matrix w = embedded_on(w_op, rest_layout);
  const Index d_w = rest_layout.total_dim();

  double total = 0.0;
  for (Index j = 0; j < decomp.block_count(); ++j) {
    for (Index k = 0; k < decomp.block_count(); ++k) {
      const Matrix block = flattened_block_compact(
          x, a_label, t.choi(), t.input_label(), decomp, j, k, sigma);
      double sq = 0.0;
      for (Index p = 0; p * d_w < block.rows(); ++p) {
        for (Index q = 0; q * d_w < block.cols(); ++q) {
          sq += (w * block.block(p * d_w, q * d_w, d_w, d_w) * w).squaredNorm();
        }
      }
      const double scale = static_cast<double>(d_a * d_a) /
                           static_cast<double>(decomp.right_dim(j) *
                                               decomp.right_dim(k));
      total += scale * sq;
    }
  }
  return total;
}

}  // namespace dspdec
