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

#include "dspdec/dsp_space.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace dspdec {

namespace {

void require(bool cond, const std::string& message) {
  if (!cond) {
    throw std::invalid_argument(message);
  }
}

// Validates that sigma is a permutation of [0, n) preserving the block
// dimension profile of decomp.
void check_block_permutation(const std::vector<Index>& sigma,
                             const DspDecomposition& decomp) {
  const Index n = decomp.block_count();
  require(static_cast<Index>(sigma.size()) == n,
          "block permutation has wrong length");
  std::vector<bool> seen(static_cast<size_t>(n), false);
  for (Index j = 0; j < n; ++j) {
    const Index m = sigma[static_cast<size_t>(j)];
    require(m >= 0 && m < n, "block permutation entry out of range");
    require(!seen[static_cast<size_t>(m)], "block permutation repeats an entry");
    seen[static_cast<size_t>(m)] = true;
    require(decomp.left_dim(m) == decomp.left_dim(j) &&
                decomp.right_dim(m) == decomp.right_dim(j),
            "block permutation does not preserve the dimension profile");
  }
}

}  // namespace

LabeledMap::LabeledMap(Matrix m, SubsystemLayout rows, SubsystemLayout cols)
    : mat(std::move(m)), row_layout(std::move(rows)), col_layout(std::move(cols)) {
  require(mat.rows() == row_layout.total_dim() &&
              mat.cols() == col_layout.total_dim(),
          "map dimensions do not match the labeled layouts");
}

DspDecomposition::DspDecomposition(std::vector<std::pair<Index, Index>> dims)
    : dims_(std::move(dims)) {
  require(!dims_.empty(), "decomposition needs at least one block");
  Index off = 0;
  offsets_.reserve(dims_.size());
  for (const auto& [l, r] : dims_) {
    require(l >= 1 && r >= 1, "block dimensions must be positive");
    offsets_.push_back(off);
    off += l * r;
  }
}

DspDecomposition DspDecomposition::uniform_randomized(Index block_count,
                                                      Index right_dim) {
  require(block_count >= 1 && right_dim >= 1,
          "randomized shape needs positive block count and right dimension");
  std::vector<std::pair<Index, Index>> dims(static_cast<size_t>(block_count),
                                            {1, right_dim});
  return DspDecomposition(std::move(dims));
}

void DspDecomposition::check(Index j) const {
  require(j >= 0 && j < block_count(), "block index out of range");
}

Index DspDecomposition::left_dim(Index j) const {
  check(j);
  return dims_[static_cast<size_t>(j)].first;
}

Index DspDecomposition::right_dim(Index j) const {
  check(j);
  return dims_[static_cast<size_t>(j)].second;
}

Index DspDecomposition::block_dim(Index j) const {
  check(j);
  return left_dim(j) * right_dim(j);
}

Index DspDecomposition::block_offset(Index j) const {
  check(j);
  return offsets_[static_cast<size_t>(j)];
}

Index DspDecomposition::total_dim() const {
  if (dims_.empty()) {
    return 0;
  }
  return offsets_.back() + dims_.back().first * dims_.back().second;
}

Index DspDecomposition::max_left_dim() const {
  Index m = 0;
  for (const auto& [l, r] : dims_) {
    m = std::max(m, l);
  }
  return m;
}

Index DspDecomposition::max_right_dim() const {
  Index m = 0;
  for (const auto& [l, r] : dims_) {
    m = std::max(m, r);
  }
  return m;
}

bool DspDecomposition::randomized_case() const {
  if (dims_.empty()) {
    return false;
  }
  const Index r = dims_.front().second;
  return std::all_of(dims_.begin(), dims_.end(), [r](const auto& lr) {
    return lr.first == 1 && lr.second == r;
  });
}

Index DspDecomposition::uniform_right_dim() const {
  require(randomized_case(),
          "uniform right dimension is defined only when every block is (1, r)");
  return dims_.front().second;
}

DspDecomposition DspDecomposition::flattened_space() const {
  std::vector<std::pair<Index, Index>> dims;
  dims.reserve(dims_.size());
  for (const auto& [l, r] : dims_) {
    dims.emplace_back(r, r);
  }
  return DspDecomposition(std::move(dims));
}

std::string DspDecomposition::to_literal() const {
  std::ostringstream out;
  out << "J=[";
  for (size_t i = 0; i < dims_.size(); ++i) {
    if (i > 0) {
      out << ",";
    }
    out << "(" << dims_[i].first << "," << dims_[i].second << ")";
  }
  out << "]";
  return out.str();
}

DspDecomposition DspDecomposition::from_literal(const std::string& text) {
  std::string s;
  s.reserve(text.size());
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) {
      s.push_back(c);
    }
  }
  require(s.rfind("J=[", 0) == 0 && !s.empty() && s.back() == ']',
          "decomposition literal must look like J=[(l1,r1),...]");
  std::string body = s.substr(3, s.size() - 4);
  std::vector<std::pair<Index, Index>> dims;
  size_t pos = 0;
  while (pos < body.size()) {
    require(body[pos] == '(', "expected '(' in decomposition literal");
    const size_t comma = body.find(',', pos);
    const size_t close = body.find(')', pos);
    require(comma != std::string::npos && close != std::string::npos &&
                comma < close,
            "malformed block entry in decomposition literal");
    Index l = 0;
    Index r = 0;
    try {
      l = static_cast<Index>(std::stoll(body.substr(pos + 1, comma - pos - 1)));
      r = static_cast<Index>(std::stoll(body.substr(comma + 1, close - comma - 1)));
    } catch (const std::exception&) {
      throw std::invalid_argument("non-numeric block dimension in literal");
    }
    dims.emplace_back(l, r);
    pos = close + 1;
    if (pos < body.size()) {
      require(body[pos] == ',', "expected ',' between block entries");
      ++pos;
    }
  }
  return DspDecomposition(std::move(dims));
}

// ---------------------------------------------------------------------------

LabeledOperator block_projector(const DspDecomposition& decomp,
                                const std::string& a_label, Index j) {
  const Index d = decomp.total_dim();
  Matrix p = Matrix::Zero(d, d);
  const Index off = decomp.block_offset(j);
  for (Index i = 0; i < decomp.block_dim(j); ++i) {
    p(off + i, off + i) = Cplx(1.0, 0.0);
  }
  return LabeledOperator(std::move(p), SubsystemLayout({{a_label, d}}));
}

LabeledOperator block_project(const LabeledOperator& x,
                              const DspDecomposition& decomp,
                              const std::string& a_label, Index j, Index k) {
  require(x.layout.dim_of(a_label) == decomp.total_dim(),
          "operator factor dimension does not match the decomposition");
  const LabeledOperator xf = moved_to_front(x, {a_label});
  const Index d_a = decomp.total_dim();
  const Index d_rest = xf.dim() / d_a;
  Matrix out = Matrix::Zero(xf.dim(), xf.dim());
  const Index off_j = decomp.block_offset(j);
  const Index off_k = decomp.block_offset(k);
  for (Index a = 0; a < decomp.block_dim(j); ++a) {
    for (Index b = 0; b < decomp.block_dim(k); ++b) {
      out.block((off_j + a) * d_rest, (off_k + b) * d_rest, d_rest, d_rest) =
          xf.mat.block((off_j + a) * d_rest, (off_k + b) * d_rest, d_rest,
                       d_rest);
    }
  }
  LabeledOperator result(std::move(out), xf.layout);
  // Undo the fronting so the caller sees the original factor order.
  return moved_to_front(result, x.layout.factor_names());
}

LabeledOperator pinch_blocks(const LabeledOperator& x,
                             const DspDecomposition& decomp,
                             const std::string& a_label) {
  require(x.layout.dim_of(a_label) == decomp.total_dim(),
          "operator factor dimension does not match the decomposition");
  const LabeledOperator xf = moved_to_front(x, {a_label});
  const Index d_a = decomp.total_dim();
  const Index d_rest = xf.dim() / d_a;
  Matrix out = Matrix::Zero(xf.dim(), xf.dim());
  for (Index j = 0; j < decomp.block_count(); ++j) {
    const Index off = decomp.block_offset(j);
    const Index dim = decomp.block_dim(j);
    out.block(off * d_rest, off * d_rest, dim * d_rest, dim * d_rest) =
        xf.mat.block(off * d_rest, off * d_rest, dim * d_rest, dim * d_rest);
  }
  LabeledOperator result(std::move(out), xf.layout);
  return moved_to_front(result, x.layout.factor_names());
}

LabeledOperator dephase_central(const LabeledOperator& x,
                                const DspDecomposition& decomp,
                                const std::string& a_label) {
  require(decomp.randomized_case(),
          "central dephasing requires every block to have left dimension 1");
  return pinch_blocks(x, decomp, a_label);
}

// ---------------------------------------------------------------------------

Vector dsp_maximally_entangled_ket(const DspDecomposition& decomp) {
  const Index d = decomp.total_dim();
  Vector ket = Vector::Zero(d * d);
  for (Index j = 0; j < decomp.block_count(); ++j) {
    const Index l = decomp.left_dim(j);
    const Index r = decomp.right_dim(j);
    const Index off = decomp.block_offset(j);
    // sqrt(l r / d) on the block, times the two block-local maximally
    // entangled states with norms 1/sqrt(l) and 1/sqrt(r).
    const double w = std::sqrt(static_cast<double>(l * r) /
                               static_cast<double>(d)) /
                     std::sqrt(static_cast<double>(l)) /
                     std::sqrt(static_cast<double>(r));
    for (Index s = 0; s < l; ++s) {
      for (Index t = 0; t < r; ++t) {
        const Index a = off + s * r + t;
        ket(a * d + a) += Cplx(w, 0.0);
      }
    }
  }
  return ket;
}

DensityOperator dsp_maximally_entangled(const DspDecomposition& decomp,
                                        const std::string& a_label,
                                        const std::string& ap_label) {
  const Index d = decomp.total_dim();
  const Vector ket = dsp_maximally_entangled_ket(decomp);
  SubsystemLayout layout({{a_label, d}, {ap_label, d}});
  Matrix mat = outer(ket, ket, layout).mat;
  return DensityOperator(std::move(mat), std::move(layout),
                         Normalization::kNormalized);
}

LabeledMap embedding_isometry(const DspDecomposition& decomp,
                              const std::string& a_label,
                              const std::string& ac_label,
                              const std::string& al_label,
                              const std::string& ar_label) {
  const Index d = decomp.total_dim();
  const Index n_blocks = decomp.block_count();
  const Index l_max = decomp.max_left_dim();
  const Index r_max = decomp.max_right_dim();
  Matrix w = Matrix::Zero(n_blocks * l_max * r_max, d);
  for (Index j = 0; j < decomp.block_count(); ++j) {
    const Index l = decomp.left_dim(j);
    const Index r = decomp.right_dim(j);
    const Index off = decomp.block_offset(j);
    for (Index s = 0; s < l; ++s) {
      for (Index t = 0; t < r; ++t) {
        w((j * l_max + s) * r_max + t, off + s * r + t) = Cplx(1.0, 0.0);
      }
    }
  }
  return LabeledMap(std::move(w),
                    SubsystemLayout({{ac_label, n_blocks},
                                     {al_label, l_max},
                                     {ar_label, r_max}}),
                    SubsystemLayout({{a_label, d}}));
}

LabeledMap flatten_map(const DspDecomposition& decomp,
                       const std::string& astar_label,
                       const std::string& a_label,
                       const std::string& abar_label) {
  const Index d = decomp.total_dim();
  const DspDecomposition star = decomp.flattened_space();
  const Index d_star = star.total_dim();
  Matrix f = Matrix::Zero(d_star, d * d);
  for (Index j = 0; j < decomp.block_count(); ++j) {
    const Index l = decomp.left_dim(j);
    const Index r = decomp.right_dim(j);
    const Index off = decomp.block_offset(j);
    const Index off_star = star.block_offset(j);
    // Block prefactor sqrt(d l / r) times the 1/sqrt(l) amplitude of the bra
    // over the two left factors.
    const double w = std::sqrt(static_cast<double>(d * l) /
                               static_cast<double>(r)) /
                     std::sqrt(static_cast<double>(l));
    for (Index t = 0; t < r; ++t) {
      for (Index v = 0; v < r; ++v) {
        const Index row = off_star + t * r + v;
        for (Index s = 0; s < l; ++s) {
          const Index a = off + s * r + t;
          const Index abar = off + s * r + v;
          f(row, a * d + abar) = Cplx(w, 0.0);
        }
      }
    }
  }
  return LabeledMap(std::move(f), SubsystemLayout({{astar_label, d_star}}),
                    SubsystemLayout({{a_label, d}, {abar_label, d}}));
}

// ---------------------------------------------------------------------------

LabeledOperator build_lambda(const LabeledOperator& psi,
                             const std::string& a_label,
                             const LabeledOperator& tau,
                             const std::string& abar_label,
                             const DspDecomposition& decomp,
                             const std::string& astar_label) {
  const Index d_a = decomp.total_dim();
  require(psi.layout.dim_of(a_label) == d_a &&
              tau.layout.dim_of(abar_label) == d_a,
          "state factors do not match the decomposition dimension");
  const LabeledOperator psi_f = moved_to_front(psi, {a_label});
  const LabeledOperator tau_f = moved_to_front(tau, {abar_label});
  const Index d_x = psi_f.dim() / d_a;
  const Index d_e = tau_f.dim() / d_a;

  const LabeledMap f = flatten_map(decomp, astar_label, a_label, abar_label);
  const Index d_star = f.row_layout.total_dim();

  // Nonzero entries of F, grouped by row.
  struct Entry {
    Index a, abar;
    Cplx w;
  };
  std::vector<std::vector<Entry>> rows(static_cast<size_t>(d_star));
  for (Index p = 0; p < d_star; ++p) {
    for (Index c = 0; c < d_a * d_a; ++c) {
      const Cplx w = f.mat(p, c);
      if (w != Cplx(0.0, 0.0)) {
        rows[static_cast<size_t>(p)].push_back({c / d_a, c % d_a, w});
      }
    }
  }

  const Index d_out = d_star * d_x * d_e;
  Matrix out = Matrix::Zero(d_out, d_out);
  for (Index p = 0; p < d_star; ++p) {
    for (Index q = 0; q < d_star; ++q) {
      for (const Entry& ep : rows[static_cast<size_t>(p)]) {
        for (const Entry& eq : rows[static_cast<size_t>(q)]) {
          const Cplx w = ep.w * std::conj(eq.w);
          for (Index x = 0; x < d_x; ++x) {
            for (Index xp = 0; xp < d_x; ++xp) {
              const Cplx pv = w * psi_f.mat(ep.a * d_x + x, eq.a * d_x + xp);
              if (pv == Cplx(0.0, 0.0)) {
                continue;
              }
              for (Index e = 0; e < d_e; ++e) {
                for (Index eo = 0; eo < d_e; ++eo) {
                  out((p * d_x + x) * d_e + e, (q * d_x + xp) * d_e + eo) +=
                      pv * tau_f.mat(ep.abar * d_e + e, eq.abar * d_e + eo);
                }
              }
            }
          }
        }
      }
    }
  }

  SubsystemLayout layout =
      SubsystemLayout({{astar_label, d_star}})
          .concatenated(psi_f.layout.without({a_label}))
          .concatenated(tau_f.layout.without({abar_label}));
  return LabeledOperator(std::move(out), std::move(layout));
}

std::vector<Index> identity_permutation(Index n) {
  std::vector<Index> sigma(static_cast<size_t>(n));
  std::iota(sigma.begin(), sigma.end(), Index{0});
  return sigma;
}

Matrix flattened_block_compact(const LabeledOperator& x,
                               const std::string& a_label,
                               const LabeledOperator& tau,
                               const std::string& abar_label,
                               const DspDecomposition& decomp, Index j, Index k,
                               const std::vector<Index>& sigma) {
  const Index d_a = decomp.total_dim();
  require(x.layout.dim_of(a_label) == d_a &&
              tau.layout.dim_of(abar_label) == d_a,
          "operator factors do not match the decomposition dimension");
  check_block_permutation(sigma, decomp);
  const LabeledOperator x_f = moved_to_front(x, {a_label});
  const LabeledOperator tau_f = moved_to_front(tau, {abar_label});
  const Index d_x = x_f.dim() / d_a;
  const Index d_e = tau_f.dim() / d_a;

  const Index l_j = decomp.left_dim(j);
  const Index l_k = decomp.left_dim(k);
  const Index r_j = decomp.right_dim(j);
  const Index r_k = decomp.right_dim(k);
  const Index off_j = decomp.block_offset(sigma[static_cast<size_t>(j)]);
  const Index off_k = decomp.block_offset(sigma[static_cast<size_t>(k)]);
  const Index toff_j = decomp.block_offset(j);
  const Index toff_k = decomp.block_offset(k);

  Matrix out = Matrix::Zero(r_j * r_j * d_x * d_e, r_k * r_k * d_x * d_e);
  // Entry ((t v), x, e), ((t' v'), x', e') of the contraction over the two
  // left factors.  The transpose on the left factor of x pairs its row index
  // with tau's row index and its column index with tau's column index.
  for (Index t = 0; t < r_j; ++t) {
    for (Index v = 0; v < r_j; ++v) {
      const Index row_star = t * r_j + v;
      for (Index tp = 0; tp < r_k; ++tp) {
        for (Index vp = 0; vp < r_k; ++vp) {
          const Index col_star = tp * r_k + vp;
          for (Index xr = 0; xr < d_x; ++xr) {
            for (Index xc = 0; xc < d_x; ++xc) {
              for (Index er = 0; er < d_e; ++er) {
                for (Index ec = 0; ec < d_e; ++ec) {
                  Cplx acc(0.0, 0.0);
                  for (Index s = 0; s < l_j; ++s) {
                    for (Index sp = 0; sp < l_k; ++sp) {
                      acc += x_f.mat((off_j + s * r_j + t) * d_x + xr,
                                     (off_k + sp * r_k + tp) * d_x + xc) *
                             tau_f.mat((toff_j + s * r_j + v) * d_e + er,
                                       (toff_k + sp * r_k + vp) * d_e + ec);
                    }
                  }
                  out((row_star * d_x + xr) * d_e + er,
                      (col_star * d_x + xc) * d_e + ec) = acc;
                }
              }
            }
          }
        }
      }
    }
  }
  return out;
}

LabeledOperator flattened_block(const LabeledOperator& x,
                                const std::string& a_label,
                                const LabeledOperator& tau,
                                const std::string& abar_label,
                                const DspDecomposition& decomp,
                                const std::string& astar_label, Index j,
                                Index k, const std::vector<Index>& sigma) {
  const Matrix compact =
      flattened_block_compact(x, a_label, tau, abar_label, decomp, j, k, sigma);
  const LabeledOperator x_f = moved_to_front(x, {a_label});
  const LabeledOperator tau_f = moved_to_front(tau, {abar_label});
  const Index d_a = decomp.total_dim();
  const Index d_x = x_f.dim() / d_a;
  const Index d_e = tau_f.dim() / d_a;
  const Index d_rest = d_x * d_e;

  const DspDecomposition star = decomp.flattened_space();
  const Index d_star = star.total_dim();
  const Index d_out = d_star * d_rest;
  Matrix out = Matrix::Zero(d_out, d_out);
  out.block(star.block_offset(j) * d_rest, star.block_offset(k) * d_rest,
            compact.rows(), compact.cols()) = compact;

  SubsystemLayout layout =
      SubsystemLayout({{astar_label, d_star}})
          .concatenated(x_f.layout.without({a_label}))
          .concatenated(tau_f.layout.without({abar_label}));
  return LabeledOperator(std::move(out), std::move(layout));
}

// ---------------------------------------------------------------------------

LabeledOperator averaged_state(const LabeledOperator& x,
                               const DspDecomposition& decomp,
                               const std::string& a_label) {
  require(x.layout.dim_of(a_label) == decomp.total_dim(),
          "operator factor dimension does not match the decomposition");
  const LabeledOperator xf = moved_to_front(x, {a_label});
  const Index d_a = decomp.total_dim();
  const Index d_rest = xf.dim() / d_a;
  Matrix out = Matrix::Zero(xf.dim(), xf.dim());
  for (Index j = 0; j < decomp.block_count(); ++j) {
    const Index l = decomp.left_dim(j);
    const Index r = decomp.right_dim(j);
    const Index off = decomp.block_offset(j);
    // Left-factor block of X_jj with the right factor traced out.
    Matrix traced = Matrix::Zero(l * d_rest, l * d_rest);
    for (Index s = 0; s < l; ++s) {
      for (Index sp = 0; sp < l; ++sp) {
        for (Index t = 0; t < r; ++t) {
          traced.block(s * d_rest, sp * d_rest, d_rest, d_rest) +=
              xf.mat.block((off + s * r + t) * d_rest,
                           (off + sp * r + t) * d_rest, d_rest, d_rest);
        }
      }
    }
    const double inv_r = 1.0 / static_cast<double>(r);
    for (Index s = 0; s < l; ++s) {
      for (Index sp = 0; sp < l; ++sp) {
        for (Index t = 0; t < r; ++t) {
          out.block((off + s * r + t) * d_rest, (off + sp * r + t) * d_rest,
                    d_rest, d_rest) =
              inv_r * traced.block(s * d_rest, sp * d_rest, d_rest, d_rest);
        }
      }
    }
  }
  LabeledOperator result(std::move(out), xf.layout);
  return moved_to_front(result, x.layout.factor_names());
}

// ---------------------------------------------------------------------------

Matrix ClassicallyCoherentState::block(Index k, Index kp) const {
  const Index d_w = right_dim * reference_dim;
  Matrix out(d_w, d_w);
  for (Index a = 0; a < right_dim; ++a) {
    for (Index w = 0; w < reference_dim; ++w) {
      for (Index ap = 0; ap < right_dim; ++ap) {
        for (Index wp = 0; wp < reference_dim; ++wp) {
          const Index row =
              ((k * right_dim + a) * block_count + k) * reference_dim + w;
          const Index col =
              ((kp * right_dim + ap) * block_count + kp) * reference_dim + wp;
          out(a * reference_dim + w, ap * reference_dim + wp) =
              state.mat(row, col);
        }
      }
    }
  }
  return out;
}

ClassicallyCoherentState classically_coherent_from_parent(
    const Matrix& parent, Index block_count, Index right_dim,
    Index reference_dim, const Tolerances& tol) {
  const Index d_w = right_dim * reference_dim;
  require(parent.rows() == block_count * d_w && parent.cols() == parent.rows(),
          "parent operator has the wrong dimension");
  const double norm = parent.trace().real();
  require(norm > tol.trace_normalization,
          "parent operator must have positive trace");

  const Index d =
      block_count * right_dim * block_count * reference_dim;
  Matrix out = Matrix::Zero(d, d);
  for (Index k = 0; k < block_count; ++k) {
    for (Index kp = 0; kp < block_count; ++kp) {
      for (Index a = 0; a < right_dim; ++a) {
        for (Index w = 0; w < reference_dim; ++w) {
          for (Index ap = 0; ap < right_dim; ++ap) {
            for (Index wp = 0; wp < reference_dim; ++wp) {
              const Index row =
                  ((k * right_dim + a) * block_count + k) * reference_dim + w;
              const Index col =
                  ((kp * right_dim + ap) * block_count + kp) * reference_dim +
                  wp;
              out(row, col) =
                  parent((k * right_dim + a) * reference_dim + w,
                         (kp * right_dim + ap) * reference_dim + wp) /
                  norm;
            }
          }
        }
      }
    }
  }

  ClassicallyCoherentState result;
  result.block_count = block_count;
  result.right_dim = right_dim;
  result.reference_dim = reference_dim;
  result.state = DensityOperator(std::move(out),
                                 SubsystemLayout({{"Ac", block_count},
                                                  {"Ar", right_dim},
                                                  {"Rc", block_count},
                                                  {"Rr", reference_dim}}),
                                 Normalization::kNormalized, tol);
  return result;
}

bool is_classically_coherent(const LabeledOperator& state,
                             const std::string& ac_label,
                             const std::string& rc_label,
                             const Tolerances& tol) {
  const LabeledOperator fronted = moved_to_front(state, {ac_label, rc_label});
  const Index d_ac = state.layout.dim_of(ac_label);
  const Index d_rc = state.layout.dim_of(rc_label);
  require(d_ac == d_rc, "classical registers must have equal dimension");
  const Index d_rest = fronted.dim() / (d_ac * d_rc);
  for (Index k = 0; k < d_ac; ++k) {
    for (Index kp = 0; kp < d_rc; ++kp) {
      if (k == kp) {
        continue;
      }
      const Index start = (k * d_rc + kp) * d_rest;
      // The defining property: columns (and by hermiticity rows) with
      // mismatched classical labels vanish.
      if (fronted.mat.middleCols(start, d_rest).cwiseAbs().maxCoeff() >
          tol.trace_normalization) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace dspdec
