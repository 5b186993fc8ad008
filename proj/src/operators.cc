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

#include "dspdec/operators.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dspdec {

const Tolerances& default_tolerances() {
  static const Tolerances tol;
  return tol;
}

LabeledOperator::LabeledOperator(Matrix m, SubsystemLayout l)
    : mat(std::move(m)), layout(std::move(l)) {
  if (mat.rows() != mat.cols()) {
    throw std::invalid_argument("operator matrix must be square");
  }
  if (mat.rows() != layout.total_dim()) {
    throw std::invalid_argument(
        "matrix dimension " + std::to_string(mat.rows()) +
        " does not match layout " + layout.to_string());
  }
}

HermitianOperator::HermitianOperator(Matrix m, SubsystemLayout l,
                                     const Tolerances& tol)
    : LabeledOperator(std::move(m), std::move(l)) {
  double dev = (mat - mat.adjoint()).cwiseAbs().maxCoeff();
  if (dev > tol.hermiticity) {
    throw std::invalid_argument("operator is not Hermitian (deviation " +
                                std::to_string(dev) + ")");
  }
  mat = ((mat + mat.adjoint()) / 2.0).eval();
}

DensityOperator::DensityOperator(Matrix m, SubsystemLayout l,
                                 Normalization normalization,
                                 const Tolerances& tol)
    : HermitianOperator(std::move(m), std::move(l), tol),
      normalization_(normalization) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(mat, Eigen::EigenvaluesOnly);
  double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < tol.psd_floor) {
    throw std::invalid_argument(
        "operator is not positive semidefinite (min eigenvalue " +
        std::to_string(min_eig) + ")");
  }
  double tr = mat.trace().real();
  if (normalization_ == Normalization::kNormalized &&
      std::abs(tr - 1.0) > tol.trace_normalization) {
    throw std::invalid_argument("density operator trace " + std::to_string(tr) +
                                " is not 1");
  }
  if (normalization_ == Normalization::kSubnormalized &&
      tr > 1.0 + tol.trace_normalization) {
    throw std::invalid_argument("subnormalized operator has trace " +
                                std::to_string(tr) + " > 1");
  }
}

// ---------------------------------------------------------------------------

LabeledOperator moved_to_front(const LabeledOperator& x,
                               const std::vector<std::string>& front) {
  std::vector<Index> perm = detail::front_permutation(x.layout, front);
  const Index d = x.dim();
  Matrix out(d, d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) out(i, j) = x.mat(perm[i], perm[j]);
  }
  return LabeledOperator(std::move(out),
                         detail::fronted_layout(x.layout, front));
}

LabeledOperator merged_factors(const LabeledOperator& x,
                               const std::vector<std::string>& names,
                               const std::string& merged_name) {
  return LabeledOperator(x.mat, x.layout.merged(names, merged_name));
}

Matrix embedded_on(const LabeledOperator& op, const SubsystemLayout& full) {
  std::vector<std::string> names;
  for (const Factor& f : op.layout.factors()) {
    if (full.dim_of(f.name) != f.dim) {
      throw std::invalid_argument("factor '" + f.name +
                                  "' has mismatched dimension in embedding");
    }
    names.push_back(f.name);
  }
  std::vector<Index> perm = detail::front_permutation(full, names);
  const Index d_op = op.dim();
  const Index d_rest = full.total_dim() / d_op;
  Matrix out = Matrix::Zero(full.total_dim(), full.total_dim());
  // In the fronted ordering the embedding is op (x) identity; undo the
  // permutation entrywise.
  for (Index a = 0; a < d_op; ++a) {
    for (Index b = 0; b < d_op; ++b) {
      const Cplx v = op.mat(a, b);
      if (v == Cplx(0, 0)) continue;
      for (Index t = 0; t < d_rest; ++t) {
        out(perm[a * d_rest + t], perm[b * d_rest + t]) = v;
      }
    }
  }
  return out;
}

LabeledOperator tensor(const LabeledOperator& x, const LabeledOperator& y) {
  SubsystemLayout layout = x.layout.concatenated(y.layout);
  const Index dx = x.dim(), dy = y.dim();
  Matrix out(dx * dy, dx * dy);
  for (Index i = 0; i < dx; ++i) {
    for (Index j = 0; j < dx; ++j) {
      out.block(i * dy, j * dy, dy, dy) = x.mat(i, j) * y.mat;
    }
  }
  return LabeledOperator(std::move(out), std::move(layout));
}

LabeledOperator partial_trace(const LabeledOperator& x,
                              const std::vector<std::string>& keep) {
  LabeledOperator fronted = moved_to_front(x, keep);
  SubsystemLayout kept_layout = x.layout.subset(keep);
  const Index d_keep = kept_layout.total_dim();
  const Index d_rest = x.dim() / d_keep;
  Matrix out = Matrix::Zero(d_keep, d_keep);
  for (Index a = 0; a < d_keep; ++a) {
    for (Index b = 0; b < d_keep; ++b) {
      Cplx sum = 0;
      for (Index t = 0; t < d_rest; ++t) {
        sum += fronted.mat(a * d_rest + t, b * d_rest + t);
      }
      out(a, b) = sum;
    }
  }
  return LabeledOperator(std::move(out), std::move(kept_layout));
}

// ---------------------------------------------------------------------------

namespace {

Eigen::SelfAdjointEigenSolver<Matrix> eigensolve(const Matrix& x) {
  Matrix sym = (x + x.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("eigendecomposition failed");
  }
  return es;
}

}  // namespace

Matrix hermitian_sqrt(const Matrix& x, const Tolerances& tol) {
  auto es = eigensolve(x);
  Eigen::VectorXd vals = es.eigenvalues();
  for (Index i = 0; i < vals.size(); ++i) {
    if (vals[i] < tol.psd_floor) {
      throw std::invalid_argument(
          "square root of an operator with eigenvalue " +
          std::to_string(vals[i]));
    }
    vals[i] = std::sqrt(std::max(vals[i], 0.0));
  }
  return es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix hermitian_power(const Matrix& x, double p, const Tolerances& tol) {
  auto es = eigensolve(x);
  Eigen::VectorXd vals = es.eigenvalues();
  for (Index i = 0; i < vals.size(); ++i) {
    if (p < 0 && vals[i] <= tol.full_rank_floor) {
      throw std::invalid_argument(
          "inverse power of a singular operator (eigenvalue " +
          std::to_string(vals[i]) + ")");
    }
    if (vals[i] < tol.psd_floor) {
      throw std::invalid_argument("power of an operator with eigenvalue " +
                                  std::to_string(vals[i]));
    }
    vals[i] = std::pow(std::max(vals[i], 0.0), p);
  }
  return es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint();
}

double trace_norm(const Matrix& x) {
  return eigensolve(x).eigenvalues().cwiseAbs().sum();
}

double hs_norm(const Matrix& x) { return x.norm(); }

double weighted_two_norm(const LabeledOperator& x, const DensityOperator& sigma,
                         const Tolerances& tol) {
  LabeledOperator w(hermitian_power(sigma.mat, -0.25, tol), sigma.layout);
  Matrix conj = embedded_on(w, x.layout);
  return hs_norm(conj * x.mat * conj);
}

double root_fidelity(const Matrix& rho, const Matrix& sigma,
                     const Tolerances& tol) {
  Matrix s = hermitian_sqrt(sigma, tol);
  Matrix inner = hermitian_sqrt(s * rho * s, tol);
  return inner.trace().real();
}

double generalized_fidelity(const DensityOperator& rho,
                            const DensityOperator& sigma,
                            const Tolerances& tol) {
  double tr_rho = rho.mat.trace().real();
  double tr_sigma = sigma.mat.trace().real();
  if (tr_rho > 1.0 + tol.trace_normalization ||
      tr_sigma > 1.0 + tol.trace_normalization) {
    throw std::invalid_argument(
        "generalized fidelity requires subnormalized inputs");
  }
  double slack =
      std::sqrt(std::max(1.0 - tr_rho, 0.0) * std::max(1.0 - tr_sigma, 0.0));
  return root_fidelity(rho.mat, sigma.mat, tol) + slack;
}

double purified_distance(const DensityOperator& rho,
                         const DensityOperator& sigma, const Tolerances& tol) {
  double f = generalized_fidelity(rho, sigma, tol);
  f = std::min(f, 1.0);
  return std::sqrt(std::max(1.0 - f * f, 0.0));
}

LabeledOperator identity_operator(const SubsystemLayout& layout) {
  return LabeledOperator(
      Matrix::Identity(layout.total_dim(), layout.total_dim()), layout);
}

LabeledOperator outer(const Vector& ket, const Vector& bra,
                      const SubsystemLayout& layout) {
  return LabeledOperator(ket * bra.adjoint(), layout);
}

}  // namespace dspdec
