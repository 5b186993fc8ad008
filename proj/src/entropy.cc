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

#include "dspdec/entropy.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace dspdec {

namespace {

// ---------------------------------------------------------------------------
// Bipartition bookkeeping: the conditioned factors are moved to the front so
// the solver sees a plain (A, B) index split with A most significant.

struct Bipartition {
  Matrix mat;              // rho with the A factors leading
  SubsystemLayout rest;    // layout of the conditioning side
  Index d_a = 1;
  Index d_b = 1;
};

Bipartition split_out(const LabeledOperator& rho,
                      const std::vector<std::string>& a_labels) {
  if (a_labels.empty()) {
    throw std::invalid_argument("conditioned subsystem list is empty");
  }
  const LabeledOperator fronted = moved_to_front(rho, a_labels);
  Bipartition part;
  part.mat = fronted.mat;
  part.rest = fronted.layout.without(a_labels);
  for (const std::string& name : a_labels) {
    part.d_a *= rho.layout.dim_of(name);
  }
  part.d_b = part.rest.total_dim();
  return part;
}

void check_conditioner_layout(const LabeledOperator& rho,
                              const std::vector<std::string>& a_labels,
                              const DensityOperator& sigma) {
  SubsystemLayout rest = rho.layout.without(a_labels);
  for (const Factor& f : sigma.layout.factors()) {
    if (!rest.has(f.name) || rest.dim_of(f.name) != f.dim) {
      throw std::invalid_argument(
          "conditioner factor '" + f.name +
          "' does not match a conditioning factor of the state");
    }
  }
  if (sigma.layout.total_dim() != rest.total_dim()) {
    throw std::invalid_argument(
        "conditioner must cover all non-conditioned factors");
  }
}

double largest_eigenvalue(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

// ---------------------------------------------------------------------------
// Barrier solver for  min{Tr s : I (x) s >= rho, s >= 0}  over Hermitian s.
//
// The solver follows the central path of
//   f_t(s) = t Tr s - logdet(I (x) s - rho) - logdet s,
// certifying each stage by the explicit dual-feasible candidate
// X = (M + delta I) / (t q),  M = (I (x) s - rho)^{-1},
// with q chosen so that Tr_A X <= I.  Weak duality gives
// Tr[rho X] <= optimum <= Tr s for every such pair, so the reported interval
// does not rely on centering accuracy.  The final stages run in long double:
// the slack matrix has condition number ~t near the end of the path, and the
// dual value degrades as (machine epsilon) * t, which in double precision
// would floor the certified gap above the requested tolerance.

template <typename Real>
using CMat = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using CVec = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
CMat<Real> hermitized(const CMat<Real>& m) {
  return (m + CMat<Real>(m.adjoint())) / Real(2);
}

template <typename Real>
CMat<Real> kron_square(const CMat<Real>& a, const CMat<Real>& b) {
  CMat<Real> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

template <typename Real>
CMat<Real> trace_out_first(const CMat<Real>& m, Index d_a, Index d_b) {
  CMat<Real> out = CMat<Real>::Zero(d_b, d_b);
  for (Index a = 0; a < d_a; ++a) {
    out += m.block(a * d_b, a * d_b, d_b, d_b);
  }
  return out;
}

template <typename Real>
CMat<Real> slack_matrix(const CMat<Real>& rho, const CMat<Real>& sigma,
                        Index d_a, Index d_b) {
  CMat<Real> s = -rho;
  for (Index a = 0; a < d_a; ++a) {
    s.block(a * d_b, a * d_b, d_b, d_b) += sigma;
  }
  return s;
}

// Cholesky factorization; reports positive definiteness and the log
// determinant.  Non-finite factors are treated as failures.
template <typename Real>
bool pd_factorize(const CMat<Real>& m, Eigen::LLT<CMat<Real>>* llt,
                  Real* logdet) {
  llt->compute(m);
  if (llt->info() != Eigen::Success) return false;
  Real sum = 0;
  const auto& l = llt->matrixLLT();
  for (Index i = 0; i < m.rows(); ++i) {
    const Real d = std::real(l(i, i));
    if (!(d > Real(0)) || !std::isfinite(static_cast<double>(d))) return false;
    sum += std::log(d);
  }
  *logdet = Real(2) * sum;
  return true;
}

template <typename Real>
struct BarrierPoint {
  CMat<Real> sigma;
  Eigen::LLT<CMat<Real>> slack_llt;
  Eigen::LLT<CMat<Real>> sigma_llt;
  Real logdet_slack = 0;
  Real logdet_sigma = 0;
  Real objective = 0;  // f_t at the point
};

template <typename Real>
bool evaluate_point(const CMat<Real>& rho, const CMat<Real>& sigma, Index d_a,
                    Index d_b, Real t, BarrierPoint<Real>* point) {
  point->sigma = sigma;
  const CMat<Real> slack = slack_matrix(rho, sigma, d_a, d_b);
  if (!pd_factorize(slack, &point->slack_llt, &point->logdet_slack)) {
    return false;
  }
  if (!pd_factorize(sigma, &point->sigma_llt, &point->logdet_sigma)) {
    return false;
  }
  point->objective = t * std::real(sigma.trace()) - point->logdet_slack -
                     point->logdet_sigma;
  return true;
}

// One certified stage report.
struct StageCertificate {
  double primal = std::numeric_limits<double>::infinity();
  double dual = 0.0;
};

// Builds the Newton system for the current point.  The Hessian of
// -logdet(I (x) s - rho) acts as D -> Tr_A[M (I (x) D) M]; its matrix in the
// column-major vec basis is assembled from the single product R = P Q with
//   P[b1 + db b2, a1 + da a2] = M[(a1,b1),(a2,b2)]
//   Q[a1 + da a2, b3 + db b4] = M[(a2,b3),(a1,b4)]
//   K[b1 + db b4, b2 + db b3] = R[b1 + db b2, b3 + db b4].
template <typename Real>
void assemble_resolvent_hessian(const CMat<Real>& m, Index d_a, Index d_b,
                                CMat<Real>* k) {
  CMat<Real> p(d_b * d_b, d_a * d_a);
  CMat<Real> q(d_a * d_a, d_b * d_b);
  for (Index a1 = 0; a1 < d_a; ++a1) {
    for (Index a2 = 0; a2 < d_a; ++a2) {
      for (Index b1 = 0; b1 < d_b; ++b1) {
        for (Index b2 = 0; b2 < d_b; ++b2) {
          p(b1 + d_b * b2, a1 + d_a * a2) = m(a1 * d_b + b1, a2 * d_b + b2);
          q(a1 + d_a * a2, b1 + d_b * b2) = m(a2 * d_b + b1, a1 * d_b + b2);
        }
      }
    }
  }
  const CMat<Real> r = p * q;
  k->resize(d_b * d_b, d_b * d_b);
  for (Index b1 = 0; b1 < d_b; ++b1) {
    for (Index b2 = 0; b2 < d_b; ++b2) {
      for (Index b3 = 0; b3 < d_b; ++b3) {
        for (Index b4 = 0; b4 < d_b; ++b4) {
          (*k)(b1 + d_b * b4, b2 + d_b * b3) = r(b1 + d_b * b2, b3 + d_b * b4);
        }
      }
    }
  }
}

template <typename Real>
struct SolverPhaseConfig {
  Real newton_tol;   // stop centering when the squared decrement drops below
  double psd_shift;  // dual-candidate shift, relative to the resolvent scale
  Real t_cap;
  int stage_cap;
};

// Runs barrier stages at increasing t until the certified gap (in bits) drops
// to gap_tol.  Updates sigma/t in place so a higher-precision phase can
// resume; accumulates the best certified interval into primal/dual.
template <typename Real>
bool run_barrier_phase(const CMat<Real>& rho, Index d_a, Index d_b,
                       const SolverPhaseConfig<Real>& cfg, double gap_tol,
                       CMat<Real>* sigma, Real* t, double* primal,
                       double* dual, int* newton_budget) {
  const Index n = d_a * d_b;
  const double nu = static_cast<double>(n + d_b);  // barrier parameter
  const Real mu = Real(10);                        // stage growth

  for (int stage = 0; stage < cfg.stage_cap; ++stage) {
    BarrierPoint<Real> point;
    if (!evaluate_point(rho, *sigma, d_a, d_b, *t, &point)) {
      throw std::runtime_error(
          "min-entropy program lost feasibility between stages");
    }

    // Newton centering at the current t.
    CMat<Real> m_inv, w_inv, grad;
    for (int iter = 0;; ++iter) {
      if (--(*newton_budget) < 0) {
        throw std::runtime_error(
            "min-entropy program exceeded its Newton iteration budget");
      }
      const CMat<Real> eye_n = CMat<Real>::Identity(n, n);
      const CMat<Real> eye_b = CMat<Real>::Identity(d_b, d_b);
      m_inv = hermitized<Real>(point.slack_llt.solve(eye_n));
      w_inv = hermitized<Real>(point.sigma_llt.solve(eye_b));
      grad = CMat<Real>::Identity(d_b, d_b) * (*t) -
             trace_out_first(m_inv, d_a, d_b) - w_inv;
      grad = hermitized<Real>(grad);

      CMat<Real> hess;
      assemble_resolvent_hessian(m_inv, d_a, d_b, &hess);
      hess += kron_square<Real>(w_inv.transpose(), w_inv);
      hess = hermitized<Real>(hess);

      Eigen::Map<const CVec<Real>> gvec(grad.data(), d_b * d_b);
      CVec<Real> step_vec;
      Eigen::LLT<CMat<Real>> hess_llt(hess);
      if (hess_llt.info() == Eigen::Success) {
        step_vec = hess_llt.solve(-gvec);
      } else {
        step_vec = Eigen::LDLT<CMat<Real>>(hess).solve(-gvec);
      }
      const Real lambda2 = -std::real(gvec.dot(step_vec));
      if (lambda2 < cfg.newton_tol || iter >= 60) break;

      CMat<Real> delta =
          Eigen::Map<const CMat<Real>>(step_vec.data(), d_b, d_b);
      delta = hermitized<Real>(delta);

      const Real lambda = std::sqrt(std::max(lambda2, Real(0)));
      Real alpha = lambda > Real(0.25) ? Real(1) / (Real(1) + lambda) : Real(1);
      const Real slope = -lambda2;  // directional derivative along delta
      bool accepted = false;
      BarrierPoint<Real> trial;
      while (alpha > Real(1e-14)) {
        const CMat<Real> cand =
            hermitized<Real>(point.sigma + alpha * delta);
        if (evaluate_point(rho, cand, d_a, d_b, *t, &trial) &&
            trial.objective <=
                point.objective + Real(0.25) * alpha * slope) {
          accepted = true;
          break;
        }
        alpha /= Real(2);
      }
      if (!accepted) break;  // line-search floor: as centered as fp allows
      point = std::move(trial);
    }
    *sigma = point.sigma;

    // Certificates at the (approximately) centered point.
    StageCertificate cert;
    cert.primal = static_cast<double>(std::real(point.sigma.trace()));

    Real max_diag = 0;
    for (Index i = 0; i < n; ++i) {
      max_diag = std::max(max_diag, std::real(m_inv(i, i)));
    }
    const Real shift = Real(cfg.psd_shift) * max_diag;

    CMat<Real> y = trace_out_first(m_inv, d_a, d_b);
    y += shift * Real(static_cast<double>(d_a)) *
         CMat<Real>::Identity(d_b, d_b);
    y /= *t;
    Eigen::SelfAdjointEigenSolver<CMat<Real>> yes(hermitized<Real>(y),
                                                  Eigen::EigenvaluesOnly);
    const Real y_max = yes.eigenvalues().maxCoeff();
    const Real scale = std::max(Real(1), y_max * (Real(1) + Real(1e-15)));

    const Real tr_rho = std::real(rho.trace());
    const Real tr_rho_m =
        std::real(rho.cwiseProduct(m_inv.transpose()).sum());
    const Real dual_direct = (tr_rho_m + shift * tr_rho) / (*t * scale);
    // Stable form of the same value: Tr[rho M]/t = Tr s - (nu + Tr[s g])/t
    // exactly, avoiding the catastrophic cancellation in Tr_A M - tI.
    const Real tr_sg = std::real(point.sigma.cwiseProduct(grad.transpose())
                                     .sum());
    const Real dual_identity =
        (std::real(point.sigma.trace()) - (Real(nu) + tr_sg) / *t +
         shift * tr_rho / *t) /
        scale;
    cert.dual = static_cast<double>(std::max(dual_direct, dual_identity));

    *primal = std::min(*primal, cert.primal);
    *dual = std::max(*dual, cert.dual);
    if (*dual > 0.0 && std::log2(*primal / *dual) <= gap_tol) return true;

    if (*t > cfg.t_cap) return false;
    *t *= mu;
  }
  return false;
}

struct SdpSolution {
  double primal = 0.0;
  double dual = 0.0;
  Matrix sigma;  // unnormalized optimizer
};

SdpSolution solve_min_trace_program(const Matrix& rho_scaled, Index d_a,
                                    Index d_b, double gap_tol) {
  const Index n = d_a * d_b;
  const double nu = static_cast<double>(n + d_b);

  CMat<double> sigma =
      CMat<double>::Identity(d_b, d_b) * std::complex<double>(1.05, 0.0);
  double t = std::max(1.0, nu / (1.05 * static_cast<double>(d_b)));
  double primal = std::numeric_limits<double>::infinity();
  double dual = 0.0;
  int newton_budget = 1200;

  SolverPhaseConfig<double> coarse{1e-11, 1e-10, 1e6, 16};
  bool reached = run_barrier_phase<double>(rho_scaled, d_a, d_b, coarse,
                                           gap_tol, &sigma, &t, &primal,
                                           &dual, &newton_budget);
  if (!reached) {
    // Extended-precision continuation for the ill-conditioned tail.
    CMat<long double> rho_ld = rho_scaled.cast<std::complex<long double>>();
    CMat<long double> sigma_ld = sigma.cast<std::complex<long double>>();
    long double t_ld = t;
    SolverPhaseConfig<long double> fine{1e-16L, 1e-13, 1e13L, 30};
    reached = run_barrier_phase<long double>(rho_ld, d_a, d_b, fine, gap_tol,
                                             &sigma_ld, &t_ld, &primal, &dual,
                                             &newton_budget);
    sigma = sigma_ld.cast<std::complex<double>>();
  }
  if (!reached) {
    std::ostringstream msg;
    msg << "min-entropy program failed to certify gap " << gap_tol
        << " (achieved "
        << (dual > 0.0 ? std::log2(primal / dual)
                       : std::numeric_limits<double>::infinity())
        << " bits)";
    throw std::runtime_error(msg.str());
  }

  SdpSolution out;
  out.primal = primal;
  out.dual = std::min(dual, primal);
  out.sigma = sigma;
  return out;
}

}  // namespace

EntropyResult h_min_fixed(const LabeledOperator& rho,
                          const std::vector<std::string>& a_labels,
                          const DensityOperator& sigma,
                          const Tolerances& tol) {
  check_conditioner_layout(rho, a_labels, sigma);
  const LabeledOperator inv_root{hermitian_power(sigma.mat, -0.5, tol),
                                 sigma.layout};
  const Matrix conj = embedded_on(inv_root, rho.layout);
  const double top = largest_eigenvalue(conj * rho.mat * conj);
  if (!(top > 0.0)) {
    throw std::invalid_argument("state has no positive part");
  }
  EntropyResult result;
  result.value_bits = -std::log2(top);
  result.conditioner = sigma;
  result.primal = top;
  result.dual = top;
  return result;
}

EntropyResult h_min_opt(const LabeledOperator& rho,
                        const std::vector<std::string>& a_labels,
                        double gap_tol, const Tolerances& tol) {
  Bipartition part = split_out(rho, a_labels);
  if (part.d_a * part.d_b > kMaxEntropyDim) {
    throw std::invalid_argument(
        "state dimension exceeds the optimizer cap");
  }
  // Validates hermiticity and symmetrizes before the eigboundary work.
  part.mat = HermitianOperator(part.mat, SubsystemLayout{{"x", part.d_a},
                                                         {"y", part.d_b}},
                               tol)
                 .mat;

  EntropyResult result;
  if (part.d_b == 1) {
    const double top = largest_eigenvalue(part.mat);
    if (!(top > 0.0)) {
      throw std::invalid_argument("state has no positive part");
    }
    result.value_bits = -std::log2(top);
    result.conditioner =
        DensityOperator(Matrix::Identity(1, 1), part.rest,
                        Normalization::kNormalized, tol);
    result.duality_gap = 0.0;
    result.primal = result.dual = top;
    return result;
  }
  if (part.d_a == 1) {
    const double tr = std::real(part.mat.trace());
    if (!(tr > 0.0)) {
      throw std::invalid_argument("state has vanishing trace");
    }
    result.value_bits = -std::log2(tr);
    result.conditioner = DensityOperator(part.mat / tr, part.rest,
                                         Normalization::kNormalized, tol);
    result.duality_gap = 0.0;
    result.primal = result.dual = tr;
    return result;
  }

  const double top = largest_eigenvalue(part.mat);
  if (!(top > 0.0)) {
    throw std::invalid_argument("state has no positive part");
  }
  const SdpSolution sol =
      solve_min_trace_program(part.mat / top, part.d_a, part.d_b, gap_tol);

  const double primal = sol.primal * top;
  const double dual = sol.dual * top;
  result.value_bits = -std::log2(0.5 * (primal + dual));
  const double tr_sigma = std::real(sol.sigma.trace());
  result.conditioner = DensityOperator(sol.sigma / tr_sigma, part.rest,
                                       Normalization::kNormalized, tol);
  result.duality_gap = std::log2(primal / dual);
  result.primal = primal;
  result.dual = dual;
  return result;
}

EntropyResult h_max_fixed(const LabeledOperator& rho,
                          const std::vector<std::string>& a_labels,
                          const DensityOperator& sigma,
                          const Tolerances& tol) {
  check_conditioner_layout(rho, a_labels, sigma);
  const Matrix embedded =
      embedded_on(LabeledOperator{sigma.mat, sigma.layout}, rho.layout);
  const double overlap = root_fidelity(rho.mat, embedded, tol);
  if (!(overlap > 0.0)) {
    throw std::invalid_argument(
        "state and conditioner have orthogonal supports");
  }
  EntropyResult result;
  result.value_bits = 2.0 * std::log2(overlap);
  result.conditioner = sigma;
  result.primal = overlap * overlap;
  result.dual = result.primal;
  return result;
}

EntropyResult h_max_opt(const LabeledOperator& rho,
                        const std::vector<std::string>& a_labels,
                        double gap_tol, const Tolerances& tol) {
  const double trace = std::real(rho.mat.trace());
  if (trace > 1.0 + tol.trace_normalization) {
    throw std::invalid_argument(
        "max-entropy optimization requires a subnormalized state");
  }
  const Bipartition part = split_out(rho, a_labels);
  const Matrix herm =
      HermitianOperator(part.mat, SubsystemLayout{{"x", part.d_a},
                                                  {"y", part.d_b}},
                        tol)
          .mat;

  // Minimal purification: keep only the spectral directions above the rank
  // threshold, so the purifier does not inflate the optimizer dimension.
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm);
  std::vector<Index> kept;
  const double floor = tol.rank_threshold * std::max(1.0, trace);
  for (Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()(i) > floor) kept.push_back(i);
  }
  if (kept.empty()) {
    throw std::invalid_argument("state has no positive part");
  }
  const Index rank = static_cast<Index>(kept.size());

  // Marginal of the purification on (A, purifier):
  //   rho_AC[(a,i),(a',i')] = sqrt(l_i l_i') (V_i V_i'^dag)(a, a')
  // with V_i the eigenvector reshaped into a d_a x d_b matrix.
  std::vector<Matrix> reshaped(static_cast<size_t>(rank));
  for (Index i = 0; i < rank; ++i) {
    const Vector v = es.eigenvectors().col(kept[static_cast<size_t>(i)]);
    Matrix vm(part.d_a, part.d_b);
    for (Index a = 0; a < part.d_a; ++a) {
      vm.row(a) = v.segment(a * part.d_b, part.d_b).transpose();
    }
    reshaped[static_cast<size_t>(i)] = std::move(vm);
  }
  Matrix marginal(part.d_a * rank, part.d_a * rank);
  for (Index i = 0; i < rank; ++i) {
    const double li = es.eigenvalues()(kept[static_cast<size_t>(i)]);
    for (Index ip = 0; ip < rank; ++ip) {
      const double lip = es.eigenvalues()(kept[static_cast<size_t>(ip)]);
      const Matrix overlap = reshaped[static_cast<size_t>(i)] *
                             reshaped[static_cast<size_t>(ip)].adjoint();
      const double weight = std::sqrt(li * lip);
      for (Index a = 0; a < part.d_a; ++a) {
        for (Index ap = 0; ap < part.d_a; ++ap) {
          marginal(a * rank + i, ap * rank + ip) = weight * overlap(a, ap);
        }
      }
    }
  }

  std::string purifier = "purifier";
  while (rho.layout.has(purifier)) purifier += "_";
  SubsystemLayout marginal_layout =
      rho.layout.subset(a_labels).concatenated(
          SubsystemLayout{{purifier, rank}});
  const EntropyResult inner = h_min_opt(
      LabeledOperator(std::move(marginal), std::move(marginal_layout)),
      a_labels, gap_tol, tol);

  EntropyResult result;
  result.value_bits = -inner.value_bits;
  result.conditioner = inner.conditioner;
  result.duality_gap = inner.duality_gap;
  result.primal = inner.primal;
  result.dual = inner.dual;
  return result;
}

EntropyResult h2_fixed(const LabeledOperator& rho,
                       const std::vector<std::string>& a_labels,
                       const DensityOperator& sigma, const Tolerances& tol) {
  check_conditioner_layout(rho, a_labels, sigma);
  const LabeledOperator inv_quart{hermitian_power(sigma.mat, -0.25, tol),
                                  sigma.layout};
  const Matrix conj = embedded_on(inv_quart, rho.layout);
  const Matrix weighted = conj * rho.mat * conj;
  const double sq = std::real((weighted * weighted).trace());
  if (!(sq > 0.0)) {
    throw std::invalid_argument("state has no positive part");
  }
  EntropyResult result;
  result.value_bits = -std::log2(sq);
  result.conditioner = sigma;
  result.primal = sq;
  result.dual = sq;
  return result;
}

}  // namespace dspdec
