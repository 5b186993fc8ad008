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

#include "dspdec/channels.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

#include "dspdec/rng.h"

namespace dspdec {

namespace {

void require(bool cond, const std::string& message) {
  if (!cond) {
    throw std::invalid_argument(message);
  }
}

}  // namespace

CpMap CpMap::from_choi(Matrix choi, Index input_dim, Index output_dim,
                       const std::string& input_label,
                       const std::string& output_label, const Tolerances& tol) {
  require(input_dim >= 1 && output_dim >= 1 &&
              choi.rows() == input_dim * output_dim && choi.cols() == choi.rows(),
          "Choi operator dimension does not match input_dim * output_dim");

  // Input marginal; the map preserves trace iff this is the normalized
  // identity, and is trace-nonincreasing iff it is dominated by it.
  Matrix marginal = Matrix::Zero(input_dim, input_dim);
  for (Index a = 0; a < input_dim; ++a) {
    for (Index ap = 0; ap < input_dim; ++ap) {
      for (Index e = 0; e < output_dim; ++e) {
        marginal(a, ap) += choi(a * output_dim + e, ap * output_dim + e);
      }
    }
  }
  const Matrix gap = Matrix::Identity(input_dim, input_dim) -
                     static_cast<double>(input_dim) * marginal;
  const bool tp = gap.cwiseAbs().maxCoeff() <= tol.equality;
  bool tni = tp;
  if (!tni) {
    Eigen::SelfAdjointEigenSolver<Matrix> es((gap + gap.adjoint()) / 2.0);
    tni = es.eigenvalues().minCoeff() >= tol.psd_floor;
  }

  const Normalization norm = tp ? Normalization::kNormalized
                             : tni ? Normalization::kSubnormalized
                                   : Normalization::kUnnormalizedPositive;
  CpMap map;
  map.choi_ = DensityOperator(
      std::move(choi),
      SubsystemLayout({{input_label, input_dim}, {output_label, output_dim}}),
      norm, tol);
  map.input_dim_ = input_dim;
  map.output_dim_ = output_dim;
  map.input_label_ = input_label;
  map.output_label_ = output_label;
  map.trace_preserving_ = tp;
  map.trace_nonincreasing_ = tni;
  return map;
}

CpMap CpMap::from_kraus(const std::vector<Matrix>& kraus,
                        const std::string& input_label,
                        const std::string& output_label, const Tolerances& tol) {
  require(!kraus.empty(), "need at least one Kraus operator");
  const Index d_out = kraus.front().rows();
  const Index d_in = kraus.front().cols();
  for (const Matrix& k : kraus) {
    require(k.rows() == d_out && k.cols() == d_in,
            "Kraus operators must share a common shape");
  }
  Matrix choi = Matrix::Zero(d_in * d_out, d_in * d_out);
  const double inv_d = 1.0 / static_cast<double>(d_in);
  for (const Matrix& k : kraus) {
    for (Index a = 0; a < d_in; ++a) {
      for (Index ap = 0; ap < d_in; ++ap) {
        for (Index e = 0; e < d_out; ++e) {
          for (Index ep = 0; ep < d_out; ++ep) {
            choi(a * d_out + e, ap * d_out + ep) +=
                inv_d * k(e, a) * std::conj(k(ep, ap));
          }
        }
      }
    }
  }
  return from_choi(std::move(choi), d_in, d_out, input_label, output_label, tol);
}

CpMap choi_of(const std::function<Matrix(const Matrix&)>& action,
              Index input_dim, Index output_dim, const std::string& input_label,
              const std::string& output_label, const Tolerances& tol) {
  require(input_dim >= 1 && output_dim >= 1, "dimensions must be positive");
  Matrix choi = Matrix::Zero(input_dim * output_dim, input_dim * output_dim);
  const double inv_d = 1.0 / static_cast<double>(input_dim);
  Matrix unit = Matrix::Zero(input_dim, input_dim);
  for (Index a = 0; a < input_dim; ++a) {
    for (Index ap = 0; ap < input_dim; ++ap) {
      unit(a, ap) = Cplx(1.0, 0.0);
      const Matrix image = action(unit);
      unit(a, ap) = Cplx(0.0, 0.0);
      require(image.rows() == output_dim && image.cols() == output_dim,
              "action image has the wrong dimension");
      choi.block(a * output_dim, ap * output_dim, output_dim, output_dim) =
          inv_d * image;
    }
  }
  return CpMap::from_choi(std::move(choi), input_dim, output_dim, input_label,
                          output_label, tol);
}

LabeledOperator apply_channel(const CpMap& t, const LabeledOperator& x) {
  return apply_channel(t, x, t.input_label(), t.output_label());
}

LabeledOperator apply_channel(const CpMap& t, const LabeledOperator& x,
                              const std::string& in_factor,
                              const std::string& out_factor) {
  const Index d_in = t.input_dim();
  const Index d_out = t.output_dim();
  require(x.layout.dim_of(in_factor) == d_in,
          "operator factor dimension does not match the map input");
  const LabeledOperator xf = moved_to_front(x, {in_factor});
  const Index d_rest = xf.dim() / d_in;
  const Matrix& tau = t.choi().mat;

  Matrix out = Matrix::Zero(d_out * d_rest, d_out * d_rest);
  const double scale = static_cast<double>(d_in);
  for (Index a = 0; a < d_in; ++a) {
    for (Index ap = 0; ap < d_in; ++ap) {
      for (Index e = 0; e < d_out; ++e) {
        for (Index ep = 0; ep < d_out; ++ep) {
          const Cplx w = scale * tau(a * d_out + e, ap * d_out + ep);
          if (w == Cplx(0.0, 0.0)) {
            continue;
          }
          out.block(e * d_rest, ep * d_rest, d_rest, d_rest) +=
              w * xf.mat.block(a * d_rest, ap * d_rest, d_rest, d_rest);
        }
      }
    }
  }
  SubsystemLayout layout = SubsystemLayout({{out_factor, d_out}})
                               .concatenated(xf.layout.without({in_factor}));
  return LabeledOperator(std::move(out), std::move(layout));
}

ComplementaryChannel complementary(const CpMap& t, const std::string& b_label,
                                   const Tolerances& tol) {
  require(t.trace_nonincreasing(),
          "complementary channel requires a trace-nonincreasing map");
  const Index d_in = t.input_dim();
  const Index d_out = t.output_dim();
  Eigen::SelfAdjointEigenSolver<Matrix> es(t.choi().mat);
  require(es.info() == Eigen::Success, "Choi eigendecomposition failed");

  // Numerical rank of the Choi operator = minimal dilation dimension.
  std::vector<Index> kept;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()(i) > tol.rank_threshold) {
      kept.push_back(i);
    }
  }
  require(!kept.empty(), "map is numerically zero");
  const Index d_b = static_cast<Index>(kept.size());

  Vector ket = Vector::Zero(d_in * d_out * d_b);
  for (Index m = 0; m < d_b; ++m) {
    const double w = std::sqrt(es.eigenvalues()(kept[static_cast<size_t>(m)]));
    const auto& v = es.eigenvectors().col(kept[static_cast<size_t>(m)]);
    for (Index ae = 0; ae < d_in * d_out; ++ae) {
      ket(ae * d_b + m) = w * v(ae);
    }
  }

  SubsystemLayout ket_layout({{t.input_label(), d_in},
                              {t.output_label(), d_out},
                              {b_label, d_b}});
  const LabeledOperator joint = outer(ket, ket, ket_layout);
  const LabeledOperator tau_ab =
      partial_trace(joint, {t.input_label(), b_label});

  ComplementaryChannel result;
  result.map = CpMap::from_choi(tau_ab.mat, d_in, d_b, t.input_label(), b_label,
                                tol);
  result.purified_ket = std::move(ket);
  result.ket_layout = std::move(ket_layout);
  result.env_dim = d_b;
  return result;
}

double dsp_norm_lower_bound(const CpMap& t1, const CpMap& t2,
                            const DspDecomposition& decomp, Index trials,
                            std::uint64_t seed) {
  const Index d_a = decomp.total_dim();
  require(t1.input_dim() == d_a && t2.input_dim() == d_a,
          "map input dimensions must match the decomposition");
  require(t1.output_dim() == t2.output_dim(),
          "map output dimensions must match");
  require(trials >= 1, "need at least one trial");

  double best = 0.0;
  for (Index trial = 0; trial < trials; ++trial) {
    RngStream rng(seed, static_cast<std::uint64_t>(trial));

    // Block-form marginal (+)_j q_j w_j (x) pi_j with q from the flat simplex
    // measure and w_j trace-normalized Ginibre.
    std::vector<double> q(static_cast<size_t>(decomp.block_count()));
    double q_sum = 0.0;
    for (double& qj : q) {
      qj = -std::log(1.0 - rng.uniform());
      q_sum += qj;
    }
    Matrix rho = Matrix::Zero(d_a, d_a);
    for (Index j = 0; j < decomp.block_count(); ++j) {
      const Index l = decomp.left_dim(j);
      const Index r = decomp.right_dim(j);
      const Index off = decomp.block_offset(j);
      const Matrix g = ginibre(l, l, rng);
      Matrix w = g * g.adjoint();
      w /= w.trace().real();
      const double weight = q[static_cast<size_t>(j)] / q_sum /
                            static_cast<double>(r);
      for (Index s = 0; s < l; ++s) {
        for (Index sp = 0; sp < l; ++sp) {
          for (Index t = 0; t < r; ++t) {
            rho(off + s * r + t, off + sp * r + t) += weight * w(s, sp);
          }
        }
      }
    }

    // Canonical purification with an ancilla of dimension d_a.  Channel
    // output distances do not depend on the choice of purification.
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
    require(es.info() == Eigen::Success, "eigendecomposition failed");
    Vector ket = Vector::Zero(d_a * d_a);
    for (Index i = 0; i < d_a; ++i) {
      const double p = std::max(es.eigenvalues()(i), 0.0);
      if (p == 0.0) {
        continue;
      }
      for (Index a = 0; a < d_a; ++a) {
        ket(a * d_a + i) += std::sqrt(p) * es.eigenvectors()(a, i);
      }
    }
    const SubsystemLayout layout({{"in", d_a}, {"anc", d_a}});
    const LabeledOperator xi = outer(ket, ket, layout);
    const Matrix diff = apply_channel(t1, xi, "in", "out").mat -
                        apply_channel(t2, xi, "in", "out").mat;
    best = std::max(best, trace_norm(diff));
  }
  return best;
}

namespace {

// Parses "name" or "name(arg1, arg2)" into the name and raw argument strings.
struct PresetCall {
  std::string name;
  std::vector<std::string> args;
};

PresetCall parse_preset(const std::string& text) {
  std::string s;
  s.reserve(text.size());
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) {
      s.push_back(c);
    }
  }
  PresetCall call;
  const size_t open = s.find('(');
  if (open == std::string::npos) {
    call.name = s;
    return call;
  }
  require(!s.empty() && s.back() == ')',
          "malformed channel preset '" + text + "'");
  call.name = s.substr(0, open);
  std::string body = s.substr(open + 1, s.size() - open - 2);
  size_t pos = 0;
  while (pos <= body.size() && !body.empty()) {
    const size_t comma = body.find(',', pos);
    call.args.push_back(body.substr(pos, comma == std::string::npos
                                             ? std::string::npos
                                             : comma - pos));
    if (comma == std::string::npos) {
      break;
    }
    pos = comma + 1;
  }
  return call;
}

double parse_real(const std::string& s, const std::string& context) {
  try {
    size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) {
      throw std::invalid_argument(s);
    }
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("expected a real number in " + context);
  }
}

std::int64_t parse_int(const std::string& s, const std::string& context) {
  try {
    size_t used = 0;
    const std::int64_t v = std::stoll(s, &used);
    if (used != s.size()) {
      throw std::invalid_argument(s);
    }
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("expected an integer in " + context);
  }
}

}  // namespace

CpMap channel_preset(const std::string& text, Index input_dim,
                     const std::string& input_label,
                     const std::string& output_label, const Tolerances& tol) {
  require(input_dim >= 1, "input dimension must be positive");
  const PresetCall call = parse_preset(text);

  if (call.name == "identity") {
    require(call.args.empty(), "identity takes no arguments");
    return CpMap::from_kraus({Matrix::Identity(input_dim, input_dim)},
                             input_label, output_label, tol);
  }
  if (call.name == "depolarizing") {
    require(call.args.size() == 1, "depolarizing takes one argument");
    const double p = parse_real(call.args[0], "depolarizing(p)");
    require(p >= 0.0 && p <= 1.0, "depolarizing parameter must lie in [0, 1]");
    const Index d = input_dim;
    return choi_of(
        [p, d](const Matrix& x) -> Matrix {
          return (1.0 - p) * x + p * x.trace() / static_cast<double>(d) *
                                     Matrix::Identity(d, d);
        },
        d, d, input_label, output_label, tol);
  }
  if (call.name == "dephasing") {
    require(call.args.empty(), "dephasing takes no arguments");
    std::vector<Matrix> kraus;
    kraus.reserve(static_cast<size_t>(input_dim));
    for (Index i = 0; i < input_dim; ++i) {
      Matrix k = Matrix::Zero(input_dim, input_dim);
      k(i, i) = Cplx(1.0, 0.0);
      kraus.push_back(std::move(k));
    }
    return CpMap::from_kraus(kraus, input_label, output_label, tol);
  }
  if (call.name == "partial-trace") {
    require(call.args.size() == 1, "partial-trace takes one argument");
    const Index keep =
        static_cast<Index>(parse_int(call.args[0], "partial-trace(keep)"));
    require(keep >= 1 && input_dim % keep == 0,
            "partial-trace keep dimension must divide the input dimension");
    const Index rest = input_dim / keep;
    std::vector<Matrix> kraus;
    kraus.reserve(static_cast<size_t>(rest));
    for (Index i = 0; i < rest; ++i) {
      Matrix k = Matrix::Zero(keep, input_dim);
      for (Index a = 0; a < keep; ++a) {
        k(a, a * rest + i) = Cplx(1.0, 0.0);
      }
      kraus.push_back(std::move(k));
    }
    return CpMap::from_kraus(kraus, input_label, output_label, tol);
  }
  if (call.name == "random-kraus") {
    require(call.args.size() == 2, "random-kraus takes two arguments");
    const Index k =
        static_cast<Index>(parse_int(call.args[0], "random-kraus(k, seed)"));
    const std::int64_t seed = parse_int(call.args[1], "random-kraus(k, seed)");
    require(k >= 1, "random-kraus needs at least one Kraus operator");
    return random_trace_preserving_map(input_dim, input_dim, k,
                                       static_cast<std::uint64_t>(seed),
                                       input_label, output_label, tol);
  }
  if (call.name == "random-tp") {
    require(call.args.size() == 3, "random-tp takes three arguments");
    const Index out = static_cast<Index>(
        parse_int(call.args[0], "random-tp(out, k, seed)"));
    const Index k = static_cast<Index>(
        parse_int(call.args[1], "random-tp(out, k, seed)"));
    const std::int64_t seed =
        parse_int(call.args[2], "random-tp(out, k, seed)");
    require(out >= 1, "random-tp needs a positive output dimension");
    require(k >= 1, "random-tp needs at least one Kraus operator");
    require(k * out >= input_dim,
            "random-tp needs kraus_count * out >= input dimension to be "
            "trace preserving");
    return random_trace_preserving_map(input_dim, out, k,
                                       static_cast<std::uint64_t>(seed),
                                       input_label, output_label, tol);
  }
  throw std::invalid_argument("unknown channel preset '" + call.name + "'");
}

CpMap random_trace_preserving_map(Index input_dim, Index output_dim,
                                  Index kraus_count, std::uint64_t seed,
                                  const std::string& input_label,
                                  const std::string& output_label,
                                  const Tolerances& tol) {
  require(input_dim >= 1 && output_dim >= 1 && kraus_count >= 1,
          "dimensions and Kraus count must be positive");
  require(kraus_count * output_dim >= input_dim,
          "kraus_count * output_dim must reach the input dimension");
  RngStream rng(seed, 0);
  std::vector<Matrix> raw;
  raw.reserve(static_cast<size_t>(kraus_count));
  Matrix s = Matrix::Zero(input_dim, input_dim);
  for (Index i = 0; i < kraus_count; ++i) {
    raw.push_back(ginibre(output_dim, input_dim, rng));
    s += raw.back().adjoint() * raw.back();
  }
  const Matrix whiten = hermitian_power(s, -0.5, tol);
  std::vector<Matrix> kraus;
  kraus.reserve(raw.size());
  for (const Matrix& g : raw) {
    kraus.push_back(g * whiten);
  }
  return CpMap::from_kraus(kraus, input_label, output_label, tol);
}

}  // namespace dspdec
