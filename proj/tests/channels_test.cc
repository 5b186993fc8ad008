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

#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "dspdec/dsp_space.h"
#include "dspdec/operators.h"
#include "dspdec/rng.h"

namespace dspdec {
namespace {

Matrix random_hermitian(Index d, RngStream& rng) {
  const Matrix g = ginibre(d, d, rng);
  return (g + g.adjoint()) / 2.0;
}

Matrix random_density(Index d, RngStream& rng) {
  const Matrix g = ginibre(d, d, rng);
  Matrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

TEST_SUITE("channels") {

TEST_CASE("identity preset has the maximally entangled Choi") {
  const Index d = 3;
  const CpMap t = channel_preset("identity", d);
  CHECK(t.input_dim() == d);
  CHECK(t.output_dim() == d);
  CHECK(t.trace_preserving());
  CHECK(t.trace_nonincreasing());
  CHECK(t.choi().layout == SubsystemLayout({{"A", d}, {"E", d}}));
  CHECK(std::abs(t.choi().mat.trace().real() - 1.0) < 1e-12);

  // tau[(a,e),(ap,ep)] = delta_{a,e} delta_{ap,ep} / d.
  Matrix expected = Matrix::Zero(d * d, d * d);
  for (Index a = 0; a < d; ++a) {
    for (Index ap = 0; ap < d; ++ap) {
      expected(a * d + a, ap * d + ap) = 1.0 / static_cast<double>(d);
    }
  }
  CHECK((t.choi().mat - expected).cwiseAbs().maxCoeff() < 1e-13);

  // Applying the identity map only relabels the factor.
  RngStream rng(7, 0);
  const LabeledOperator x(random_hermitian(6, rng),
                          SubsystemLayout({{"A", d}, {"R", 2}}));
  const LabeledOperator y = apply_channel(t, x);
  CHECK(y.layout == SubsystemLayout({{"E", d}, {"R", 2}}));
  CHECK((y.mat - x.mat).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Kraus and action routes build the same depolarizing Choi") {
  const double p = 0.37;
  const Matrix i2 = Matrix::Identity(2, 2);
  Matrix x(2, 2), y(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  y << 0, Cplx(0, -1), Cplx(0, 1), 0;
  z << 1, 0, 0, -1;
  const std::vector<Matrix> kraus = {
      std::sqrt(1.0 - 3.0 * p / 4.0) * i2, std::sqrt(p) / 2.0 * x,
      std::sqrt(p) / 2.0 * y, std::sqrt(p) / 2.0 * z};
  const CpMap via_kraus = CpMap::from_kraus(kraus);
  const CpMap via_action = channel_preset("depolarizing(0.37)", 2);
  CHECK(via_kraus.trace_preserving());
  CHECK((via_kraus.choi().mat - via_action.choi().mat).cwiseAbs().maxCoeff() <
        1e-12);
}

TEST_CASE("apply_channel acts on a named middle factor") {
  RngStream rng(11, 0);
  const double p = 0.6;
  const Index d = 3;
  const SubsystemLayout layout({{"X", 2}, {"A", d}, {"Y", 2}});
  const LabeledOperator op(random_hermitian(layout.total_dim(), rng), layout);
  const CpMap t = channel_preset("depolarizing(0.6)", d);

  const LabeledOperator out = apply_channel(t, op);
  CHECK(out.layout == SubsystemLayout({{"E", d}, {"X", 2}, {"Y", 2}}));

  // (1-p) x + p pi (x) Tr_A x, with the output factor moved to the front.
  const LabeledOperator fronted = moved_to_front(op, {"A"});
  const LabeledOperator rest = partial_trace(op, {"X", "Y"});
  const Matrix expected =
      (1.0 - p) * fronted.mat +
      p / static_cast<double>(d) *
          kron(Matrix::Identity(d, d), rest.mat);
  CHECK((out.mat - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("applying a map to the maximally entangled state recovers its Choi") {
  const Index d = 3;
  const CpMap t = random_trace_preserving_map(d, 2, 3, 19);
  const DensityOperator phi =
      dsp_maximally_entangled(DspDecomposition({{1, d}}), "A", "Ap");
  const LabeledOperator out = apply_channel(t, phi, "A", "E");
  CHECK(out.layout == SubsystemLayout({{"E", 2}, {"Ap", d}}));
  const LabeledOperator choi_fronted = moved_to_front(t.choi(), {"E"});
  CHECK((out.mat - choi_fronted.mat).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("partial-trace preset agrees with the partial trace") {
  RngStream rng(13, 0);
  const Index keep = 2;
  const Index rest = 3;
  const SubsystemLayout joint({{"A", keep * rest}, {"R", 2}});
  const Matrix m = random_hermitian(joint.total_dim(), rng);
  const LabeledOperator as_joint(m, joint);
  // The same matrix with the traced factor named explicitly: A = K (x) L with
  // L the minor index, which is the factor the preset removes.
  const LabeledOperator split(
      m, SubsystemLayout({{"K", keep}, {"L", rest}, {"R", 2}}));

  const CpMap t = channel_preset("partial-trace(2)", keep * rest);
  CHECK(t.trace_preserving());
  const LabeledOperator out = apply_channel(t, as_joint);
  const LabeledOperator expected = partial_trace(split, {"K", "R"});
  CHECK(out.layout == SubsystemLayout({{"E", keep}, {"R", 2}}));
  CHECK((out.mat - expected.mat).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("complementary channel is a Stinespring dilation") {
  const Index d_in = 3;
  const Index d_out = 2;
  const Index k = 3;
  const CpMap t = random_trace_preserving_map(d_in, d_out, k, 23);
  const ComplementaryChannel comp = complementary(t);

  // Generic Kraus draws have a full-rank Choi on their span.
  CHECK(comp.env_dim == k);
  CHECK(comp.map.input_dim() == d_in);
  CHECK(comp.map.output_dim() == k);
  CHECK(comp.map.trace_preserving());
  CHECK(comp.ket_layout ==
        SubsystemLayout({{"A", d_in}, {"E", d_out}, {"B", k}}));

  // The joint pure state marginalizes to both Choi operators.
  const LabeledOperator joint =
      outer(comp.purified_ket, comp.purified_ket, comp.ket_layout);
  CHECK((partial_trace(joint, {"A", "E"}).mat - t.choi().mat)
            .cwiseAbs()
            .maxCoeff() < 1e-12);
  CHECK((partial_trace(joint, {"A", "B"}).mat - comp.map.choi().mat)
            .cwiseAbs()
            .maxCoeff() < 1e-12);

  // V(eb, a) = sqrt(d_in) ket[(a,e,b)] is an isometry implementing both maps.
  Matrix v(d_out * k, d_in);
  for (Index a = 0; a < d_in; ++a) {
    for (Index eb = 0; eb < d_out * k; ++eb) {
      v(eb, a) = std::sqrt(static_cast<double>(d_in)) *
                 comp.purified_ket(a * d_out * k + eb);
    }
  }
  CHECK((v.adjoint() * v - Matrix::Identity(d_in, d_in)).cwiseAbs().maxCoeff() <
        1e-12);
  RngStream rng(29, 0);
  const LabeledOperator rho(random_density(d_in, rng),
                            SubsystemLayout({{"A", d_in}}));
  const LabeledOperator dilated(v * rho.mat * v.adjoint(),
                                SubsystemLayout({{"E", d_out}, {"B", k}}));
  CHECK((apply_channel(t, rho).mat - partial_trace(dilated, {"E"}).mat)
            .cwiseAbs()
            .maxCoeff() < 1e-12);
  CHECK((apply_channel(comp.map, rho).mat - partial_trace(dilated, {"B"}).mat)
            .cwiseAbs()
            .maxCoeff() < 1e-12);
}

TEST_CASE("trace classification distinguishes the normalization classes") {
  const Matrix i2 = Matrix::Identity(2, 2);
  const CpMap half = CpMap::from_kraus({0.5 * i2});
  CHECK(!half.trace_preserving());
  CHECK(half.trace_nonincreasing());
  CHECK(std::abs(half.choi().mat.trace().real() - 0.25) < 1e-12);

  const CpMap doubled = CpMap::from_kraus({2.0 * i2});
  CHECK(!doubled.trace_preserving());
  CHECK(!doubled.trace_nonincreasing());
  CHECK_THROWS_AS(complementary(doubled), std::invalid_argument);

  // The transpose is positive but not completely positive.
  CHECK_THROWS_AS(
      choi_of([](const Matrix& x) -> Matrix { return x.transpose(); }, 2, 2),
      std::invalid_argument);
}

TEST_CASE("random maps are trace preserving and seed deterministic") {
  const CpMap a = random_trace_preserving_map(4, 3, 2, 101);
  const CpMap b = random_trace_preserving_map(4, 3, 2, 101);
  const CpMap c = random_trace_preserving_map(4, 3, 2, 102);
  CHECK(a.trace_preserving());
  CHECK((a.choi().mat - b.choi().mat).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.choi().mat - c.choi().mat).cwiseAbs().maxCoeff() > 1e-3);
  CHECK_THROWS_AS(random_trace_preserving_map(4, 3, 1, 101),
                  std::invalid_argument);
}

TEST_CASE("preset strings parse and validate") {
  CHECK_THROWS_AS(channel_preset("teleport", 2), std::invalid_argument);
  CHECK_THROWS_AS(channel_preset("depolarizing(1.5)", 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(channel_preset("depolarizing(0.5", 2), std::invalid_argument);
  CHECK_THROWS_AS(channel_preset("depolarizing(a)", 2), std::invalid_argument);
  CHECK_THROWS_AS(channel_preset("partial-trace(4)", 6), std::invalid_argument);
  CHECK_THROWS_AS(channel_preset("identity(1)", 2), std::invalid_argument);
  CHECK_THROWS_WITH_AS(channel_preset("random-tp(2,1,7)", 5),
                       doctest::Contains("trace preserving"),
                       std::invalid_argument);
  // Whitespace inside argument lists is ignored.
  const CpMap t = channel_preset("random-tp( 2 , 3 , 7 )", 5);
  CHECK(t.output_dim() == 2);
  CHECK(t.trace_preserving());
}

TEST_CASE("block-restricted distance lower bound") {
  const Index d = 2;
  const DspDecomposition decomp({{1, 2}});
  const CpMap id = channel_preset("identity", d);
  const CpMap deph = channel_preset("dephasing", d);
  CHECK(dsp_norm_lower_bound(id, id, decomp, 3, 5) == 0.0);
  // Block inputs are purifications of the maximally mixed state, and
  // ||(id - dephasing) (x) id applied to any of them||_1 = 1 for a qubit.
  CHECK(std::abs(dsp_norm_lower_bound(id, deph, decomp, 3, 5) - 1.0) < 1e-9);
}

}  // TEST_SUITE

}  // namespace
}  // namespace dspdec
