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

#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "dspdec/dsp_space.h"
#include "dspdec/operators.h"
#include "dspdec/rng.h"

namespace dspdec {
namespace {

Matrix random_density(Index d, RngStream& rng) {
  const Matrix g = ginibre(d, d, rng);
  Matrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

DensityOperator full_rank_density(Index d, const SubsystemLayout& layout,
                                  RngStream& rng) {
  Matrix rho = 0.9 * random_density(d, rng) +
               0.1 / static_cast<double>(d) * Matrix::Identity(d, d);
  return DensityOperator(std::move(rho), layout);
}

double largest_eigenvalue(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

Vector random_ket(Index d, RngStream& rng) {
  Vector v(d);
  for (Index i = 0; i < d; ++i) {
    v(i) = Cplx(rng.gaussian(), rng.gaussian());
  }
  return v / v.norm();
}

TEST_SUITE("entropy") {

TEST_CASE("fixed-conditioner min entropy matches the diagonal formula") {
  Matrix rho = Matrix::Zero(4, 4);
  rho.diagonal() << 0.1, 0.3, 0.2, 0.4;  // p_{ab} at index a*2+b
  const LabeledOperator state(rho, SubsystemLayout({{"A", 2}, {"B", 2}}));
  Matrix q = Matrix::Zero(2, 2);
  q.diagonal() << 0.7, 0.3;
  const DensityOperator sigma(q, SubsystemLayout({{"B", 2}}));

  // -log2 max_{a,b} p_{ab} / q_b, attained at (a,b) = (1,1).
  const EntropyResult r = h_min_fixed(state, {"A"}, sigma);
  CHECK(r.value_bits == doctest::Approx(-std::log2(0.4 / 0.3)).epsilon(1e-12));
  CHECK(!r.duality_gap.has_value());
  CHECK(r.primal == r.dual);

  // Conditioner layout is validated by name and coverage.
  CHECK_THROWS_AS(
      h_min_fixed(state, {"A"},
                  DensityOperator(q, SubsystemLayout({{"C", 2}}))),
      std::invalid_argument);
  CHECK_THROWS_AS(
      h_min_fixed(state, {"A", "B"},
                  DensityOperator(q, SubsystemLayout({{"B", 2}}))),
      std::invalid_argument);
  CHECK_THROWS_AS(h_min_fixed(state, {}, sigma), std::invalid_argument);
}

TEST_CASE("optimized min entropy reaches the closed forms") {
  RngStream rng(61, 0);

  // Trivial conditioning side: -log2 of the largest eigenvalue.
  const Matrix rho_a = random_density(3, rng);
  const EntropyResult alone = h_min_opt(
      LabeledOperator(rho_a, SubsystemLayout({{"A", 3}})), {"A"});
  CHECK(alone.value_bits ==
        doctest::Approx(-std::log2(largest_eigenvalue(rho_a))).epsilon(1e-12));
  CHECK(alone.duality_gap == 0.0);

  // Trivial conditioned side: -log2 of the trace.
  const Matrix rho_b = random_density(3, rng);
  const EntropyResult no_a = h_min_opt(
      LabeledOperator(0.5 * rho_b, SubsystemLayout({{"A", 1}, {"B", 3}})),
      {"A"});
  CHECK(no_a.value_bits == doctest::Approx(1.0).epsilon(1e-12));

  // Product state: the conditioning factor is irrelevant.
  const LabeledOperator prod =
      tensor(LabeledOperator(rho_a, SubsystemLayout({{"A", 3}})),
             LabeledOperator(rho_b, SubsystemLayout({{"B", 3}})));
  const EntropyResult product = h_min_opt(prod, {"A"});
  CHECK(product.value_bits ==
        doctest::Approx(-std::log2(largest_eigenvalue(rho_a))).epsilon(1e-6));

  // Maximally entangled state: -log2 d.
  const DensityOperator phi =
      dsp_maximally_entangled(DspDecomposition({{1, 3}}), "A", "B");
  const EntropyResult entangled = h_min_opt(phi, {"A"});
  CHECK(entangled.value_bits == doctest::Approx(-std::log2(3.0)).epsilon(1e-6));

  // Classical conditioning register: -log2 sum_b q_b lambda_max(rho_b).
  const Matrix rho_0 = random_density(2, rng);
  const Matrix rho_1 = random_density(2, rng);
  Matrix cq = Matrix::Zero(4, 4);
  for (Index a = 0; a < 2; ++a) {
    for (Index ap = 0; ap < 2; ++ap) {
      cq(a * 2 + 0, ap * 2 + 0) = 0.3 * rho_0(a, ap);
      cq(a * 2 + 1, ap * 2 + 1) = 0.7 * rho_1(a, ap);
    }
  }
  const EntropyResult classical = h_min_opt(
      LabeledOperator(cq, SubsystemLayout({{"A", 2}, {"B", 2}})), {"A"});
  const double expected = -std::log2(0.3 * largest_eigenvalue(rho_0) +
                                     0.7 * largest_eigenvalue(rho_1));
  CHECK(classical.value_bits == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("optimization dominates every fixed conditioner") {
  RngStream rng(67, 0);
  const SubsystemLayout layout({{"A", 2}, {"B", 3}});
  const LabeledOperator rho(random_density(6, rng), layout);
  const EntropyResult opt = h_min_opt(rho, {"A"});
  for (int i = 0; i < 5; ++i) {
    const DensityOperator sigma =
        full_rank_density(3, SubsystemLayout({{"B", 3}}), rng);
    CHECK(opt.value_bits >= h_min_fixed(rho, {"A"}, sigma).value_bits - 1e-6);
  }
  // The returned optimizer witnesses the optimum.
  const EntropyResult at_opt = h_min_fixed(rho, {"A"}, opt.conditioner);
  CHECK(at_opt.value_bits == doctest::Approx(opt.value_bits).epsilon(1e-6));
}

TEST_CASE("certificates bracket the optimum within the requested gap") {
  RngStream rng(71, 0);
  const SubsystemLayout layout({{"A", 3}, {"B", 3}});
  const LabeledOperator rho(random_density(9, rng), layout);
  const EntropyResult r = h_min_opt(rho, {"A"}, 1e-7);
  REQUIRE(r.duality_gap.has_value());
  CHECK(*r.duality_gap <= 1e-7);
  CHECK(r.dual > 0.0);
  CHECK(r.primal >= r.dual);
  CHECK(r.value_bits >= -std::log2(r.primal) - 1e-12);
  CHECK(r.value_bits <= -std::log2(r.dual) + 1e-12);
}

TEST_CASE("max entropy closed forms and domination") {
  RngStream rng(73, 0);
  const DensityOperator phi =
      dsp_maximally_entangled(DspDecomposition({{1, 2}}), "A", "B");
  const DensityOperator half(0.5 * Matrix::Identity(2, 2),
                             SubsystemLayout({{"B", 2}}));
  CHECK(h_max_fixed(phi, {"A"}, half).value_bits ==
        doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(h_max_opt(phi, {"A"}).value_bits == doctest::Approx(-1.0).epsilon(1e-9));

  // Product state: the Renyi-1/2 entropy of the reduced factor.
  const Matrix rho_a = random_density(3, rng);
  const Matrix rho_b = random_density(2, rng);
  const LabeledOperator prod =
      tensor(LabeledOperator(rho_a, SubsystemLayout({{"A", 3}})),
             LabeledOperator(rho_b, SubsystemLayout({{"B", 2}})));
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho_a, Eigen::EigenvaluesOnly);
  double root_sum = 0.0;
  for (Index i = 0; i < 3; ++i) {
    root_sum += std::sqrt(std::max(es.eigenvalues()(i), 0.0));
  }
  const EntropyResult opt = h_max_opt(prod, {"A"});
  CHECK(opt.value_bits ==
        doctest::Approx(2.0 * std::log2(root_sum)).epsilon(1e-5));

  // The optimum dominates fixed conditioners.
  for (int i = 0; i < 3; ++i) {
    const DensityOperator sigma =
        full_rank_density(2, SubsystemLayout({{"B", 2}}), rng);
    CHECK(opt.value_bits >= h_max_fixed(prod, {"A"}, sigma).value_bits - 1e-6);
  }

  // The optimization is stated for subnormalized states only.
  CHECK_THROWS_AS(h_max_opt(LabeledOperator(2.0 * phi.mat, phi.layout), {"A"}),
                  std::invalid_argument);
}

TEST_CASE("purification links the max and min entropies") {
  for (int i = 0; i < 10; ++i) {
    RngStream rng(79, static_cast<std::uint64_t>(i));
    const SubsystemLayout layout({{"A", 2}, {"B", 2}, {"C", 2}});
    const Vector ket = random_ket(8, rng);
    const LabeledOperator psi = outer(ket, ket, layout);
    const LabeledOperator rho_ab = partial_trace(psi, {"A", "B"});
    const LabeledOperator rho_ac = partial_trace(psi, {"A", "C"});
    const double h_max = h_max_opt(rho_ab, {"A"}).value_bits;
    const double h_min = h_min_opt(rho_ac, {"A"}).value_bits;
    CHECK(std::abs(h_max + h_min) <= 2e-7);
  }
}

TEST_CASE("collision entropy dominates min entropy at a common conditioner") {
  for (int i = 0; i < 20; ++i) {
    RngStream rng(83, static_cast<std::uint64_t>(i));
    const SubsystemLayout layout({{"A", 2}, {"B", 2}});
    const LabeledOperator rho(random_density(4, rng), layout);
    const DensityOperator sigma =
        full_rank_density(2, SubsystemLayout({{"B", 2}}), rng);
    const double h2 = h2_fixed(rho, {"A"}, sigma).value_bits;
    const double h_min = h_min_fixed(rho, {"A"}, sigma).value_bits;
    CHECK(h2 >= h_min - 1e-9);

    // Independent route through the weighted two-norm.
    const double wtn = weighted_two_norm(rho, sigma);
    CHECK(h2 == doctest::Approx(-std::log2(wtn * wtn)).epsilon(1e-9));
  }
}

TEST_CASE("scaling identities") {
  RngStream rng(89, 0);
  const SubsystemLayout layout({{"A", 2}, {"B", 2}});
  const LabeledOperator rho(random_density(4, rng), layout);
  const LabeledOperator scaled(0.35 * rho.mat, layout);
  const DensityOperator sigma =
      full_rank_density(2, SubsystemLayout({{"B", 2}}), rng);
  const double shift = std::log2(0.35);

  CHECK(h_min_fixed(scaled, {"A"}, sigma).value_bits ==
        doctest::Approx(h_min_fixed(rho, {"A"}, sigma).value_bits - shift)
            .epsilon(1e-9));
  CHECK(h2_fixed(scaled, {"A"}, sigma).value_bits ==
        doctest::Approx(h2_fixed(rho, {"A"}, sigma).value_bits - 2.0 * shift)
            .epsilon(1e-9));
  CHECK(h_min_opt(scaled, {"A"}).value_bits ==
        doctest::Approx(h_min_opt(rho, {"A"}).value_bits - shift)
            .epsilon(1e-6));
  CHECK(h_max_fixed(scaled, {"A"}, sigma).value_bits ==
        doctest::Approx(h_max_fixed(rho, {"A"}, sigma).value_bits + shift)
            .epsilon(1e-9));
  CHECK(h_max_opt(scaled, {"A"}).value_bits ==
        doctest::Approx(h_max_opt(rho, {"A"}).value_bits + shift)
            .epsilon(1e-6));
}

TEST_CASE("isometric embedding of the conditioning factor is neutral") {
  RngStream rng(97, 0);
  const LabeledOperator rho(random_density(4, rng),
                            SubsystemLayout({{"A", 2}, {"B", 2}}));
  const Matrix g = ginibre(3, 2, rng);
  const Matrix v =
      Eigen::HouseholderQR<Matrix>(g).householderQ() * Matrix::Identity(3, 2);
  Matrix big = Matrix::Zero(6, 6);
  // (I (x) V) rho (I (x) V)^dag with V : 2 -> 3.
  for (Index a = 0; a < 2; ++a) {
    for (Index ap = 0; ap < 2; ++ap) {
      big.block(a * 3, ap * 3, 3, 3) =
          v * rho.mat.block(a * 2, ap * 2, 2, 2) * v.adjoint();
    }
  }
  const LabeledOperator embedded(big, SubsystemLayout({{"A", 2}, {"B", 3}}));
  CHECK(h_min_opt(embedded, {"A"}).value_bits ==
        doctest::Approx(h_min_opt(rho, {"A"}).value_bits).epsilon(1e-6));
}

TEST_CASE("the optimized quantities enforce the dimension cap") {
  const Index d = kMaxEntropyDim + 1;
  const Matrix big = Matrix::Identity(d, d) / static_cast<double>(d);
  const LabeledOperator rho(big, SubsystemLayout({{"A", 27}, {"B", 19}}));
  CHECK_THROWS_AS(h_min_opt(rho, {"A"}), std::invalid_argument);
}

}  // TEST_SUITE

}  // namespace
}  // namespace dspdec
