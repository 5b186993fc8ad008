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

#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "dspdec/channels.h"
#include "dspdec/operators.h"
#include "dspdec/rng.h"
#include "dspdec/sampling.h"

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

TEST_SUITE("dsp_space") {

TEST_CASE("decomposition accessors and offsets") {
  const DspDecomposition decomp({{2, 2}, {1, 3}, {3, 1}});
  CHECK(decomp.block_count() == 3);
  CHECK(decomp.total_dim() == 4 + 3 + 3);
  CHECK(decomp.block_offset(0) == 0);
  CHECK(decomp.block_offset(1) == 4);
  CHECK(decomp.block_offset(2) == 7);
  CHECK(decomp.block_dim(0) == 4);
  CHECK(decomp.max_left_dim() == 3);
  CHECK(decomp.max_right_dim() == 3);
  CHECK(!decomp.randomized_case());
  CHECK_THROWS_AS((void)decomp.uniform_right_dim(), std::invalid_argument);
  CHECK_THROWS_AS((void)decomp.block_offset(3), std::invalid_argument);
  CHECK_THROWS_AS(DspDecomposition({{0, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(DspDecomposition(std::vector<std::pair<Index, Index>>{}),
                  std::invalid_argument);
}

TEST_CASE("randomized shape and literal round trip") {
  const DspDecomposition decomp = DspDecomposition::uniform_randomized(3, 2);
  CHECK(decomp.randomized_case());
  CHECK(decomp.uniform_right_dim() == 2);
  CHECK(decomp.total_dim() == 6);
  CHECK(decomp.to_literal() == "J=[(1,2),(1,2),(1,2)]");
  CHECK(DspDecomposition::from_literal(decomp.to_literal()) == decomp);
  CHECK(DspDecomposition::from_literal("J=[(2, 2), (1, 3)]") ==
        DspDecomposition({{2, 2}, {1, 3}}));
  CHECK_THROWS_AS(DspDecomposition::from_literal("[(1,2)]"),
                  std::invalid_argument);
  CHECK_THROWS_AS(DspDecomposition::from_literal("J=[(1,x)]"),
                  std::invalid_argument);
}

TEST_CASE("flattened space squares the right dimensions") {
  const DspDecomposition decomp({{2, 2}, {1, 3}});
  CHECK(decomp.flattened_space() == DspDecomposition({{2, 2}, {3, 3}}));
  CHECK(decomp.flattened_space().total_dim() == 4 + 9);
}

TEST_CASE("block projectors resolve the identity") {
  const DspDecomposition decomp({{2, 2}, {1, 3}});
  const SubsystemLayout layout({{"A", 7}, {"R", 2}});
  Matrix sum = Matrix::Zero(7, 7);
  for (Index j = 0; j < decomp.block_count(); ++j) {
    const LabeledOperator pj = block_projector(decomp, "A", j);
    CHECK(pj.layout == SubsystemLayout({{"A", 7}}));
    CHECK((pj.mat - pj.mat * pj.mat).norm() < 1e-13);
    sum += pj.mat;
  }
  CHECK((sum - Matrix::Identity(7, 7)).norm() == 0.0);
}

TEST_CASE("pinch_blocks keeps exactly the diagonal blocks") {
  RngStream rng(31, 0);
  const DspDecomposition decomp({{2, 2}, {1, 3}});
  const SubsystemLayout layout({{"A", 7}, {"R", 2}});
  const LabeledOperator x(random_hermitian(14, rng), layout);
  const LabeledOperator pinched = pinch_blocks(x, decomp, "A");

  Matrix expected = Matrix::Zero(14, 14);
  for (Index j = 0; j < decomp.block_count(); ++j) {
    const Matrix pj = embedded_on(block_projector(decomp, "A", j), layout);
    expected += pj * x.mat * pj;
  }
  CHECK((pinched.mat - expected).norm() < 1e-12);
  // Idempotent and trace preserving.
  CHECK((pinch_blocks(pinched, decomp, "A").mat - pinched.mat).norm() < 1e-12);
  CHECK(std::abs(pinched.mat.trace() - x.mat.trace()) < 1e-12);
  // block_project picks out single blocks that sum back to the pinching.
  Matrix reassembled = Matrix::Zero(14, 14);
  for (Index j = 0; j < decomp.block_count(); ++j) {
    reassembled += block_project(x, decomp, "A", j, j).mat;
  }
  CHECK((reassembled - pinched.mat).norm() < 1e-12);
}

TEST_CASE("dephase_central needs trivial left factors") {
  RngStream rng(32, 0);
  const DspDecomposition good = DspDecomposition::uniform_randomized(2, 2);
  const LabeledOperator x(random_hermitian(4, rng),
                          SubsystemLayout({{"A", 4}}));
  CHECK((dephase_central(x, good, "A").mat - pinch_blocks(x, good, "A").mat)
            .norm() < 1e-13);
  const DspDecomposition bad({{2, 2}});
  const LabeledOperator y(random_hermitian(4, rng),
                          SubsystemLayout({{"A", 4}}));
  CHECK_THROWS_AS(dephase_central(y, bad, "A"), std::invalid_argument);
}

TEST_CASE("fixed maximally entangled state") {
  // For J=1 the construction is the standard maximally entangled state; in
  // general the A marginal is maximally mixed and the state is pure.
  const DspDecomposition single({{1, 3}});
  const DensityOperator phi3 = dsp_maximally_entangled(single, "A", "Ap");
  Vector expected = Vector::Zero(9);
  for (Index i = 0; i < 3; ++i) {
    expected(i * 3 + i) = 1.0 / std::sqrt(3.0);
  }
  CHECK((phi3.mat - Matrix(expected * expected.adjoint())).norm() < 1e-12);

  const DspDecomposition decomp({{2, 2}, {1, 3}});
  const DensityOperator phi = dsp_maximally_entangled(decomp, "A", "Ap");
  CHECK(phi.layout == SubsystemLayout({{"A", 7}, {"Ap", 7}}));
  CHECK(std::abs(phi.mat.trace() - Cplx(1.0, 0.0)) < 1e-12);
  CHECK((phi.mat * phi.mat - phi.mat).norm() < 1e-12);  // pure
  const Matrix marginal = partial_trace(phi, {"A"}).mat;
  CHECK((marginal - Matrix::Identity(7, 7) / 7.0).norm() < 1e-12);
}

TEST_CASE("embedding isometry is an isometry onto the block triple") {
  const DspDecomposition decomp({{2, 2}, {1, 3}});
  const LabeledMap w = embedding_isometry(decomp, "A", "Ac", "Al", "Ar");
  CHECK(w.col_layout == SubsystemLayout({{"A", 7}}));
  CHECK(w.row_layout ==
        SubsystemLayout({{"Ac", 2}, {"Al", 2}, {"Ar", 3}}));
  CHECK((Matrix(w.mat.adjoint() * w.mat) - Matrix::Identity(7, 7)).norm() <
        1e-13);
  // W W^dag projects onto the embedded blocks: rank = sum_j l_j r_j.
  const Matrix proj = w.mat * w.mat.adjoint();
  CHECK((proj * proj - proj).norm() < 1e-12);
  CHECK(std::abs(proj.trace().real() - 7.0) < 1e-12);
}

TEST_CASE("flatten map entries") {
  // F carries weight sqrt(d_A / r_j) at row (astar offset + t r_j + v) and
  // column ((off_j + s r_j + t), (off_j + s r_j + v)).
  const DspDecomposition decomp({{2, 2}, {1, 3}});
  const Index d_a = decomp.total_dim();
  const LabeledMap f = flatten_map(decomp, "Astar", "A", "Abar");
  const DspDecomposition flat = decomp.flattened_space();
  CHECK(f.row_layout == SubsystemLayout({{"Astar", flat.total_dim()}}));
  CHECK(f.col_layout == SubsystemLayout({{"A", 7}, {"Abar", 7}}));

  Matrix expected = Matrix::Zero(flat.total_dim(), d_a * d_a);
  for (Index j = 0; j < decomp.block_count(); ++j) {
    const Index l = decomp.left_dim(j);
    const Index r = decomp.right_dim(j);
    const double w = std::sqrt(static_cast<double>(d_a) / r);
    for (Index t = 0; t < r; ++t) {
      for (Index v = 0; v < r; ++v) {
        for (Index s = 0; s < l; ++s) {
          const Index row = flat.block_offset(j) + t * r + v;
          const Index a = decomp.block_offset(j) + s * r + t;
          const Index abar = decomp.block_offset(j) + s * r + v;
          expected(row, a * d_a + abar) += w;
        }
      }
    }
  }
  CHECK((f.mat - expected).norm() < 1e-12);
}

TEST_CASE("lambda blocks agree with the direct flattening") {
  // Two independent routes to Pi_j Lambda Pi_k: sparse conjugation by F
  // versus the block contraction scaled by d_A / sqrt(r_j r_k).
  RngStream rng(33, 0);
  for (int instance = 0; instance < 8; ++instance) {
    std::vector<std::pair<Index, Index>> dims;
    const Index blocks = 1 + static_cast<Index>(rng.uniform_index(3));
    for (Index j = 0; j < blocks; ++j) {
      dims.push_back({1 + static_cast<Index>(rng.uniform_index(3)),
                      1 + static_cast<Index>(rng.uniform_index(3))});
    }
    const DspDecomposition decomp(dims);
    const Index d_a = decomp.total_dim();
    const Index d_r = 2;
    const Index d_e = 2;

    const LabeledOperator psi(random_density(d_a * d_r, rng),
                              SubsystemLayout({{"A", d_a}, {"R", d_r}}));
    const CpMap t = random_trace_preserving_map(
        d_a, d_e, (d_a + d_e - 1) / d_e + 1, 7 + instance, "Ain", "E");
    const LabeledOperator tau(t.choi().mat,
                              SubsystemLayout({{"Abar", d_a}, {"E", d_e}}));

    const LabeledOperator lambda =
        build_lambda(psi, "A", tau, "Abar", decomp, "Astar");
    CHECK(lambda.layout ==
          SubsystemLayout({{"Astar", decomp.flattened_space().total_dim()},
                           {"R", d_r},
                           {"E", d_e}}));

    const DspDecomposition flat = decomp.flattened_space();
    const std::vector<Index> id = identity_permutation(blocks);
    const Index d_rest = d_r * d_e;
    for (Index j = 0; j < blocks; ++j) {
      for (Index k = 0; k < blocks; ++k) {
        const Matrix compact =
            flattened_block_compact(psi, "A", tau, "Abar", decomp, j, k, id);
        const double scale =
            static_cast<double>(d_a) /
            std::sqrt(static_cast<double>(decomp.right_dim(j)) *
                      static_cast<double>(decomp.right_dim(k)));
        const Matrix direct = lambda.mat.block(
            flat.block_offset(j) * d_rest, flat.block_offset(k) * d_rest,
            flat.block_dim(j) * d_rest, flat.block_dim(k) * d_rest);
        CHECK((direct - scale * compact).norm() < 1e-10);
      }
    }
    // flattened_block embeds the same contraction into the full space.
    const LabeledOperator one_block =
        flattened_block(psi, "A", tau, "Abar", decomp, "Astar", 0, 0, id);
    const Matrix embedded_block = one_block.mat.block(
        0, 0, flat.block_dim(0) * d_rest, flat.block_dim(0) * d_rest);
    const Matrix compact00 =
        flattened_block_compact(psi, "A", tau, "Abar", decomp, 0, 0, id);
    CHECK((embedded_block - compact00).norm() < 1e-12);
  }
}

TEST_CASE("averaged state structure") {
  RngStream rng(34, 0);
  const DspDecomposition decomp({{2, 2}, {1, 3}});
  const SubsystemLayout layout({{"A", 7}, {"R", 2}});
  const LabeledOperator psi(random_density(14, rng), layout);
  const LabeledOperator averaged = averaged_state(psi, decomp, "A");

  CHECK(std::abs(averaged.mat.trace() - psi.mat.trace()) < 1e-12);
  // Cross-block parts vanish.
  for (Index j = 0; j < 2; ++j) {
    for (Index k = 0; k < 2; ++k) {
      if (j == k) {
        continue;
      }
      CHECK(block_project(averaged, decomp, "A", j, k).mat.norm() < 1e-13);
    }
  }
  // Averaging is idempotent.
  CHECK((averaged_state(averaged, decomp, "A").mat - averaged.mat).norm() <
        1e-12);
  // Invariance under block unitaries: U Psi_av U^dag = Psi_av.
  RngStream urng(35, 0);
  const StructuredUnitary u = dsp_unitary(decomp, urng);
  const Matrix big_u = embedded_on(
      LabeledOperator(u.mat, SubsystemLayout({{"A", 7}})), layout);
  CHECK((big_u * averaged.mat * big_u.adjoint() - averaged.mat).norm() <
        1e-11);
}

TEST_CASE("averaged state matches the sample mean of block rotations") {
  RngStream rng(36, 0);
  const DspDecomposition decomp({{1, 2}, {2, 1}});
  const SubsystemLayout layout({{"A", 4}, {"R", 2}});
  const LabeledOperator psi(random_density(8, rng), layout);
  const LabeledOperator averaged = averaged_state(psi, decomp, "A");

  const Index n = 4000;
  Matrix mean = Matrix::Zero(8, 8);
  for (Index i = 0; i < n; ++i) {
    RngStream sample_rng(99, static_cast<std::uint64_t>(i));
    const StructuredUnitary u = dsp_unitary(decomp, sample_rng);
    const Matrix big_u = embedded_on(
        LabeledOperator(u.mat, SubsystemLayout({{"A", 4}})), layout);
    mean += big_u * psi.mat * big_u.adjoint();
  }
  mean /= static_cast<double>(n);
  CHECK((mean - averaged.mat).norm() <= 10.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("classically coherent states") {
  RngStream rng(37, 0);
  const Index blocks = 3;
  const Index right = 2;
  const Index ref = 2;
  const Index parent_dim = blocks * right * ref;
  const Matrix g = ginibre(parent_dim, parent_dim, rng);
  const Matrix parent = g * g.adjoint();

  const ClassicallyCoherentState cc =
      classically_coherent_from_parent(parent, blocks, right, ref);
  CHECK(cc.state.layout == SubsystemLayout({{"Ac", blocks},
                                            {"Ar", right},
                                            {"Rc", blocks},
                                            {"Rr", ref}}));
  CHECK(std::abs(cc.state.mat.trace() - Cplx(1.0, 0.0)) < 1e-12);
  CHECK(is_classically_coherent(cc.state, "Ac", "Rc"));

  // Blocks are the parent blocks, jointly rescaled to unit total trace.
  const double parent_trace = parent.trace().real();
  const Index block_span = right * ref;
  for (Index k = 0; k < blocks; ++k) {
    for (Index kp = 0; kp < blocks; ++kp) {
      const Matrix expected = parent.block(k * block_span, kp * block_span,
                                           block_span, block_span) /
                              parent_trace;
      CHECK((cc.block(k, kp) - expected).norm() < 1e-12);
    }
  }

  // Perturbing a mismatched classical entry breaks the property.
  Matrix broken = cc.state.mat;
  // Index (Ac, Ar, Rc, Rr) = (0, 0, 1, 0) against (0, 0, 0, 0).
  broken(0 * right * blocks * ref + 1 * ref + 0, 0) = Cplx(0.1, 0.0);
  broken(0, 0 * right * blocks * ref + 1 * ref + 0) = Cplx(0.1, 0.0);
  CHECK(!is_classically_coherent(LabeledOperator(broken, cc.state.layout),
                                 "Ac", "Rc"));

  CHECK_THROWS_AS(
      classically_coherent_from_parent(Matrix::Zero(parent_dim, parent_dim),
                                       blocks, right, ref),
      std::invalid_argument);
}

TEST_CASE("averaged classically coherent state has the expected form") {
  // For a classically coherent state, averaging over block unitaries keeps
  // the diagonal classical labels and replaces each A_r block by the
  // maximally mixed state: sum_j |j><j| (x) pi (x) ((Tr_Ar blocks) on R).
  RngStream rng(38, 0);
  const Index blocks = 2;
  const Index right = 2;
  const Index ref = 3;
  const Matrix g = ginibre(blocks * right * ref, blocks * right * ref, rng);
  const ClassicallyCoherentState cc = classically_coherent_from_parent(
      Matrix(g * g.adjoint()), blocks, right, ref);
  const DspDecomposition decomp =
      DspDecomposition::uniform_randomized(blocks, right);
  const LabeledOperator merged = merged_factors(cc.state, {"Ac", "Ar"}, "A");
  const LabeledOperator averaged = averaged_state(merged, decomp, "A");

  // Entry oracle on [A(blocks*right), Rc(blocks), Rr(ref)].
  const SubsystemLayout ar_layout({{"Ar", right}, {"Rr", ref}});
  for (Index j = 0; j < blocks; ++j) {
    const Matrix rho_jj_r =
        partial_trace(LabeledOperator(cc.block(j, j), ar_layout), {"Rr"}).mat;
    for (Index a = 0; a < right; ++a) {
      for (Index ap = 0; ap < right; ++ap) {
        for (Index w = 0; w < ref; ++w) {
          for (Index wp = 0; wp < ref; ++wp) {
            const Index row = ((j * right + a) * blocks + j) * ref + w;
            const Index col = ((j * right + ap) * blocks + j) * ref + wp;
            const Cplx expected = (a == ap ? rho_jj_r(w, wp) /
                                                 static_cast<double>(right)
                                           : Cplx(0.0, 0.0));
            CHECK(std::abs(averaged.mat(row, col) - expected) < 1e-12);
          }
        }
      }
    }
  }
}

}  // TEST_SUITE

}  // namespace
}  // namespace dspdec
