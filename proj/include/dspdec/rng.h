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

#ifndef DSPDEC_RNG_H
#define DSPDEC_RNG_H

#include <cstdint>
#include <random>

#include "dspdec/operators.h"

namespace dspdec {

// A deterministic random stream addressed by (seed, stream).  Consumers that
// draw many independent objects (one per Monte Carlo sample, one per trial)
// open one stream per object index, so results do not depend on evaluation
// order and a run is reproducible from the seed alone.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream) : normal_(0.0, 1.0) {
    std::seed_seq seq{
        static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
        static_cast<std::uint32_t>(stream),
        static_cast<std::uint32_t>(stream >> 32), std::uint32_t{0x9E3779B9}};
    engine_.seed(seq);
  }

  double gaussian() { return normal_(engine_); }

  double uniform() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
  }

  Index uniform_index(Index n) {
    return std::uniform_int_distribution<Index>(0, n - 1)(engine_);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

// A matrix with independent standard complex Gaussian entries
// (real and imaginary parts N(0, 1/2) each, so E|g|^2 = 1).
inline Matrix ginibre(Index rows, Index cols, RngStream& rng) {
  static const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
  Matrix g(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      g(i, j) = Cplx(rng.gaussian() * kInvSqrt2, rng.gaussian() * kInvSqrt2);
    }
  }
  return g;
}

}  // namespace dspdec

#endif  // DSPDEC_RNG_H
