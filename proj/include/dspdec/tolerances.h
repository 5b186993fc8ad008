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

#ifndef DSPDEC_TOLERANCES_H
#define DSPDEC_TOLERANCES_H

namespace dspdec {

// Every numerical threshold used by the library, collected in one record so
// that all modules agree on what "Hermitian", "positive" and "equal" mean.
struct Tolerances {
  // Largest allowed entry of |X - X^dagger| for an operator accepted as
  // Hermitian.
  double hermiticity = 1e-12;

  // Most negative eigenvalue accepted from a nominally positive semidefinite
  // operator.  Eigenvalues in [psd_floor, 0) are clipped to zero by matrix
  // functions such as the square root; anything below is an error.
  double psd_floor = -1e-10;

  // Generic tolerance for equality checks between computed quantities.
  double equality = 1e-9;

  // Smallest eigenvalue for which an operator is still treated as full rank
  // (inverse powers refuse to act below this).
  double full_rank_floor = 1e-12;

  // Allowed deviation of the trace of a normalized density operator from 1.
  double trace_normalization = 1e-10;

  // Eigenvalues above this threshold count towards the numerical rank used
  // for purifications and Stinespring dilations.
  double rank_threshold = 1e-10;

  // Certified primal-dual gap required from the min-entropy solver.
  double sdp_gap = 1e-7;
};

// Library-wide defaults.  Callers that need different thresholds pass their
// own record to the operations that accept one.
const Tolerances& default_tolerances();

}  // namespace dspdec

#endif  // DSPDEC_TOLERANCES_H
