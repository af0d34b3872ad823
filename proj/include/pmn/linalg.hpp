// SPDX-License-Identifier: Apache-2.0
//
// pmn-splitsim: fronthaul functional-split simulator for cell-free MIMO
// sensing-and-communication uplinks.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef PMN_LINALG_HPP
#define PMN_LINALG_HPP

#include <span>
#include <vector>

#include "pmn/types.hpp"

namespace pmn {

/// Hermitian matrix of the form a*I + b*u*u^H with unit-norm u. Every
/// covariance in the model has this shape, which gives closed-form
/// eigenvalues: a (multiplicity n-1) and a+b.
struct IdentityPlusRankOne {
  double identity = 0.0;
  double rank_one = 0.0;
  VectorXcd direction;  // unit norm

  int dim() const { return static_cast<int>(direction.size()); }
  double min_eigenvalue() const;
  MatrixXcd dense() const;
};

/// ln det of a Hermitian positive definite matrix; throws Numeric if not PD.
double logdet_hpd(const MatrixXcd& m);

/// Dense block-diagonal assembly.
MatrixXcd block_diagonal(std::span<const MatrixXcd> blocks);

/// Kronecker product I_n (x) m.
MatrixXcd repeat_block(const MatrixXcd& m, int n);

/// Order-independent, reproducible sum (pairwise recursion over a fixed split).
double pairwise_sum(std::span<const double> values);

/// Spearman rank correlation (average ranks for ties).
double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace pmn

#endif
