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

#ifndef PMN_FRONTHAUL_HPP
#define PMN_FRONTHAUL_HPP

#include <vector>

#include "pmn/linalg.hpp"
#include "pmn/model.hpp"
#include "pmn/plan.hpp"
#include "pmn/rng.hpp"

namespace pmn {

/// Forward test channel: signal + Q, Q i.i.d. CN(0, sigma_sq).
MatrixXcd quantize_additive(const MatrixXcd& signal, double sigma_sq, RandomStream& rng);

/// Same, with the unit-variance noise supplied by the caller (common random numbers).
MatrixXcd quantize_additive(const MatrixXcd& signal, double sigma_sq, const MatrixXcd& unit_noise);

/// Reverse test channel estimate = h_hat + q, q ~ CN(0, sigma_sq I) independent
/// of h_hat ~ CN(0, cov - sigma_sq I). Realized as the jointly Gaussian pair
///   h_hat = A estimate + w,  A = (cov - sigma_sq I) cov^-1,
///   w ~ CN(0, sigma_sq (cov - sigma_sq I) cov^-1).
class ReverseQuantizer {
public:
  ReverseQuantizer(const MatrixXcd& cov, double sigma_sq);

  /// unit_noise: CN(0, I) draw of length n.
  VectorXcd apply(const VectorXcd& estimate, const VectorXcd& unit_noise) const;
  const MatrixXcd& gain() const { return gain_; }
  const MatrixXcd& residual_sqrt() const { return residual_sqrt_; }

private:
  MatrixXcd gain_;
  MatrixXcd residual_sqrt_;
};

VectorXcd quantize_reverse(const VectorXcd& estimate, const MatrixXcd& cov, double sigma_sq,
                           RandomStream& rng);

enum class RateBoundTag { CdcsPilot, CdcsData, CdesPilot, CdesData, EdcsEstimate };

/// Jensen-type upper bound w * log2 det(I + M / sigma^2) with
/// M = a I + b u u^H. For reverse test channels (CdesPilot, EdcsEstimate)
/// M is the compressed estimate's covariance, a = a0 - sigma^2, so sigma^2 is
/// confined to (0, a0].
struct RateBoundKind {
  RateBoundTag tag = RateBoundTag::CdcsData;
  int n_r = 1;
  double identity = 0.0;  // a (forward) or a0 (reverse)
  double rank_one = 0.0;  // b
  double weight = 1.0;    // time fraction w
  bool reverse = false;

  /// Largest admissible sigma^2 (a0 for reverse kinds, +inf otherwise).
  double sigma_sq_limit() const;
};

RateBoundKind make_rate_bound(RateBoundTag tag, const Scenario& scenario, int ap);

/// Closed form via the rank-one eigenstructure. sigma_sq = +inf gives 0,
/// sigma_sq = 0 gives +inf.
double rate_bound(const RateBoundKind& kind, double sigma_sq);

/// Same bound by a dense log-determinant; used to cross-check the shortcut.
double rate_bound_dense(const RateBoundKind& kind, double sigma_sq);

struct ErgodicRate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Monte Carlo estimate of the ergodic fronthaul rate: the log-det term with
/// the hypothesis-conditional covariance, averaged over prior hypothesis draws.
/// rate_bound moves that average inside the log-det.
ErgodicRate ergodic_fronthaul_rate(RateBoundTag tag, const Scenario& scenario, int ap, double sigma_sq, int n_trials,
                                   RandomStream& rng);

/// Smallest-noise inverse of rate_bound by bisection in log(sigma^2) over
/// [1e-12, 1e12] (upper end replaced by a0 for reverse kinds).
/// c_target = 0, or a target below what the bound can express inside the
/// bracket, returns kNoFronthaul. Targets above the bracket's supremum throw
/// Error(Infeasible, "capacity target infeasible").
double invert_rate_bound(const RateBoundKind& kind, double c_target);

/// Throws Error(Infeasible) if any variance violates its test channel's bracket.
void validate_plan(const Scenario& scenario, const QuantizationPlan& plan);

}  // namespace pmn

#endif
