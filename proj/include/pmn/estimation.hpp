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

#ifndef PMN_ESTIMATION_HPP
#define PMN_ESTIMATION_HPP

#include <string>
#include <vector>

#include "pmn/linalg.hpp"
#include "pmn/model.hpp"
#include "pmn/plan.hpp"

namespace pmn {

/// h~ = Y_p x_p^* / ||x_p||^2.
VectorXcd ml_estimate(const MatrixXcd& y_p, const VectorXcd& x_p);

/// ML estimate over the whole block after (assumed correct) decoding:
/// [Y_p Y_d] x~^* / ||x~||^2 with x~ = [x_p; x_d].
VectorXcd refine_estimate(const MatrixXcd& y_p, const MatrixXcd& y_d, const VectorXcd& x_p,
                          const VectorXcd& x_d_decoded);

enum class MomentCondition { H0, H1, Prior };

/// Omega_h: sigma_c^2 I (+ Omega_g under H1, + P_H1 Omega_g averaged).
IdentityPlusRankOne channel_moment(const Scenario& scenario, int ap, MomentCondition cond);

/// Closed-form covariance of the estimate each scheme forwards, exactly as the
/// analytical model writes it. The CDCS/CDES forms subtract the estimation
/// error variance; the EDCS form is the compressed estimate's covariance.
/// May have negative eigenvalues for extreme configurations.
IdentityPlusRankOne modelled_estimate_moment(Scheme scheme, const Scenario& scenario, int ap,
                                             double sigma_sq, MomentCondition cond);

/// Statistical covariance of the uncompressed estimate (error variance added).
/// Used to realize reverse test channels in Monte Carlo.
IdentityPlusRankOne estimate_covariance(Scheme scheme, const Scenario& scenario, int ap,
                                        MomentCondition cond);

struct SecondMoments {
  std::vector<MatrixXcd> per_ap;
  std::vector<bool> clamped;
  std::vector<std::string> warnings;
};

/// modelled_estimate_moment for every AP, floored to PSD. Flooring is reported
/// through `clamped` / `warnings`, never thrown.
SecondMoments estimate_second_moments(Scheme scheme, const Scenario& scenario,
                                      const QuantizationPlan& plan, MomentCondition cond);

/// Floors negative eigenvalues of a*I + b*uu^H at zero. Returns true if changed.
bool floor_to_psd(IdentityPlusRankOne& m);

}  // namespace pmn

#endif
