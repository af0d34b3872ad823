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

#include "pmn/estimation.hpp"

#include <cmath>

namespace pmn {

VectorXcd ml_estimate(const MatrixXcd& y_p, const VectorXcd& x_p) {
  const double energy = x_p.squaredNorm();
  if (!(energy > 0.0)) throw Error(ErrorCode::InvalidArgument, "ml_estimate: zero pilot");
  if (y_p.cols() != x_p.size())
    throw Error(ErrorCode::InvalidArgument, "ml_estimate: pilot length mismatch");
  return y_p * x_p.conjugate() / energy;
}

VectorXcd refine_estimate(const MatrixXcd& y_p, const MatrixXcd& y_d, const VectorXcd& x_p,
                          const VectorXcd& x_d_decoded) {
  if (y_p.cols() != x_p.size() || y_d.cols() != x_d_decoded.size() || y_p.rows() != y_d.rows())
    throw Error(ErrorCode::InvalidArgument, "refine_estimate: dimension mismatch");
  const double energy = x_p.squaredNorm() + x_d_decoded.squaredNorm();
  if (!(energy > 0.0)) throw Error(ErrorCode::InvalidArgument, "refine_estimate: zero signal");
  VectorXcd acc = y_p * x_p.conjugate();
  if (y_d.cols() > 0) acc += y_d * x_d_decoded.conjugate();
  return acc / energy;
}

namespace {

double target_load(const Scenario& s, int ap, MomentCondition cond) {
  const double full = s.config.sigma_alpha_sq[ap] * s.config.n_r;  // trace of Omega_g
  switch (cond) {
    case MomentCondition::H0: return 0.0;
    case MomentCondition::H1: return full;
    case MomentCondition::Prior: return s.config.p_h1 * full;
  }
  return 0.0;
}

IdentityPlusRankOne make(const Scenario& s, int ap, double identity, MomentCondition cond) {
  IdentityPlusRankOne m;
  m.identity = identity;
  m.rank_one = target_load(s, ap, cond);
  m.direction = s.profiles[ap].steering / std::sqrt(static_cast<double>(s.config.n_r));
  return m;
}

}  // namespace

IdentityPlusRankOne channel_moment(const Scenario& scenario, int ap, MomentCondition cond) {
  return make(scenario, ap, scenario.config.sigma_c_sq[ap], cond);
}

IdentityPlusRankOne modelled_estimate_moment(Scheme scheme, const Scenario& scenario, int ap,
                                             double sigma_sq, MomentCondition cond) {
  const auto& c = scenario.config;
  const double sc = c.sigma_c_sq[ap];
  const double sz = c.sigma_z_sq[ap];
  double identity = 0.0;
  switch (scheme) {
    case Scheme::CDCS:
      identity = sc - (sz + sigma_sq) / c.pilot_energy();
      break;
    case Scheme::CDES:
    case Scheme::EDES:
      identity = sc - sz / c.pilot_energy();
      break;
    case Scheme::EDCS:
      identity = sc - sigma_sq + sz / c.block_energy();
      break;
  }
  return make(scenario, ap, identity, cond);
}

IdentityPlusRankOne estimate_covariance(Scheme scheme, const Scenario& scenario, int ap,
                                        MomentCondition cond) {
  const auto& c = scenario.config;
  const double energy = scheme == Scheme::EDCS ? c.block_energy() : c.pilot_energy();
  return make(scenario, ap, c.sigma_c_sq[ap] + c.sigma_z_sq[ap] / energy, cond);
}

bool floor_to_psd(IdentityPlusRankOne& m) {
  // eigenvalues: identity (x n-1) and identity + rank_one
  double lo = m.identity;
  double hi = m.identity + m.rank_one;
  bool changed = false;
  if (m.dim() > 1 && lo < 0.0) {
    lo = 0.0;
    changed = true;
  }
  if (hi < 0.0) {
    hi = 0.0;
    changed = true;
  }
  if (m.dim() == 1) lo = hi;
  m.identity = m.dim() == 1 ? 0.0 : lo;
  m.rank_one = hi - m.identity;
  return changed;
}

SecondMoments estimate_second_moments(Scheme scheme, const Scenario& scenario,
                                      const QuantizationPlan& plan, MomentCondition cond) {
  SecondMoments out;
  for (int k = 0; k < scenario.num_aps(); ++k) {
    double sigma_sq = 0.0;
    if (scheme == Scheme::CDCS && !plan.sigma_p_sq.empty()) sigma_sq = plan.sigma_p_sq[k];
    if (scheme == Scheme::EDCS && !plan.sigma_sq.empty()) sigma_sq = plan.sigma_sq[k];
    auto m = modelled_estimate_moment(scheme, scenario, k, sigma_sq, cond);
    const bool clamped = floor_to_psd(m);
    out.per_ap.push_back(m.dense());
    out.clamped.push_back(clamped);
    if (clamped)
      out.warnings.push_back("AP " + std::to_string(k) + ": " + std::string(to_string(scheme)) +
                             " estimate covariance had negative eigenvalues; floored at 0");
  }
  return out;
}

}  // namespace pmn
