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

#include "pmn/fronthaul.hpp"

#include <cmath>
#include <numbers>

#include "pmn/estimation.hpp"

namespace pmn {

namespace {

constexpr double kBracketLow = 1e-12;
constexpr double kBracketHigh = 1e12;

}  // namespace

MatrixXcd quantize_additive(const MatrixXcd& signal, double sigma_sq, const MatrixXcd& unit_noise) {
  if (!(sigma_sq >= 0.0) || !std::isfinite(sigma_sq))
    throw Error(ErrorCode::InvalidArgument, "quantize_additive: sigma_sq must be in [0, inf)");
  if (unit_noise.rows() != signal.rows() || unit_noise.cols() != signal.cols())
    throw Error(ErrorCode::InvalidArgument, "quantize_additive: noise shape mismatch");
  return signal + std::sqrt(sigma_sq) * unit_noise;
}

MatrixXcd quantize_additive(const MatrixXcd& signal, double sigma_sq, RandomStream& rng) {
  const MatrixXcd unit =
      rng.complex_normal_matrix(static_cast<int>(signal.rows()), static_cast<int>(signal.cols()), 1.0);
  return quantize_additive(signal, sigma_sq, unit);
}

ReverseQuantizer::ReverseQuantizer(const MatrixXcd& cov, double sigma_sq) {
  if (!(sigma_sq >= 0.0) || !std::isfinite(sigma_sq))
    throw Error(ErrorCode::InvalidArgument, "quantize_reverse: sigma_sq must be in [0, inf)");
  Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(cov);
  if (eig.info() != Eigen::Success) throw Error(ErrorCode::Numeric, "quantize_reverse: eigensolver failed");
  const auto& values = eig.eigenvalues();
  const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());
  const Eigen::Index n = values.size();
  Eigen::VectorXd gain(n), residual(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double c = values(i);
    if (c - sigma_sq < -1e-12 * scale)
      throw Error(ErrorCode::Infeasible, "reverse test channel infeasible");
    if (sigma_sq == 0.0) {
      gain(i) = 1.0;
      residual(i) = 0.0;
    } else {
      const double kept = std::max(c - sigma_sq, 0.0);
      gain(i) = kept / c;
      residual(i) = std::sqrt(sigma_sq * kept / c);
    }
  }
  const MatrixXcd& v = eig.eigenvectors();
  gain_ = v * gain.cast<cd>().asDiagonal() * v.adjoint();
  residual_sqrt_ = v * residual.cast<cd>().asDiagonal() * v.adjoint();
}

VectorXcd ReverseQuantizer::apply(const VectorXcd& estimate, const VectorXcd& unit_noise) const {
  return gain_ * estimate + residual_sqrt_ * unit_noise;
}

VectorXcd quantize_reverse(const VectorXcd& estimate, const MatrixXcd& cov, double sigma_sq,
                           RandomStream& rng) {
  ReverseQuantizer q(cov, sigma_sq);
  const VectorXcd unit = rng.complex_normal_vector(static_cast<int>(estimate.size()), 1.0);
  return q.apply(estimate, unit);
}

double RateBoundKind::sigma_sq_limit() const {
  return reverse ? identity : std::numeric_limits<double>::infinity();
}

namespace {

RateBoundKind make_kind(RateBoundTag tag, const Scenario& scenario, int ap, MomentCondition cond) {
  const auto& c = scenario.config;
  const double t = c.total_uses();
  RateBoundKind kind;
  kind.tag = tag;
  kind.n_r = c.n_r;
  switch (tag) {
    case RateBoundTag::CdcsPilot: {
      const auto h = channel_moment(scenario, ap, cond);
      kind.identity = c.p_p * h.identity + c.sigma_z_sq[ap];
      kind.rank_one = c.p_p * h.rank_one;
      kind.weight = c.t_p / t;
      break;
    }
    case RateBoundTag::CdcsData:
    case RateBoundTag::CdesData: {
      const auto h = channel_moment(scenario, ap, cond);
      kind.identity = c.p_d * h.identity + c.sigma_z_sq[ap];
      kind.rank_one = c.p_d * h.rank_one;
      kind.weight = c.t_d / t;
      break;
    }
    case RateBoundTag::CdesPilot:
    case RateBoundTag::EdcsEstimate: {
      const Scheme s = tag == RateBoundTag::CdesPilot ? Scheme::CDES : Scheme::EDCS;
      // a0 is the modelled estimate covariance at sigma^2 = 0
      auto m = modelled_estimate_moment(s, scenario, ap, 0.0, cond);
      floor_to_psd(m);
      kind.identity = m.identity;
      kind.rank_one = m.rank_one;
      kind.weight = 1.0 / t;
      kind.reverse = true;
      break;
    }
  }
  return kind;
}

}  // namespace

RateBoundKind make_rate_bound(RateBoundTag tag, const Scenario& scenario, int ap) {
  if (ap < 0 || ap >= scenario.num_aps()) throw Error(ErrorCode::InvalidArgument, "make_rate_bound: AP index out of range");
  return make_kind(tag, scenario, ap, MomentCondition::Prior);
}

ErgodicRate ergodic_fronthaul_rate(RateBoundTag tag, const Scenario& scenario, int ap, double sigma_sq, int n_trials,
                                   RandomStream& rng) {
  if (n_trials < 2) throw Error(ErrorCode::InvalidArgument, "ergodic_fronthaul_rate: need at least 2 trials");
  if (ap < 0 || ap >= scenario.num_aps()) throw Error(ErrorCode::InvalidArgument, "ergodic_fronthaul_rate: AP index out of range");
  const double r0 = rate_bound(make_kind(tag, scenario, ap, MomentCondition::H0), sigma_sq);
  const double r1 = rate_bound(make_kind(tag, scenario, ap, MomentCondition::H1), sigma_sq);
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n_trials; ++i) {
    const double r = rng.bernoulli(scenario.config.p_h1) ? r1 : r0;
    sum += r;
    sum_sq += r * r;
  }
  const double n = n_trials;
  const double mean = sum / n;
  const double var = std::max(sum_sq / n - mean * mean, 0.0) * n / (n - 1);
  return {mean, std::sqrt(var / n)};
}

double rate_bound(const RateBoundKind& kind, double sigma_sq) {
  if (std::isinf(sigma_sq) && sigma_sq > 0) return 0.0;
  if (!(sigma_sq >= 0.0)) throw Error(ErrorCode::InvalidArgument, "rate_bound: sigma_sq must be >= 0");
  if (sigma_sq == 0.0) return std::numeric_limits<double>::infinity();  // lossless
  double a = kind.identity;
  if (kind.reverse) {
    const double slack = 1e-12 * std::max(1.0, kind.identity);
    if (sigma_sq > kind.identity + slack) throw Error(ErrorCode::Infeasible, "reverse test channel infeasible");
    a = std::max(kind.identity - sigma_sq, 0.0);
  }
  const double b = kind.rank_one;
  if (a < 0.0 || a + b < 0.0) throw Error(ErrorCode::Numeric, "rate_bound: covariance not PSD");
  const double bits = (kind.n_r - 1) * std::log1p(a / sigma_sq) + std::log1p((a + b) / sigma_sq);
  return kind.weight * bits / std::numbers::ln2;
}

double rate_bound_dense(const RateBoundKind& kind, double sigma_sq) {
  const int n = kind.n_r;
  IdentityPlusRankOne m;
  m.identity = kind.reverse ? kind.identity - sigma_sq : kind.identity;
  m.rank_one = kind.rank_one;
  m.direction = VectorXcd::Ones(n) / std::sqrt(static_cast<double>(n));
  const MatrixXcd arg = MatrixXcd::Identity(n, n) + m.dense() / sigma_sq;
  return kind.weight * logdet_hpd(arg) / std::numbers::ln2;
}

double invert_rate_bound(const RateBoundKind& kind, double c_target) {
  if (!(c_target >= 0.0) || std::isnan(c_target))
    throw Error(ErrorCode::InvalidArgument, "invert_rate_bound: c_target must be >= 0");
  if (c_target == 0.0) return kNoFronthaul;
  const double hi_limit = kind.reverse ? kind.identity : kBracketHigh;
  if (!(hi_limit > kBracketLow)) return kNoFronthaul;  // reverse channel cannot carry anything

  double lo = std::log(kBracketLow);
  double hi = std::log(hi_limit);
  if (c_target > rate_bound(kind, kBracketLow))
    throw Error(ErrorCode::Infeasible, "capacity target infeasible");
  if (c_target < rate_bound(kind, hi_limit)) return kNoFronthaul;

  // rate_bound is strictly decreasing in sigma^2
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (rate_bound(kind, std::exp(mid)) > c_target)
      lo = mid;
    else
      hi = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

void validate_plan(const Scenario& scenario, const QuantizationPlan& plan) {
  const auto k_count = static_cast<std::size_t>(scenario.num_aps());
  auto check_size = [&](const std::vector<double>& v, const char* name) {
    if (v.size() != k_count)
      throw Error(ErrorCode::InvalidArgument, std::string("plan: ") + name + " must have one entry per AP");
    for (double x : v)
      if (!(x >= 0.0)) throw Error(ErrorCode::InvalidArgument, std::string("plan: ") + name + " must be >= 0");
  };
  switch (plan.scheme) {
    case Scheme::CDCS:
      check_size(plan.sigma_p_sq, "sigma_p_sq");
      check_size(plan.sigma_d_sq, "sigma_d_sq");
      break;
    case Scheme::CDES:
      check_size(plan.sigma_p_sq, "sigma_p_sq");
      check_size(plan.sigma_d_sq, "sigma_d_sq");
      for (std::size_t k = 0; k < k_count; ++k) {
        const double s = plan.sigma_p_sq[k];
        if (std::isinf(s)) continue;
        const auto kind = make_rate_bound(RateBoundTag::CdesPilot, scenario, static_cast<int>(k));
        if (s > kind.sigma_sq_limit() * (1 + 1e-12) || (kind.sigma_sq_limit() <= 0.0 && s > 0.0))
          throw Error(ErrorCode::Infeasible, "reverse test channel infeasible (CDES AP " + std::to_string(k) + ")");
      }
      break;
    case Scheme::EDCS:
      check_size(plan.sigma_sq, "sigma_sq");
      for (std::size_t k = 0; k < k_count; ++k) {
        const double s = plan.sigma_sq[k];
        if (std::isinf(s)) continue;
        const auto kind = make_rate_bound(RateBoundTag::EdcsEstimate, scenario, static_cast<int>(k));
        if (s > kind.sigma_sq_limit() * (1 + 1e-12))
          throw Error(ErrorCode::Infeasible, "reverse test channel infeasible (EDCS AP " + std::to_string(k) + ")");
      }
      break;
    case Scheme::EDES:
      break;
  }
}

}  // namespace pmn
