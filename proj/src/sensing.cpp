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

#include "pmn/sensing.hpp"

#include <algorithm>
#include <cmath>

#include "pmn/linalg.hpp"

namespace pmn {

namespace {

// ln(1 + mu/2) - ln(1 + mu)/2: rank-one load mu against the identity
double rank_one_distance(double mu) {
  if (!(mu > 0.0)) return 0.0;
  return std::log1p(0.5 * mu) - 0.5 * std::log1p(mu);
}

void check_span(std::span<const double> v, const Scenario& s, const char* who) {
  if (static_cast<int>(v.size()) != s.num_aps())
    throw Error(ErrorCode::InvalidArgument, std::string(who) + ": one variance per AP required");
}

DetectorBlock make_block(double d, const MatrixXcd& lambda, int repeats) {
  DetectorBlock b;
  b.d = d;
  b.lambda = lambda;
  b.repeats = repeats;
  const Eigen::Index n = lambda.rows();
  const MatrixXcd m = d * d * lambda;
  b.t = m * (m + MatrixXcd::Identity(n, n)).inverse();
  return b;
}

}  // namespace

int DetectorSpec::dim() const {
  int n = 0;
  for (const auto& b : blocks) n += static_cast<int>(b.lambda.rows()) * b.repeats;
  return n;
}

MatrixXcd DetectorSpec::whitening() const {
  std::vector<MatrixXcd> parts;
  for (const auto& b : blocks) {
    const Eigen::Index n = b.lambda.rows() * b.repeats;
    parts.push_back(b.d * MatrixXcd::Identity(n, n));
  }
  return block_diagonal(parts);
}

MatrixXcd DetectorSpec::lambda() const {
  std::vector<MatrixXcd> parts;
  for (const auto& b : blocks) parts.push_back(repeat_block(b.lambda, b.repeats));
  return block_diagonal(parts);
}

MatrixXcd DetectorSpec::test_matrix() const {
  std::vector<MatrixXcd> parts;
  for (const auto& b : blocks) parts.push_back(repeat_block(b.t, b.repeats));
  return block_diagonal(parts);
}

double edcs_lambda(const Scenario& scenario, int ap, double sigma_sq) {
  const auto& c = scenario.config;
  if (std::isinf(sigma_sq)) return 0.0;
  const double energy = c.block_energy();
  const double denom = energy * (c.sigma_c_sq[ap] + sigma_sq) + c.sigma_z_sq[ap];
  if (!(denom > 0.0)) throw Error(ErrorCode::Infeasible, "whitening infeasible");
  return energy / denom;
}

DetectorSpec build_detector(Scheme scheme, const Scenario& scenario, const QuantizationPlan& plan) {
  const auto& c = scenario.config;
  DetectorSpec spec;
  spec.scheme = scheme;
  for (int k = 0; k < scenario.num_aps(); ++k) {
    const MatrixXcd& omega = scenario.profiles[k].omega_g;
    switch (scheme) {
      case Scheme::CDCS:
      case Scheme::CDES:
      case Scheme::EDES: {
        double sp = 0.0;
        if (scheme == Scheme::CDCS) {
          if (plan.sigma_p_sq.size() != static_cast<std::size_t>(c.num_aps))
            throw Error(ErrorCode::InvalidArgument, "build_detector: plan lacks sigma_p_sq");
          sp = plan.sigma_p_sq[k];
        }
        const double d = std::isinf(sp) ? 0.0 : 1.0 / std::sqrt(c.p_p * c.sigma_c_sq[k] + c.sigma_z_sq[k] + sp);
        spec.blocks.push_back(make_block(d, c.p_p * omega, c.t_p));
        break;
      }
      case Scheme::EDCS: {
        if (plan.sigma_sq.size() != static_cast<std::size_t>(c.num_aps))
          throw Error(ErrorCode::InvalidArgument, "build_detector: plan lacks sigma_sq");
        const double d = std::sqrt(edcs_lambda(scenario, k, plan.sigma_sq[k]));
        spec.blocks.push_back(make_block(d, omega, 1));
        break;
      }
    }
  }
  return spec;
}

double quadratic_statistic(const DetectorSpec& spec, const VectorXcd& r) {
  if (r.size() != spec.dim()) throw Error(ErrorCode::InvalidArgument, "quadratic_statistic: dimension mismatch");
  double total = 0.0;
  Eigen::Index offset = 0;
  for (const auto& b : spec.blocks) {
    const Eigen::Index n = b.t.rows();
    for (int t = 0; t < b.repeats; ++t) {
      const auto seg = r.segment(offset, n);
      total += std::real(seg.dot(b.t * seg));
      offset += n;
    }
  }
  return std::max(total, 0.0);
}

double block_statistic(const DetectorSpec& spec, int ap, const MatrixXcd& observation) {
  if (ap < 0 || ap >= static_cast<int>(spec.blocks.size()))
    throw Error(ErrorCode::InvalidArgument, "block_statistic: AP index out of range");
  const auto& b = spec.blocks[ap];
  if (observation.rows() != b.t.rows() || observation.cols() != b.repeats)
    throw Error(ErrorCode::InvalidArgument, "block_statistic: dimension mismatch");
  if (b.d == 0.0) return 0.0;
  // sum over columns of y^H T y, then the whitening scale d^2
  const MatrixXcd ty = b.t * observation;
  double total = 0.0;
  for (Eigen::Index j = 0; j < observation.cols(); ++j) total += std::real(observation.col(j).dot(ty.col(j)));
  return std::max(b.d * b.d * total, 0.0);
}

double calibrate_threshold(std::span<const double> h0_statistics, double target_pfa) {
  if (h0_statistics.empty()) throw Error(ErrorCode::InvalidArgument, "calibrate_threshold: empty input");
  if (!(target_pfa > 0.0 && target_pfa < 1.0))
    throw Error(ErrorCode::InvalidArgument, "calibrate_threshold: target_pfa must lie in (0, 1)");
  std::vector<double> s(h0_statistics.begin(), h0_statistics.end());
  std::sort(s.begin(), s.end());
  const double pos = static_cast<double>(s.size() - 1) * (1.0 - target_pfa);
  const auto idx = static_cast<std::size_t>(std::ceil(pos - 1e-9));
  return s[std::min(idx, s.size() - 1)];
}

FusionResult majority_fuse(std::span<const Hypothesis> votes, TieBreak tie) {
  if (votes.empty()) throw Error(ErrorCode::InvalidArgument, "majority_fuse: no votes");
  FusionResult out;
  const int k = static_cast<int>(votes.size());
  out.n_r = static_cast<int>(std::count(votes.begin(), votes.end(), Hypothesis::H0));
  if (2 * out.n_r == k)
    out.decision = tie == TieBreak::H1 ? Hypothesis::H1 : Hypothesis::H0;
  else
    out.decision = 2 * out.n_r > k ? Hypothesis::H0 : Hypothesis::H1;
  return out;
}

double fused_edge_statistic(std::span<const double> per_ap, TieBreak tie) {
  if (per_ap.empty()) throw Error(ErrorCode::InvalidArgument, "fused_edge_statistic: no APs");
  const std::size_t k = per_ap.size();
  const std::size_t needed = tie == TieBreak::H1 ? (k + 1) / 2 : k / 2 + 1;
  std::vector<double> s(per_ap.begin(), per_ap.end());
  std::nth_element(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(needed - 1), s.end(), std::greater<>());
  return s[needed - 1];
}

double ROCCurve::detection_at(double pfa) const {
  // randomizing between neighbouring thresholds reaches the chord
  double best = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto [fa, de] = points[i];
    if (fa <= pfa + 1e-15) {
      best = std::max(best, de);
      continue;
    }
    if (i > 0) {
      const auto [fa0, de0] = points[i - 1];
      if (fa0 <= pfa) best = std::max(best, de0 + (de - de0) * (pfa - fa0) / (fa - fa0));
    }
  }
  return best;
}

ROCCurve roc_curve(std::span<const double> h0_stats, std::span<const double> h1_stats) {
  if (h0_stats.empty() || h1_stats.empty()) throw Error(ErrorCode::InvalidArgument, "roc_curve: empty input");
  std::vector<double> a(h0_stats.begin(), h0_stats.end());
  std::vector<double> b(h1_stats.begin(), h1_stats.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<double> pooled(a);
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::sort(pooled.begin(), pooled.end());
  pooled.erase(std::unique(pooled.begin(), pooled.end()), pooled.end());

  auto exceed = [](const std::vector<double>& v, double nu) {
    return static_cast<double>(v.end() - std::upper_bound(v.begin(), v.end(), nu)) / static_cast<double>(v.size());
  };
  ROCCurve roc;
  roc.n_h0 = a.size();
  roc.n_h1 = b.size();
  roc.points.reserve(pooled.size() + 1);
  for (auto it = pooled.rbegin(); it != pooled.rend(); ++it) roc.points.emplace_back(exceed(a, *it), exceed(b, *it));
  roc.points.emplace_back(1.0, 1.0);
  return roc;
}

double sensing_accuracy(double p_de, double p_fa) {
  if (!(p_de >= 0.0 && p_de <= 1.0 && p_fa >= 0.0 && p_fa <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "sensing_accuracy: probabilities must lie in [0, 1]");
  return 0.5 * (p_de + 1.0 - p_fa);
}

double bhattacharyya_gaussian(const MatrixXcd& s1, const MatrixXcd& s2) {
  if (s1.rows() != s2.rows() || s1.cols() != s2.cols() || s1.rows() != s1.cols())
    throw Error(ErrorCode::InvalidArgument, "bhattacharyya_gaussian: shape mismatch");
  try {
    const MatrixXcd mid = 0.5 * (s1 + s2);
    return logdet_hpd(mid) - 0.5 * (logdet_hpd(s1) + logdet_hpd(s2));
  } catch (const Error&) {
    throw Error(ErrorCode::Numeric, "bhattacharyya_gaussian: singular input");
  }
}

double bhattacharyya_cdcs(const Scenario& scenario, std::span<const double> sigma_p_sq) {
  check_span(sigma_p_sq, scenario, "bhattacharyya_cdcs");
  const auto& c = scenario.config;
  std::vector<double> terms;
  for (int k = 0; k < scenario.num_aps(); ++k) {
    const double sp = sigma_p_sq[k];
    if (std::isinf(sp)) continue;
    const double mu = c.p_p * c.sigma_alpha_sq[k] * c.n_r / (c.p_p * c.sigma_c_sq[k] + c.sigma_z_sq[k] + sp);
    terms.push_back(c.t_p * rank_one_distance(mu));
  }
  return pairwise_sum(terms);
}

double bhattacharyya_edcs(const Scenario& scenario, std::span<const double> sigma_sq) {
  check_span(sigma_sq, scenario, "bhattacharyya_edcs");
  const auto& c = scenario.config;
  std::vector<double> terms;
  for (int k = 0; k < scenario.num_aps(); ++k)
    terms.push_back(rank_one_distance(edcs_lambda(scenario, k, sigma_sq[k]) * c.sigma_alpha_sq[k] * c.n_r));
  return pairwise_sum(terms);
}

double bhattacharyya_edge(const Scenario& scenario) {
  const std::vector<double> zeros(static_cast<std::size_t>(scenario.num_aps()), 0.0);
  return bhattacharyya_cdcs(scenario, zeros);
}

}  // namespace pmn
