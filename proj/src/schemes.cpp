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

#include "pmn/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>

#include "pmn/estimation.hpp"
#include "pmn/linalg.hpp"

namespace pmn {

namespace {

bool is_inf(double v) { return std::isinf(v) && v > 0.0; }

void require_plan(const Scenario& s, const QuantizationPlan& plan, Scheme scheme) {
  if (plan.scheme != scheme)
    throw Error(ErrorCode::InvalidArgument, "plan is for " + std::string(to_string(plan.scheme)) + ", expected " +
                                                std::string(to_string(scheme)));
  validate_plan(s, plan);
}

std::vector<ReverseQuantizer> reverse_quantizers(Scheme scheme, const Scenario& s, const std::vector<double>& sigma) {
  std::vector<ReverseQuantizer> out;
  for (int k = 0; k < s.num_aps(); ++k) {
    const double v = is_inf(sigma[k]) ? 0.0 : sigma[k];
    out.emplace_back(estimate_covariance(scheme, s, k, MomentCondition::Prior).dense(), v);
  }
  return out;
}

}  // namespace

void MonteCarloSpec::validate() const {
  if (n_trials_detection < 1 || n_trials_rate < 1)
    throw Error(ErrorCode::InvalidArgument, "Monte Carlo trial counts must be >= 1");
  if (!(target_pfa > 0.0 && target_pfa < 1.0))
    throw Error(ErrorCode::InvalidArgument, "target_pfa must lie in (0, 1)");
  if (threads < 1) throw Error(ErrorCode::InvalidArgument, "threads must be >= 1");
}

double cdcs_noise_variance(const Scenario& scenario, const QuantizationPlan& plan, int ap) {
  const auto& c = scenario.config;
  const double sp = plan.sigma_p_sq[ap];
  const double sd = plan.sigma_d_sq[ap];
  if (is_inf(sp) || is_inf(sd)) return kNoFronthaul;
  const double sz = c.sigma_z_sq[ap];
  return c.p_d * (sz + sp) / c.pilot_energy() + sz + sd;
}

double cdes_noise_variance(const Scenario& scenario, const QuantizationPlan& plan, int ap) {
  const auto& c = scenario.config;
  const double sp = plan.sigma_p_sq[ap];
  const double sd = plan.sigma_d_sq[ap];
  if (is_inf(sp) || is_inf(sd)) return kNoFronthaul;
  const double sz = c.sigma_z_sq[ap];
  return c.p_d * (sp + sz / c.pilot_energy()) + sz + sd;
}

double rate_term(double p_d, const std::vector<VectorXcd>& h, const std::vector<double>& omega) {
  double load = 0.0;
  for (std::size_t k = 0; k < h.size(); ++k)
    if (!is_inf(omega[k])) load += h[k].squaredNorm() / omega[k];
  return std::log2(1.0 + p_d * load);
}

double rate_term_dense(double p_d, const std::vector<VectorXcd>& h, const std::vector<double>& omega) {
  Eigen::Index n = 0;
  for (std::size_t k = 0; k < h.size(); ++k)
    if (!is_inf(omega[k])) n += h[k].size();
  if (n == 0) return 0.0;
  VectorXcd stacked(n);
  Eigen::VectorXd inv_omega(n);
  Eigen::Index off = 0;
  for (std::size_t k = 0; k < h.size(); ++k) {
    if (is_inf(omega[k])) continue;
    stacked.segment(off, h[k].size()) = h[k];
    inv_omega.segment(off, h[k].size()).setConstant(1.0 / omega[k]);
    off += h[k].size();
  }
  const MatrixXcd m = MatrixXcd::Identity(n, n) +
                      p_d * stacked * stacked.adjoint() * inv_omega.cast<cd>().asDiagonal();
  // the product is not Hermitian; use a general determinant
  return std::log2(std::abs(m.determinant()));
}

double edge_rate_coefficient(const SystemConfig& c, int ap) {
  return c.p_p * c.p_d * c.t_p / (c.sigma_z_sq[ap] * (c.p_d + c.pilot_energy()));
}

int select_best_ap(const Scenario& scenario) {
  const auto& c = scenario.config;
  int best = 0;
  double best_snr = -1.0;
  for (int k = 0; k < c.num_aps; ++k) {
    const double snr = c.p_d * (c.sigma_c_sq[k] + c.p_h1 * c.sigma_alpha_sq[k]) / c.sigma_z_sq[k];
    if (snr > best_snr) {
      best_snr = snr;
      best = k;
    }
  }
  return best;
}

RateEvaluator::RateEvaluator(const Scenario& scenario, const MonteCarloSpec& mc)
    : scenario_(scenario), threads_(mc.threads) {
  mc.validate();
  const auto& c = scenario_.config;
  trials_.resize(static_cast<std::size_t>(mc.n_trials_rate));
  parallel_for(trials_.size(), threads_, [&](std::size_t i) {
    RandomStream rng(mc.master_seed, StreamTag::Rate, i);
    Trial& t = trials_[i];
    t.hypothesis = rng.bernoulli(c.p_h1) ? Hypothesis::H1 : Hypothesis::H0;
    const auto ch = sample_channel(c, scenario_.profiles, t.hypothesis, rng);
    const auto block = sample_block(c, ch, rng);
    for (int k = 0; k < c.num_aps; ++k) {
      t.h_tilde.push_back(ml_estimate(block.y_p[k], block.x_p));
      const MatrixXcd q = rng.complex_normal_matrix(c.n_r, c.t_p, 1.0);
      t.q_estimate.push_back(ml_estimate(q, block.x_p));
    }
    for (int k = 0; k < c.num_aps; ++k) t.u.push_back(rng.complex_normal_vector(c.n_r, 1.0));
  });
}

double RateEvaluator::average(const std::vector<double>& terms) const {
  const auto& c = scenario_.config;
  return static_cast<double>(c.t_d) / c.total_uses() * pairwise_sum(terms) / static_cast<double>(terms.size());
}

std::vector<VectorXcd> RateEvaluator::cdcs_estimates(std::size_t trial, const QuantizationPlan& plan) const {
  // ML estimate of (Y_p + Q) = estimate of Y_p + estimate of Q, by linearity
  const Trial& t = trials_.at(trial);
  std::vector<VectorXcd> out;
  for (int k = 0; k < scenario_.num_aps(); ++k) {
    const double sp = plan.sigma_p_sq[k];
    out.push_back(is_inf(sp) ? VectorXcd::Zero(t.h_tilde[k].size()) : VectorXcd(t.h_tilde[k] + std::sqrt(sp) * t.q_estimate[k]));
  }
  return out;
}

std::vector<VectorXcd> RateEvaluator::cdes_estimates(std::size_t trial, const QuantizationPlan& plan) const {
  const auto q = reverse_quantizers(Scheme::CDES, scenario_, plan.sigma_p_sq);
  const Trial& t = trials_.at(trial);
  std::vector<VectorXcd> out;
  for (int k = 0; k < scenario_.num_aps(); ++k) out.push_back(q[k].apply(t.h_tilde[k], t.u[k]));
  return out;
}

std::vector<double> RateEvaluator::cdcs_terms(const QuantizationPlan& plan) const {
  require_plan(scenario_, plan, Scheme::CDCS);
  const auto& c = scenario_.config;
  std::vector<double> omega, scale;
  for (int k = 0; k < c.num_aps; ++k) {
    omega.push_back(cdcs_noise_variance(scenario_, plan, k));
    scale.push_back(is_inf(plan.sigma_p_sq[k]) ? 0.0 : std::sqrt(plan.sigma_p_sq[k]));
  }
  std::vector<double> terms(trials_.size());
  parallel_for(trials_.size(), threads_, [&](std::size_t i) {
    const Trial& t = trials_[i];
    double load = 0.0;
    for (int k = 0; k < c.num_aps; ++k)
      if (!is_inf(omega[k])) load += (t.h_tilde[k] + scale[k] * t.q_estimate[k]).squaredNorm() / omega[k];
    terms[i] = std::log2(1.0 + c.p_d * load);
  });
  return terms;
}

std::vector<double> RateEvaluator::cdes_terms(const QuantizationPlan& plan) const {
  require_plan(scenario_, plan, Scheme::CDES);
  const auto& c = scenario_.config;
  std::vector<double> omega;
  for (int k = 0; k < c.num_aps; ++k) omega.push_back(cdes_noise_variance(scenario_, plan, k));
  const auto q = reverse_quantizers(Scheme::CDES, scenario_, plan.sigma_p_sq);
  std::vector<double> terms(trials_.size());
  parallel_for(trials_.size(), threads_, [&](std::size_t i) {
    const Trial& t = trials_[i];
    double load = 0.0;
    for (int k = 0; k < c.num_aps; ++k)
      if (!is_inf(omega[k])) load += q[k].apply(t.h_tilde[k], t.u[k]).squaredNorm() / omega[k];
    terms[i] = std::log2(1.0 + c.p_d * load);
  });
  return terms;
}

double RateEvaluator::rate_cdcs(const QuantizationPlan& plan) const { return average(cdcs_terms(plan)); }

double RateEvaluator::rate_cdes(const QuantizationPlan& plan) const { return average(cdes_terms(plan)); }

std::vector<double> RateEvaluator::edge_terms(int ap) const {
  if (ap < 0 || ap >= scenario_.num_aps()) throw Error(ErrorCode::InvalidArgument, "rate_edge: AP index out of range");
  const double coeff = edge_rate_coefficient(scenario_.config, ap);
  std::vector<double> terms(trials_.size());
  for (std::size_t i = 0; i < trials_.size(); ++i) terms[i] = std::log2(1.0 + coeff * trials_[i].h_tilde[ap].squaredNorm());
  return terms;
}

double RateEvaluator::rate_edge(int ap) const { return average(edge_terms(ap)); }

double RateEvaluator::std_error(const std::vector<double>& terms) const {
  const double n = static_cast<double>(terms.size());
  if (n < 2) return 0.0;
  const double mean = pairwise_sum(terms) / n;
  double ss = 0.0;
  for (double t : terms) ss += (t - mean) * (t - mean);
  const auto& c = scenario_.config;
  return static_cast<double>(c.t_d) / c.total_uses() * std::sqrt(ss / (n - 1) / n);
}

double sensing_statistic(Scheme scheme, const Scenario& scenario, const QuantizationPlan& plan,
                         const DetectorSpec& detector, Hypothesis hypothesis, RandomStream& rng, TieBreak tie) {
  // reverse quantizers are rebuilt per call; simulate_sensing avoids this
  const auto& c = scenario.config;
  const auto ch = sample_channel(c, scenario.profiles, hypothesis, rng);
  const auto block = sample_block(c, ch, rng);
  switch (scheme) {
    case Scheme::CDCS: {
      double total = 0.0;
      for (int k = 0; k < c.num_aps; ++k) {
        const MatrixXcd q = quantize_additive(block.y_p[k], is_inf(plan.sigma_p_sq[k]) ? 0.0 : plan.sigma_p_sq[k], rng);
        if (!is_inf(plan.sigma_p_sq[k])) total += block_statistic(detector, k, q);
      }
      return total;
    }
    case Scheme::CDES:
    case Scheme::EDES: {
      std::vector<double> per_ap;
      for (int k = 0; k < c.num_aps; ++k) per_ap.push_back(block_statistic(detector, k, block.y_p[k]));
      return fused_edge_statistic(per_ap, tie);
    }
    case Scheme::EDCS: {
      const auto q = reverse_quantizers(Scheme::EDCS, scenario, plan.sigma_sq);
      double total = 0.0;
      for (int k = 0; k < c.num_aps; ++k) {
        const VectorXcd h_bar = refine_estimate(block.y_p[k], block.y_d[k], block.x_p, block.x_d);
        const VectorXcd u = rng.complex_normal_vector(c.n_r, 1.0);
        if (!is_inf(plan.sigma_sq[k])) total += block_statistic(detector, k, q[k].apply(h_bar, u));
      }
      return total;
    }
  }
  return 0.0;
}

SensingResult simulate_sensing(Scheme scheme, const Scenario& scenario, const QuantizationPlan& plan,
                               const MonteCarloSpec& mc) {
  mc.validate();
  require_plan(scenario, plan, scheme);
  const auto& c = scenario.config;
  const DetectorSpec detector = build_detector(scheme, scenario, plan);
  std::optional<std::vector<ReverseQuantizer>> reverse;
  if (scheme == Scheme::EDCS) reverse = reverse_quantizers(Scheme::EDCS, scenario, plan.sigma_sq);

  auto one = [&](Hypothesis hyp, RandomStream& rng) -> double {
    if (scheme != Scheme::EDCS) return sensing_statistic(scheme, scenario, plan, detector, hyp, rng, mc.tie_break);
    const auto ch = sample_channel(c, scenario.profiles, hyp, rng);
    const auto block = sample_block(c, ch, rng);
    double total = 0.0;
    for (int k = 0; k < c.num_aps; ++k) {
      const VectorXcd h_bar = refine_estimate(block.y_p[k], block.y_d[k], block.x_p, block.x_d);
      const VectorXcd u = rng.complex_normal_vector(c.n_r, 1.0);
      if (!is_inf(plan.sigma_sq[k])) total += block_statistic(detector, k, (*reverse)[k].apply(h_bar, u));
    }
    return total;
  };
  auto run = [&](StreamTag tag, Hypothesis hyp) {
    std::vector<double> stats(static_cast<std::size_t>(mc.n_trials_detection));
    parallel_for(stats.size(), mc.threads, [&](std::size_t i) {
      RandomStream rng(mc.master_seed, tag, i);
      stats[i] = one(hyp, rng);
    });
    return stats;
  };

  const auto calibration = run(StreamTag::SensingCalibration, Hypothesis::H0);
  SensingResult out;
  out.h0_statistics = run(StreamTag::SensingH0, Hypothesis::H0);
  out.h1_statistics = run(StreamTag::SensingH1, Hypothesis::H1);
  out.nu_p = calibrate_threshold(calibration, mc.target_pfa);
  const auto frac = [&](const std::vector<double>& v) {
    return static_cast<double>(std::count_if(v.begin(), v.end(), [&](double x) { return x > out.nu_p; })) /
           static_cast<double>(v.size());
  };
  out.p_fa = frac(out.h0_statistics);
  out.p_de = frac(out.h1_statistics);
  out.p_sa = sensing_accuracy(out.p_de, out.p_fa);
  out.roc = roc_curve(out.h0_statistics, out.h1_statistics);
  return out;
}

std::vector<double> fronthaul_usage(const Scenario& scenario, const QuantizationPlan& plan) {
  const auto& c = scenario.config;
  const double sensing_bit = 1.0 / c.total_uses();
  std::vector<double> out;
  for (int k = 0; k < c.num_aps; ++k) {
    switch (plan.scheme) {
      case Scheme::CDCS:
        out.push_back(rate_bound(make_rate_bound(RateBoundTag::CdcsPilot, scenario, k), plan.sigma_p_sq[k]) +
                      rate_bound(make_rate_bound(RateBoundTag::CdcsData, scenario, k), plan.sigma_d_sq[k]));
        break;
      case Scheme::CDES:
        out.push_back(sensing_bit +
                      rate_bound(make_rate_bound(RateBoundTag::CdesPilot, scenario, k), plan.sigma_p_sq[k]) +
                      rate_bound(make_rate_bound(RateBoundTag::CdesData, scenario, k), plan.sigma_d_sq[k]));
        break;
      case Scheme::EDCS:
        out.push_back(rate_bound(make_rate_bound(RateBoundTag::EdcsEstimate, scenario, k), plan.sigma_sq[k]) +
                      (k == plan.decoding_ap ? plan.r1 : 0.0));
        break;
      case Scheme::EDES:
        out.push_back(sensing_bit + (k == plan.decoding_ap ? plan.r1 : 0.0));
        break;
    }
  }
  return out;
}

double scheme_bhattacharyya(const Scenario& scenario, const QuantizationPlan& plan) {
  switch (plan.scheme) {
    case Scheme::CDCS: return bhattacharyya_cdcs(scenario, plan.sigma_p_sq);
    case Scheme::EDCS: return bhattacharyya_edcs(scenario, plan.sigma_sq);
    case Scheme::CDES:
    case Scheme::EDES: return bhattacharyya_edge(scenario);
  }
  return 0.0;
}

SchemeResult evaluate_scheme(const Scenario& scenario, const QuantizationPlan& plan, const MonteCarloSpec& mc,
                             const RateEvaluator* rates) {
  SchemeResult r;
  r.scheme = plan.scheme;
  std::unique_ptr<RateEvaluator> own;
  if (cloud_decoding(plan.scheme) && rates == nullptr) {
    own = std::make_unique<RateEvaluator>(scenario, mc);
    rates = own.get();
  }
  switch (plan.scheme) {
    case Scheme::CDCS: r.rate = rates->rate_cdcs(plan); break;
    case Scheme::CDES: r.rate = rates->rate_cdes(plan); break;
    case Scheme::EDCS:
    case Scheme::EDES: r.rate = plan.r1; break;
  }
  r.sensing = simulate_sensing(plan.scheme, scenario, plan, mc);
  r.bhattacharyya = scheme_bhattacharyya(scenario, plan);
  r.fronthaul_usage = fronthaul_usage(scenario, plan);
  return r;
}

}  // namespace pmn
