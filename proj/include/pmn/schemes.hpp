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

#ifndef PMN_SCHEMES_HPP
#define PMN_SCHEMES_HPP

#include <cstdint>
#include <vector>

#include "pmn/fronthaul.hpp"
#include "pmn/model.hpp"
#include "pmn/plan.hpp"
#include "pmn/sensing.hpp"

namespace pmn {

struct MonteCarloSpec {
  int n_trials_detection = 10000;  // per hypothesis
  int n_trials_rate = 2000;
  std::uint64_t master_seed = 1;
  double target_pfa = 0.1;
  int threads = 1;
  TieBreak tie_break = TieBreak::H1;

  void validate() const;
};

/// Effective per-entry noise of the cloud decoder, per AP.
/// +inf when the AP sends no data or no CSI.
double cdcs_noise_variance(const Scenario& scenario, const QuantizationPlan& plan, int ap);
double cdes_noise_variance(const Scenario& scenario, const QuantizationPlan& plan, int ap);

/// log2(1 + p_d sum_k ||h_k||^2 / omega_k); APs with omega_k = +inf are skipped.
double rate_term(double p_d, const std::vector<VectorXcd>& h, const std::vector<double>& omega);

/// Same quantity as log2 det(I + p_d h h^H Omega_N^-1) on the stacked vector.
double rate_term_dense(double p_d, const std::vector<VectorXcd>& h, const std::vector<double>& omega);

/// Coefficient of the single-AP decode rate, P_p P_d T_p / (sigma_z^2 (P_d + P_p T_p)).
double edge_rate_coefficient(const SystemConfig& config, int ap);

/// Highest average received SNR; ties go to the lowest index.
int select_best_ap(const Scenario& scenario);

/// Draws every rate trial once and re-evaluates any plan on the same draws,
/// so that comparisons between plans are not dominated by Monte Carlo noise.
class RateEvaluator {
public:
  RateEvaluator(const Scenario& scenario, const MonteCarloSpec& mc);

  double rate_cdcs(const QuantizationPlan& plan) const;
  double rate_cdes(const QuantizationPlan& plan) const;
  double rate_edge(int ap) const;

  /// Per-trial log2 arguments (before the T_d/T factor and averaging).
  std::vector<double> cdcs_terms(const QuantizationPlan& plan) const;
  std::vector<double> cdes_terms(const QuantizationPlan& plan) const;
  std::vector<double> edge_terms(int ap) const;

  /// Standard error of the rate average built from `terms`.
  double std_error(const std::vector<double>& terms) const;

  /// Estimates the CPU sees in one trial.
  std::vector<VectorXcd> cdcs_estimates(std::size_t trial, const QuantizationPlan& plan) const;
  std::vector<VectorXcd> cdes_estimates(std::size_t trial, const QuantizationPlan& plan) const;

  std::size_t trials() const { return trials_.size(); }
  const Scenario& scenario() const { return scenario_; }

private:
  struct Trial {
    Hypothesis hypothesis = Hypothesis::H0;
    std::vector<VectorXcd> h_tilde;     // ML estimate from unquantized pilots
    std::vector<VectorXcd> q_estimate;  // ML estimate of unit-variance pilot quantization noise
    std::vector<VectorXcd> u;           // CN(0, I) for the reverse test channel
  };

  double average(const std::vector<double>& terms) const;

  Scenario scenario_;
  int threads_ = 1;
  std::vector<Trial> trials_;
};

struct SensingResult {
  ROCCurve roc;
  double nu_p = 0.0;
  double p_de = 0.0;
  double p_fa = 0.0;
  double p_sa = 0.0;
  std::vector<double> h0_statistics;
  std::vector<double> h1_statistics;
};

/// Statistic of one block through the scheme's whole sensing path.
double sensing_statistic(Scheme scheme, const Scenario& scenario, const QuantizationPlan& plan,
                         const DetectorSpec& detector, Hypothesis hypothesis, RandomStream& rng,
                         TieBreak tie = TieBreak::H1);

/// Threshold from a held-out H0 set, then P_fa / P_de / ROC on fresh trials.
SensingResult simulate_sensing(Scheme scheme, const Scenario& scenario, const QuantizationPlan& plan,
                               const MonteCarloSpec& mc);

struct SchemeResult {
  Scheme scheme = Scheme::CDCS;
  double rate = 0.0;
  SensingResult sensing;
  double bhattacharyya = 0.0;
  std::vector<double> fronthaul_usage;
  bool feasible = true;
};

/// Fronthaul each AP consumes under the plan, from the Jensen bounds.
std::vector<double> fronthaul_usage(const Scenario& scenario, const QuantizationPlan& plan);

/// Bhattacharyya distance of the scheme's sensing path under the plan.
double scheme_bhattacharyya(const Scenario& scenario, const QuantizationPlan& plan);

/// Rate (cloud decoding: Monte Carlo; edge decoding: the plan's R_1) and sensing.
SchemeResult evaluate_scheme(const Scenario& scenario, const QuantizationPlan& plan, const MonteCarloSpec& mc,
                             const RateEvaluator* rates = nullptr);

}  // namespace pmn

#endif
