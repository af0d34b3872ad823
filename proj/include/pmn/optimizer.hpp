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

#ifndef PMN_OPTIMIZER_HPP
#define PMN_OPTIMIZER_HPP

#include <string>
#include <utility>
#include <vector>

#include "pmn/schemes.hpp"

namespace pmn {

struct OptimizerSpec {
  double epsilon = 0.05;  // line-search step [bits/s/Hz]
  double b_th = 2.0;      // Bhattacharyya threshold [nats]
  /// CDCS/CDES: search every AP's pilot split independently instead of one
  /// common split. Cost is (grid size)^K rate evaluations.
  bool per_ap_grid = false;

  void validate() const;
};

struct GridPoint {
  double split = 0.0;  // C_p (AP 0 under per-AP grids) or R_1 (EDCS)
  QuantizationPlan plan;
  double rate = 0.0;
  double bhattacharyya = 0.0;
  bool admissible = false;
};

struct OptimizerResult {
  QuantizationPlan plan;
  double rate = 0.0;
  double bhattacharyya = 0.0;
  std::vector<std::pair<double, double>> split_per_ap;  // (pilot, data) or (R_1, estimate) bits
  bool feasible = false;
  std::string reason;
  std::vector<GridPoint> grid;
};

/// {j * epsilon : j >= 0, j * epsilon <= cap}.
std::vector<double> line_search_grid(double cap, double epsilon);

/// Inverse Jensen bound that saturates at the bracket instead of throwing:
/// budgets beyond what the bound can express map to the smallest variance.
double noise_for_budget(const RateBoundKind& kind, double budget);

QuantizationPlan cdcs_plan_for_split(const Scenario& scenario, double c_p);
QuantizationPlan cdes_plan_for_split(const Scenario& scenario, double c_p);
QuantizationPlan cdcs_plan_for_split(const Scenario& scenario, const std::vector<double>& c_p);
QuantizationPlan cdes_plan_for_split(const Scenario& scenario, const std::vector<double>& c_p);

/// Limit on the number of per-AP grid combinations.
inline constexpr double kMaxPerApCombinations = 1e6;
QuantizationPlan edcs_plan_for_r1(const Scenario& scenario, int decoding_ap, double r1);

OptimizerResult optimize_cdcs(const RateEvaluator& rates, const OptimizerSpec& spec);
OptimizerResult optimize_cdes(const RateEvaluator& rates, const OptimizerSpec& spec);
OptimizerResult optimize_edcs(const RateEvaluator& rates, const OptimizerSpec& spec);
OptimizerResult optimize_edes(const RateEvaluator& rates, const OptimizerSpec& spec);

/// EDES from a known decode rate: min(decode_rate, C_bar_1 - 1/T).
OptimizerResult edes_closed_form(const Scenario& scenario, int decoding_ap, double decode_rate);

OptimizerResult optimize(Scheme scheme, const RateEvaluator& rates, const OptimizerSpec& spec);

}  // namespace pmn

#endif
