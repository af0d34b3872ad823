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

#include <gtest/gtest.h>

#include <cmath>

#include "pmn/optimizer.hpp"

using namespace pmn;

namespace {

MonteCarloSpec rate_mc() {
  MonteCarloSpec mc;
  mc.n_trials_rate = 300;
  mc.master_seed = 5;
  return mc;
}

Scenario make_scenario(int k, double c_bar, double p_t_db = 23) { return Scenario(SystemConfig::defaults(k, p_t_db, c_bar)); }

OptimizerSpec opt(double eps, double b_th) {
  OptimizerSpec o;
  o.epsilon = eps;
  o.b_th = b_th;
  return o;
}

double oracle_bhattacharyya(Scheme s, const Scenario& sc, const QuantizationPlan& p) {
  const DetectorSpec d = build_detector(s, sc, p);
  const MatrixXcd w = d.whitening();
  const MatrixXcd m = w * d.lambda() * w;
  const MatrixXcd eye = MatrixXcd::Identity(m.rows(), m.cols());
  return bhattacharyya_gaussian(eye, eye + m);
}

}  // namespace

TEST(LineSearchGrid, Basics) {
  const auto g = line_search_grid(0.3, 0.1);
  ASSERT_EQ(g.size(), 4u);
  EXPECT_DOUBLE_EQ(g.back(), 0.30000000000000004);
  EXPECT_EQ(line_search_grid(0.0, 0.1).size(), 1u);
  EXPECT_THROW(line_search_grid(1.0, 0.0), Error);
  EXPECT_THROW(opt(0.0, 1.0).validate(), Error);
  EXPECT_THROW(opt(0.1, -1.0).validate(), Error);
}

TEST(NoiseForBudget, Saturates) {
  const Scenario s = make_scenario(1, 4);
  const auto kind = make_rate_bound(RateBoundTag::CdcsPilot, s, 0);
  EXPECT_TRUE(std::isinf(noise_for_budget(kind, 0.0)));
  EXPECT_EQ(noise_for_budget(kind, 1e9), 1e-12);
  const double v = noise_for_budget(kind, 1.0);
  EXPECT_NEAR(rate_bound(kind, v), 1.0, 1e-9);
}

TEST(OptimizeCdcs, MatchesExhaustiveGrid) {
  const Scenario s = make_scenario(3, 4);
  const RateEvaluator r(s, rate_mc());
  const auto spec = opt(0.1, 2.0);
  const auto res = optimize_cdcs(r, spec);
  ASSERT_TRUE(res.feasible);
  double best = -1;
  for (double c_p : line_search_grid(4.0, 0.1)) {
    const auto p = cdcs_plan_for_split(s, c_p);
    if (bhattacharyya_cdcs(s, p.sigma_p_sq) >= spec.b_th) best = std::max(best, r.rate_cdcs(p));
  }
  EXPECT_EQ(res.rate, best);
  EXPECT_EQ(r.rate_cdcs(res.plan), res.rate);
}

TEST(OptimizeCdcs, FeasibleResultSatisfiesConstraints) {
  const Scenario s = make_scenario(3, 4);
  const RateEvaluator r(s, rate_mc());
  const auto res = optimize_cdcs(r, opt(0.1, 3.0));
  ASSERT_TRUE(res.feasible);
  EXPECT_GE(oracle_bhattacharyya(Scheme::CDCS, s, res.plan), 3.0 - 1e-9);
  for (int k = 0; k < 3; ++k) {
    const auto [pilot, data] = res.split_per_ap[k];
    EXPECT_LE(pilot + data, s.config.c_bar[k] + 1e-9);
  }
}

TEST(OptimizeCdcs, ZeroThresholdIsUnconstrained) {
  const Scenario s = make_scenario(2, 3);
  const RateEvaluator r(s, rate_mc());
  const auto res = optimize_cdcs(r, opt(0.1, 0.0));
  double best = -1;
  for (const auto& g : res.grid) {
    EXPECT_TRUE(g.admissible);
    best = std::max(best, g.rate);
  }
  EXPECT_EQ(res.rate, best);
}

TEST(OptimizeCdcs, UnreachableThresholdIsInfeasible) {
  const Scenario s = make_scenario(2, 3);
  const RateEvaluator r(s, rate_mc());
  const double b_full = bhattacharyya_cdcs(s, cdcs_plan_for_split(s, 3.0).sigma_p_sq);
  const auto res = optimize_cdcs(r, opt(0.1, b_full + 0.1));
  EXPECT_FALSE(res.feasible);
  EXPECT_EQ(res.rate, 0.0);
  EXPECT_FALSE(res.reason.empty());
}

TEST(OptimizeCdes, MatchesExhaustiveGridAndAccounting) {
  const Scenario s = make_scenario(3, 4);
  const RateEvaluator r(s, rate_mc());
  const auto res = optimize_cdes(r, opt(0.1, 2.0));
  ASSERT_TRUE(res.feasible);
  double best = -1;
  for (double c_p : line_search_grid(4.0 - 0.1, 0.1)) best = std::max(best, r.rate_cdes(cdes_plan_for_split(s, c_p)));
  EXPECT_EQ(res.rate, best);
  EXPECT_NEAR(res.bhattacharyya, bhattacharyya_edge(s), 1e-12);
  for (int k = 0; k < 3; ++k) {
    const auto [pilot, data] = res.split_per_ap[k];
    EXPECT_NEAR(0.1 + pilot + data, s.config.c_bar[k], 1e-9);
  }
}

TEST(OptimizeCdes, SensingBitExhaustsFronthaul) {
  const RateEvaluator r(make_scenario(2, 0.1), rate_mc());
  const auto res = optimize_cdes(r, opt(0.05, 2.0));
  EXPECT_FALSE(res.feasible);
  EXPECT_EQ(res.reason, "fronthaul exhausted by sensing bit");
  const RateEvaluator tiny(make_scenario(2, 0.1 + 1e-6), rate_mc());
  const auto t = optimize_cdes(tiny, opt(0.05, 2.0));
  EXPECT_LT(t.rate, 1e-3);
}

TEST(OptimizeEdcs, MatchesExhaustiveGrid) {
  const Scenario s = make_scenario(3, 4);
  const RateEvaluator r(s, rate_mc());
  const auto spec = opt(0.1, 2.0);
  const auto res = optimize_edcs(r, spec);
  const int ap = select_best_ap(s);
  const double cap = std::min(4.0, r.rate_edge(ap));
  double best = -1;
  for (double r1 : line_search_grid(cap, 0.1)) {
    if (r1 >= cap) continue;
    const auto p = edcs_plan_for_r1(s, ap, r1);
    if (bhattacharyya_edcs(s, p.sigma_sq) >= spec.b_th) best = std::max(best, r1);
  }
  if (bhattacharyya_edcs(s, edcs_plan_for_r1(s, ap, cap).sigma_sq) >= spec.b_th) best = cap;
  ASSERT_TRUE(res.feasible);
  EXPECT_EQ(res.rate, best);
  EXPECT_GE(oracle_bhattacharyya(Scheme::EDCS, s, res.plan), spec.b_th - 1e-9);
}

TEST(OptimizeEdcs, ZeroThresholdTakesTheCap) {
  const Scenario s = make_scenario(3, 2);
  const RateEvaluator r(s, rate_mc());
  const auto res = optimize_edcs(r, opt(0.1, 0.0));
  EXPECT_EQ(res.rate, std::min(2.0, r.rate_edge(select_best_ap(s))));
}

TEST(OptimizeEdcs, BhattacharyyaNonIncreasingInR1) {
  const Scenario s = make_scenario(3, 4);
  const RateEvaluator r(s, rate_mc());
  const auto res = optimize_edcs(r, opt(0.05, 0.0));
  for (std::size_t i = 1; i < res.grid.size(); ++i) EXPECT_LE(res.grid[i].bhattacharyya, res.grid[i - 1].bhattacharyya);
  EXPECT_LT(res.grid.back().bhattacharyya, res.grid.front().bhattacharyya);
}

TEST(OptimizeEdcs, UnreachableThresholdIsInfeasible) {
  const RateEvaluator r(make_scenario(2, 1), rate_mc());
  const auto res = optimize_edcs(r, opt(0.1, 100.0));
  EXPECT_FALSE(res.feasible);
  EXPECT_EQ(res.rate, 0.0);
}

TEST(OptimizeEdes, ClosedFormExamples) {
  auto c = SystemConfig::defaults(2, 23, 0.6);
  const auto a = edes_closed_form(Scenario(c), 0, 2.0);
  EXPECT_TRUE(a.feasible);
  EXPECT_NEAR(a.rate, 0.5, 1e-12);
  c.c_bar = {1e6, 1e6};
  EXPECT_DOUBLE_EQ(edes_closed_form(Scenario(c), 0, 2.0).rate, 2.0);
  c.c_bar = {1.0, 0.1};
  EXPECT_TRUE(edes_closed_form(Scenario(c), 0, 2.0).feasible);
  c.c_bar = {1.0, 0.09};
  EXPECT_FALSE(edes_closed_form(Scenario(c), 0, 2.0).feasible);
}

TEST(OptimizeEdes, UsesTheBestApDecodeRate) {
  const Scenario s = make_scenario(3, 100);
  const RateEvaluator r(s, rate_mc());
  const auto res = optimize_edes(r, opt(0.1, 2.0));
  EXPECT_EQ(res.plan.decoding_ap, select_best_ap(s));
  EXPECT_DOUBLE_EQ(res.rate, r.rate_edge(res.plan.decoding_ap));
}

TEST(Optimizer, RefiningEpsilonNeverLowersRate) {
  const Scenario s = make_scenario(3, 4);
  const RateEvaluator r(s, rate_mc());
  for (Scheme sch : {Scheme::CDCS, Scheme::CDES, Scheme::EDCS}) {
    const double coarse = optimize(sch, r, opt(0.2, 2.0)).rate;
    const double fine = optimize(sch, r, opt(0.1, 2.0)).rate;
    EXPECT_GE(fine, coarse) << to_string(sch);
  }
}

TEST(Optimizer, PerApGridContainsCommonGrid) {
  auto c = SystemConfig::defaults(2, 23, 3);
  c.c_bar = {3.0, 2.0};
  const Scenario s(c);
  const RateEvaluator r(s, rate_mc());
  auto common = opt(0.5, 1.0);
  auto per_ap = common;
  per_ap.per_ap_grid = true;
  for (Scheme sch : {Scheme::CDCS, Scheme::CDES}) {
    const auto a = optimize(sch, r, common), b = optimize(sch, r, per_ap);
    EXPECT_EQ(b.grid.size(), sch == Scheme::CDCS ? 7u * 5u : 6u * 4u);
    EXPECT_GE(b.rate, a.rate);
  }
  per_ap.epsilon = 1e-4;
  EXPECT_THROW(optimize_cdcs(r, per_ap), Error);
}
