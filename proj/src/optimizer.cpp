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

#include "pmn/optimizer.hpp"

#include <algorithm>
#include <cmath>

namespace pmn {

namespace {

constexpr double kSlack = 1e-12;

double min_capacity(const SystemConfig& c) { return *std::min_element(c.c_bar.begin(), c.c_bar.end()); }

// keeps the first maximum among admissible points
void pick_best(OptimizerResult& r) {
  int best = -1;
  for (std::size_t i = 0; i < r.grid.size(); ++i) {
    const auto& g = r.grid[i];
    if (g.admissible && (best < 0 || g.rate > r.grid[static_cast<std::size_t>(best)].rate)) best = static_cast<int>(i);
  }
  if (best < 0) return;
  const auto& g = r.grid[static_cast<std::size_t>(best)];
  r.feasible = true;
  r.plan = g.plan;
  r.rate = g.rate;
  r.bhattacharyya = g.bhattacharyya;
}

void fill_split(const Scenario& s, OptimizerResult& r) {
  r.split_per_ap.clear();
  const auto& p = r.plan;
  for (int k = 0; k < s.num_aps(); ++k) {
    switch (p.scheme) {
      case Scheme::CDCS:
        r.split_per_ap.emplace_back(rate_bound(make_rate_bound(RateBoundTag::CdcsPilot, s, k), p.sigma_p_sq[k]),
                                    rate_bound(make_rate_bound(RateBoundTag::CdcsData, s, k), p.sigma_d_sq[k]));
        break;
      case Scheme::CDES:
        r.split_per_ap.emplace_back(rate_bound(make_rate_bound(RateBoundTag::CdesPilot, s, k), p.sigma_p_sq[k]),
                                    rate_bound(make_rate_bound(RateBoundTag::CdesData, s, k), p.sigma_d_sq[k]));
        break;
      case Scheme::EDCS:
        r.split_per_ap.emplace_back(k == p.decoding_ap ? p.r1 : 0.0,
                                    rate_bound(make_rate_bound(RateBoundTag::EdcsEstimate, s, k), p.sigma_sq[k]));
        break;
      case Scheme::EDES:
        r.split_per_ap.emplace_back(k == p.decoding_ap ? p.r1 : 0.0, 0.0);
        break;
    }
  }
}

// Pilot splits to search: one common split, or the cartesian product of
// per-AP grids (odometer order, AP 0 fastest).
std::vector<std::vector<double>> split_candidates(const std::vector<double>& caps, double epsilon, bool per_ap) {
  std::vector<std::vector<double>> out;
  if (!per_ap) {
    const double cap = *std::min_element(caps.begin(), caps.end());
    for (double v : line_search_grid(cap, epsilon)) out.emplace_back(caps.size(), v);
    return out;
  }
  std::vector<std::vector<double>> axes;
  double total = 1.0;
  for (double c : caps) {
    axes.push_back(line_search_grid(c, epsilon));
    total *= static_cast<double>(axes.back().size());
  }
  if (total > kMaxPerApCombinations)
    throw Error(ErrorCode::InvalidArgument, "per-AP grid too large; increase epsilon");
  std::vector<std::size_t> idx(caps.size(), 0);
  for (;;) {
    std::vector<double> v(caps.size());
    for (std::size_t k = 0; k < caps.size(); ++k) v[k] = axes[k][idx[k]];
    out.push_back(std::move(v));
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == axes[k].size()) idx[k++] = 0;
    if (k == idx.size()) break;
  }
  return out;
}

}  // namespace

void OptimizerSpec::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw Error(ErrorCode::InvalidArgument, "epsilon must be > 0");
  if (!(b_th >= 0.0) || !std::isfinite(b_th)) throw Error(ErrorCode::InvalidArgument, "B_th must be >= 0");
}

std::vector<double> line_search_grid(double cap, double epsilon) {
  if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be > 0");
  std::vector<double> grid;
  for (long j = 0;; ++j) {
    const double v = static_cast<double>(j) * epsilon;
    if (v > cap + kSlack) break;
    grid.push_back(v);
  }
  return grid;
}

double noise_for_budget(const RateBoundKind& kind, double budget) {
  if (!(budget > 0.0)) return kNoFronthaul;
  if (budget >= rate_bound(kind, 1e-12)) return 1e-12;
  return invert_rate_bound(kind, budget);
}

QuantizationPlan cdcs_plan_for_split(const Scenario& s, const std::vector<double>& c_p) {
  if (c_p.size() != static_cast<std::size_t>(s.num_aps())) throw Error(ErrorCode::InvalidArgument, "split size != K");
  QuantizationPlan p;
  p.scheme = Scheme::CDCS;
  for (int k = 0; k < s.num_aps(); ++k) {
    const double c_d = std::max(s.config.c_bar[k] - c_p[k], 0.0);
    p.sigma_p_sq.push_back(noise_for_budget(make_rate_bound(RateBoundTag::CdcsPilot, s, k), c_p[k]));
    p.sigma_d_sq.push_back(noise_for_budget(make_rate_bound(RateBoundTag::CdcsData, s, k), c_d));
  }
  return p;
}

QuantizationPlan cdes_plan_for_split(const Scenario& s, const std::vector<double>& c_p) {
  if (c_p.size() != static_cast<std::size_t>(s.num_aps())) throw Error(ErrorCode::InvalidArgument, "split size != K");
  QuantizationPlan p;
  p.scheme = Scheme::CDES;
  const double sensing_bit = 1.0 / s.config.total_uses();
  for (int k = 0; k < s.num_aps(); ++k) {
    const double c_d = std::max(s.config.c_bar[k] - sensing_bit - c_p[k], 0.0);
    p.sigma_p_sq.push_back(noise_for_budget(make_rate_bound(RateBoundTag::CdesPilot, s, k), c_p[k]));
    p.sigma_d_sq.push_back(noise_for_budget(make_rate_bound(RateBoundTag::CdesData, s, k), c_d));
  }
  return p;
}

QuantizationPlan cdcs_plan_for_split(const Scenario& s, double c_p) {
  return cdcs_plan_for_split(s, std::vector<double>(static_cast<std::size_t>(s.num_aps()), c_p));
}

QuantizationPlan cdes_plan_for_split(const Scenario& s, double c_p) {
  return cdes_plan_for_split(s, std::vector<double>(static_cast<std::size_t>(s.num_aps()), c_p));
}

QuantizationPlan edcs_plan_for_r1(const Scenario& s, int decoding_ap, double r1) {
  QuantizationPlan p;
  p.scheme = Scheme::EDCS;
  p.decoding_ap = decoding_ap;
  p.r1 = r1;
  for (int k = 0; k < s.num_aps(); ++k) {
    const double budget = s.config.c_bar[k] - (k == decoding_ap ? r1 : 0.0);
    p.sigma_sq.push_back(noise_for_budget(make_rate_bound(RateBoundTag::EdcsEstimate, s, k), std::max(budget, 0.0)));
  }
  return p;
}

OptimizerResult optimize_cdcs(const RateEvaluator& rates, const OptimizerSpec& spec) {
  spec.validate();
  const Scenario& s = rates.scenario();
  OptimizerResult r;
  for (const auto& c_p : split_candidates(s.config.c_bar, spec.epsilon, spec.per_ap_grid)) {
    GridPoint g;
    g.split = c_p.front();
    g.plan = cdcs_plan_for_split(s, c_p);
    g.bhattacharyya = bhattacharyya_cdcs(s, g.plan.sigma_p_sq);
    g.admissible = g.bhattacharyya >= spec.b_th;
    g.rate = rates.rate_cdcs(g.plan);
    r.grid.push_back(std::move(g));
  }
  pick_best(r);
  if (!r.feasible) {
    r.reason = "Bhattacharyya threshold unreachable";
    r.plan = r.grid.back().plan;
    r.bhattacharyya = r.grid.back().bhattacharyya;
    r.rate = 0.0;
  }
  fill_split(s, r);
  return r;
}

OptimizerResult optimize_cdes(const RateEvaluator& rates, const OptimizerSpec& spec) {
  spec.validate();
  const Scenario& s = rates.scenario();
  const double sensing_bit = 1.0 / s.config.total_uses();
  OptimizerResult r;
  r.bhattacharyya = bhattacharyya_edge(s);
  if (min_capacity(s.config) <= sensing_bit) {
    r.reason = "fronthaul exhausted by sensing bit";
    r.plan.scheme = Scheme::CDES;
    r.plan.sigma_p_sq.assign(static_cast<std::size_t>(s.num_aps()), kNoFronthaul);
    r.plan.sigma_d_sq.assign(static_cast<std::size_t>(s.num_aps()), kNoFronthaul);
    fill_split(s, r);
    return r;
  }
  std::vector<double> caps;
  for (double c : s.config.c_bar) caps.push_back(c - sensing_bit);
  for (const auto& c_p : split_candidates(caps, spec.epsilon, spec.per_ap_grid)) {
    GridPoint g;
    g.split = c_p.front();
    g.plan = cdes_plan_for_split(s, c_p);
    g.bhattacharyya = r.bhattacharyya;
    g.admissible = true;
    g.rate = rates.rate_cdes(g.plan);
    r.grid.push_back(std::move(g));
  }
  pick_best(r);
  fill_split(s, r);
  return r;
}

OptimizerResult optimize_edcs(const RateEvaluator& rates, const OptimizerSpec& spec) {
  spec.validate();
  const Scenario& s = rates.scenario();
  const int ap = select_best_ap(s);
  const double cap = std::min(s.config.c_bar[ap], rates.rate_edge(ap));
  std::vector<double> r1_grid;
  for (double v : line_search_grid(cap, spec.epsilon))
    if (v < cap) r1_grid.push_back(v);
  r1_grid.push_back(cap);

  OptimizerResult r;
  for (double r1 : r1_grid) {
    GridPoint g;
    g.split = r1;
    g.plan = edcs_plan_for_r1(s, ap, r1);
    g.bhattacharyya = bhattacharyya_edcs(s, g.plan.sigma_sq);
    g.admissible = g.bhattacharyya >= spec.b_th;
    g.rate = r1;
    r.grid.push_back(std::move(g));
  }
  pick_best(r);
  if (!r.feasible) {
    r.reason = "Bhattacharyya threshold unreachable";
    r.plan = r.grid.front().plan;
    r.plan.r1 = 0.0;
    r.bhattacharyya = r.grid.front().bhattacharyya;
    r.rate = 0.0;
  }
  fill_split(s, r);
  return r;
}

OptimizerResult edes_closed_form(const Scenario& s, int decoding_ap, double decode_rate) {
  const double sensing_bit = 1.0 / s.config.total_uses();
  OptimizerResult r;
  r.plan.scheme = Scheme::EDES;
  r.plan.decoding_ap = decoding_ap;
  r.bhattacharyya = bhattacharyya_edge(s);
  const bool ok = std::all_of(s.config.c_bar.begin(), s.config.c_bar.end(),
                              [&](double c) { return c >= sensing_bit - kSlack; });
  if (!ok) {
    r.reason = "fronthaul below the sensing bit";
  } else {
    r.feasible = true;
    r.plan.r1 = std::max(std::min(decode_rate, s.config.c_bar[decoding_ap] - sensing_bit), 0.0);
    r.rate = r.plan.r1;
  }
  fill_split(s, r);
  return r;
}

OptimizerResult optimize_edes(const RateEvaluator& rates, const OptimizerSpec& spec) {
  spec.validate();
  const int ap = select_best_ap(rates.scenario());
  return edes_closed_form(rates.scenario(), ap, rates.rate_edge(ap));
}

OptimizerResult optimize(Scheme scheme, const RateEvaluator& rates, const OptimizerSpec& spec) {
  switch (scheme) {
    case Scheme::CDCS: return optimize_cdcs(rates, spec);
    case Scheme::CDES: return optimize_cdes(rates, spec);
    case Scheme::EDCS: return optimize_edcs(rates, spec);
    case Scheme::EDES: return optimize_edes(rates, spec);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown scheme");
}

}  // namespace pmn
