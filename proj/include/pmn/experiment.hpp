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

#ifndef PMN_EXPERIMENT_HPP
#define PMN_EXPERIMENT_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pmn/model.hpp"
#include "pmn/optimizer.hpp"
#include "pmn/schemes.hpp"

namespace pmn {

enum class ExperimentKind { Roc, AccuracyVsFronthaul, AccuracyVsK, RateVsFronthaul, RateVsK, Tradeoff };

std::string_view to_string(ExperimentKind kind) noexcept;
ExperimentKind parse_experiment_kind(std::string_view name);  // throws Error(Schema)

enum class SweepAxis { FronthaulCapacity, NumAps, BhattacharyyaThreshold };

SweepAxis sweep_axis(ExperimentKind kind) noexcept;
std::string_view sweep_name(SweepAxis axis) noexcept;  // "C_bar", "K", "B_th"

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::Roc;
  std::vector<double> sweep;
  std::vector<Scheme> schemes{Scheme::CDCS, Scheme::CDES, Scheme::EDCS, Scheme::EDES};
  SystemConfig base;          // per-AP vectors sized for base.num_aps
  bool explicit_layout = false;  // ap_positions given by the user
  MonteCarloSpec mc;
  OptimizerSpec optimizer;
  int roc_points = 201;

  void validate() const;
};

/// Defaults for each experiment family (K, C_bar, B_th, P_T and sweep grid).
ExperimentSpec default_spec(ExperimentKind kind);

/// JSON text / file to spec. Unknown keys and type errors are reported with
/// their JSON path as Error(Schema); a missing file is Error(Io).
ExperimentSpec parse_config_text(std::string_view json_text, ExperimentKind kind);
ExperimentSpec parse_config(const std::string& path, ExperimentKind kind);

/// Scenario for one sweep value.
SystemConfig config_for_sweep(const ExperimentSpec& spec, double value);

struct ResultRow {
  Scheme scheme = Scheme::CDCS;
  std::string sweep_name;
  double sweep_value = 0.0;
  double rate = 0.0;
  double p_de = 0.0;
  double p_fa = 0.0;
  double p_sa = 0.0;
  double bhattacharyya = 0.0;
  bool feasible = false;
  int n_trials = 0;
  std::uint64_t seed = 0;
  OptimizerResult optimizer;  // not written to CSV
};

struct RocRow {
  Scheme scheme = Scheme::CDCS;
  double p_fa = 0.0;
  double p_de = 0.0;
};

struct ExperimentResult {
  ExperimentKind kind = ExperimentKind::Roc;
  std::vector<ResultRow> rows;
  std::vector<RocRow> roc_rows;
  std::vector<SensingResult> roc_sensing;  // one per scheme (roc only)
};

ExperimentResult run_experiment(const ExperimentSpec& spec);

void write_csv(const ExperimentResult& result, std::ostream& out);
std::string to_csv(const ExperimentResult& result);

/// Runs and writes the CSV to path (Error(Io) on failure).
void run_experiment_csv(const ExperimentSpec& spec, const std::string& path);

}  // namespace pmn

#endif
