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

#include "pmn/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace pmn {

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::Schema, "config " + path + ": " + what);
}

void reject_unknown(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
  if (!obj.is_object()) schema_error(path, "expected an object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key)) schema_error(path + "." + key, "unknown key");
}

double number_at(const json& v, const std::string& path) {
  if (!v.is_number()) schema_error(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) schema_error(path, "expected a finite number");
  return x;
}

long integer_at(const json& v, const std::string& path) {
  if (!v.is_number_integer()) schema_error(path, "expected an integer");
  return v.get<long>();
}

std::string string_at(const json& v, const std::string& path) {
  if (!v.is_string()) schema_error(path, "expected a string");
  return v.get<std::string>();
}

Point2 point_at(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) schema_error(path, "expected [x, y]");
  return {number_at(v[0], path + "[0]"), number_at(v[1], path + "[1]")};
}

// scalar (replicated per AP) or one entry per AP
std::vector<double> per_ap_at(const json& v, const std::string& path, int k, bool allow_array) {
  if (v.is_array()) {
    if (!allow_array) schema_error(path, "must be a scalar when the number of APs is swept");
    if (static_cast<int>(v.size()) != k) schema_error(path, "expected " + std::to_string(k) + " entries (one per AP)");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number_at(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
  }
  return std::vector<double>(static_cast<std::size_t>(k), number_at(v, path));
}

struct KindDefaults {
  int k;
  double c_bar;
  double b_th;
  double p_t_db;
  std::vector<double> sweep;
};

KindDefaults kind_defaults(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Roc: return {7, 10.0, 6.0, 23.0, {10.0}};
    case ExperimentKind::AccuracyVsFronthaul: return {3, 1.0, 2.0, 23.0, {1, 2, 4, 8, 16, 32}};
    case ExperimentKind::AccuracyVsK: return {3, 4.0, 2.0, 23.0, {1, 2, 3, 4, 5, 6, 7}};
    case ExperimentKind::RateVsFronthaul: return {3, 2.0, 2.0, 23.0, {2, 4, 6, 8, 10}};
    case ExperimentKind::RateVsK: return {3, 4.0, 2.0, 23.0, {1, 2, 3, 4, 5, 6, 7}};
    case ExperimentKind::Tradeoff: {
      std::vector<double> b;
      for (int i = 1; i <= 16; ++i) b.push_back(0.5 * i);
      return {3, 2.0, 0.5, 15.0, b};
    }
  }
  return {3, 1.0, 2.0, 23.0, {1.0}};
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::string_view to_string(ExperimentKind kind) noexcept {
  switch (kind) {
    case ExperimentKind::Roc: return "roc";
    case ExperimentKind::AccuracyVsFronthaul: return "accuracy-vs-fronthaul";
    case ExperimentKind::AccuracyVsK: return "accuracy-vs-k";
    case ExperimentKind::RateVsFronthaul: return "rate-vs-fronthaul";
    case ExperimentKind::RateVsK: return "rate-vs-k";
    case ExperimentKind::Tradeoff: return "tradeoff";
  }
  return "?";
}

ExperimentKind parse_experiment_kind(std::string_view name) {
  for (auto k : {ExperimentKind::Roc, ExperimentKind::AccuracyVsFronthaul, ExperimentKind::AccuracyVsK,
                 ExperimentKind::RateVsFronthaul, ExperimentKind::RateVsK, ExperimentKind::Tradeoff})
    if (to_string(k) == name) return k;
  throw Error(ErrorCode::Schema, "unknown experiment kind '" + std::string(name) + "'");
}

SweepAxis sweep_axis(ExperimentKind kind) noexcept {
  switch (kind) {
    case ExperimentKind::AccuracyVsK:
    case ExperimentKind::RateVsK: return SweepAxis::NumAps;
    case ExperimentKind::Tradeoff: return SweepAxis::BhattacharyyaThreshold;
    default: return SweepAxis::FronthaulCapacity;
  }
}

std::string_view sweep_name(SweepAxis axis) noexcept {
  switch (axis) {
    case SweepAxis::FronthaulCapacity: return "C_bar";
    case SweepAxis::NumAps: return "K";
    case SweepAxis::BhattacharyyaThreshold: return "B_th";
  }
  return "?";
}

void ExperimentSpec::validate() const {
  if (sweep.empty()) throw Error(ErrorCode::InvalidArgument, "sweep grid is empty");
  if (schemes.empty()) throw Error(ErrorCode::InvalidArgument, "no schemes selected");
  if (kind == ExperimentKind::Roc && sweep.size() != 1)
    throw Error(ErrorCode::InvalidArgument, "roc takes exactly one fronthaul capacity");
  if (roc_points < 2) throw Error(ErrorCode::InvalidArgument, "roc_points must be >= 2");
  for (double v : sweep) {
    switch (sweep_axis(kind)) {
      case SweepAxis::FronthaulCapacity:
        if (!(v >= 0.0)) throw Error(ErrorCode::InvalidArgument, "fronthaul capacities must be >= 0");
        break;
      case SweepAxis::NumAps:
        if (!(v >= 1.0) || v != std::floor(v)) throw Error(ErrorCode::InvalidArgument, "K values must be integers >= 1");
        break;
      case SweepAxis::BhattacharyyaThreshold:
        if (!(v >= 0.0)) throw Error(ErrorCode::InvalidArgument, "B_th values must be >= 0");
        break;
    }
  }
  if (sweep_axis(kind) == SweepAxis::NumAps && explicit_layout)
    throw Error(ErrorCode::InvalidArgument, "ap_positions cannot be fixed while K is swept");
  mc.validate();
  optimizer.validate();
  base.validate();
}

ExperimentSpec default_spec(ExperimentKind kind) {
  const auto d = kind_defaults(kind);
  ExperimentSpec s;
  s.kind = kind;
  s.sweep = d.sweep;
  s.base = SystemConfig::defaults(d.k, d.p_t_db, d.c_bar);
  s.optimizer.b_th = d.b_th;
  return s;
}

ExperimentSpec parse_config_text(std::string_view json_text, ExperimentKind kind) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Schema, std::string("config: malformed JSON: ") + e.what());
  }
  reject_unknown(doc, "$", {"kind", "schemes", "sweep", "system", "monte_carlo", "optimizer", "roc_points"});
  const auto d = kind_defaults(kind);
  const SweepAxis axis = sweep_axis(kind);
  ExperimentSpec spec = default_spec(kind);

  if (doc.contains("kind") && string_at(doc["kind"], "$.kind") != to_string(kind))
    schema_error("$.kind", "does not match the requested experiment '" + std::string(to_string(kind)) + "'");

  if (doc.contains("schemes")) {
    const auto& v = doc["schemes"];
    if (!v.is_array() || v.empty()) schema_error("$.schemes", "expected a nonempty array");
    spec.schemes.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::string path = "$.schemes[" + std::to_string(i) + "]";
      const std::string name = string_at(v[i], path);
      try {
        spec.schemes.push_back(parse_scheme(name));
      } catch (const Error&) {
        schema_error(path, "unknown scheme '" + name + "'");
      }
    }
  }

  if (doc.contains("sweep")) {
    const auto& v = doc["sweep"];
    if (!v.is_array() || v.empty()) schema_error("$.sweep", "expected a nonempty array");
    spec.sweep.clear();
    for (std::size_t i = 0; i < v.size(); ++i) spec.sweep.push_back(number_at(v[i], "$.sweep[" + std::to_string(i) + "]"));
  }

  if (doc.contains("roc_points")) spec.roc_points = static_cast<int>(integer_at(doc["roc_points"], "$.roc_points"));

  if (doc.contains("monte_carlo")) {
    const auto& m = doc["monte_carlo"];
    reject_unknown(m, "$.monte_carlo", {"trials_detection", "trials_rate", "seed", "target_pfa", "threads", "tie_break"});
    if (m.contains("trials_detection"))
      spec.mc.n_trials_detection = static_cast<int>(integer_at(m["trials_detection"], "$.monte_carlo.trials_detection"));
    if (m.contains("trials_rate"))
      spec.mc.n_trials_rate = static_cast<int>(integer_at(m["trials_rate"], "$.monte_carlo.trials_rate"));
    if (m.contains("seed")) {
      const long seed = integer_at(m["seed"], "$.monte_carlo.seed");
      if (seed < 0) schema_error("$.monte_carlo.seed", "must be >= 0");
      spec.mc.master_seed = static_cast<std::uint64_t>(seed);
    }
    if (m.contains("target_pfa")) spec.mc.target_pfa = number_at(m["target_pfa"], "$.monte_carlo.target_pfa");
    if (m.contains("threads")) spec.mc.threads = static_cast<int>(integer_at(m["threads"], "$.monte_carlo.threads"));
    if (m.contains("tie_break")) {
      const auto t = string_at(m["tie_break"], "$.monte_carlo.tie_break");
      if (t == "H1") spec.mc.tie_break = TieBreak::H1;
      else if (t == "H0") spec.mc.tie_break = TieBreak::H0;
      else schema_error("$.monte_carlo.tie_break", "expected \"H1\" or \"H0\"");
    }
  }

  if (doc.contains("optimizer")) {
    const auto& o = doc["optimizer"];
    reject_unknown(o, "$.optimizer", {"epsilon", "B_th", "per_ap_grid"});
    if (o.contains("per_ap_grid")) {
      if (!o["per_ap_grid"].is_boolean()) schema_error("$.optimizer.per_ap_grid", "expected a boolean");
      spec.optimizer.per_ap_grid = o["per_ap_grid"].get<bool>();
    }
    if (o.contains("epsilon")) spec.optimizer.epsilon = number_at(o["epsilon"], "$.optimizer.epsilon");
    if (o.contains("B_th")) {
      if (axis == SweepAxis::BhattacharyyaThreshold) schema_error("$.optimizer.B_th", "set by the sweep for this experiment");
      spec.optimizer.b_th = number_at(o["B_th"], "$.optimizer.B_th");
    }
  }

  json sys = doc.contains("system") ? doc["system"] : json::object();
  reject_unknown(sys, "$.system",
                 {"K", "N_r", "T", "T_p", "T_d", "P_T_dB", "P_p_dB", "P_d_dB", "sigma_alpha_sq", "sigma_c_sq",
                  "sigma_z_sq", "C_bar", "p_h1", "ap_positions", "target_position", "ue_position"});
  int k = d.k;
  if (sys.contains("K")) {
    if (axis == SweepAxis::NumAps) schema_error("$.system.K", "set by the sweep for this experiment");
    k = static_cast<int>(integer_at(sys["K"], "$.system.K"));
    if (k < 1) schema_error("$.system.K", "must be >= 1");
  }
  double p_t_db = d.p_t_db;
  if (sys.contains("P_T_dB")) p_t_db = number_at(sys["P_T_dB"], "$.system.P_T_dB");
  SystemConfig c = SystemConfig::defaults(k, p_t_db, d.c_bar);
  if (sys.contains("P_p_dB")) c.p_p = db_to_linear(number_at(sys["P_p_dB"], "$.system.P_p_dB"));
  if (sys.contains("P_d_dB")) c.p_d = db_to_linear(number_at(sys["P_d_dB"], "$.system.P_d_dB"));

  if (sys.contains("N_r")) {
    c.n_r = static_cast<int>(integer_at(sys["N_r"], "$.system.N_r"));
    if (c.n_r < 1) schema_error("$.system.N_r", "must be >= 1");
    c.t_p = c.n_r;
  }
  if (sys.contains("T_p")) c.t_p = static_cast<int>(integer_at(sys["T_p"], "$.system.T_p"));
  std::optional<int> total, t_d;
  if (sys.contains("T")) total = static_cast<int>(integer_at(sys["T"], "$.system.T"));
  if (sys.contains("T_d")) t_d = static_cast<int>(integer_at(sys["T_d"], "$.system.T_d"));
  if (total && t_d) {
    if (c.t_p + *t_d != *total) schema_error("$.system.T", "T_p + T_d must equal T");
    c.t_d = *t_d;
  } else if (t_d) {
    c.t_d = *t_d;
  } else {
    c.t_d = total.value_or(10) - c.t_p;
  }
  if (c.t_p < 1) schema_error("$.system.T_p", "must be >= 1");
  if (c.t_d < 1) schema_error("$.system.T", "T must exceed T_p");

  const bool arrays_ok = axis != SweepAxis::NumAps;
  if (sys.contains("sigma_alpha_sq")) c.sigma_alpha_sq = per_ap_at(sys["sigma_alpha_sq"], "$.system.sigma_alpha_sq", k, arrays_ok);
  if (sys.contains("sigma_c_sq")) c.sigma_c_sq = per_ap_at(sys["sigma_c_sq"], "$.system.sigma_c_sq", k, arrays_ok);
  if (sys.contains("sigma_z_sq")) c.sigma_z_sq = per_ap_at(sys["sigma_z_sq"], "$.system.sigma_z_sq", k, arrays_ok);
  if (sys.contains("C_bar")) {
    if (axis == SweepAxis::FronthaulCapacity) schema_error("$.system.C_bar", "set by the sweep for this experiment");
    c.c_bar = per_ap_at(sys["C_bar"], "$.system.C_bar", k, arrays_ok);
  }
  if (sys.contains("p_h1")) c.p_h1 = number_at(sys["p_h1"], "$.system.p_h1");
  if (sys.contains("target_position")) c.target_position = point_at(sys["target_position"], "$.system.target_position");
  if (sys.contains("ue_position")) c.ue_position = point_at(sys["ue_position"], "$.system.ue_position");
  if (sys.contains("ap_positions")) {
    if (axis == SweepAxis::NumAps) schema_error("$.system.ap_positions", "cannot be fixed while K is swept");
    const auto& v = sys["ap_positions"];
    if (!v.is_array() || static_cast<int>(v.size()) != k)
      schema_error("$.system.ap_positions", "expected " + std::to_string(k) + " [x, y] pairs");
    c.ap_positions.clear();
    for (std::size_t i = 0; i < v.size(); ++i)
      c.ap_positions.push_back(point_at(v[i], "$.system.ap_positions[" + std::to_string(i) + "]"));
    spec.explicit_layout = true;
  }
  spec.base = c;

  try {
    spec.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::Schema, std::string("config: ") + e.what());
  }
  return spec;
}

ExperimentSpec parse_config(const std::string& path, ExperimentKind kind) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), kind);
}

SystemConfig config_for_sweep(const ExperimentSpec& spec, double value) {
  SystemConfig c = spec.base;
  switch (sweep_axis(spec.kind)) {
    case SweepAxis::FronthaulCapacity:
      c.c_bar.assign(static_cast<std::size_t>(c.num_aps), value);
      break;
    case SweepAxis::NumAps: {
      const int k = static_cast<int>(std::lround(value));
      const auto n = static_cast<std::size_t>(k);
      c.num_aps = k;
      c.sigma_alpha_sq.assign(n, spec.base.sigma_alpha_sq.front());
      c.sigma_c_sq.assign(n, spec.base.sigma_c_sq.front());
      c.sigma_z_sq.assign(n, spec.base.sigma_z_sq.front());
      c.c_bar.assign(n, spec.base.c_bar.front());
      c.ap_positions = uniform_ap_layout(k);
      break;
    }
    case SweepAxis::BhattacharyyaThreshold:
      break;
  }
  return c;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  ExperimentResult out;
  out.kind = spec.kind;
  const SweepAxis axis = sweep_axis(spec.kind);
  for (double value : spec.sweep) {
    const Scenario scenario(config_for_sweep(spec, value));
    OptimizerSpec opt = spec.optimizer;
    if (axis == SweepAxis::BhattacharyyaThreshold) opt.b_th = value;
    const RateEvaluator rates(scenario, spec.mc);
    for (Scheme scheme : spec.schemes) {
      ResultRow row;
      row.scheme = scheme;
      row.sweep_name = std::string(sweep_name(axis));
      row.sweep_value = value;
      row.optimizer = optimize(scheme, rates, opt);
      const auto sensing = simulate_sensing(scheme, scenario, row.optimizer.plan, spec.mc);
      row.feasible = row.optimizer.feasible;
      row.rate = row.feasible ? row.optimizer.rate : 0.0;
      row.p_de = sensing.p_de;
      row.p_fa = sensing.p_fa;
      row.p_sa = sensing.p_sa;
      row.bhattacharyya = row.optimizer.bhattacharyya;
      row.n_trials = spec.mc.n_trials_detection;
      row.seed = spec.mc.master_seed;
      if (spec.kind == ExperimentKind::Roc) {
        for (int i = 0; i < spec.roc_points; ++i) {
          const double pfa = static_cast<double>(i) / (spec.roc_points - 1);
          out.roc_rows.push_back({scheme, pfa, sensing.roc.detection_at(pfa)});
        }
        out.roc_sensing.push_back(sensing);
      }
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

void write_csv(const ExperimentResult& result, std::ostream& out) {
  if (result.kind == ExperimentKind::Roc) {
    out << "scheme,p_fa,p_de\n";
    for (const auto& r : result.roc_rows)
      out << to_string(r.scheme) << ',' << format_number(r.p_fa) << ',' << format_number(r.p_de) << '\n';
    return;
  }
  out << "scheme,sweep_name,sweep_value,rate_bps_hz,p_de,p_fa,p_sa,bhattacharyya_nats,feasible,n_trials,seed\n";
  for (const auto& r : result.rows)
    out << to_string(r.scheme) << ',' << r.sweep_name << ',' << format_number(r.sweep_value) << ','
        << format_number(r.rate) << ',' << format_number(r.p_de) << ',' << format_number(r.p_fa) << ','
        << format_number(r.p_sa) << ',' << format_number(r.bhattacharyya) << ',' << (r.feasible ? "true" : "false")
        << ',' << r.n_trials << ',' << r.seed << '\n';
}

std::string to_csv(const ExperimentResult& result) {
  std::ostringstream s;
  write_csv(result, s);
  return s.str();
}

void run_experiment_csv(const ExperimentSpec& spec, const std::string& path) {
  const std::string text = to_csv(run_experiment(spec));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write to '" + path + "' failed");
}

}  // namespace pmn
