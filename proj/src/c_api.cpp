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

#include "pmn/pmn.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <span>
#include <string>

#include "pmn/experiment.hpp"
#include "pmn/fronthaul.hpp"
#include "pmn/sensing.hpp"

struct pmn_experiment {
  pmn::ExperimentSpec spec;
};

struct pmn_scenario {
  explicit pmn_scenario(pmn::SystemConfig c) : scenario(std::move(c)) {}
  pmn::Scenario scenario;
};

namespace {

thread_local std::string last_error;

pmn_status to_status(pmn::ErrorCode code) {
  switch (code) {
    case pmn::ErrorCode::InvalidArgument: return PMN_ERR_INVALID_ARGUMENT;
    case pmn::ErrorCode::DegenerateGeometry: return PMN_ERR_DEGENERATE_GEOMETRY;
    case pmn::ErrorCode::Infeasible: return PMN_ERR_INFEASIBLE;
    case pmn::ErrorCode::Numeric: return PMN_ERR_NUMERIC;
    case pmn::ErrorCode::Schema: return PMN_ERR_SCHEMA;
    case pmn::ErrorCode::Io: return PMN_ERR_IO;
  }
  return PMN_ERR_INTERNAL;
}

template <class F>
pmn_status guarded(F&& f) {
  try {
    last_error.clear();
    f();
    return PMN_OK;
  } catch (const pmn::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown error";
  }
  return PMN_ERR_INTERNAL;
}

void require(bool ok, const char* what) {
  if (!ok) throw pmn::Error(pmn::ErrorCode::InvalidArgument, what);
}

pmn::RateBoundTag to_tag(pmn_rate_bound_tag tag) {
  switch (tag) {
    case PMN_BOUND_CDCS_PILOT: return pmn::RateBoundTag::CdcsPilot;
    case PMN_BOUND_CDCS_DATA: return pmn::RateBoundTag::CdcsData;
    case PMN_BOUND_CDES_PILOT: return pmn::RateBoundTag::CdesPilot;
    case PMN_BOUND_CDES_DATA: return pmn::RateBoundTag::CdesData;
    case PMN_BOUND_EDCS_ESTIMATE: return pmn::RateBoundTag::EdcsEstimate;
  }
  throw pmn::Error(pmn::ErrorCode::InvalidArgument, "unknown rate bound tag");
}

void check_ap(const pmn_scenario* s, int ap) {
  require(s != nullptr, "null scenario");
  require(ap >= 0 && ap < s->scenario.num_aps(), "AP index out of range");
}

}  // namespace

extern "C" {

const char* pmn_version(void) { return "0.1.0"; }

const char* pmn_last_error(void) { return last_error.c_str(); }

const char* pmn_status_string(pmn_status status) {
  switch (status) {
    case PMN_OK: return "ok";
    case PMN_ERR_INVALID_ARGUMENT: return "invalid argument";
    case PMN_ERR_DEGENERATE_GEOMETRY: return "degenerate geometry";
    case PMN_ERR_INFEASIBLE: return "infeasible";
    case PMN_ERR_NUMERIC: return "numeric failure";
    case PMN_ERR_SCHEMA: return "schema violation";
    case PMN_ERR_IO: return "i/o error";
    case PMN_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

pmn_status pmn_experiment_default(const char* kind, pmn_experiment** out) {
  return guarded([&] {
    require(kind != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    auto e = std::make_unique<pmn_experiment>();
    e->spec = pmn::default_spec(pmn::parse_experiment_kind(kind));
    *out = e.release();
  });
}

pmn_status pmn_experiment_from_file(const char* kind, const char* path, pmn_experiment** out) {
  return guarded([&] {
    require(kind != nullptr && path != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    auto e = std::make_unique<pmn_experiment>();
    e->spec = pmn::parse_config(path, pmn::parse_experiment_kind(kind));
    *out = e.release();
  });
}

pmn_status pmn_experiment_from_json(const char* kind, const char* json_text, pmn_experiment** out) {
  return guarded([&] {
    require(kind != nullptr && json_text != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    auto e = std::make_unique<pmn_experiment>();
    e->spec = pmn::parse_config_text(json_text, pmn::parse_experiment_kind(kind));
    *out = e.release();
  });
}

void pmn_experiment_free(pmn_experiment* experiment) { delete experiment; }

pmn_status pmn_experiment_set_seed(pmn_experiment* experiment, uint64_t seed) {
  return guarded([&] {
    require(experiment != nullptr, "null experiment");
    experiment->spec.mc.master_seed = seed;
  });
}

pmn_status pmn_experiment_set_trials(pmn_experiment* experiment, int trials) {
  return guarded([&] {
    require(experiment != nullptr, "null experiment");
    require(trials >= 1, "trials must be >= 1");
    experiment->spec.mc.n_trials_detection = trials;
  });
}

pmn_status pmn_experiment_set_threads(pmn_experiment* experiment, int threads) {
  return guarded([&] {
    require(experiment != nullptr, "null experiment");
    require(threads >= 1, "threads must be >= 1");
    experiment->spec.mc.threads = threads;
  });
}

pmn_status pmn_experiment_run_csv(const pmn_experiment* experiment, const char* out_path) {
  return guarded([&] {
    require(experiment != nullptr && out_path != nullptr, "null argument");
    pmn::run_experiment_csv(experiment->spec, out_path);
  });
}

pmn_status pmn_experiment_run_to_string(const pmn_experiment* experiment, char** csv, size_t* length) {
  return guarded([&] {
    require(experiment != nullptr && csv != nullptr, "null argument");
    *csv = nullptr;
    const std::string text = pmn::to_csv(pmn::run_experiment(experiment->spec));
    char* buf = static_cast<char*>(std::malloc(text.size() + 1));
    if (buf == nullptr) throw std::bad_alloc();
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *csv = buf;
    if (length != nullptr) *length = text.size();
  });
}

void pmn_string_free(char* s) { std::free(s); }

pmn_status pmn_scenario_default(int num_aps, double p_t_db, double c_bar, pmn_scenario** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = nullptr;
    require(num_aps >= 1, "num_aps must be >= 1");
    *out = new pmn_scenario(pmn::SystemConfig::defaults(num_aps, p_t_db, c_bar));
  });
}

void pmn_scenario_free(pmn_scenario* scenario) { delete scenario; }

int pmn_scenario_num_aps(const pmn_scenario* scenario) { return scenario ? scenario->scenario.num_aps() : 0; }

pmn_status pmn_bhattacharyya_cdcs(const pmn_scenario* scenario, const double* sigma_p_sq, size_t n, double* out) {
  return guarded([&] {
    require(scenario != nullptr && sigma_p_sq != nullptr && out != nullptr, "null argument");
    *out = pmn::bhattacharyya_cdcs(scenario->scenario, std::span<const double>(sigma_p_sq, n));
  });
}

pmn_status pmn_bhattacharyya_edcs(const pmn_scenario* scenario, const double* sigma_sq, size_t n, double* out) {
  return guarded([&] {
    require(scenario != nullptr && sigma_sq != nullptr && out != nullptr, "null argument");
    *out = pmn::bhattacharyya_edcs(scenario->scenario, std::span<const double>(sigma_sq, n));
  });
}

pmn_status pmn_rate_bound(const pmn_scenario* scenario, pmn_rate_bound_tag tag, int ap, double sigma_sq, double* out) {
  return guarded([&] {
    check_ap(scenario, ap);
    require(out != nullptr, "null argument");
    *out = pmn::rate_bound(pmn::make_rate_bound(to_tag(tag), scenario->scenario, ap), sigma_sq);
  });
}

pmn_status pmn_invert_rate_bound(const pmn_scenario* scenario, pmn_rate_bound_tag tag, int ap, double capacity,
                                 double* out) {
  return guarded([&] {
    check_ap(scenario, ap);
    require(out != nullptr, "null argument");
    *out = pmn::invert_rate_bound(pmn::make_rate_bound(to_tag(tag), scenario->scenario, ap), capacity);
  });
}

}  // extern "C"
