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

/* C interface of the pmn simulator. All functions return a pmn_status; on
 * failure pmn_last_error() gives a message valid until the next call on the
 * same thread. */

#ifndef PMN_PMN_H
#define PMN_PMN_H

#include <stddef.h>
#include <stdint.h>

#if defined(PMN_BUILDING_LIBRARY)
#define PMN_API __attribute__((visibility("default")))
#else
#define PMN_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pmn_status {
  PMN_OK = 0,
  PMN_ERR_INVALID_ARGUMENT = 1,
  PMN_ERR_DEGENERATE_GEOMETRY = 2,
  PMN_ERR_INFEASIBLE = 3,
  PMN_ERR_NUMERIC = 4,
  PMN_ERR_SCHEMA = 5,
  PMN_ERR_IO = 6,
  PMN_ERR_INTERNAL = 7
} pmn_status;

typedef enum pmn_rate_bound_tag {
  PMN_BOUND_CDCS_PILOT = 0,
  PMN_BOUND_CDCS_DATA = 1,
  PMN_BOUND_CDES_PILOT = 2,
  PMN_BOUND_CDES_DATA = 3,
  PMN_BOUND_EDCS_ESTIMATE = 4
} pmn_rate_bound_tag;

typedef struct pmn_experiment pmn_experiment;
typedef struct pmn_scenario pmn_scenario;

PMN_API const char* pmn_version(void);
PMN_API const char* pmn_last_error(void);
PMN_API const char* pmn_status_string(pmn_status status);

/* Experiments. kind is one of roc, accuracy-vs-fronthaul, accuracy-vs-k,
 * rate-vs-fronthaul, rate-vs-k, tradeoff. */
PMN_API pmn_status pmn_experiment_default(const char* kind, pmn_experiment** out);
PMN_API pmn_status pmn_experiment_from_file(const char* kind, const char* path, pmn_experiment** out);
PMN_API pmn_status pmn_experiment_from_json(const char* kind, const char* json_text, pmn_experiment** out);
PMN_API void pmn_experiment_free(pmn_experiment* experiment);

PMN_API pmn_status pmn_experiment_set_seed(pmn_experiment* experiment, uint64_t seed);
/* Detection trials per hypothesis. */
PMN_API pmn_status pmn_experiment_set_trials(pmn_experiment* experiment, int trials);
PMN_API pmn_status pmn_experiment_set_threads(pmn_experiment* experiment, int threads);

PMN_API pmn_status pmn_experiment_run_csv(const pmn_experiment* experiment, const char* out_path);
/* *csv is allocated by the library; release with pmn_string_free. */
PMN_API pmn_status pmn_experiment_run_to_string(const pmn_experiment* experiment, char** csv, size_t* length);
PMN_API void pmn_string_free(char* s);

/* Scenarios with the default parameters and num_aps evenly spread APs. */
PMN_API pmn_status pmn_scenario_default(int num_aps, double p_t_db, double c_bar, pmn_scenario** out);
PMN_API void pmn_scenario_free(pmn_scenario* scenario);
PMN_API int pmn_scenario_num_aps(const pmn_scenario* scenario);

/* Closed forms. Variance arrays hold one entry per AP; INFINITY = nothing sent. */
PMN_API pmn_status pmn_bhattacharyya_cdcs(const pmn_scenario* scenario, const double* sigma_p_sq, size_t n,
                                          double* out);
PMN_API pmn_status pmn_bhattacharyya_edcs(const pmn_scenario* scenario, const double* sigma_sq, size_t n,
                                          double* out);
PMN_API pmn_status pmn_rate_bound(const pmn_scenario* scenario, pmn_rate_bound_tag tag, int ap, double sigma_sq,
                                  double* out);
PMN_API pmn_status pmn_invert_rate_bound(const pmn_scenario* scenario, pmn_rate_bound_tag tag, int ap,
                                         double capacity, double* out);

#ifdef __cplusplus
}
#endif

#endif
