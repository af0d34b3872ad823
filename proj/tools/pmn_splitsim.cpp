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

// pmn-splitsim <experiment-kind> --config <file.json> --out <file.csv>
//              [--seed N] [--trials N] [--threads N]

#include <cstdint>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "pmn/pmn.h"

namespace {

int fail(pmn_status status, const char* what) {
  std::fprintf(stderr, "pmn-splitsim: %s: %s (%s)\n", what, pmn_last_error(), pmn_status_string(status));
  return status == PMN_ERR_SCHEMA || status == PMN_ERR_IO || status == PMN_ERR_INVALID_ARGUMENT ? 2 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo simulator for cloud/edge functional splits in cell-free perceptive mobile networks"};
  std::string kind, config, out;
  std::uint64_t seed = 0;
  int trials = 0, threads = 0;
  app.add_option("experiment-kind", kind, "Experiment family")
      ->required()
      ->check(CLI::IsMember({"roc", "accuracy-vs-fronthaul", "accuracy-vs-k", "rate-vs-fronthaul", "rate-vs-k",
                             "tradeoff"}));
  app.add_option("--config", config, "JSON experiment configuration")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out, "Output CSV path")->required();
  auto* seed_opt = app.add_option("--seed", seed, "Master seed (overrides the config)");
  auto* trials_opt =
      app.add_option("--trials", trials, "Detection trials per hypothesis (overrides the config)")->check(CLI::PositiveNumber);
  auto* threads_opt = app.add_option("--threads", threads, "Worker threads (overrides the config)")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  pmn_experiment* exp = nullptr;
  pmn_status st = pmn_experiment_from_file(kind.c_str(), config.c_str(), &exp);
  if (st != PMN_OK) return fail(st, "load");
  if (*seed_opt && (st = pmn_experiment_set_seed(exp, seed)) != PMN_OK) return pmn_experiment_free(exp), fail(st, "seed");
  if (*trials_opt && (st = pmn_experiment_set_trials(exp, trials)) != PMN_OK)
    return pmn_experiment_free(exp), fail(st, "trials");
  if (*threads_opt && (st = pmn_experiment_set_threads(exp, threads)) != PMN_OK)
    return pmn_experiment_free(exp), fail(st, "threads");
  st = pmn_experiment_run_csv(exp, out.c_str());
  pmn_experiment_free(exp);
  if (st != PMN_OK) return fail(st, "run");
  return 0;
}
