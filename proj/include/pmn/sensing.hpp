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

#ifndef PMN_SENSING_HPP
#define PMN_SENSING_HPP

#include <span>
#include <utility>
#include <vector>

#include "pmn/model.hpp"
#include "pmn/plan.hpp"

namespace pmn {

/// One AP's share of a quadratic detector. The observation of the AP is
/// `repeats` stacked N_r-vectors (pilot columns, or one estimate), each
/// whitened by the scalar d.
struct DetectorBlock {
  double d = 0.0;
  MatrixXcd lambda;  // N_r x N_r signal covariance
  MatrixXcd t;       // d^2 Lambda (d^2 Lambda + I)^-1
  int repeats = 1;
};

struct DetectorSpec {
  Scheme scheme = Scheme::CDCS;
  std::vector<DetectorBlock> blocks;
  double nu_p = 0.0;

  int dim() const;
  MatrixXcd whitening() const;  // D
  MatrixXcd lambda() const;     // Lambda
  MatrixXcd test_matrix() const;  // T
};

DetectorSpec build_detector(Scheme scheme, const Scenario& scenario, const QuantizationPlan& plan);

/// r^H T r for an already whitened stacked vector r.
double quadratic_statistic(const DetectorSpec& spec, const VectorXcd& r);

/// Statistic of AP k from its raw observation: an N_r x repeats matrix
/// (received pilots) or an N_r-vector (channel estimate). Whitening applied here.
double block_statistic(const DetectorSpec& spec, int ap, const MatrixXcd& observation);

/// Empirical (1 - target_pfa) quantile, "higher" convention.
double calibrate_threshold(std::span<const double> h0_statistics, double target_pfa);

/// Which side wins when exactly half of the APs vote H0.
enum class TieBreak { H1, H0 };

struct FusionResult {
  Hypothesis decision = Hypothesis::H0;
  int n_r = 0;  // number of H0 votes
};

FusionResult majority_fuse(std::span<const Hypothesis> votes, TieBreak tie = TieBreak::H1);

/// Scalar whose exceedance of nu equals the fused majority decision when each
/// AP votes H1 iff its statistic exceeds nu: the m-th largest statistic, with m
/// the number of H1 votes the rule needs.
double fused_edge_statistic(std::span<const double> per_ap, TieBreak tie = TieBreak::H1);

struct ROCCurve {
  std::vector<std::pair<double, double>> points;  // (P_fa, P_de), ascending
  std::size_t n_h0 = 0;
  std::size_t n_h1 = 0;

  /// Best P_de at false-alarm rate pfa, interpolating linearly between
  /// operating points.
  double detection_at(double pfa) const;
};

ROCCurve roc_curve(std::span<const double> h0_stats, std::span<const double> h1_stats);

double sensing_accuracy(double p_de, double p_fa);

/// Natural-log Bhattacharyya distance between CN(0, s1) and CN(0, s2).
double bhattacharyya_gaussian(const MatrixXcd& s1, const MatrixXcd& s2);

/// Received-pilot detection at the CPU (per AP sigma_p^2, +inf = nothing sent).
double bhattacharyya_cdcs(const Scenario& scenario, std::span<const double> sigma_p_sq);

/// Forwarded refined estimates (per AP sigma^2, +inf = nothing sent).
double bhattacharyya_edcs(const Scenario& scenario, std::span<const double> sigma_sq);

/// Each AP on its own unquantized pilots, summed over APs.
double bhattacharyya_edge(const Scenario& scenario);

/// Whitening gain of the forwarded estimate, PT / (PT (sigma_c^2 + sigma^2) + sigma_z^2).
double edcs_lambda(const Scenario& scenario, int ap, double sigma_sq);

}  // namespace pmn

#endif
