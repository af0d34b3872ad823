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

#ifndef PMN_MODEL_HPP
#define PMN_MODEL_HPP

#include <vector>

#include "pmn/rng.hpp"
#include "pmn/types.hpp"

namespace pmn {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Full scenario description. All powers and variances are linear.
struct SystemConfig {
  int num_aps = 3;
  int n_r = 2;
  int t_p = 2;
  int t_d = 8;
  double p_p = 1.0;
  double p_d = 1.0;
  std::vector<double> sigma_alpha_sq;  // target-gain variance per AP
  std::vector<double> sigma_c_sq;      // clutter variance per AP
  std::vector<double> sigma_z_sq;      // noise variance per AP
  std::vector<double> c_bar;           // fronthaul capacity per AP [bits/s/Hz]
  double p_h1 = 0.5;                   // prior probability of target presence
  std::vector<Point2> ap_positions;
  Point2 target_position{20.0, 50.0};
  Point2 ue_position{50.0, 50.0};

  int total_uses() const { return t_p + t_d; }
  double pilot_energy() const { return p_p * t_p; }
  double block_energy() const { return p_p * t_p + p_d * t_d; }

  /// Throws Error(InvalidArgument) naming the offending field.
  void validate() const;

  /// Numerical-section defaults: N_r = 2, T = 10, T_p = N_r, sigma_alpha^2 = 0.1,
  /// sigma_c^2 = 0.01, sigma_z^2 = 1, P_p = P_d = P_T, equal capacities,
  /// APs evenly spread on x in [0, 100].
  static SystemConfig defaults(int num_aps, double p_t_db, double c_bar);
};

double db_to_linear(double db);

/// K APs at the centres of K equal cells of [x_min, x_max] on the line y.
std::vector<Point2> uniform_ap_layout(int num_aps, double x_min = 0.0, double x_max = 100.0,
                                      double y = 0.0);

struct APProfile {
  double theta = 0.0;
  VectorXcd steering;
  MatrixXcd omega_g;  // sigma_alpha^2 a a^H
};

/// Angle from the +y boresight of an array laid along x; in (-pi, pi].
double angle_of_arrival(Point2 ap, Point2 target);

/// a(theta)_i = exp(-j pi i sin theta), i = 0..n_r-1.
VectorXcd steering_vector(double theta, int n_r);

std::vector<APProfile> build_profiles(const SystemConfig& config);

/// Config plus derived per-AP geometry; what every pipeline consumes.
struct Scenario {
  SystemConfig config;
  std::vector<APProfile> profiles;

  explicit Scenario(SystemConfig cfg);
  int num_aps() const { return config.num_aps; }
  int n_r() const { return config.n_r; }
};

struct ChannelRealization {
  Hypothesis hypothesis = Hypothesis::H0;
  std::vector<VectorXcd> h;  // g + c
  std::vector<VectorXcd> g;  // zero under H0
  std::vector<VectorXcd> c;
  std::vector<cd> alpha;     // zero under H0
};

/// Swerling-I: one alpha_k per block, clutter i.i.d. CN(0, sigma_c^2).
ChannelRealization sample_channel(const SystemConfig& config, const std::vector<APProfile>& profiles,
                                  Hypothesis hypothesis, RandomStream& rng);

struct BlockSignals {
  VectorXcd s_p, x_p;
  VectorXcd s_d, x_d;
  std::vector<MatrixXcd> y_p, y_d;
  std::vector<MatrixXcd> z_p, z_d;
};

struct BlockOptions {
  bool zero_noise = false;  // test hook
};

/// Pilot symbols are Gaussian rescaled to ||s_p||^2 = T_p; data symbols are
/// plain CN(0, 1). Y = h x^T + Z per AP.
BlockSignals sample_block(const SystemConfig& config, const ChannelRealization& channels,
                          RandomStream& rng, BlockOptions options = {});

}  // namespace pmn

#endif
