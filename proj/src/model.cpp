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

#include "pmn/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace pmn {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, "invalid config: " + what);
}

void require_per_ap(const std::vector<double>& v, int k, const char* name, bool allow_zero) {
  require(static_cast<int>(v.size()) == k, std::string(name) + " must have one entry per AP");
  for (double x : v) {
    require(std::isfinite(x), std::string(name) + " must be finite");
    require(allow_zero ? x >= 0.0 : x > 0.0,
            std::string(name) + (allow_zero ? " must be >= 0" : " must be > 0"));
  }
}

}  // namespace

void SystemConfig::validate() const {
  require(num_aps >= 1, "num_aps must be >= 1");
  require(n_r >= 1, "n_r must be >= 1");
  require(t_p >= 1, "t_p must be >= 1");
  require(t_d >= 1, "t_d must be >= 1");
  require(p_p > 0.0 && std::isfinite(p_p), "p_p must be > 0");
  require(p_d > 0.0 && std::isfinite(p_d), "p_d must be > 0");
  require_per_ap(sigma_alpha_sq, num_aps, "sigma_alpha_sq", true);
  require_per_ap(sigma_c_sq, num_aps, "sigma_c_sq", false);
  require_per_ap(sigma_z_sq, num_aps, "sigma_z_sq", false);
  require_per_ap(c_bar, num_aps, "c_bar", true);
  require(p_h1 >= 0.0 && p_h1 <= 1.0, "p_h1 must lie in [0, 1]");
  require(static_cast<int>(ap_positions.size()) == num_aps,
          "ap_positions must have one entry per AP");
}

SystemConfig SystemConfig::defaults(int num_aps, double p_t_db, double c_bar_value) {
  SystemConfig c;
  c.num_aps = num_aps;
  c.n_r = 2;
  c.t_p = c.n_r;
  c.t_d = 10 - c.t_p;
  c.p_p = c.p_d = db_to_linear(p_t_db);
  const auto k = static_cast<std::size_t>(num_aps);
  c.sigma_alpha_sq.assign(k, 0.1);
  c.sigma_c_sq.assign(k, 0.01);
  c.sigma_z_sq.assign(k, 1.0);
  c.c_bar.assign(k, c_bar_value);
  c.p_h1 = 0.5;
  c.ap_positions = uniform_ap_layout(num_aps);
  return c;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

std::vector<Point2> uniform_ap_layout(int num_aps, double x_min, double x_max, double y) {
  std::vector<Point2> out;
  out.reserve(static_cast<std::size_t>(std::max(num_aps, 0)));
  for (int k = 0; k < num_aps; ++k)
    out.push_back({x_min + (x_max - x_min) * (2.0 * k + 1.0) / (2.0 * num_aps), y});
  return out;
}

double angle_of_arrival(Point2 ap, Point2 target) {
  const double dx = target.x - ap.x;
  const double dy = target.y - ap.y;
  if (dx == 0.0 && dy == 0.0) throw Error(ErrorCode::DegenerateGeometry, "degenerate geometry");
  return std::atan2(dx, dy);
}

VectorXcd steering_vector(double theta, int n_r) {
  VectorXcd a(n_r);
  const double phase = -std::numbers::pi * std::sin(theta);
  for (int i = 0; i < n_r; ++i) a(i) = std::polar(1.0, phase * i);
  return a;
}

std::vector<APProfile> build_profiles(const SystemConfig& config) {
  std::vector<APProfile> out;
  out.reserve(static_cast<std::size_t>(config.num_aps));
  for (int k = 0; k < config.num_aps; ++k) {
    APProfile p;
    p.theta = angle_of_arrival(config.ap_positions[k], config.target_position);
    p.steering = steering_vector(p.theta, config.n_r);
    p.omega_g = config.sigma_alpha_sq[k] * p.steering * p.steering.adjoint();
    out.push_back(std::move(p));
  }
  return out;
}

Scenario::Scenario(SystemConfig cfg) : config(std::move(cfg)) {
  config.validate();
  profiles = build_profiles(config);
}

ChannelRealization sample_channel(const SystemConfig& config, const std::vector<APProfile>& profiles,
                                  Hypothesis hypothesis, RandomStream& rng) {
  ChannelRealization out;
  out.hypothesis = hypothesis;
  const auto k_count = static_cast<std::size_t>(config.num_aps);
  out.h.resize(k_count);
  out.g.resize(k_count);
  out.c.resize(k_count);
  out.alpha.assign(k_count, cd{0.0, 0.0});
  for (std::size_t k = 0; k < k_count; ++k) {
    out.c[k] = rng.complex_normal_vector(config.n_r, config.sigma_c_sq[k]);
    if (hypothesis == Hypothesis::H1) {
      out.alpha[k] = rng.complex_normal(config.sigma_alpha_sq[k]);
      out.g[k] = out.alpha[k] * profiles[k].steering;
    } else {
      out.g[k] = VectorXcd::Zero(config.n_r);
    }
    out.h[k] = out.g[k] + out.c[k];
  }
  return out;
}

BlockSignals sample_block(const SystemConfig& config, const ChannelRealization& channels,
                          RandomStream& rng, BlockOptions options) {
  BlockSignals b;
  b.s_p = rng.complex_normal_vector(config.t_p, 1.0);
  b.s_p *= std::sqrt(static_cast<double>(config.t_p)) / b.s_p.norm();
  b.x_p = std::sqrt(config.p_p) * b.s_p;
  b.s_d = rng.complex_normal_vector(config.t_d, 1.0);
  b.x_d = std::sqrt(config.p_d) * b.s_d;

  const auto k_count = static_cast<std::size_t>(config.num_aps);
  b.y_p.resize(k_count);
  b.y_d.resize(k_count);
  b.z_p.resize(k_count);
  b.z_d.resize(k_count);
  for (std::size_t k = 0; k < k_count; ++k) {
    b.z_p[k] = rng.complex_normal_matrix(config.n_r, config.t_p, config.sigma_z_sq[k]);
    b.z_d[k] = rng.complex_normal_matrix(config.n_r, config.t_d, config.sigma_z_sq[k]);
    if (options.zero_noise) {
      b.z_p[k].setZero();
      b.z_d[k].setZero();
    }
    b.y_p[k] = channels.h[k] * b.x_p.transpose() + b.z_p[k];
    b.y_d[k] = channels.h[k] * b.x_d.transpose() + b.z_d[k];
  }
  return b;
}

}  // namespace pmn
