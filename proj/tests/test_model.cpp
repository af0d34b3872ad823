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
#include <numbers>

#include "pmn/model.hpp"

using namespace pmn;

namespace {

constexpr double kPi = std::numbers::pi;

double rel_frobenius(const MatrixXcd& a, const MatrixXcd& b) { return (a - b).norm() / b.norm(); }

MatrixXcd sample_covariance(const std::vector<VectorXcd>& v) {
  MatrixXcd c = MatrixXcd::Zero(v[0].size(), v[0].size());
  for (const auto& x : v) c += x * x.adjoint();
  return c / static_cast<double>(v.size());
}

}  // namespace

TEST(Geometry, AngleOfArrival) {
  EXPECT_NEAR(angle_of_arrival({20, 0}, {20, 50}), 0.0, 1e-15);
  EXPECT_NEAR(angle_of_arrival({20, 0}, {70, 50}), kPi / 4, 1e-15);
  EXPECT_NEAR(angle_of_arrival({70, 0}, {20, 50}), -kPi / 4, 1e-15);
  EXPECT_THROW(angle_of_arrival({1, 2}, {1, 2}), Error);
  try {
    angle_of_arrival({1, 2}, {1, 2});
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateGeometry);
    EXPECT_STREQ(e.what(), "degenerate geometry");
  }
}

TEST(Geometry, SteeringVector) {
  const VectorXcd a0 = steering_vector(0.0, 2);
  EXPECT_NEAR(std::abs(a0(0) - cd(1, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(a0(1) - cd(1, 0)), 0.0, 1e-15);
  const VectorXcd a1 = steering_vector(kPi / 2, 2);
  EXPECT_NEAR(std::abs(a1(1) - cd(-1, 0)), 0.0, 1e-15);
  const VectorXcd a2 = steering_vector(kPi / 6, 3);
  EXPECT_NEAR(std::abs(a2(1) - cd(0, -1)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(a2(2) - cd(-1, 0)), 0.0, 1e-15);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(std::abs(a2(i)), 1.0, 1e-15);
}

TEST(Geometry, ProfilesCarryOmegaG) {
  SystemConfig c = SystemConfig::defaults(2, 23, 1);
  c.ap_positions = {{20, 0}, {0, 50}};
  const auto p = build_profiles(c);
  EXPECT_NEAR(p[0].theta, 0.0, 1e-15);
  EXPECT_NEAR((p[0].omega_g - 0.1 * MatrixXcd::Ones(2, 2)).norm(), 0.0, 1e-14);
  EXPECT_NEAR(p[1].theta, kPi / 2, 1e-15);
  MatrixXcd expect(2, 2);
  expect << 1, -1, -1, 1;
  EXPECT_NEAR((p[1].omega_g - 0.1 * expect).norm(), 0.0, 1e-14);
  for (const auto& prof : p) {
    EXPECT_NEAR(prof.omega_g.trace().real(), 0.2, 1e-14);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(prof.omega_g);
    EXPECT_NEAR(eig.eigenvalues()(0), 0.0, 1e-12);
    EXPECT_NEAR(eig.eigenvalues()(1), 0.2, 1e-12);
  }
}

TEST(Geometry, ProfilesAreDeterministic) {
  const auto c = SystemConfig::defaults(5, 23, 1);
  const auto a = build_profiles(c), b = build_profiles(c);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].theta, b[k].theta);
    EXPECT_TRUE(a[k].omega_g == b[k].omega_g);
  }
}

TEST(Config, DefaultsAndValidation) {
  const auto c = SystemConfig::defaults(3, 23, 4);
  EXPECT_EQ(c.total_uses(), 10);
  EXPECT_EQ(c.t_p, 2);
  EXPECT_NEAR(c.p_p, std::pow(10.0, 2.3), 1e-9);
  EXPECT_NEAR(c.ap_positions[0].x, 100.0 / 6, 1e-12);
  EXPECT_NO_THROW(c.validate());
  auto bad = c;
  bad.sigma_z_sq[1] = 0.0;
  EXPECT_THROW(bad.validate(), Error);
  bad = c;
  bad.p_h1 = 1.5;
  EXPECT_THROW(bad.validate(), Error);
  bad = c;
  bad.c_bar.pop_back();
  EXPECT_THROW(bad.validate(), Error);
}

TEST(Channel, H0HasNoTarget) {
  const Scenario s(SystemConfig::defaults(3, 23, 1));
  RandomStream rng(1);
  const auto ch = sample_channel(s.config, s.profiles, Hypothesis::H0, rng);
  for (int k = 0; k < 3; ++k) {
    EXPECT_EQ(ch.g[k].norm(), 0.0);
    EXPECT_TRUE(ch.h[k] == ch.c[k]);
  }
}

TEST(Channel, SampleCovariances) {
  const Scenario s(SystemConfig::defaults(2, 23, 1));
  RandomStream rng(2);
  std::vector<VectorXcd> h1_0, h0_0, cross;
  MatrixXcd cross_cov = MatrixXcd::Zero(2, 2);
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const auto a = sample_channel(s.config, s.profiles, Hypothesis::H1, rng);
    h1_0.push_back(a.h[0]);
    cross_cov += a.h[0] * a.h[1].adjoint();
    EXPECT_TRUE(a.h[0].isApprox(a.g[0] + a.c[0]));
    h0_0.push_back(sample_channel(s.config, s.profiles, Hypothesis::H0, rng).h[0]);
  }
  const MatrixXcd expect_h1 = s.profiles[0].omega_g + 0.01 * MatrixXcd::Identity(2, 2);
  EXPECT_LT(rel_frobenius(sample_covariance(h1_0), expect_h1), 0.05);
  EXPECT_LT(rel_frobenius(sample_covariance(h0_0), 0.01 * MatrixXcd::Identity(2, 2)), 0.05);
  // independence across APs: cross-covariance is small against the per-AP scale
  EXPECT_LT((cross_cov / n).norm() / expect_h1.norm(), 0.03);
}

TEST(Channel, SeededDeterminism) {
  const Scenario s(SystemConfig::defaults(3, 23, 1));
  RandomStream a(99), b(99);
  const auto x = sample_channel(s.config, s.profiles, Hypothesis::H1, a);
  const auto y = sample_channel(s.config, s.profiles, Hypothesis::H1, b);
  for (int k = 0; k < 3; ++k) EXPECT_TRUE(x.h[k] == y.h[k]);
}

TEST(Block, ZeroNoiseAndPilotEnergy) {
  const Scenario s(SystemConfig::defaults(2, 23, 1));
  RandomStream rng(3);
  const auto ch = sample_channel(s.config, s.profiles, Hypothesis::H1, rng);
  const auto b = sample_block(s.config, ch, rng, {.zero_noise = true});
  for (int k = 0; k < 2; ++k) {
    EXPECT_NEAR((b.y_p[k] - ch.h[k] * b.x_p.transpose()).norm(), 0.0, 1e-14);
    EXPECT_NEAR((b.y_d[k] - ch.h[k] * b.x_d.transpose()).norm(), 0.0, 1e-14);
  }
  for (int i = 0; i < 100; ++i) {
    const auto bb = sample_block(s.config, ch, rng);
    EXPECT_NEAR(bb.x_p.squaredNorm() / s.config.t_p, s.config.p_p, 1e-9 * s.config.p_p);
    EXPECT_NEAR((bb.y_p[0] - ch.h[0] * bb.x_p.transpose() - bb.z_p[0]).norm(), 0.0, 1e-12);
  }
}

TEST(Block, DataPower) {
  const Scenario s(SystemConfig::defaults(1, 23, 1));
  RandomStream rng(4);
  const auto ch = sample_channel(s.config, s.profiles, Hypothesis::H0, rng);
  double acc = 0.0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) acc += sample_block(s.config, ch, rng).x_d.squaredNorm() / s.config.t_d;
  EXPECT_NEAR(acc / n / s.config.p_d, 1.0, 0.02);
}
