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
#include <random>

#include "pmn/linalg.hpp"
#include "pmn/sensing.hpp"

using namespace pmn;

namespace {

Scenario single_ap(double p = 200.0) {
  auto c = SystemConfig::defaults(1, 23, 10);
  c.p_p = c.p_d = p;
  c.ap_positions = {{20, 0}};
  return Scenario(c);
}

// whitened H0/H1 covariances of the full observation
std::pair<MatrixXcd, MatrixXcd> whitened_pair(const DetectorSpec& d) {
  const MatrixXcd w = d.whitening();
  const MatrixXcd m = w * d.lambda() * w;
  const MatrixXcd eye = MatrixXcd::Identity(m.rows(), m.cols());
  return {eye, eye + m};
}

Scenario random_scenario(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int k = 1 + static_cast<int>(gen() % 4);
  auto c = SystemConfig::defaults(k, 10 + 20 * u(gen), 4);
  c.n_r = 1 + static_cast<int>(gen() % 3);
  c.t_p = 1 + static_cast<int>(gen() % 3);
  c.t_d = 1 + static_cast<int>(gen() % 8);
  for (int i = 0; i < k; ++i) {
    c.sigma_alpha_sq[i] = 0.01 + 0.5 * u(gen);
    c.sigma_c_sq[i] = 0.001 + 0.05 * u(gen);
    c.sigma_z_sq[i] = 0.2 + 2 * u(gen);
    c.ap_positions[i] = {100 * u(gen), -10 * u(gen)};
  }
  return Scenario(c);
}

}  // namespace

TEST(Detector, CdcsWhiteningExample) {
  const Scenario s = single_ap();
  const auto d = build_detector(Scheme::CDCS, s, QuantizationPlan::lossless(Scheme::CDCS, 1));
  EXPECT_NEAR(d.blocks[0].d, 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_EQ(d.blocks[0].repeats, 2);
  EXPECT_EQ(d.dim(), 4);
  EXPECT_NEAR((d.whitening() - MatrixXcd::Identity(4, 4) / std::sqrt(3.0)).norm(), 0.0, 1e-14);
}

TEST(Detector, EdcsWhiteningExample) {
  const Scenario s = single_ap();
  const auto d = build_detector(Scheme::EDCS, s, QuantizationPlan::lossless(Scheme::EDCS, 1));
  EXPECT_NEAR(d.blocks[0].d, std::sqrt(2000.0 / 21.0), 1e-12);
  EXPECT_EQ(d.dim(), 2);
}

TEST(Detector, NoTargetPowerGivesZeroTest) {
  auto c = SystemConfig::defaults(2, 23, 10);
  c.sigma_alpha_sq = {0.0, 0.0};
  const Scenario s(c);
  for (Scheme sch : kAllSchemes) {
    const auto d = build_detector(sch, s, QuantizationPlan::lossless(sch, 2));
    EXPECT_EQ(d.test_matrix().norm(), 0.0);
  }
}

TEST(Detector, TestMatrixEigenvaluesInUnitInterval) {
  const Scenario s(SystemConfig::defaults(3, 23, 10));
  const auto d = build_detector(Scheme::CDCS, s, QuantizationPlan::lossless(Scheme::CDCS, 3));
  const MatrixXcd t = d.test_matrix();
  EXPECT_NEAR((t - t.adjoint()).norm(), 0.0, 1e-12);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(t);
  EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-12);
  EXPECT_LT(eig.eigenvalues().maxCoeff(), 1.0);
}

TEST(QuadraticStatistic, Examples) {
  DetectorSpec d;
  DetectorBlock b;
  b.d = 1.0;
  b.lambda = MatrixXcd::Ones(1, 1);
  b.t = MatrixXcd::Constant(1, 1, 0.5);
  d.blocks.push_back(b);
  EXPECT_DOUBLE_EQ(quadratic_statistic(d, VectorXcd::Zero(1)), 0.0);
  EXPECT_DOUBLE_EQ(quadratic_statistic(d, VectorXcd::Constant(1, 2.0)), 2.0);
  EXPECT_THROW(quadratic_statistic(d, VectorXcd::Zero(2)), Error);
}

TEST(QuadraticStatistic, AlgebraicIdentityAndBlockForm) {
  const Scenario s(SystemConfig::defaults(3, 23, 10));
  auto plan = QuantizationPlan::lossless(Scheme::CDCS, 3);
  plan.sigma_p_sq = {0.5, 2.0, 7.0};
  const auto d = build_detector(Scheme::CDCS, s, plan);
  const MatrixXcd w = d.whitening();
  const MatrixXcd m = w * d.lambda() * w;
  const MatrixXcd inv = (m + MatrixXcd::Identity(m.rows(), m.cols())).inverse();
  RandomStream rng(1);
  for (int i = 0; i < 100; ++i) {
    std::vector<MatrixXcd> obs;
    VectorXcd raw(d.dim());
    for (int k = 0; k < 3; ++k) {
      obs.push_back(rng.complex_normal_matrix(2, 2, 3.0));
      raw.segment(4 * k, 4) = Eigen::Map<const VectorXcd>(obs.back().data(), 4);
    }
    const VectorXcd r = w * raw;
    const double q = quadratic_statistic(d, r);
    EXPECT_NEAR(q, std::real(r.dot(r) - r.dot(inv * r)), 1e-9);
    double by_block = 0.0;
    for (int k = 0; k < 3; ++k) by_block += block_statistic(d, k, obs[k]);
    EXPECT_NEAR(q, by_block, 1e-9 * (1 + q));
  }
}

TEST(QuadraticStatistic, RankEquivalentToExactLlr) {
  const Scenario s(SystemConfig::defaults(2, 23, 10));
  const auto d = build_detector(Scheme::CDCS, s, QuantizationPlan::lossless(Scheme::CDCS, 2));
  const auto [s0, s1] = whitened_pair(d);
  const MatrixXcd p0 = s0.inverse(), p1 = s1.inverse();
  const double offset = logdet_hpd(s0) - logdet_hpd(s1);
  RandomStream rng(2);
  std::vector<double> q, llr;
  for (int i = 0; i < 1000; ++i) {
    const VectorXcd r = rng.complex_normal_vector(d.dim(), i % 2 ? 1.0 : 3.0);
    q.push_back(quadratic_statistic(d, r));
    llr.push_back(std::real(r.dot(p0 * r) - r.dot(p1 * r)) + offset);
  }
  EXPECT_DOUBLE_EQ(spearman(q, llr), 1.0);
}

TEST(Threshold, HigherQuantile) {
  const std::vector<double> v{4, 1, 3, 2};
  EXPECT_DOUBLE_EQ(calibrate_threshold(v, 0.5), 3.0);
  EXPECT_DOUBLE_EQ(calibrate_threshold(v, 1e-9), 4.0);
  const std::vector<double> same(10, 2.5);
  EXPECT_DOUBLE_EQ(calibrate_threshold(same, 0.3), 2.5);
  EXPECT_THROW(calibrate_threshold(std::vector<double>{}, 0.1), Error);
  EXPECT_THROW(calibrate_threshold(v, 1.0), Error);
}

TEST(Fusion, MajorityRule) {
  using H = Hypothesis;
  auto r = majority_fuse(std::vector<H>{H::H1, H::H1, H::H0});
  EXPECT_EQ(r.decision, H::H1);
  EXPECT_EQ(r.n_r, 1);
  r = majority_fuse(std::vector<H>{H::H0, H::H0, H::H1});
  EXPECT_EQ(r.decision, H::H0);
  EXPECT_EQ(r.n_r, 2);
  EXPECT_EQ(majority_fuse(std::vector<H>{H::H1, H::H0}).decision, H::H1);
  EXPECT_EQ(majority_fuse(std::vector<H>{H::H1, H::H0}, TieBreak::H0).decision, H::H0);
}

TEST(Fusion, FusedStatisticMatchesVotes) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 2000; ++trial) {
    const int k = 1 + static_cast<int>(gen() % 7);
    std::vector<double> stats(static_cast<std::size_t>(k));
    for (auto& x : stats) x = u(gen);
    const double nu = u(gen);
    std::vector<Hypothesis> votes;
    for (double x : stats) votes.push_back(x > nu ? Hypothesis::H1 : Hypothesis::H0);
    for (auto tie : {TieBreak::H1, TieBreak::H0}) {
      const bool fused = fused_edge_statistic(stats, tie) > nu;
      EXPECT_EQ(fused, majority_fuse(votes, tie).decision == Hypothesis::H1);
    }
  }
}

TEST(Roc, Examples) {
  const std::vector<double> h0{0.1, 0.2, 0.3}, h1{0.5, 0.6, 0.7};
  const auto sep = roc_curve(h0, h1);
  bool has_corner = false;
  for (auto [fa, de] : sep.points) has_corner |= fa == 0.0 && de == 1.0;
  EXPECT_TRUE(has_corner);
  EXPECT_EQ(sep.points.front(), std::make_pair(0.0, 0.0));
  EXPECT_EQ(sep.points.back(), std::make_pair(1.0, 1.0));
  EXPECT_DOUBLE_EQ(sep.detection_at(0.0), 1.0);

  const auto diag = roc_curve(h0, h0);
  for (auto [fa, de] : diag.points) EXPECT_DOUBLE_EQ(fa, de);
  for (std::size_t i = 1; i < diag.points.size(); ++i) {
    EXPECT_GE(diag.points[i].first, diag.points[i - 1].first);
    EXPECT_GE(diag.points[i].second, diag.points[i - 1].second);
  }
  EXPECT_THROW(roc_curve(std::vector<double>{}, h1), Error);
}

TEST(Accuracy, Average) {
  EXPECT_DOUBLE_EQ(sensing_accuracy(1, 0), 1.0);
  EXPECT_DOUBLE_EQ(sensing_accuracy(0.8, 0.2), 0.8);
  EXPECT_DOUBLE_EQ(sensing_accuracy(0, 1), 0.0);
  EXPECT_THROW(sensing_accuracy(1.2, 0), Error);
}

TEST(Bhattacharyya, GaussianOracle) {
  const MatrixXcd a = MatrixXcd::Identity(1, 1), b = 3.0 * MatrixXcd::Identity(1, 1);
  EXPECT_NEAR(bhattacharyya_gaussian(a, b), std::log(2.0 / std::sqrt(3.0)), 1e-14);
  EXPECT_NEAR(bhattacharyya_gaussian(b, b), 0.0, 1e-14);
  RandomStream rng(4);
  const MatrixXcd x = rng.complex_normal_matrix(3, 3, 1.0), y = rng.complex_normal_matrix(3, 3, 1.0);
  const MatrixXcd s1 = x * x.adjoint() + MatrixXcd::Identity(3, 3), s2 = y * y.adjoint() + MatrixXcd::Identity(3, 3);
  Eigen::PermutationMatrix<3> p;
  p.indices() << 2, 0, 1;
  const MatrixXcd pm = p.toDenseMatrix().cast<cd>();
  EXPECT_NEAR(bhattacharyya_gaussian(s1, s2), bhattacharyya_gaussian(pm * s1 * pm.transpose(), pm * s2 * pm.transpose()),
              1e-12);
  EXPECT_GT(bhattacharyya_gaussian(s1, s2), 0.0);
  EXPECT_THROW(bhattacharyya_gaussian(MatrixXcd::Zero(2, 2), MatrixXcd::Identity(2, 2)), Error);
}

TEST(Bhattacharyya, Anchors) {
  const Scenario s = single_ap();
  EXPECT_NEAR(bhattacharyya_cdcs(s, std::vector<double>{0.0}), 2 * (std::log(23.0 / 3) - 0.5 * std::log(43.0 / 3)), 1e-12);
  EXPECT_NEAR(bhattacharyya_cdcs(s, std::vector<double>{0.0}), 1.4112, 1e-4);
  EXPECT_NEAR(edcs_lambda(s, 0, 0.0), 2000.0 / 21, 1e-10);
  EXPECT_NEAR(bhattacharyya_edcs(s, std::vector<double>{0.0}), 0.8546, 1e-4);
  EXPECT_EQ(bhattacharyya_cdcs(s, std::vector<double>{kNoFronthaul}), 0.0);
  EXPECT_LT(bhattacharyya_cdcs(s, std::vector<double>{1e12}), 1e-8);
}

TEST(Bhattacharyya, AdditiveOverIdenticalAps) {
  auto c = SystemConfig::defaults(4, 23, 10);
  c.ap_positions.assign(4, {20, 0});
  const Scenario s4(c);
  const Scenario s1(SystemConfig::defaults(1, 23, 10));
  const std::vector<double> z4(4, 0.3), z1(1, 0.3);
  EXPECT_NEAR(bhattacharyya_cdcs(s4, z4), 4 * bhattacharyya_cdcs(s1, z1), 1e-12);
  EXPECT_NEAR(bhattacharyya_edcs(s4, std::vector<double>(4, 1e-3)), 4 * bhattacharyya_edcs(s1, std::vector<double>{1e-3}),
              1e-12);
}

TEST(Bhattacharyya, EdcsDecreasingAndZeroWithoutTarget) {
  const Scenario s = single_ap();
  double prev = bhattacharyya_edcs(s, std::vector<double>{0.0});
  for (double v = 1e-4; v < 10; v *= 1.5) {
    const double b = bhattacharyya_edcs(s, std::vector<double>{v});
    EXPECT_LT(b, prev);
    prev = b;
  }
  auto c = s.config;
  c.sigma_alpha_sq = {0.0};
  EXPECT_EQ(bhattacharyya_edcs(Scenario(c), std::vector<double>{0.0}), 0.0);
}

TEST(Bhattacharyya, ClosedFormsMatchOracle) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const Scenario s = random_scenario(gen);
    const int k = s.num_aps();
    auto p = QuantizationPlan::lossless(Scheme::CDCS, k);
    auto e = QuantizationPlan::lossless(Scheme::EDCS, k);
    for (int j = 0; j < k; ++j) {
      p.sigma_p_sq[j] = 10 * u(gen);
      e.sigma_sq[j] = 0.05 * u(gen);
    }
    const auto [c0, c1] = whitened_pair(build_detector(Scheme::CDCS, s, p));
    EXPECT_NEAR(bhattacharyya_cdcs(s, p.sigma_p_sq), bhattacharyya_gaussian(c0, c1), 1e-9);
    const auto [e0, e1] = whitened_pair(build_detector(Scheme::EDCS, s, e));
    EXPECT_NEAR(bhattacharyya_edcs(s, e.sigma_sq), bhattacharyya_gaussian(e0, e1), 1e-9);
  }
}
