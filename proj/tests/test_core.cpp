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

#include <atomic>
#include <cmath>
#include <vector>

#include "pmn/linalg.hpp"
#include "pmn/rng.hpp"

using namespace pmn;

TEST(Linalg, IdentityPlusRankOneDense) {
  IdentityPlusRankOne m{0.5, 2.0, VectorXcd::Ones(2) / std::sqrt(2.0)};
  const MatrixXcd d = m.dense();
  EXPECT_NEAR(d(0, 0).real(), 1.5, 1e-14);
  EXPECT_NEAR(d(0, 1).real(), 1.0, 1e-14);
  EXPECT_DOUBLE_EQ(m.min_eigenvalue(), 0.5);
}

TEST(Linalg, LogdetMatchesDiagonal) {
  MatrixXcd m = MatrixXcd::Zero(3, 3);
  m.diagonal() << 1.0, 2.0, 4.0;
  EXPECT_NEAR(logdet_hpd(m), std::log(8.0), 1e-14);
  m(2, 2) = -1.0;
  EXPECT_THROW(logdet_hpd(m), Error);
}

TEST(Linalg, BlockHelpers) {
  MatrixXcd a = MatrixXcd::Constant(2, 2, cd(1, 1));
  const MatrixXcd r = repeat_block(a, 3);
  EXPECT_EQ(r.rows(), 6);
  EXPECT_EQ(r(2, 3), cd(1, 1));
  EXPECT_EQ(r(0, 2), cd(0, 0));
  std::vector<MatrixXcd> blocks{a, MatrixXcd::Identity(1, 1)};
  const MatrixXcd b = block_diagonal(blocks);
  EXPECT_EQ(b.rows(), 3);
  EXPECT_EQ(b(2, 2), cd(1, 0));
  EXPECT_EQ(b(2, 0), cd(0, 0));
}

TEST(Linalg, PairwiseSumAndSpearman) {
  std::vector<double> v(1001, 0.1);
  EXPECT_NEAR(pairwise_sum(v), 100.1, 1e-10);
  std::vector<double> x{1, 2, 3, 4, 5}, y{10, 20, 25, 100, 1000}, z{5, 4, 3, 2, 1};
  EXPECT_DOUBLE_EQ(spearman(x, y), 1.0);
  EXPECT_DOUBLE_EQ(spearman(x, z), -1.0);
}

TEST(Rng, StreamsAreKeyedByTagAndIndex) {
  RandomStream a(7, StreamTag::Rate, 3), b(7, StreamTag::Rate, 3), c(7, StreamTag::Rate, 4), d(7, StreamTag::SensingH0, 3);
  const double va = a.normal();
  EXPECT_EQ(va, b.normal());
  EXPECT_NE(va, c.normal());
  EXPECT_NE(va, d.normal());
}

TEST(Rng, ComplexNormalVariance) {
  RandomStream rng(11);
  double acc = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) acc += std::norm(rng.complex_normal(2.0));
  EXPECT_NEAR(acc / n, 2.0, 0.03);
}

TEST(Rng, ParallelForCoversEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i]++; });
  for (auto& h : hits) EXPECT_EQ(h.load(), 1);
  EXPECT_THROW(parallel_for(10, 3, [](std::size_t i) {
                 if (i == 7) throw Error(ErrorCode::Numeric, "boom");
               }),
               Error);
}
