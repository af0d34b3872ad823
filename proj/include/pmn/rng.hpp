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

#ifndef PMN_RNG_HPP
#define PMN_RNG_HPP

#include <cstdint>
#include <functional>
#include <random>

#include "pmn/types.hpp"

namespace pmn {

/// Stream purposes. A trial's stream is keyed by (master seed, purpose,
/// trial index) only, so the same trial sees the same draws whatever the
/// worker count and whatever plan is being evaluated.
enum class StreamTag : std::uint64_t {
  SensingCalibration = 1,
  SensingH0 = 2,
  SensingH1 = 3,
  Rate = 4,
  Test = 99,
};

std::uint64_t derive_seed(std::uint64_t master_seed, StreamTag tag, std::uint64_t index);

/// One independent pseudo-random stream (mt19937_64 + standard normal).
class RandomStream {
public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}
  RandomStream(std::uint64_t master_seed, StreamTag tag, std::uint64_t index)
      : RandomStream(derive_seed(master_seed, tag, index)) {}

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  bool bernoulli(double p) { return uniform() < p; }

  /// CN(0, variance).
  cd complex_normal(double variance);
  VectorXcd complex_normal_vector(int n, double variance);
  MatrixXcd complex_normal_matrix(int rows, int cols, double variance);

private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// Runs fn(i) for i in [0, n) on `threads` workers with a static partition.
/// fn must only write to per-index state.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace pmn

#endif
