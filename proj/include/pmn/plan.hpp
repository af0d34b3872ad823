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

#ifndef PMN_PLAN_HPP
#define PMN_PLAN_HPP

#include <vector>

#include "pmn/types.hpp"

namespace pmn {

/// Per-AP fronthaul quantization noise variances for one scheme.
/// kNoFronthaul (+inf) marks a stream on which nothing is sent.
///   CDCS: sigma_p_sq (received pilots), sigma_d_sq (received data)
///   CDES: sigma_p_sq (channel estimate), sigma_d_sq (received data)
///   EDCS: sigma_sq (refined channel estimate)
///   EDES: nothing
/// Edge-decoding schemes also carry the AP that decodes and the rate R_1 of
/// the decoded data it forwards.
struct QuantizationPlan {
  Scheme scheme = Scheme::CDCS;
  std::vector<double> sigma_p_sq;
  std::vector<double> sigma_d_sq;
  std::vector<double> sigma_sq;
  int decoding_ap = 0;
  double r1 = 0.0;

  /// Zero quantization noise on every stream the scheme uses.
  static QuantizationPlan lossless(Scheme scheme, int num_aps);
};

inline QuantizationPlan QuantizationPlan::lossless(Scheme scheme, int num_aps) {
  QuantizationPlan p;
  p.scheme = scheme;
  const auto k = static_cast<std::size_t>(num_aps);
  switch (scheme) {
    case Scheme::CDCS:
    case Scheme::CDES:
      p.sigma_p_sq.assign(k, 0.0);
      p.sigma_d_sq.assign(k, 0.0);
      break;
    case Scheme::EDCS:
      p.sigma_sq.assign(k, 0.0);
      break;
    case Scheme::EDES:
      break;
  }
  return p;
}

}  // namespace pmn

#endif
