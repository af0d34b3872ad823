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

#ifndef PMN_TYPES_HPP
#define PMN_TYPES_HPP

#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace pmn {

using cd = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

/// Quantization variance meaning "nothing is sent on this fronthaul stream".
inline constexpr double kNoFronthaul = std::numeric_limits<double>::infinity();

enum class Hypothesis { H0, H1 };

/// The four cloud/edge placements of decoding and sensing.
enum class Scheme { CDCS, CDES, EDCS, EDES };

inline constexpr Scheme kAllSchemes[] = {Scheme::CDCS, Scheme::CDES, Scheme::EDCS, Scheme::EDES};

std::string_view to_string(Scheme s) noexcept;
Scheme parse_scheme(std::string_view name);  // throws Error(Schema)

inline bool cloud_sensing(Scheme s) noexcept { return s == Scheme::CDCS || s == Scheme::EDCS; }
inline bool cloud_decoding(Scheme s) noexcept { return s == Scheme::CDCS || s == Scheme::CDES; }

enum class ErrorCode {
  InvalidArgument,
  DegenerateGeometry,
  Infeasible,
  Numeric,
  Schema,
  Io,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

}  // namespace pmn

#endif
