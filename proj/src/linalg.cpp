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

#include "pmn/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pmn {

std::string_view to_string(Scheme s) noexcept {
  switch (s) {
    case Scheme::CDCS: return "CDCS";
    case Scheme::CDES: return "CDES";
    case Scheme::EDCS: return "EDCS";
    case Scheme::EDES: return "EDES";
  }
  return "?";
}

Scheme parse_scheme(std::string_view name) {
  for (Scheme s : kAllSchemes)
    if (to_string(s) == name) return s;
  throw Error(ErrorCode::Schema, "unknown scheme '" + std::string(name) + "'");
}

double IdentityPlusRankOne::min_eigenvalue() const {
  if (dim() == 1) return identity + rank_one;
  return std::min(identity, identity + rank_one);
}

MatrixXcd IdentityPlusRankOne::dense() const {
  const int n = dim();
  MatrixXcd m = identity * MatrixXcd::Identity(n, n);
  m += rank_one * direction * direction.adjoint();
  return m;
}

double logdet_hpd(const MatrixXcd& m) {
  Eigen::LLT<MatrixXcd> llt(m);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorCode::Numeric, "matrix is not Hermitian positive definite");
  const auto& l = llt.matrixLLT();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    const double d = l(i, i).real();
    if (!(d > 0.0)) throw Error(ErrorCode::Numeric, "matrix is singular");
    acc += 2.0 * std::log(d);
  }
  return acc;
}

MatrixXcd block_diagonal(std::span<const MatrixXcd> blocks) {
  Eigen::Index rows = 0, cols = 0;
  for (const auto& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  MatrixXcd out = MatrixXcd::Zero(rows, cols);
  Eigen::Index r = 0, c = 0;
  for (const auto& b : blocks) {
    out.block(r, c, b.rows(), b.cols()) = b;
    r += b.rows();
    c += b.cols();
  }
  return out;
}

MatrixXcd repeat_block(const MatrixXcd& m, int n) {
  std::vector<MatrixXcd> blocks(static_cast<std::size_t>(n), m);
  return block_diagonal(blocks);
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

namespace {

std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j);
    for (std::size_t t = i; t <= j; ++t) ranks[idx[t]] = r;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw Error(ErrorCode::InvalidArgument, "spearman: need two equal-length samples");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace pmn
