// Copyright 2026 The Minimax Forge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mixture.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "minimax/error.h"

namespace minimax::detail {

MixtureWeights::MixtureWeights(const PriorRows& rows)
    : support_size_(rows.support.size()) {
  if (rows.rows.empty()) throw ConfigError("prior has no rows");
  std::vector<char> used(support_size_, 0);
  for (const auto& row : rows.rows) {
    auto& kept = rows_.emplace_back();
    for (const auto& [k, p] : row) {
      if (k >= support_size_) throw ConfigError("prior row index out of range");
      if (!(p >= 0.0)) throw ConfigError("negative prior mass");
      if (p == 0.0) continue;
      kept.emplace_back(k, p);
      used[k] = 1;
    }
    if (kept.empty()) throw ConfigError("prior row has no mass");
  }
  for (std::size_t k = 0; k < support_size_; ++k) {
    if (used[k]) active_.push_back(static_cast<std::uint32_t>(k));
  }
}

void MixtureWeights::coefficients(std::span<const double> log_w,
                                  std::span<double> coef) const {
  double top = -std::numeric_limits<double>::infinity();
  for (const auto k : active_) top = std::max(top, log_w[k]);
  thread_local std::vector<double> e;
  thread_local std::vector<double> scaled;
  e.assign(support_size_, 0.0);
  scaled.assign(support_size_, 0.0);
  for (const auto k : active_) {
    e[k] = std::exp(log_w[k] - top);
    coef[k] = 0.0;
  }
  constexpr double kUnderflow = 1e-280;
  for (const auto& row : rows_) {
    double den = 0.0;
    for (const auto& [k, p] : row) den += p * e[k];
    if (den > kUnderflow) {
      for (const auto& [k, p] : row) scaled[k] += p / den;
      continue;
    }
    // Every shell of this row is negligible next to the global leader;
    // normalize the row on its own scale.
    double row_top = -std::numeric_limits<double>::infinity();
    for (const auto& [k, p] : row) row_top = std::max(row_top, log_w[k]);
    double row_den = 0.0;
    for (const auto& [k, p] : row) row_den += p * std::exp(log_w[k] - row_top);
    for (const auto& [k, p] : row) {
      coef[k] += p * std::exp(log_w[k] - row_top) / row_den;
    }
  }
  const double inv_rows = 1.0 / static_cast<double>(rows_.size());
  for (const auto k : active_) {
    coef[k] = (coef[k] + e[k] * scaled[k]) * inv_rows;
  }
}

}  // namespace minimax::detail
