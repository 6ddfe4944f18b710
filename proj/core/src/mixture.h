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

#ifndef MINIMAX_SRC_MIXTURE_H_
#define MINIMAX_SRC_MIXTURE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "minimax/ftpl.h"

namespace minimax::detail {

// Evaluates the average over rows r of the posterior-mean mixture
//   sum_k p_rk e_k v_k / sum_k p_rk e_k
// as sum_k c_k v_k, given log shell weights ln e_k for the used supports.
class MixtureWeights {
 public:
  explicit MixtureWeights(const PriorRows& rows);

  // Supports with positive mass in some row, ascending.
  const std::vector<std::uint32_t>& active() const { return active_; }
  std::size_t support_size() const { return support_size_; }

  // log_w and coef are indexed by support; only active entries are read
  // or written.
  void coefficients(std::span<const double> log_w,
                    std::span<double> coef) const;

 private:
  std::vector<std::vector<std::pair<std::uint32_t, double>>> rows_;
  std::vector<std::uint32_t> active_;
  std::size_t support_size_ = 0;
};

}  // namespace minimax::detail

#endif  // MINIMAX_SRC_MIXTURE_H_
