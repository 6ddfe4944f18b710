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

#ifndef MINIMAX_FTPL_H_
#define MINIMAX_FTPL_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "minimax/rng.h"

namespace minimax {

// A point of the reduced parameter domain. One-dimensional games use only
// the first coordinate; the second stays 0.
using ReducedPoint = std::array<double, 2>;

struct GameConfig {
  int dim_reduced = 1;
  double radius = 1.0;
  int iters = 500;
  double eta = 0.0;  // 0 selects the game's default rate
  double grid_width = 0.0;  // 0 selects 0.05 * radius
  int n_risk = 1000;
  int n_prior = 1000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

// Throws ConfigError unless eta > 0, w in (0, B], T, N1, N2 >= 1.
void validate(const GameConfig& cfg);

// 1-D: b_j = j w clipped to B, always ending at B.
// 2-D: the w-lattice inside the quarter disc b1, b2 >= 0, |b| <= B, plus
// the axis endpoints (B, 0) and (0, B). Ordered by (b1, b2).
std::vector<ReducedPoint> make_grid(int dim_reduced, double radius,
                                    double width);

// Empirical prior over grid indices: sorted indices and sample counts.
struct DiscretePrior {
  std::vector<std::uint32_t> index;
  std::vector<std::uint32_t> count;
  std::uint32_t total = 0;

  double mass(std::size_t i) const {
    return static_cast<double>(count[i]) / total;
  }
};

DiscretePrior prior_from_counts(std::span<const std::uint32_t> counts);

// Priors over a shared support, one sparse row per prior. A single row
// describes one Bayes response; several rows describe the pointwise average
// of their Bayes responses.
struct PriorRows {
  std::vector<ReducedPoint> support;
  std::vector<std::vector<std::pair<std::uint32_t, double>>> rows;

  static PriorRows point_mass(const ReducedPoint& b);
  // Masses need not be normalized; zero entries are dropped.
  static PriorRows single(const std::vector<ReducedPoint>& support,
                          std::span<const double> mass);
  static PriorRows from_priors(const std::vector<ReducedPoint>& grid,
                               std::span<const DiscretePrior> priors);
};

struct RiskEstimate {
  double mean = 0.0;
  double stderr = 0.0;
};

// Opaque estimator handle; concrete types belong to a game.
class Responder {
 public:
  virtual ~Responder() = default;
  // Exact risk at b when known in closed form.
  virtual bool exact_risk(const ReducedPoint& b, double* risk) const {
    (void)b;
    (void)risk;
    return false;
  }
};

// Oracles of a reduced statistical game. Implementations must be safe to
// call concurrently from several threads.
class ReducedGame {
 public:
  virtual ~ReducedGame() = default;
  virtual int dim_reduced() const = 0;
  virtual double radius() const = 0;
  virtual double default_eta(int iters) const = 0;
  // Minimization oracle: Bayes responder (or average of responders).
  virtual std::shared_ptr<const Responder> respond(PriorRows rows) const = 0;
  // Monte Carlo risk of `est` at b from n draws of `stream`.
  virtual RiskEstimate risk(const Responder& est, const ReducedPoint& b,
                            int n, CounterRng& stream) const = 0;
};

// Cumulative risks R[i][j] of iterate i at grid point j, with column sums
// accumulated in row order.
class RiskMatrix {
 public:
  explicit RiskMatrix(std::size_t cols = 0) : sums_(cols, 0.0) {}

  // Throws NumericalError naming (iterate, grid point) on a non-finite entry.
  void append_row(std::vector<double> row);
  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return sums_.size(); }
  double at(std::size_t i, std::size_t j) const { return rows_[i][j]; }
  std::span<const double> column_sums() const { return sums_; }

 private:
  std::vector<std::vector<double>> rows_;
  std::vector<double> sums_;
};

// argmax_j sums_j + <sigma, b_j>; ties go to the smallest index.
std::size_t adversary_step(std::span<const double> column_sums,
                           const std::vector<ReducedPoint>& grid,
                           const ReducedPoint& sigma);
std::size_t adversary_step(const RiskMatrix& risks,
                           const std::vector<ReducedPoint>& grid,
                           const ReducedPoint& sigma);

// Perturbation sample s of iterate t: each coordinate i.i.d. Exp(eta).
ReducedPoint draw_perturbation(const GameConfig& cfg, std::uint64_t t,
                               std::uint64_t s);

struct IterateLog {
  std::vector<DiscretePrior> priors;
  std::vector<std::shared_ptr<const Responder>> estimators;
  // Draws consumed by the risk streams of each iterate.
  std::vector<std::uint64_t> risk_draws;
};

struct FtplSolution {
  GameConfig config;  // with defaults resolved
  std::vector<ReducedPoint> grid;
  IterateLog log;
  RiskMatrix risks;
  std::vector<double> average_prior;  // dense over grid, sums to 1
};

// Follow-the-perturbed-leader for the adversary against Bayes responses.
// Risk rows are estimated with fresh draws keyed by (seed, iterate, point).
FtplSolution solve(const ReducedGame& game, GameConfig cfg);

// Pointwise average of all iterates.
std::shared_ptr<const Responder> averaged_estimator(const ReducedGame& game,
                                                    const FtplSolution& sol);

}  // namespace minimax

#endif  // MINIMAX_FTPL_H_
