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

#include "minimax/ftpl.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "minimax/error.h"
#include "minimax/parallel.h"

namespace minimax {

void validate(const GameConfig& cfg) {
  if (cfg.dim_reduced != 1 && cfg.dim_reduced != 2) {
    throw ConfigError("reduced dimension must be 1 or 2");
  }
  if (!(cfg.radius > 0.0) || !std::isfinite(cfg.radius)) {
    throw ConfigError("radius must be positive");
  }
  if (!(cfg.eta > 0.0) || !std::isfinite(cfg.eta)) {
    throw ConfigError("eta must be positive");
  }
  if (!(cfg.grid_width > 0.0) || cfg.grid_width > cfg.radius) {
    throw ConfigError("grid width must lie in (0, radius]");
  }
  if (cfg.iters < 1 || cfg.n_risk < 1 || cfg.n_prior < 1) {
    throw ConfigError("iters, n_risk and n_prior must be >= 1");
  }
}

std::vector<ReducedPoint> make_grid(int dim_reduced, double radius,
                                    double width) {
  if (!(radius > 0.0) || !(width > 0.0) || width > radius) {
    throw ConfigError("grid needs 0 < width <= radius");
  }
  const auto steps =
      static_cast<long>(std::ceil(radius / width - 1e-9));
  std::vector<ReducedPoint> grid;
  if (dim_reduced == 1) {
    for (long j = 0; j <= steps; ++j) {
      grid.push_back({std::min(j * width, radius), 0.0});
    }
    return grid;
  }
  if (dim_reduced != 2) throw ConfigError("grid dimension must be 1 or 2");
  const double r2 = radius * radius * (1.0 + 1e-12);
  for (long i = 0; i <= steps; ++i) {
    const double b1 = std::min(i * width, radius);
    for (long j = 0; j <= steps; ++j) {
      const double b2 = std::min(j * width, radius);
      if (b1 * b1 + b2 * b2 <= r2) grid.push_back({b1, b2});
    }
  }
  // The lattice reaches (B, 0) and (0, B) only through the clip above.
  return grid;
}

DiscretePrior prior_from_counts(std::span<const std::uint32_t> counts) {
  DiscretePrior p;
  for (std::size_t j = 0; j < counts.size(); ++j) {
    if (counts[j] == 0) continue;
    p.index.push_back(static_cast<std::uint32_t>(j));
    p.count.push_back(counts[j]);
    p.total += counts[j];
  }
  return p;
}

PriorRows PriorRows::point_mass(const ReducedPoint& b) {
  PriorRows r;
  r.support = {b};
  r.rows = {{{0u, 1.0}}};
  return r;
}

PriorRows PriorRows::single(const std::vector<ReducedPoint>& support,
                            std::span<const double> mass) {
  if (support.size() != mass.size()) {
    throw ConfigError("prior support and masses differ in size");
  }
  double total = 0.0;
  for (const double m : mass) {
    if (!(m >= 0.0) || !std::isfinite(m)) {
      throw ConfigError("prior masses must be finite and non-negative");
    }
    total += m;
  }
  if (!(total > 0.0)) throw ConfigError("prior has no mass");
  PriorRows r;
  r.rows.emplace_back();
  for (std::size_t k = 0; k < support.size(); ++k) {
    if (mass[k] == 0.0) continue;
    r.rows[0].emplace_back(static_cast<std::uint32_t>(r.support.size()),
                           mass[k] / total);
    r.support.push_back(support[k]);
  }
  return r;
}

PriorRows PriorRows::from_priors(const std::vector<ReducedPoint>& grid,
                                 std::span<const DiscretePrior> priors) {
  // Keep only grid points used by some prior, in grid order.
  std::vector<std::uint32_t> remap(grid.size(), UINT32_MAX);
  for (const auto& p : priors) {
    for (const auto j : p.index) remap[j] = 0;
  }
  PriorRows r;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (remap[j] == UINT32_MAX) continue;
    remap[j] = static_cast<std::uint32_t>(r.support.size());
    r.support.push_back(grid[j]);
  }
  r.rows.reserve(priors.size());
  for (const auto& p : priors) {
    auto& row = r.rows.emplace_back();
    for (std::size_t i = 0; i < p.index.size(); ++i) {
      row.emplace_back(remap[p.index[i]], p.mass(i));
    }
  }
  return r;
}

void RiskMatrix::append_row(std::vector<double> row) {
  if (row.size() != sums_.size()) {
    throw ConfigError("risk row does not match the grid");
  }
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (!std::isfinite(row[j])) {
      throw NumericalError("non-finite risk estimate at iterate " +
                           std::to_string(rows_.size()) + ", grid point " +
                           std::to_string(j));
    }
  }
  for (std::size_t j = 0; j < row.size(); ++j) sums_[j] += row[j];
  rows_.push_back(std::move(row));
}

std::size_t adversary_step(std::span<const double> column_sums,
                           const std::vector<ReducedPoint>& grid,
                           const ReducedPoint& sigma) {
  if (grid.empty()) throw ConfigError("adversary_step: empty grid");
  if (column_sums.size() != grid.size()) {
    throw ConfigError("adversary_step: column sums do not match the grid");
  }
  std::size_t best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double v =
        column_sums[j] + sigma[0] * grid[j][0] + sigma[1] * grid[j][1];
    if (v > best_value) {
      best_value = v;
      best = j;
    }
  }
  return best;
}

std::size_t adversary_step(const RiskMatrix& risks,
                           const std::vector<ReducedPoint>& grid,
                           const ReducedPoint& sigma) {
  return adversary_step(risks.column_sums(), grid, sigma);
}

ReducedPoint draw_perturbation(const GameConfig& cfg, std::uint64_t t,
                               std::uint64_t s) {
  CounterRng stream(cfg.seed, StreamTag::kPerturbation, t, s);
  ReducedPoint sigma{0.0, 0.0};
  for (int i = 0; i < cfg.dim_reduced; ++i) {
    sigma[i] = sample_exponential(cfg.eta, stream);
  }
  return sigma;
}

FtplSolution solve(const ReducedGame& game, GameConfig cfg) {
  cfg.dim_reduced = game.dim_reduced();
  cfg.radius = game.radius();
  if (cfg.eta == 0.0 && cfg.iters >= 1) cfg.eta = game.default_eta(cfg.iters);
  if (cfg.grid_width == 0.0) cfg.grid_width = 0.05 * cfg.radius;
  validate(cfg);

  FtplSolution sol;
  sol.config = cfg;
  sol.grid = make_grid(cfg.dim_reduced, cfg.radius, cfg.grid_width);
  sol.risks = RiskMatrix(sol.grid.size());
  const std::size_t m = sol.grid.size();
  const unsigned threads = resolve_threads(cfg.threads);
  std::vector<double> mass_sum(m, 0.0);

  for (int t = 0; t < cfg.iters; ++t) {
    // Adversary: N2 perturbed leaders against the risks of iterates < t.
    std::vector<std::uint32_t> counts(m, 0);
    for (int s = 0; s < cfg.n_prior; ++s) {
      const ReducedPoint sigma = draw_perturbation(cfg, t, s);
      ++counts[adversary_step(sol.risks, sol.grid, sigma)];
    }
    DiscretePrior prior = prior_from_counts(counts);
    auto est = game.respond(PriorRows::from_priors(sol.grid, {&prior, 1}));

    std::vector<double> row(m);
    std::vector<std::uint64_t> draws(m);
    parallel_for(m, threads, [&](std::size_t j) {
      CounterRng stream(cfg.seed, StreamTag::kRisk, t, j);
      row[j] = game.risk(*est, sol.grid[j], cfg.n_risk, stream).mean;
      draws[j] = stream.draws();
    });
    sol.risks.append_row(std::move(row));

    std::uint64_t used = 0;
    for (const auto d : draws) used += d;
    for (std::size_t i = 0; i < prior.index.size(); ++i) {
      mass_sum[prior.index[i]] += prior.mass(i);
    }
    sol.log.priors.push_back(std::move(prior));
    sol.log.estimators.push_back(std::move(est));
    sol.log.risk_draws.push_back(used);
  }
  sol.average_prior.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    sol.average_prior[j] = mass_sum[j] / cfg.iters;
  }
  return sol;
}

std::shared_ptr<const Responder> averaged_estimator(const ReducedGame& game,
                                                    const FtplSolution& sol) {
  if (sol.log.priors.empty()) throw ConfigError("no iterates to average");
  return game.respond(PriorRows::from_priors(sol.grid, sol.log.priors));
}

}  // namespace minimax
