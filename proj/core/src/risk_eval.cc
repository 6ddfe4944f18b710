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

#include "minimax/risk_eval.h"

#include <cmath>
#include <string>

#include "minimax/error.h"
#include "minimax/parallel.h"

namespace minimax {
namespace {

double eval_width(const ReducedGame& game, const EvalConfig& cfg) {
  return cfg.grid_width > 0.0 ? cfg.grid_width : 0.05 * game.radius();
}

}  // namespace

ScanResult worst_case_scan(const ReducedGame& game, const Responder& est,
                           const EvalConfig& cfg) {
  if (cfg.n_mc < 1) throw ConfigError("evaluation needs n_mc >= 1");
  const auto grid =
      make_grid(game.dim_reduced(), game.radius(), eval_width(game, cfg));
  ScanResult out;
  out.points.resize(grid.size());
  parallel_for(grid.size(), resolve_threads(cfg.threads), [&](std::size_t j) {
    ScanPoint& pt = out.points[j];
    pt.b = grid[j];
    double exact = 0.0;
    if (est.exact_risk(grid[j], &exact)) {
      pt.risk = exact;
      pt.exact = true;
      return;
    }
    CounterRng stream(cfg.seed, StreamTag::kEvalRisk, j);
    const RiskEstimate r = game.risk(est, grid[j], cfg.n_mc, stream);
    if (!std::isfinite(r.mean)) {
      throw NumericalError("non-finite risk in evaluation at grid point " +
                           std::to_string(j));
    }
    pt.risk = r.mean;
    pt.stderr = r.stderr;
  });
  for (std::size_t j = 1; j < out.points.size(); ++j) {
    if (out.points[j].risk > out.points[out.argmax].risk) out.argmax = j;
  }
  return out;
}

BayesRisk bayes_risk(const ReducedGame& game, const Responder& est,
                     const PriorRows& prior, const EvalConfig& cfg) {
  if (prior.rows.size() != 1) {
    throw ConfigError("bayes_risk needs a single prior row");
  }
  const auto& row = prior.rows[0];
  std::vector<RiskEstimate> parts(row.size());
  parallel_for(row.size(), resolve_threads(cfg.threads), [&](std::size_t i) {
    const ReducedPoint& b = prior.support[row[i].first];
    double exact = 0.0;
    if (est.exact_risk(b, &exact)) {
      parts[i] = {exact, 0.0};
      return;
    }
    CounterRng stream(cfg.seed, StreamTag::kBayesRisk, row[i].first);
    parts[i] = game.risk(est, b, cfg.n_mc, stream);
  });
  BayesRisk out;
  double var = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    const double p = row[i].second;
    total += p;
    out.risk += p * parts[i].mean;
    var += p * p * parts[i].stderr * parts[i].stderr;
  }
  out.risk /= total;
  out.stderr = std::sqrt(var) / total;
  return out;
}

LfpRadial lfp_export(const std::vector<ReducedPoint>& grid,
                     std::span<const double> average_prior) {
  if (grid.size() != average_prior.size()) {
    throw ConfigError("lfp_export: prior does not match the grid");
  }
  LfpRadial out;
  double total = 0.0;
  for (const double m : average_prior) total += m;
  if (!(total > 0.0)) throw ConfigError("lfp_export: prior has no mass");
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (average_prior[j] <= 0.0) continue;
    out.point.push_back(grid[j]);
    out.mass.push_back(average_prior[j] / total);
  }
  return out;
}

bool Certificate::weak_duality_holds() const {
  const double se = std::hypot(averaged.worst_stderr(), bayes_avg_prior.stderr);
  return bayes_avg_prior.risk <= averaged.worst_risk() + 2.0 * se;
}

Certificate certify(const ReducedGame& game, const FtplSolution& sol,
                    const EvalConfig& cfg) {
  Certificate c;
  const auto avg = averaged_estimator(game, sol);
  c.averaged = worst_case_scan(game, *avg, cfg);
  // The Bayes rule for the pooled prior uses its exact masses, which is the
  // limit of pooling every prior sample of every iterate.
  const PriorRows pooled = PriorRows::single(sol.grid, sol.average_prior);
  const auto responder = game.respond(pooled);
  c.bayes_avg_prior = bayes_risk(game, *responder, pooled, cfg);
  c.duality_gap = c.averaged.worst_risk() - c.bayes_avg_prior.risk;
  c.gap_stderr = std::hypot(c.averaged.worst_stderr(), c.bayes_avg_prior.stderr);
  c.bayes_responder = worst_case_scan(game, *responder, cfg);
  c.lfp = lfp_export(sol.grid, sol.average_prior);
  return c;
}

RidgeChoice best_ridge(const RegressionGame& game, const EvalConfig& cfg) {
  RidgeChoice out;
  out.lambdas = ridge_lambda_grid();
  std::vector<ScanResult> scans;
  for (const double lambda : out.lambdas) {
    const auto est = ridge_estimator(game.problem(), lambda);
    scans.push_back(worst_case_scan(game, *est, cfg));
    out.worst.push_back(scans.back().worst_risk());
  }
  for (std::size_t i = 1; i < out.worst.size(); ++i) {
    if (out.worst[i] < out.worst[out.best]) out.best = i;
  }
  out.scan = scans[out.best];
  return out;
}

}  // namespace minimax
