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

#ifndef MINIMAX_RISK_EVAL_H_
#define MINIMAX_RISK_EVAL_H_

#include <cstdint>
#include <span>
#include <vector>

#include "minimax/ftpl.h"
#include "minimax/regression.h"

namespace minimax {

struct EvalConfig {
  double grid_width = 0.0;  // 0 selects 0.05 * radius
  int n_mc = 10000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct ScanPoint {
  ReducedPoint b{0.0, 0.0};
  double risk = 0.0;
  double stderr = 0.0;
  bool exact = false;
};

struct ScanResult {
  std::vector<ScanPoint> points;
  std::size_t argmax = 0;

  double worst_risk() const { return points[argmax].risk; }
  double worst_stderr() const { return points[argmax].stderr; }
  const ReducedPoint& worst_point() const { return points[argmax].b; }
};

// Risk on the evaluation grid (closed form where the estimator has one,
// otherwise n_mc draws keyed by (seed, grid index)); maximum with ties to
// the smallest index.
ScanResult worst_case_scan(const ReducedGame& game, const Responder& est,
                           const EvalConfig& cfg);

struct BayesRisk {
  double risk = 0.0;
  double stderr = 0.0;
};

// sum_k p_k R(est, b_k) for a single-row prior, n_mc draws per support.
BayesRisk bayes_risk(const ReducedGame& game, const Responder& est,
                     const PriorRows& prior, const EvalConfig& cfg);

// Radial masses of the least favorable prior: nonzero averaged-prior
// entries with their grid points. On R^d the matching density is
// proportional to |theta|^{1-d} times the radial mass.
struct LfpRadial {
  std::vector<ReducedPoint> point;
  std::vector<double> mass;
};

LfpRadial lfp_export(const std::vector<ReducedPoint>& grid,
                     std::span<const double> average_prior);

struct Certificate {
  ScanResult averaged;         // worst case of the averaged estimator
  BayesRisk bayes_avg_prior;   // Bayes risk of the averaged prior
  double duality_gap = 0.0;
  double gap_stderr = 0.0;
  ScanResult bayes_responder;  // worst case of the Bayes rule for that prior
  LfpRadial lfp;

  // bayes <= worst + 2 combined standard errors.
  bool weak_duality_holds() const;
};

Certificate certify(const ReducedGame& game, const FtplSolution& sol,
                    const EvalConfig& cfg);

struct RidgeChoice {
  std::vector<double> lambdas;
  std::vector<double> worst;  // worst-case risk per lambda
  std::size_t best = 0;
  ScanResult scan;            // scan at the chosen lambda

  double lambda() const { return lambdas[best]; }
};

// Scans ridge_lambda_grid() with common draws across lambdas.
RidgeChoice best_ridge(const RegressionGame& game, const EvalConfig& cfg);

}  // namespace minimax

#endif  // MINIMAX_RISK_EVAL_H_
