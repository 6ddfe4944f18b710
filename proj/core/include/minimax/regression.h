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

#ifndef MINIMAX_REGRESSION_H_
#define MINIMAX_REGRESSION_H_

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "minimax/ftpl.h"
#include "minimax/special.h"

namespace minimax {

// Y = X theta + eps with X rows ~ N(0, I_d), eps ~ N(0, I_n), |theta| <= B.
struct RegressionProblem {
  int n = 10;
  int d = 5;
  double radius = 1.0;
};

// Requires d >= 2 and n >= d.
void validate(const RegressionProblem& p);

struct Dataset {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
};

// X'X and X'Y: everything an invariant estimator sees.
struct SufficientStats {
  Eigen::MatrixXd xtx;
  Eigen::VectorXd xty;
};

// Draws X row by row, then the noise, from `stream`.
Dataset draw_dataset(const RegressionProblem& p, const Eigen::VectorXd& theta,
                     CounterRng& stream);
SufficientStats sufficient_stats(const Dataset& data);

class RegEstimator : public Responder {
 public:
  virtual Eigen::VectorXd predict(const SufficientStats& s) const = 0;
};

// Posterior mean under priors uniform on spheres |theta| = b, averaged over
// prior rows. Each sphere contributes through the Fisher-Bingham constant
// and mean with A = b^2 X'X / 2, gamma = b X'Y in the eigenbasis of X'X.
class RegBayesEstimator : public RegEstimator {
 public:
  RegBayesEstimator(const RegressionProblem& p, PriorRows rows,
                    special::DensityMethod method);
  ~RegBayesEstimator() override;

  // Throws NumericalError when X'X is singular.
  Eigen::VectorXd predict(const SufficientStats& s) const override;
  const PriorRows& prior() const { return rows_; }
  special::DensityMethod method() const { return method_; }

  // Same prior, other density method.
  std::shared_ptr<const RegBayesEstimator> with_method(
      special::DensityMethod method) const;

 private:
  struct Impl;
  RegressionProblem problem_;
  PriorRows rows_;
  special::DensityMethod method_;
  std::unique_ptr<Impl> impl_;
};

std::shared_ptr<const RegBayesEstimator> reg_min_oracle(
    const RegressionProblem& p, PriorRows rows,
    special::DensityMethod method = special::DensityMethod::kImhof);

// (X'X)^{-1} X'Y. Exact risk d / (n - d - 1) when n > d + 1.
std::shared_ptr<const RegEstimator> ols_estimator(const RegressionProblem& p);
// (X'X + lambda I)^{-1} X'Y.
std::shared_ptr<const RegEstimator> ridge_estimator(const RegressionProblem& p,
                                                    double lambda);
// 25 log-spaced values from 1e-3 to 1e2.
std::vector<double> ridge_lambda_grid();

RiskEstimate reg_risk_mc(const RegressionProblem& p, const RegEstimator& est,
                         const ReducedPoint& b, int n_datasets,
                         CounterRng& stream);

class RegressionGame : public ReducedGame {
 public:
  RegressionGame(const RegressionProblem& p, special::DensityMethod method);

  const RegressionProblem& problem() const { return problem_; }
  special::DensityMethod method() const { return method_; }
  int dim_reduced() const override { return 1; }
  double radius() const override { return problem_.radius; }
  // 1 / (B (B sqrt(n) + 1) sqrt(T)).
  double default_eta(int iters) const override;
  std::shared_ptr<const Responder> respond(PriorRows rows) const override;
  RiskEstimate risk(const Responder& est, const ReducedPoint& b, int n,
                    CounterRng& stream) const override;

 private:
  RegressionProblem problem_;
  special::DensityMethod method_;
};

}  // namespace minimax

#endif  // MINIMAX_REGRESSION_H_
