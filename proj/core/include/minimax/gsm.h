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

#ifndef MINIMAX_GSM_H_
#define MINIMAX_GSM_H_

#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "minimax/ftpl.h"

namespace minimax {

// X ~ N(theta, I_d), ||theta|| <= B, loss on the first k coordinates.
// k == d is the full-loss game over b in [0, B]; k < d reduces to the
// quarter disc of (|theta[0:k]|, |theta[k:d]|).
struct GsmProblem {
  int d = 2;
  int k = 2;
  double radius = 1.0;

  bool full_loss() const { return k == d; }
};

void validate(const GsmProblem& p);

// theta at a reduced point: b e_1, or [b1 e_1 of R^k, b2 e_1 of R^{d-k}].
std::vector<double> gsm_theta(const GsmProblem& p, const ReducedPoint& b);

class GsmEstimator : public Responder {
 public:
  // out has size d; only the first k coordinates enter the loss.
  virtual void predict(std::span<const double> x,
                       std::span<double> out) const = 0;
};

// Posterior mean under priors uniform on spheres |theta| = b (or products of
// spheres in the k < d case), averaged over prior rows.
class GsmBayesEstimator : public GsmEstimator {
 public:
  GsmBayesEstimator(const GsmProblem& p, PriorRows rows);
  ~GsmBayesEstimator() override;

  void predict(std::span<const double> x,
               std::span<double> out) const override;
  const PriorRows& prior() const { return rows_; }

 private:
  struct Impl;
  GsmProblem problem_;
  PriorRows rows_;
  std::unique_ptr<Impl> impl_;
};

std::shared_ptr<const GsmBayesEstimator> gsm_min_oracle(const GsmProblem& p,
                                                        PriorRows rows);

enum class GsmBaseline {
  kStandard,
  kJamesStein,
  kProjection,
  kBoundaryBayes,
  kBestLinear,
};

// Accepts standard, james-stein, projection, boundary-bayes, best-linear
// (underscores also accepted). Throws ConfigError otherwise.
GsmBaseline gsm_baseline_from_name(std::string_view name);

// Throws ConfigError for unsupported pairs: james-stein needs d >= 4,
// boundary-bayes needs k == d, best-linear needs k == 1.
std::shared_ptr<const GsmEstimator> gsm_baseline(GsmBaseline kind,
                                                 const GsmProblem& p);

// Minimizer over c of the worst-case risk c^2 + (1 - c)^2 B^2 of c X(1).
double best_linear_coefficient(double radius);

// Mean and standard error of the loss over n draws X = theta_b + Z.
RiskEstimate gsm_risk_mc(const GsmProblem& p, const GsmEstimator& est,
                         const ReducedPoint& b, int n, CounterRng& stream);

class GsmGame : public ReducedGame {
 public:
  explicit GsmGame(const GsmProblem& p);

  const GsmProblem& problem() const { return problem_; }
  int dim_reduced() const override { return problem_.full_loss() ? 1 : 2; }
  double radius() const override { return problem_.radius; }
  // 1 / (B (B + 1) sqrt(T)).
  double default_eta(int iters) const override;
  std::shared_ptr<const Responder> respond(PriorRows rows) const override;
  RiskEstimate risk(const Responder& est, const ReducedPoint& b, int n,
                    CounterRng& stream) const override;

 private:
  GsmProblem problem_;
};

}  // namespace minimax

#endif  // MINIMAX_GSM_H_
