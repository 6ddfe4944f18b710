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

#include "minimax/regression.h"

#include <cmath>
#include <numbers>
#include <optional>

#include "minimax/error.h"
#include "mixture.h"

namespace minimax {
namespace {

class Ols : public RegEstimator {
 public:
  explicit Ols(const RegressionProblem& p) : p_(p) {}
  Eigen::VectorXd predict(const SufficientStats& s) const override {
    Eigen::LLT<Eigen::MatrixXd> llt(s.xtx);
    if (llt.info() != Eigen::Success) {
      throw NumericalError("ols: X'X is singular");
    }
    return llt.solve(s.xty);
  }
  bool exact_risk(const ReducedPoint&, double* risk) const override {
    if (p_.n <= p_.d + 1) return false;
    *risk = static_cast<double>(p_.d) / (p_.n - p_.d - 1);
    return true;
  }

 private:
  RegressionProblem p_;
};

class Ridge : public RegEstimator {
 public:
  explicit Ridge(double lambda) : lambda_(lambda) {}
  Eigen::VectorXd predict(const SufficientStats& s) const override {
    Eigen::MatrixXd m = s.xtx;
    m.diagonal().array() += lambda_;
    return m.llt().solve(s.xty);
  }

 private:
  double lambda_;
};

double log_sphere_area(int d) {
  return std::numbers::ln2 + 0.5 * d * std::log(std::numbers::pi) -
         std::lgamma(0.5 * d);
}

}  // namespace

void validate(const RegressionProblem& p) {
  if (p.d < 2) throw ConfigError("regression: d must be >= 2");
  if (p.n < p.d) throw ConfigError("regression: need n >= d");
  if (!(p.radius > 0.0) || !std::isfinite(p.radius)) {
    throw ConfigError("regression: radius must be positive");
  }
}

Dataset draw_dataset(const RegressionProblem& p, const Eigen::VectorXd& theta,
                     CounterRng& stream) {
  Dataset data{Eigen::MatrixXd(p.n, p.d), Eigen::VectorXd(p.n)};
  for (int i = 0; i < p.n; ++i) {
    for (int j = 0; j < p.d; ++j) data.x(i, j) = stream.normal();
  }
  data.y = data.x * theta;
  for (int i = 0; i < p.n; ++i) data.y[i] += stream.normal();
  return data;
}

SufficientStats sufficient_stats(const Dataset& data) {
  return {data.x.transpose() * data.x, data.x.transpose() * data.y};
}

struct RegBayesEstimator::Impl {
  explicit Impl(const PriorRows& rows) : weights(rows) {}
  detail::MixtureWeights weights;
};

RegBayesEstimator::RegBayesEstimator(const RegressionProblem& p,
                                     PriorRows rows,
                                     special::DensityMethod method)
    : problem_(p), rows_(std::move(rows)), method_(method) {
  validate(problem_);
  for (const auto& b : rows_.support) {
    if (b[0] < 0.0 || b[0] > problem_.radius * (1.0 + 1e-12) || b[1] != 0.0) {
      throw ConfigError("regression: prior support outside [0, B]");
    }
  }
  impl_ = std::make_unique<Impl>(rows_);
}

RegBayesEstimator::~RegBayesEstimator() = default;

std::shared_ptr<const RegBayesEstimator> RegBayesEstimator::with_method(
    special::DensityMethod method) const {
  return std::make_shared<const RegBayesEstimator>(problem_, rows_, method);
}

Eigen::VectorXd RegBayesEstimator::predict(const SufficientStats& s) const {
  const int d = problem_.d;
  if (s.xtx.rows() != d || s.xtx.cols() != d || s.xty.size() != d) {
    throw ConfigError("regression: statistics do not match d");
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s.xtx);
  if (eig.info() != Eigen::Success) {
    throw NumericalError("regression: eigendecomposition of X'X failed");
  }
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  if (!(lambda.minCoeff() > 1e-12 * std::max(1.0, lambda.maxCoeff()))) {
    throw NumericalError("regression: X'X is singular");
  }
  const Eigen::MatrixXd& u = eig.eigenvectors();
  const Eigen::VectorXd z = u.transpose() * s.xty;

  const auto& active = impl_->weights.active();
  const std::size_t m = rows_.support.size();
  std::vector<double> log_w(m, 0.0);
  std::vector<double> coef(m, 0.0);
  std::vector<std::optional<special::FisherBingham>> shells(m);
  for (const auto j : active) {
    const double b = rows_.support[j][0];
    if (b == 0.0) {
      log_w[j] = log_sphere_area(d);
      continue;
    }
    special::FBParams fb{std::vector<double>(d), std::vector<double>(d)};
    for (int i = 0; i < d; ++i) {
      fb.a[i] = 0.5 * b * b * lambda[i];
      fb.gamma[i] = b * z[i];
    }
    shells[j].emplace(std::move(fb), method_);
    log_w[j] = shells[j]->log_c();
  }
  impl_->weights.coefficients(log_w, coef);

  // Shells whose weight cannot move the result skip the costlier mean.
  constexpr double kNegligible = 1e-17;
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(d);
  for (const auto j : active) {
    const double b = rows_.support[j][0];
    if (b == 0.0 || coef[j] < kNegligible) continue;
    const std::vector<double> mean = shells[j]->mean();
    for (int i = 0; i < d; ++i) acc[i] += coef[j] * b * mean[i];
  }
  return u * acc;
}

std::shared_ptr<const RegBayesEstimator> reg_min_oracle(
    const RegressionProblem& p, PriorRows rows,
    special::DensityMethod method) {
  return std::make_shared<const RegBayesEstimator>(p, std::move(rows), method);
}

std::shared_ptr<const RegEstimator> ols_estimator(const RegressionProblem& p) {
  validate(p);
  return std::make_shared<const Ols>(p);
}

std::shared_ptr<const RegEstimator> ridge_estimator(const RegressionProblem& p,
                                                    double lambda) {
  validate(p);
  if (!(lambda >= 0.0)) throw ConfigError("ridge: lambda must be >= 0");
  return std::make_shared<const Ridge>(lambda);
}

std::vector<double> ridge_lambda_grid() {
  std::vector<double> grid(25);
  for (int i = 0; i < 25; ++i) grid[i] = std::pow(10.0, -3.0 + 5.0 * i / 24.0);
  return grid;
}

RiskEstimate reg_risk_mc(const RegressionProblem& p, const RegEstimator& est,
                         const ReducedPoint& b, int n_datasets,
                         CounterRng& stream) {
  if (n_datasets < 1) throw ConfigError("reg_risk_mc: need n_datasets >= 1");
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(p.d);
  theta[0] = b[0];
  double mean = 0.0;
  double m2 = 0.0;
  for (int s = 0; s < n_datasets; ++s) {
    const Dataset data = draw_dataset(p, theta, stream);
    const double loss = (est.predict(sufficient_stats(data)) - theta).squaredNorm();
    const double delta = loss - mean;
    mean += delta / (s + 1);
    m2 += delta * (loss - mean);
  }
  const double var = n_datasets > 1 ? m2 / (n_datasets - 1) : 0.0;
  return {mean, std::sqrt(var / n_datasets)};
}

RegressionGame::RegressionGame(const RegressionProblem& p,
                               special::DensityMethod method)
    : problem_(p), method_(method) {
  validate(problem_);
}

double RegressionGame::default_eta(int iters) const {
  const double b = problem_.radius;
  return 1.0 / (b * (b * std::sqrt(static_cast<double>(problem_.n)) + 1.0) *
                std::sqrt(static_cast<double>(iters)));
}

std::shared_ptr<const Responder> RegressionGame::respond(PriorRows rows) const {
  return reg_min_oracle(problem_, std::move(rows), method_);
}

RiskEstimate RegressionGame::risk(const Responder& est, const ReducedPoint& b,
                                  int n, CounterRng& stream) const {
  const auto* r = dynamic_cast<const RegEstimator*>(&est);
  if (r == nullptr) {
    throw ConfigError("estimator does not belong to a regression game");
  }
  return reg_risk_mc(problem_, *r, b, n, stream);
}

}  // namespace minimax
