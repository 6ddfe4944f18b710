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

#include "minimax/gsm.h"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/tools/minima.hpp>

#include "minimax/error.h"
#include "minimax/special.h"
#include "mixture.h"

namespace minimax {
namespace {

// ln of the sphere integral of exp(kappa <u, Z>) up to a factor depending
// only on dim, and the matching shrinkage ratio.
struct Shell {
  double log_s;
  double ratio;
};

Shell shell(int dim, double kappa) {
  if (dim == 1) {
    return {kappa + std::log1p(std::exp(-2.0 * kappa)), std::tanh(kappa)};
  }
  const auto pair = special::bessel_pair(0.5 * dim - 1.0, kappa);
  return {pair.log_i_over_power, pair.ratio};
}

double norm(std::span<const double> v) {
  double s = 0.0;
  for (const double x : v) s += x * x;
  return std::sqrt(s);
}

void scale_into(std::span<const double> x, double r, double s,
                std::span<double> out) {
  if (r == 0.0) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  const double f = s / r;
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = f * x[i];
}

class Standard : public GsmEstimator {
 public:
  explicit Standard(int k) : k_(k) {}
  void predict(std::span<const double> x,
               std::span<double> out) const override {
    std::copy(x.begin(), x.end(), out.begin());
  }
  bool exact_risk(const ReducedPoint&, double* risk) const override {
    *risk = k_;
    return true;
  }

 private:
  int k_;
};

class JamesStein : public GsmEstimator {
 public:
  explicit JamesStein(int d) : c_(d - 3.0) {}
  void predict(std::span<const double> x,
               std::span<double> out) const override {
    const double r2 = std::pow(norm(x), 2);
    const double f = r2 > 0.0 ? std::max(0.0, 1.0 - c_ / r2) : 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = f * x[i];
  }

 private:
  double c_;
};

class Projection : public GsmEstimator {
 public:
  explicit Projection(double radius) : radius_(radius) {}
  void predict(std::span<const double> x,
               std::span<double> out) const override {
    const double r = norm(x);
    scale_into(x, r, std::min(r, radius_), out);
  }

 private:
  double radius_;
};

class BestLinear : public GsmEstimator {
 public:
  explicit BestLinear(double radius) : c_(best_linear_coefficient(radius)) {}
  void predict(std::span<const double> x,
               std::span<double> out) const override {
    std::fill(out.begin(), out.end(), 0.0);
    out[0] = c_ * x[0];
  }
  bool exact_risk(const ReducedPoint& b, double* risk) const override {
    *risk = c_ * c_ + (1.0 - c_) * (1.0 - c_) * b[0] * b[0];
    return true;
  }

 private:
  double c_;
};

}  // namespace

void validate(const GsmProblem& p) {
  if (p.d < 1) throw ConfigError("gsm: d must be >= 1");
  if (p.k < 1 || p.k > p.d) throw ConfigError("gsm: k must lie in [1, d]");
  if (!(p.radius > 0.0) || !std::isfinite(p.radius)) {
    throw ConfigError("gsm: radius must be positive");
  }
}

std::vector<double> gsm_theta(const GsmProblem& p, const ReducedPoint& b) {
  std::vector<double> theta(p.d, 0.0);
  theta[0] = b[0];
  if (!p.full_loss()) theta[p.k] = b[1];
  return theta;
}

struct GsmBayesEstimator::Impl {
  explicit Impl(const PriorRows& rows) : weights(rows) {}
  detail::MixtureWeights weights;
};

GsmBayesEstimator::GsmBayesEstimator(const GsmProblem& p, PriorRows rows)
    : problem_(p), rows_(std::move(rows)) {
  validate(problem_);
  for (const auto& b : rows_.support) {
    const double r2 = b[0] * b[0] + b[1] * b[1];
    if (b[0] < 0.0 || b[1] < 0.0 ||
        r2 > problem_.radius * problem_.radius * (1.0 + 1e-12) ||
        (problem_.full_loss() && b[1] != 0.0)) {
      throw ConfigError("gsm: prior support outside the reduced domain");
    }
  }
  impl_ = std::make_unique<Impl>(rows_);
}

GsmBayesEstimator::~GsmBayesEstimator() = default;

void GsmBayesEstimator::predict(std::span<const double> x,
                                std::span<double> out) const {
  const int d = problem_.d;
  const int k = problem_.k;
  const auto& active = impl_->weights.active();
  const std::size_t m = rows_.support.size();
  thread_local std::vector<double> log_w, coef, s1, s2;
  log_w.resize(m);
  coef.resize(m);
  s1.resize(m);
  s2.resize(m);

  if (problem_.full_loss()) {
    const double r = norm(x);
    if (r == 0.0) {
      std::fill(out.begin(), out.end(), 0.0);
      return;
    }
    for (const auto j : active) {
      const double b = rows_.support[j][0];
      const Shell sh = shell(d, b * r);
      log_w[j] = -0.5 * b * b + sh.log_s;
      s1[j] = b * sh.ratio;
    }
    impl_->weights.coefficients(log_w, coef);
    double s = 0.0;
    for (const auto j : active) s += coef[j] * s1[j];
    scale_into(x, r, s, out);
    return;
  }

  const auto x1 = x.subspan(0, k);
  const auto x2 = x.subspan(k);
  const double r1 = norm(x1);
  const double r2 = norm(x2);
  for (const auto j : active) {
    const double b1 = rows_.support[j][0];
    const double b2 = rows_.support[j][1];
    const Shell h1 = shell(k, b1 * r1);
    const Shell h2 = shell(d - k, b2 * r2);
    log_w[j] = -0.5 * (b1 * b1 + b2 * b2) + h1.log_s + h2.log_s;
    s1[j] = b1 * h1.ratio;
    s2[j] = b2 * h2.ratio;
  }
  impl_->weights.coefficients(log_w, coef);
  double a1 = 0.0;
  double a2 = 0.0;
  for (const auto j : active) {
    a1 += coef[j] * s1[j];
    a2 += coef[j] * s2[j];
  }
  scale_into(x1, r1, a1, out.subspan(0, k));
  scale_into(x2, r2, a2, out.subspan(k));
}

std::shared_ptr<const GsmBayesEstimator> gsm_min_oracle(const GsmProblem& p,
                                                        PriorRows rows) {
  return std::make_shared<const GsmBayesEstimator>(p, std::move(rows));
}

GsmBaseline gsm_baseline_from_name(std::string_view name) {
  std::string s(name);
  std::replace(s.begin(), s.end(), '_', '-');
  if (s == "standard") return GsmBaseline::kStandard;
  if (s == "james-stein") return GsmBaseline::kJamesStein;
  if (s == "projection") return GsmBaseline::kProjection;
  if (s == "boundary-bayes") return GsmBaseline::kBoundaryBayes;
  if (s == "best-linear") return GsmBaseline::kBestLinear;
  throw ConfigError("unknown gsm baseline: " + std::string(name));
}

std::shared_ptr<const GsmEstimator> gsm_baseline(GsmBaseline kind,
                                                 const GsmProblem& p) {
  validate(p);
  switch (kind) {
    case GsmBaseline::kStandard:
      return std::make_shared<const Standard>(p.k);
    case GsmBaseline::kJamesStein:
      if (p.d < 4) throw ConfigError("james-stein needs d >= 4");
      return std::make_shared<const JamesStein>(p.d);
    case GsmBaseline::kProjection:
      return std::make_shared<const Projection>(p.radius);
    case GsmBaseline::kBoundaryBayes:
      if (!p.full_loss()) throw ConfigError("boundary-bayes needs k == d");
      return gsm_min_oracle(p, PriorRows::point_mass({p.radius, 0.0}));
    case GsmBaseline::kBestLinear:
      if (p.k != 1) throw ConfigError("best-linear needs k == 1");
      return std::make_shared<const BestLinear>(p.radius);
  }
  throw ConfigError("unknown gsm baseline");
}

double best_linear_coefficient(double radius) {
  if (!(radius > 0.0)) throw ConfigError("best-linear: radius must be positive");
  // Worst case over |theta_1| <= B of E(c X_1 - theta_1)^2 sits at the edge.
  const auto worst = [radius](double c) {
    return c * c + (1.0 - c) * (1.0 - c) * radius * radius;
  };
  constexpr int kScan = 1000;
  int best = 0;
  for (int i = 1; i <= kScan; ++i) {
    if (worst(static_cast<double>(i) / kScan) <
        worst(static_cast<double>(best) / kScan)) {
      best = i;
    }
  }
  const double lo = std::max(0, best - 1) / static_cast<double>(kScan);
  const double hi = std::min(kScan, best + 1) / static_cast<double>(kScan);
  return boost::math::tools::brent_find_minima(worst, lo, hi, 52).first;
}

RiskEstimate gsm_risk_mc(const GsmProblem& p, const GsmEstimator& est,
                         const ReducedPoint& b, int n, CounterRng& stream) {
  if (n < 1) throw ConfigError("gsm_risk_mc: need n >= 1");
  const std::vector<double> theta = gsm_theta(p, b);
  std::vector<double> x(p.d);
  std::vector<double> out(p.d);
  double mean = 0.0;
  double m2 = 0.0;
  for (int s = 0; s < n; ++s) {
    for (int i = 0; i < p.d; ++i) x[i] = theta[i] + stream.normal();
    est.predict(x, out);
    double loss = 0.0;
    for (int i = 0; i < p.k; ++i) loss += (out[i] - theta[i]) * (out[i] - theta[i]);
    const double delta = loss - mean;
    mean += delta / (s + 1);
    m2 += delta * (loss - mean);
  }
  const double var = n > 1 ? m2 / (n - 1) : 0.0;
  return {mean, std::sqrt(var / n)};
}

GsmGame::GsmGame(const GsmProblem& p) : problem_(p) { validate(problem_); }

double GsmGame::default_eta(int iters) const {
  const double b = problem_.radius;
  return 1.0 / (b * (b + 1.0) * std::sqrt(static_cast<double>(iters)));
}

std::shared_ptr<const Responder> GsmGame::respond(PriorRows rows) const {
  return gsm_min_oracle(problem_, std::move(rows));
}

RiskEstimate GsmGame::risk(const Responder& est, const ReducedPoint& b, int n,
                           CounterRng& stream) const {
  const auto* g = dynamic_cast<const GsmEstimator*>(&est);
  if (g == nullptr) throw ConfigError("estimator does not belong to a gsm game");
  return gsm_risk_mc(problem_, *g, b, n, stream);
}

}  // namespace minimax
