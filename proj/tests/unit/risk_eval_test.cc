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

#include <cmath>
#include <memory>
#include <numeric>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "minimax/gsm.h"
#include "minimax/regression.h"
#include "minimax/risk_eval.h"
#include "oracle_values.h"

namespace minimax {
namespace {

Eigen::VectorXd predict(const Responder& r, const Eigen::VectorXd& x) {
  const auto& est = dynamic_cast<const GsmEstimator&>(r);
  Eigen::VectorXd out(x.size());
  est.predict({x.data(), static_cast<std::size_t>(x.size())},
              {out.data(), static_cast<std::size_t>(out.size())});
  return out;
}

GameConfig small_config(double radius, int iters) {
  GameConfig cfg;
  cfg.radius = radius;
  cfg.iters = iters;
  cfg.n_risk = 200;
  cfg.n_prior = 100;
  cfg.seed = 23;
  return cfg;
}

TEST(AveragedEstimator, SingleIterateIsThatIterate) {
  const GsmGame game({4, 4, 2.0});
  const FtplSolution sol = solve(game, small_config(2.0, 1));
  const auto avg = averaged_estimator(game, sol);
  Eigen::VectorXd x(4);
  x << 0.4, -1.1, 2.0, 0.3;
  EXPECT_EQ(predict(*avg, x), predict(*sol.log.estimators[0], x));
}

TEST(AveragedEstimator, IsMeanOfIteratePredictions) {
  const GsmGame game({4, 4, 2.0});
  GameConfig cfg = small_config(2.0, 8);
  cfg.eta = 1.0;
  const FtplSolution sol = solve(game, cfg);
  const auto avg = averaged_estimator(game, sol);
  Eigen::VectorXd x(4);
  x << 0.4, -1.1, 2.0, 0.3;
  Eigen::VectorXd want = Eigen::VectorXd::Zero(4);
  for (const auto& e : sol.log.estimators) want += predict(*e, x);
  want /= static_cast<double>(sol.log.estimators.size());
  EXPECT_LT((predict(*avg, x) - want).norm(), 1e-14);
}

TEST(AveragedEstimator, RegressionIsMeanOfIteratePredictions) {
  const RegressionProblem p{8, 3, 1.0};
  const RegressionGame game(p, special::DensityMethod::kSaddlepoint);
  GameConfig cfg = small_config(1.0, 4);
  cfg.n_risk = 20;
  cfg.eta = 2.0;
  const FtplSolution sol = solve(game, cfg);
  const auto avg = averaged_estimator(game, sol);
  CounterRng rng(1, StreamTag::kTest);
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(3);
  theta[0] = 0.6;
  const auto s = sufficient_stats(draw_dataset(p, theta, rng));
  Eigen::VectorXd want = Eigen::VectorXd::Zero(3);
  for (const auto& e : sol.log.estimators) {
    want += dynamic_cast<const RegEstimator&>(*e).predict(s);
  }
  want /= static_cast<double>(sol.log.estimators.size());
  const Eigen::VectorXd got =
      dynamic_cast<const RegEstimator&>(*avg).predict(s);
  EXPECT_LT((got - want).norm(), 1e-12);
}

TEST(WorstCaseScan, StandardEstimatorUsesExactRisk) {
  const GsmGame game({30, 30, std::sqrt(30.0)});
  const auto est = gsm_baseline(GsmBaseline::kStandard, game.problem());
  const ScanResult r = worst_case_scan(game, *est, {0.0, 100, 1, 1});
  EXPECT_EQ(r.points.size(), 21u);
  EXPECT_EQ(r.worst_risk(), 30.0);
  EXPECT_EQ(r.worst_stderr(), 0.0);
  EXPECT_TRUE(r.points[0].exact);
}

TEST(WorstCaseScan, ZeroEstimatorPeaksAtRadius) {
  const GsmGame game({5, 5, 1.5});
  const auto zero = gsm_min_oracle(game.problem(),
                                   PriorRows::point_mass({0.0, 0.0}));
  const ScanResult r = worst_case_scan(game, *zero, {0.0, 50, 1, 1});
  EXPECT_EQ(r.worst_point()[0], 1.5);
  EXPECT_DOUBLE_EQ(r.worst_risk(), 2.25);
}

TEST(WorstCaseScan, JamesSteinTenDimensions) {
  const GsmGame game({10, 10, std::sqrt(10.0)});
  const auto js = gsm_baseline(GsmBaseline::kJamesStein, game.problem());
  const ScanResult r = worst_case_scan(game, *js, {0.0, 50000, 3, 1});
  EXPECT_NEAR(r.worst_risk(), oracle::kJamesSteinRiskD10AtSqrt10,
              4 * r.worst_stderr());
}

TEST(WorstCaseScan, ThreadCountDoesNotChangeResults) {
  const GsmGame game({6, 6, 2.0});
  const auto bb = gsm_baseline(GsmBaseline::kBoundaryBayes, game.problem());
  const ScanResult a = worst_case_scan(game, *bb, {0.0, 500, 4, 1});
  const ScanResult b = worst_case_scan(game, *bb, {0.0, 500, 4, 3});
  for (std::size_t j = 0; j < a.points.size(); ++j) {
    EXPECT_EQ(a.points[j].risk, b.points[j].risk);
  }
}

class FlatResponder : public Responder {};

// Every estimator has risk 1 everywhere.
class FlatGame : public ReducedGame {
 public:
  int dim_reduced() const override { return 1; }
  double radius() const override { return 1.0; }
  double default_eta(int) const override { return 1.0; }
  std::shared_ptr<const Responder> respond(PriorRows) const override {
    return std::make_shared<FlatResponder>();
  }
  RiskEstimate risk(const Responder&, const ReducedPoint&, int n,
                    CounterRng& stream) const override {
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += 1.0 + 0.0 * stream.normal();
    return {sum / n, 0.0};
  }
};

TEST(Certify, ConstantRiskHasNoGap) {
  FlatGame game;
  const FtplSolution sol = solve(game, small_config(1.0, 5));
  const Certificate c = certify(game, sol, {0.0, 100, 2, 1});
  EXPECT_DOUBLE_EQ(c.duality_gap, 0.0);
  EXPECT_TRUE(c.weak_duality_holds());
}

TEST(Certify, WeakDualityAndExport) {
  const GsmGame game({3, 3, 1.5});
  const FtplSolution sol = solve(game, small_config(1.5, 20));
  const Certificate c = certify(game, sol, {0.0, 2000, 5, 1});
  EXPECT_TRUE(c.weak_duality_holds());
  EXPECT_GT(c.gap_stderr, 0.0);
  EXPECT_NEAR(c.duality_gap,
              c.averaged.worst_risk() - c.bayes_avg_prior.risk, 1e-15);
  const double total = std::accumulate(c.lfp.mass.begin(), c.lfp.mass.end(), 0.0);
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Certify, DeskScaleGapInThirtyDimensions) {
  const double radius = 1.5 * std::sqrt(30.0);
  const GsmGame game({30, 30, radius});
  GameConfig cfg;
  cfg.radius = radius;
  cfg.iters = 100;
  cfg.seed = 1;
  const FtplSolution sol = solve(game, cfg);
  const Certificate c = certify(game, sol, {0.0, 10000, 1, 1});
  EXPECT_LT(c.duality_gap, 0.5);
  EXPECT_TRUE(c.weak_duality_holds());
}

TEST(Certify, BayesRiskOfPointMass) {
  const GsmGame game({4, 4, 2.0});
  const auto zero = gsm_min_oracle(game.problem(),
                                   PriorRows::point_mass({0.0, 0.0}));
  const BayesRisk r =
      bayes_risk(game, *zero, PriorRows::point_mass({2.0, 0.0}), {0.0, 10, 1, 1});
  EXPECT_DOUBLE_EQ(r.risk, 4.0);
}

TEST(LfpExport, PointMassAtBoundary) {
  const auto grid = make_grid(1, 2.0, 0.5);
  std::vector<double> prior(grid.size(), 0.0);
  prior.back() = 1.0;
  const LfpRadial lfp = lfp_export(grid, prior);
  ASSERT_EQ(lfp.point.size(), 1u);
  EXPECT_EQ(lfp.point[0][0], 2.0);
  EXPECT_EQ(lfp.mass[0], 1.0);
}

TEST(LfpExport, OneDimensionalSmallRadiusSitsNearBoundary) {
  const GsmGame game({1, 1, 1.0});
  GameConfig cfg = small_config(1.0, 60);
  const FtplSolution sol = solve(game, cfg);
  const LfpRadial lfp = lfp_export(sol.grid, sol.average_prior);
  double near_boundary = 0.0;
  for (std::size_t i = 0; i < lfp.point.size(); ++i) {
    if (lfp.point[i][0] >= 0.8) near_boundary += lfp.mass[i];
  }
  EXPECT_GT(near_boundary, 0.8);
}

TEST(BestRidge, PicksTheSmallestWorstCase) {
  const RegressionGame game({10, 5, 0.5 * std::sqrt(5.0)},
                            special::DensityMethod::kImhof);
  const RidgeChoice choice = best_ridge(game, {0.25 * game.radius(), 400, 6, 1});
  ASSERT_EQ(choice.worst.size(), 25u);
  for (double w : choice.worst) EXPECT_GE(w, choice.worst[choice.best]);
  EXPECT_EQ(choice.scan.worst_risk(), choice.worst[choice.best]);
  EXPECT_GT(choice.lambda(), 0.1);
}

}  // namespace
}  // namespace minimax
