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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "minimax/error.h"
#include "minimax/rng.h"
#include "minimax/special.h"
#include "oracle_values.h"

namespace minimax::special {
namespace {

constexpr double kPi = std::numbers::pi;

struct BesselRow {
  double nu, x, log_i, ratio;
};

constexpr BesselRow kBesselTable[] = {
#include "bessel_reference.inc"
};

TEST(Bessel, MatchesHighPrecisionTable) {
  for (const auto& row : kBesselTable) {
    SCOPED_TRACE(testing::Message() << "nu=" << row.nu << " x=" << row.x);
    EXPECT_NEAR(log_bessel_i(row.nu, row.x), row.log_i, 1e-10);
    const double r = bessel_ratio(row.nu + 1.0, row.x);
    EXPECT_NEAR(r / row.ratio, 1.0, 1e-10);
    const BesselPair pair = bessel_pair(row.nu, row.x);
    EXPECT_NEAR(pair.ratio / row.ratio, 1.0, 1e-10);
    EXPECT_NEAR(pair.log_i_over_power + row.nu * std::log(0.5 * row.x),
                row.log_i, 1e-10);
  }
}

TEST(Bessel, SmallArgumentExamples) {
  EXPECT_NEAR(log_bessel_i(0.5, 1.0),
              std::log(std::sqrt(2.0 / kPi) * std::sinh(1.0)), 1e-14);
  EXPECT_EQ(log_bessel_i(3.0, 0.0), -std::numeric_limits<double>::infinity());
  EXPECT_EQ(log_bessel_i(0.0, 0.0), 0.0);
  EXPECT_THROW(log_bessel_i(-1.0, 1.0), ConfigError);
  EXPECT_THROW(log_bessel_i(1.0, -1.0), ConfigError);
}

// I_{3/2}/I_{1/2} and I_{5/2}/I_{3/2} in long double.
long double half_integer_ratio(int d, long double g) {
  const long double t = 1.0L / std::tanh(g);
  if (d == 3) return t - 1.0L / g;
  const long double i32 = t - 1.0L / g;               // scaled by sinh
  const long double i52 = (3.0L / (g * g) + 1.0L) - 3.0L * t / g;
  return i52 / i32;
}

TEST(Bessel, RatioMatchesHalfIntegerClosedForms) {
  int checked = 0;
  for (int d : {3, 5}) {
    const double lo = d == 3 ? 1e-2 : 0.1;
    for (int i = 0; i < 500; ++i) {
      const double g = lo * std::pow(500.0 / lo, i / 499.0);
      const double want = static_cast<double>(half_integer_ratio(d, g));
      EXPECT_NEAR(bessel_ratio(0.5 * d, g) / want, 1.0, 1e-10)
          << "d=" << d << " gamma=" << g;
      ++checked;
    }
  }
  EXPECT_EQ(checked, 1000);
  EXPECT_NEAR(bessel_ratio(1.5, 1.0), 0.31304, 1e-5);
  EXPECT_NEAR(bessel_ratio(1.5, 50.0), 1.0 / std::tanh(50.0) - 1.0 / 50.0,
              1e-15);
  EXPECT_EQ(bessel_ratio(2.0, 0.0), 0.0);
}

TEST(Bessel, RatioIsMonotone) {
  for (double half_dim : {0.5, 1.0, 2.5, 5.0, 15.0, 50.0}) {
    double prev = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double g = 1e-3 * std::pow(1e7, i / 999.0);
      const double r = bessel_ratio(half_dim, g);
      ASSERT_GE(r, prev) << "half_dim=" << half_dim << " gamma=" << g;
      ASSERT_LT(r, 1.0 + 1e-15);
      prev = r;
    }
  }
}

TEST(VmfSurface, Examples) {
  EXPECT_NEAR(log_vmf_surface_integral(3, 0.0), std::log(4.0 * kPi), 1e-14);
  EXPECT_NEAR(log_vmf_surface_integral(2, 1.0), oracle::kLogVmfD2Kappa1,
              1e-13);
  EXPECT_NEAR(log_vmf_surface_integral(3, 1.0),
              std::log(4.0 * kPi * std::sinh(1.0)), 1e-13);
  EXPECT_NEAR(log_vmf_surface_integral(7, 1e-9),
              log_vmf_surface_integral(7, 0.0), 1e-12);
  EXPECT_THROW(log_vmf_surface_integral(1, 1.0), ConfigError);
}

FBParams isotropic(int d, double a) {
  return {std::vector<double>(d, a), std::vector<double>(d, 0.0)};
}

TEST(Imhof, ChiSquareClosedForms) {
  const double e = std::exp(-0.5);
  EXPECT_NEAR(imhof_density_at_one(isotropic(2, 0.5)), e / 2.0, 1e-8);
  EXPECT_NEAR(imhof_density_at_one(isotropic(4, 0.5)), e / 4.0, 1e-8);
  EXPECT_NEAR(imhof_density_at_one(isotropic(6, 0.5)), e / 16.0, 1e-8);
}

TEST(Imhof, RejectsBadParameters) {
  EXPECT_THROW(imhof_density_at_one({{1.0, 0.0}, {0.0, 0.0}}), ConfigError);
  EXPECT_THROW(imhof_density_at_one({{1.0}, {0.0, 0.0}}), ConfigError);
  EXPECT_THROW(saddlepoint_density_at_one(isotropic(3, 1.0), 3), ConfigError);
}

// The density of sum z_i^2 with z_i ~ N(gamma_i / 2a_i, 1 / 2a_i) at 1,
// estimated from the fraction of draws within a narrow window.
TEST(Imhof, AgreesWithMonteCarloInFiveDimensions) {
  const FBParams p{{0.4, 0.7, 1.1, 1.6, 2.3}, {0.5, -0.8, 0.3, 1.2, -0.4}};
  CounterRng rng(42, StreamTag::kTest);
  constexpr int kDraws = 4'000'000;
  constexpr double kHalfWidth = 0.01;
  long hits = 0;
  for (int n = 0; n < kDraws; ++n) {
    double q = 0.0;
    for (std::size_t i = 0; i < p.a.size(); ++i) {
      const double z = p.gamma[i] / (2 * p.a[i]) +
                       rng.normal() / std::sqrt(2 * p.a[i]);
      q += z * z;
    }
    hits += std::abs(q - 1.0) < kHalfWidth;
  }
  const double prob = static_cast<double>(hits) / kDraws;
  const double est = prob / (2 * kHalfWidth);
  const double sd = std::sqrt(prob * (1 - prob) / kDraws) / (2 * kHalfWidth);
  EXPECT_NEAR(imhof_density_at_one(p), est, 3 * sd);
}

TEST(FisherBingham, SphereAreaLimit) {
  EXPECT_NEAR(std::exp(log_fb_constant(isotropic(3, 1e-4))) / (4 * kPi), 1.0,
              1e-3);
  EXPECT_NEAR(log_fb_constant(isotropic(2, 1.0)), std::log(2 * kPi) - 1.0,
              1e-9);
}

void check_against_quadrature(const double* table, int rows, int d) {
  const int stride = 3 * d + 1;
  for (int r = 0; r < rows; ++r) {
    const double* row = table + r * stride;
    FBParams p{{row, row + d}, {row + d, row + 2 * d}};
    const double log_c = row[2 * d];
    SCOPED_TRACE(testing::Message() << "d=" << d << " row " << r);
    const FBMoments m = fb_moments(p);
    EXPECT_NEAR(m.log_c, log_c, 1e-6);
    double norm2 = 0.0;
    for (int i = 0; i < d; ++i) {
      EXPECT_NEAR(m.mean[i], row[2 * d + 1 + i], 1e-5);
      norm2 += m.mean[i] * m.mean[i];
    }
    EXPECT_LE(norm2, 1.0);
    const std::vector<double> grad = fb_gradient(p);
    for (int i = 0; i < d; ++i) {
      EXPECT_NEAR(grad[i] / std::exp(log_c), row[2 * d + 1 + i], 1e-5);
    }
  }
}

TEST(FisherBingham, MatchesCircleQuadrature) {
  check_against_quadrature(oracle::kFisherBingham2, 3, 2);
}

TEST(FisherBingham, MatchesSphereQuadrature) {
  check_against_quadrature(oracle::kFisherBingham3, 3, 3);
}

TEST(FisherBingham, GradientVanishesAtZeroGamma) {
  const FBParams p{{0.3, 1.7, 4.0, 0.9}, {0.0, 0.0, 0.0, 0.0}};
  for (double g : fb_gradient(p)) EXPECT_EQ(g, 0.0);
  for (double g : fb_gradient(p, DensityMethod::kSaddlepoint)) {
    EXPECT_EQ(g, 0.0);
  }
}

TEST(FisherBingham, CircleMeanIsVonMisesRatio) {
  for (double kappa : {0.1, 1.0, 4.0, 25.0}) {
    const FBMoments m = fb_moments({{1.0, 1.0}, {kappa, 0.0}});
    EXPECT_NEAR(m.mean[0], bessel_ratio(1.0, kappa), 1e-9) << kappa;
    EXPECT_NEAR(m.mean[1], 0.0, 1e-12);
  }
}

TEST(Saddlepoint, ChiSquareFour) {
  EXPECT_NEAR(saddlepoint_density_at_one(isotropic(4, 0.5), 2) / 0.15163, 1.0,
              0.05);
}

FBParams random_instance(std::mt19937_64& gen) {
  std::uniform_int_distribution<int> dim(2, 10);
  std::uniform_real_distribution<double> a(0.1, 5.0);
  std::normal_distribution<double> g(0.0, 2.0);
  FBParams p;
  const int d = dim(gen);
  for (int i = 0; i < d; ++i) {
    p.a.push_back(a(gen));
    p.gamma.push_back(g(gen));
  }
  return p;
}

TEST(Saddlepoint, MedianErrorAgainstImhof) {
  std::mt19937_64 gen(2026);
  std::vector<double> err;
  for (int i = 0; i < 100; ++i) {
    const FBParams p = random_instance(gen);
    const double exact = imhof_density_at_one(p);
    err.push_back(std::abs(saddlepoint_density_at_one(p, 2) / exact - 1.0));
  }
  std::nth_element(err.begin(), err.begin() + 50, err.end());
  EXPECT_LT(err[50], 0.02);
}

TEST(Saddlepoint, SolverResidual) {
  std::mt19937_64 gen(7);
  for (int i = 0; i < 100; ++i) {
    const FBParams p = random_instance(gen);
    EXPECT_LE(std::abs(solve_saddlepoint(p).K1 - 1.0), 1e-10);
  }
}

// The fast path mean is the exact gradient of the saddlepoint log constant.
TEST(Saddlepoint, MeanIsGradientOfLogConstant) {
  std::mt19937_64 gen(11);
  for (int i = 0; i < 20; ++i) {
    FBParams p = random_instance(gen);
    const FBMoments m = fb_moments(p, DensityMethod::kSaddlepoint);
    for (std::size_t k = 0; k < p.a.size(); ++k) {
      const double h = 1e-5;
      FBParams up = p, dn = p;
      up.gamma[k] += h;
      dn.gamma[k] -= h;
      const double fd = (log_fb_constant(up, DensityMethod::kSaddlepoint) -
                         log_fb_constant(dn, DensityMethod::kSaddlepoint)) /
                        (2 * h);
      EXPECT_NEAR(m.mean[k], fd, 1e-7);
    }
  }
}

}  // namespace
}  // namespace minimax::special
