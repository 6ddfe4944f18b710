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
#include <limits>
#include <numbers>
#include <optional>

#include "minimax/error.h"
#include "minimax/special.h"

namespace minimax::special {
namespace {

constexpr double kSeriesTol = 1e-17;
constexpr int kMaxSeriesTerms = 2000;
constexpr int kMaxHankelTerms = 80;
constexpr int kMaxCfTerms = 200000;

// Power series in q = x^2/4. Valid for nu > -1 and any x, used where the
// number of terms stays small. All terms are positive.
BesselPair series(double nu, double x) {
  const double q = 0.25 * x * x;
  double term = 1.0;
  double sum0 = 1.0;
  double sum1 = 1.0 / (nu + 1.0);
  for (int k = 0; k < kMaxSeriesTerms; ++k) {
    term *= q / ((k + 1.0) * (k + 1.0 + nu));
    sum0 += term;
    sum1 += term / (k + 2.0 + nu);
    if (term < kSeriesTol * sum0) break;
  }
  return {std::log(sum0) - std::lgamma(nu + 1.0), 0.5 * x * sum1 / sum0};
}

bool use_series(double nu, double x) {
  return x <= 30.0 || 0.25 * x * x <= 25.0 * (nu + 2.0);
}

// Large-argument expansion: sqrt(2 pi x) e^{-x} I_nu(x) = sum (-1)^k a_k / x^k.
// Returns nothing when the asymptotic series does not settle to full
// precision before its terms start growing, or when it cancels badly.
std::optional<double> hankel_sum(double nu, double x) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0;
  double sum = 1.0;
  double largest = 1.0;
  for (int k = 1; k < kMaxHankelTerms; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = -term * (mu - odd * odd) / (8.0 * k * x);
    if (std::abs(next) > std::abs(term) && k > nu + 1.0) return std::nullopt;
    term = next;
    sum += term;
    largest = std::max(largest, std::abs(term));
    if (std::abs(term) <= kSeriesTol * std::abs(sum)) {
      if (largest > 1e3 * std::abs(sum)) return std::nullopt;
      return sum;
    }
  }
  return std::nullopt;
}

// I_{nu+1}(x) / I_nu(x) by the Gauss continued fraction, modified Lentz.
double ratio_cf(double nu, double x) {
  constexpr double kTiny = 1e-300;
  double f = kTiny;
  double c = f;
  double d = 0.0;
  for (int j = 1; j < kMaxCfTerms; ++j) {
    const double b = 2.0 * (nu + j) / x;
    d = b + d;
    if (d == 0.0) d = kTiny;
    c = b + 1.0 / c;
    if (c == 0.0) c = kTiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) return f;
  }
  throw NumericalError("bessel_ratio: continued fraction did not converge");
}

double log_hankel_prefactor(double x) {
  return x - 0.5 * std::log(2.0 * std::numbers::pi * x);
}

// ln I_nu(x) for large x where the direct asymptotic series fails (nu large
// compared to sqrt(x)): the continued fraction fixes I_{nu+1}/I_nu, backward
// recurrence carries it down to order mu = nu - floor(nu) < 1, and mu is
// normalized by its own asymptotic series, which converges for x > 30.
double log_bessel_recurrence(double nu, double x) {
  const double n = std::floor(nu);
  const double mu = nu - n;
  double upper = ratio_cf(nu, x);
  double current = 1.0;
  double log_scale = 0.0;
  constexpr double kBig = 1e250;
  for (double j = n; j >= 1.0; j -= 1.0) {
    const double m = mu + j;
    const double lower = (2.0 * m / x) * current + upper;
    upper = current;
    current = lower;
    if (current > kBig) {
      current /= kBig;
      upper /= kBig;
      log_scale += std::log(kBig);
    }
  }
  const auto base = hankel_sum(mu, x);
  if (!base) throw NumericalError("log_bessel_i: recurrence base failed");
  return log_hankel_prefactor(x) + std::log(*base) - std::log(current) -
         log_scale;
}

}  // namespace

BesselPair bessel_pair(double nu, double x) {
  if (!(nu > -1.0) || !(x >= 0.0) || std::isnan(x)) {
    throw ConfigError("bessel_pair: need nu > -1 and x >= 0");
  }
  if (x == 0.0) return {-std::lgamma(nu + 1.0), 0.0};
  if (use_series(nu, x)) return series(nu, x);
  const double log_half = std::log(0.5 * x);
  const auto s0 = hankel_sum(nu, x);
  const auto s1 = s0 ? hankel_sum(nu + 1.0, x) : std::nullopt;
  if (s0 && s1) {
    return {log_hankel_prefactor(x) + std::log(*s0) - nu * log_half,
            *s1 / *s0};
  }
  return {log_bessel_recurrence(nu, x) - nu * log_half, ratio_cf(nu, x)};
}

double log_bessel_i(double nu, double x) {
  if (!(nu >= 0.0) || !(x >= 0.0)) {
    throw ConfigError("log_bessel_i: order and argument must be non-negative");
  }
  if (x == 0.0) {
    return nu == 0.0 ? 0.0 : -std::numeric_limits<double>::infinity();
  }
  if (std::isinf(x)) return x;
  if (use_series(nu, x)) return nu * std::log(0.5 * x) + series(nu, x).log_i_over_power;
  if (const auto s = hankel_sum(nu, x)) {
    return log_hankel_prefactor(x) + std::log(*s);
  }
  return log_bessel_recurrence(nu, x);
}

double log_bessel_i_over_power(double nu, double x) {
  return bessel_pair(nu, x).log_i_over_power;
}

double bessel_ratio(double half_dim, double gamma) {
  if (!(half_dim > 0.0) || !(gamma >= 0.0)) {
    throw ConfigError("bessel_ratio: need half_dim > 0 and gamma >= 0");
  }
  if (gamma == 0.0) return 0.0;
  if (std::isinf(gamma)) return 1.0;
  // I_{1/2} / I_{-1/2}; the series jitters by an ulp around 1 here.
  if (half_dim == 0.5) return std::tanh(gamma);
  const double nu = half_dim - 1.0;
  if (use_series(nu, gamma)) return series(nu, gamma).ratio;
  const auto s0 = hankel_sum(nu, gamma);
  const auto s1 = s0 ? hankel_sum(nu + 1.0, gamma) : std::nullopt;
  if (s0 && s1) return *s1 / *s0;
  return ratio_cf(nu, gamma);
}

double log_vmf_surface_integral(int d, double kappa) {
  if (d < 2) throw ConfigError("log_vmf_surface_integral: need d >= 2");
  if (!(kappa >= 0.0)) throw ConfigError("log_vmf_surface_integral: kappa < 0");
  const double nu = 0.5 * d - 1.0;
  return 0.5 * d * std::log(2.0 * std::numbers::pi) - nu * std::numbers::ln2 +
         log_bessel_i_over_power(nu, kappa);
}

}  // namespace minimax::special
