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
#include <numbers>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "minimax/error.h"
#include "minimax/special.h"

namespace minimax::special {
namespace {

constexpr double kPi = std::numbers::pi;

void validate(const FBParams& p) {
  if (p.a.empty() || p.a.size() != p.gamma.size()) {
    throw ConfigError("Fisher-Bingham: a and gamma must be non-empty, same size");
  }
  for (size_t i = 0; i < p.a.size(); ++i) {
    if (!(p.a[i] > 0.0) || !std::isfinite(p.a[i]) ||
        !std::isfinite(p.gamma[i])) {
      throw ConfigError("Fisher-Bingham: need finite a_i > 0 and finite gamma");
    }
  }
}

struct Cumulants {
  double K, K1, K2, K3, K4;
};

// K(t) and derivatives for S = sum z_i^2, z_i ~ N(gamma_i/2a_i, 1/2a_i).
// With s = a - t: K^(j) = sum (j-1)!/2 s^-j + j!/4 gamma^2 s^-(j+1).
Cumulants cumulants(const FBParams& p, double t, int order) {
  Cumulants c{0, 0, 0, 0, 0};
  for (size_t i = 0; i < p.a.size(); ++i) {
    const double a = p.a[i];
    const double s = a - t;
    const double g2 = p.gamma[i] * p.gamma[i];
    const double inv = 1.0 / s;
    c.K += -0.5 * std::log1p(-t / a) + 0.25 * g2 * t / (a * s);
    c.K1 += 0.5 * inv + 0.25 * g2 * inv * inv;
    if (order >= 2) {
      const double inv2 = inv * inv;
      c.K2 += 0.5 * inv2 + 0.5 * g2 * inv2 * inv;
      c.K3 += inv2 * inv + 1.5 * g2 * inv2 * inv2;
      c.K4 += 3.0 * inv2 * inv2 + 6.0 * g2 * inv2 * inv2 * inv;
    }
  }
  return c;
}

// Phase and log-amplitude of the characteristic function of the tilted
// variable, already shifted by its mean 1.
struct Tilted {
  std::vector<double> lambda;  // 1 / 2a
  std::vector<double> delta2;  // gamma^2 / 2a

  Tilted(const std::vector<double>& a, const std::vector<double>& gamma) {
    lambda.resize(a.size());
    delta2.resize(a.size());
    for (size_t i = 0; i < a.size(); ++i) {
      lambda[i] = 0.5 / a[i];
      delta2[i] = gamma[i] * gamma[i] * lambda[i];
    }
  }

  double phase(double u) const {
    double z = -0.5 * u;
    for (size_t i = 0; i < lambda.size(); ++i) {
      const double x = lambda[i] * u;
      z += 0.5 * (std::atan(x) + delta2[i] * x / (1.0 + x * x));
    }
    return z;
  }

  double phase_slope(double u) const {
    double z = -0.5;
    for (size_t i = 0; i < lambda.size(); ++i) {
      const double x = lambda[i] * u;
      const double q = 1.0 / (1.0 + x * x);
      z += 0.5 * lambda[i] * (q + delta2[i] * (1.0 - x * x) * q * q);
    }
    return z;
  }

  double integrand(double u) const {
    double z = -0.5 * u;
    double log_rho = 0.0;
    for (size_t i = 0; i < lambda.size(); ++i) {
      const double x = lambda[i] * u;
      const double x2 = x * x;
      const double q = 1.0 / (1.0 + x2);
      z += 0.5 * (std::atan(x) + delta2[i] * x * q);
      log_rho += 0.25 * std::log1p(x2) + 0.5 * delta2[i] * x2 * q;
    }
    return std::cos(z) * std::exp(-log_rho);
  }
};

using Rule = boost::math::quadrature::gauss<double, 20>;

// Integration layout for the Imhof integral: half-periods of the phase,
// each cut into fixed Gauss-Legendre segments. Freezing the layout at the
// center point makes nearby evaluations (finite differences) a smooth
// function of the parameters.
struct Layout {
  std::vector<double> cuts;        // segment endpoints
  std::vector<int> panel_end;      // index into cuts where each panel ends
  bool extrapolate = true;
};

constexpr int kMaxPanels = 4000;
constexpr int kWynnWindow = 24;

// Wynn epsilon on the partial sums; returns the highest even-column entry.
double wynn(const std::vector<double>& sums) {
  const size_t n0 = sums.size() > kWynnWindow ? sums.size() - kWynnWindow : 0;
  std::vector<double> prev(sums.size() - n0, 0.0);
  std::vector<double> cur(sums.begin() + n0, sums.end());
  double best = cur.back();
  for (int col = 1; cur.size() > 1; ++col) {
    std::vector<double> next(cur.size() - 1);
    for (size_t j = 0; j + 1 < cur.size(); ++j) {
      const double diff = cur[j + 1] - cur[j];
      if (diff == 0.0) return col % 2 == 1 ? cur[j + 1] : best;
      next[j] = prev[j + 1] + 1.0 / diff;
    }
    prev.assign(cur.begin(), cur.end());
    cur = std::move(next);
    if (col % 2 == 0) best = cur.back();
  }
  return best;
}

// u > lo with phase(u) = target, given phase(lo) > target; phase decreases.
double solve_phase(const Tilted& f, double lo, double target) {
  double step = 2.0 * kPi;
  double hi = lo + step;
  while (f.phase(hi) > target) {
    lo = hi;
    step *= 2.0;
    hi = lo + step;
    if (!std::isfinite(hi)) throw NumericalError("Imhof: phase bracket failed");
  }
  double u = 0.5 * (lo + hi);
  for (int it = 0; it < 100; ++it) {
    const double g = f.phase(u) - target;
    if (g > 0.0) lo = u; else hi = u;
    const double slope = f.phase_slope(u);
    double next = slope < 0.0 ? u - g / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - u) <= 1e-14 * std::max(1.0, u)) return next;
    u = next;
  }
  return u;
}

double integrate_panel(const Tilted& f, double lo, double hi,
                       std::vector<double>& cuts, int depth) {
  const auto g = [&f](double u) { return f.integrand(u); };
  const double whole = Rule::integrate(g, lo, hi);
  const double mid = 0.5 * (lo + hi);
  const double left = Rule::integrate(g, lo, mid);
  const double right = Rule::integrate(g, mid, hi);
  if (depth >= 12 || std::abs(left + right - whole) <= 1e-15) {
    cuts.push_back(mid);
    cuts.push_back(hi);
    return left + right;
  }
  const double a = integrate_panel(f, lo, mid, cuts, depth + 1);
  return a + integrate_panel(f, mid, hi, cuts, depth + 1);
}

double build_and_integrate(const Tilted& f, Layout& layout) {
  layout.cuts = {0.0};
  layout.panel_end.clear();
  std::vector<double> sums;
  double total = 0.0;
  double lo = 0.0;
  double last_estimate = 0.0;
  int stable = 0;
  const double phase0 = f.phase(0.0);  // zero
  for (int m = 0; m < kMaxPanels; ++m) {
    const double target = phase0 - (m + 0.5) * kPi;
    const double hi = solve_phase(f, lo, target);
    const double piece = integrate_panel(f, lo, hi, layout.cuts, 0);
    layout.panel_end.push_back(static_cast<int>(layout.cuts.size()) - 1);
    total += piece;
    sums.push_back(total);
    lo = hi;
    if (m >= 2 && std::abs(piece) <= 1e-17) {
      layout.extrapolate = false;
      return total;
    }
    if (sums.size() >= 5) {
      const double estimate = wynn(sums);
      if (std::abs(estimate - last_estimate) <=
          1e-14 * std::max(std::abs(estimate), 1e-3)) {
        if (++stable >= 2) {
          layout.extrapolate = true;
          return estimate;
        }
      } else {
        stable = 0;
      }
      last_estimate = estimate;
    }
  }
  throw NumericalError("Imhof integral did not converge");
}

double integrate_with(const Tilted& f, const Layout& layout) {
  const auto g = [&f](double u) { return f.integrand(u); };
  std::vector<double> sums;
  sums.reserve(layout.panel_end.size());
  double total = 0.0;
  size_t k = 0;
  for (const int end : layout.panel_end) {
    for (; k + 1 <= static_cast<size_t>(end); ++k) {
      total += Rule::integrate(g, layout.cuts[k], layout.cuts[k + 1]);
    }
    sums.push_back(total);
  }
  return layout.extrapolate ? wynn(sums) : total;
}

// Density at one of the tilted variable (mean one), via Imhof.
double tilted_imhof(const std::vector<double>& a_t,
                    const std::vector<double>& gamma, Layout& layout,
                    bool build) {
  const Tilted f(a_t, gamma);
  const double integral =
      build ? build_and_integrate(f, layout) : integrate_with(f, layout);
  const double density = integral / (2.0 * kPi);
  if (!(density > 0.0) || !std::isfinite(density)) {
    throw NumericalError("Imhof density is not positive");
  }
  return density;
}

SaddleState solve_saddle(const FBParams& p, const double* start);

// ln f at one from a solved saddle point, for order 1 or 2.
double log_saddlepoint_at(const SaddleState& s, int order) {
  double log_f = -0.5 * std::log(2.0 * kPi * s.K2) + s.K - s.t_hat;
  if (order >= 2) {
    const double rho3 = s.K3 / std::pow(s.K2, 1.5);
    const double rho4 = s.K4 / (s.K2 * s.K2);
    log_f += std::log1p(rho4 / 8.0 - 5.0 * rho3 * rho3 / 24.0);
  }
  return log_f;
}

struct TiltedProblem {
  SaddleState saddle;
  std::vector<double> a_t;
  double log_gauss = 0.0;  // all of ln C except ln(tilted density at one)
};

TiltedProblem tilt(const FBParams& p) {
  TiltedProblem out;
  out.saddle = solve_saddle(p, nullptr);
  const size_t d = p.a.size();
  out.a_t.resize(d);
  double sum_log_a = 0.0;
  double quad = 0.0;
  for (size_t i = 0; i < d; ++i) {
    out.a_t[i] = p.a[i] - out.saddle.t_hat;
    sum_log_a += std::log(out.a_t[i]);
    quad += p.gamma[i] * p.gamma[i] / out.a_t[i];
  }
  out.log_gauss = -out.saddle.t_hat + std::numbers::ln2 +
                  0.5 * static_cast<double>(d) * std::log(kPi) -
                  0.5 * sum_log_a + 0.25 * quad;
  return out;
}

}  // namespace

struct FisherBingham::State {
  FBParams p;
  DensityMethod method;
  TiltedProblem tp;
  Layout layout;

  // ln of the tilted density at one for shifted gamma (same a, same tilt).
  double log_density(const std::vector<double>& gamma) {
    if (method == DensityMethod::kSaddlepoint) {
      const double t0 = 0.0;
      return log_saddlepoint_at(solve_saddle(FBParams{tp.a_t, gamma}, &t0), 2);
    }
    return std::log(tilted_imhof(tp.a_t, gamma, layout, false));
  }
};

namespace {

// Exact gamma-gradient of the order-2 saddlepoint log density of the tilted
// variable, whose saddle sits at t = 0 with s_i = a_t,i. There dK/dgamma
// vanishes, dt/dgamma_i = -(gamma_i / 2 s_i^2) / K2, and each cumulant
// moves by its explicit gamma term plus K_{j+1} dt.
std::vector<double> saddlepoint_mean(const FisherBingham::State& st) {
  const auto& gamma = st.p.gamma;
  const auto& s = st.tp.a_t;
  const SaddleState& c = st.tp.saddle;
  double k5 = 0.0;
  for (size_t i = 0; i < s.size(); ++i) {
    const double inv = 1.0 / s[i];
    const double inv5 = inv * inv * inv * inv * inv;
    k5 += 12.0 * inv5 + 30.0 * gamma[i] * gamma[i] * inv5 * inv;
  }
  const double rho3 = c.K3 / std::pow(c.K2, 1.5);
  const double rho4 = c.K4 / (c.K2 * c.K2);
  const double corr = 1.0 + rho4 / 8.0 - 5.0 * rho3 * rho3 / 24.0;
  std::vector<double> out(s.size());
  for (size_t i = 0; i < s.size(); ++i) {
    const double inv = 1.0 / s[i];
    const double g = gamma[i];
    const double dt = -(0.5 * g * inv * inv) / c.K2;
    const double dk2 = g * inv * inv * inv + c.K3 * dt;
    const double dk3 = 3.0 * g * std::pow(inv, 4) + c.K4 * dt;
    const double dk4 = 12.0 * g * std::pow(inv, 5) + k5 * dt;
    const double drho3 = dk3 / std::pow(c.K2, 1.5) - 1.5 * rho3 * dk2 / c.K2;
    const double drho4 = dk4 / (c.K2 * c.K2) - 2.0 * rho4 * dk2 / c.K2;
    const double dcorr = drho4 / 8.0 - 5.0 * rho3 * drho3 / 12.0;
    out[i] = 0.5 * g * inv - 0.5 * dk2 / c.K2 + dcorr / corr;
  }
  return out;
}

}  // namespace

FisherBingham::FisherBingham(FBParams p, DensityMethod method)
    : state_(std::make_unique<State>()) {
  validate(p);
  state_->p = std::move(p);
  state_->method = method;
  state_->tp = tilt(state_->p);
  const TiltedProblem& tp = state_->tp;
  double log_g = 0.0;
  if (method == DensityMethod::kSaddlepoint) {
    // The tilted cumulants are the original ones shifted to the saddle.
    SaddleState centered = tp.saddle;
    centered.t_hat = 0.0;
    centered.K = 0.0;
    log_g = log_saddlepoint_at(centered, 2);
  } else {
    log_g = std::log(tilted_imhof(tp.a_t, state_->p.gamma, state_->layout, true));
  }
  log_c_ = tp.log_gauss + log_g;
}

FisherBingham::~FisherBingham() = default;
FisherBingham::FisherBingham(FisherBingham&&) noexcept = default;
FisherBingham& FisherBingham::operator=(FisherBingham&&) noexcept = default;

std::vector<double> FisherBingham::mean() {
  State& st = *state_;
  const auto& gamma = st.p.gamma;
  const size_t d = gamma.size();
  if (st.method == DensityMethod::kSaddlepoint) return saddlepoint_mean(st);
  double scale = 1.0;
  for (const double g : gamma) scale = std::max(scale, std::abs(g));
  const double h = 1e-5 * scale;
  std::vector<double> out(d);
  std::vector<double> shifted = gamma;
  for (size_t i = 0; i < d; ++i) {
    shifted[i] = gamma[i] + h;
    const double up = st.log_density(shifted);
    shifted[i] = gamma[i] - h;
    const double down = st.log_density(shifted);
    shifted[i] = gamma[i];
    out[i] = 0.5 * gamma[i] / st.tp.a_t[i] + (up - down) / (2.0 * h);
  }
  return out;
}

namespace {

SaddleState solve_saddle(const FBParams& p, const double* start) {
  const size_t d = p.a.size();
  size_t i_min = 0;
  double max_g2 = 0.0;
  for (size_t i = 0; i < d; ++i) {
    if (p.a[i] < p.a[i_min]) i_min = i;
    max_g2 = std::max(max_g2, p.gamma[i] * p.gamma[i]);
  }
  const double a_min = p.a[i_min];
  const double dd = static_cast<double>(d);
  double lo = a_min - 0.25 * dd - 0.5 * std::sqrt(0.25 * dd * dd + dd * max_g2);
  const double g_star = p.gamma[i_min];
  double hi = a_min - 0.25 - 0.5 * std::sqrt(0.25 + g_star * g_star);
  if (cumulants(p, hi, 1).K1 < 1.0 - 1e-12 ||
      cumulants(p, lo, 1).K1 > 1.0 + 1e-12) {
    throw std::logic_error("saddlepoint bracket does not contain the root");
  }
  // K' is increasing and convex on (-inf, a_min), so Newton from the right
  // end moves monotonically left onto the root.
  double t = hi;
  if (start != nullptr && *start > lo && *start < hi) t = *start;
  for (int it = 0; it < 200; ++it) {
    const Cumulants c = cumulants(p, t, 2);
    const double g = c.K1 - 1.0;
    if (g > 0.0) hi = t; else lo = t;
    double next = t - g / c.K2;
    if (!(next >= lo && next <= hi)) next = 0.5 * (lo + hi);
    const bool done = std::abs(next - t) <= 1e-15 * std::max(1.0, std::abs(t));
    t = next;
    if (done) break;
  }
  const Cumulants c = cumulants(p, t, 2);
  if (!(std::abs(c.K1 - 1.0) <= 1e-10)) {
    throw NumericalError("saddlepoint equation did not converge");
  }
  return {t, c.K, c.K1, c.K2, c.K3, c.K4};
}

}  // namespace

SaddleState solve_saddlepoint(const FBParams& p) {
  validate(p);
  return solve_saddle(p, nullptr);
}

double imhof_density_at_one(const FBParams& p) {
  validate(p);
  const TiltedProblem tp = tilt(p);
  Layout layout;
  const double g = tilted_imhof(tp.a_t, p.gamma, layout, true);
  return std::exp(tp.saddle.K - tp.saddle.t_hat) * g;
}

double saddlepoint_density_at_one(const FBParams& p, int order) {
  if (order != 1 && order != 2) {
    throw ConfigError("saddlepoint order must be 1 or 2");
  }
  return std::exp(log_saddlepoint_at(solve_saddlepoint(p), order));
}

double log_fb_constant(const FBParams& p, DensityMethod method) {
  return FisherBingham(p, method).log_c();
}

FBMoments fb_moments(const FBParams& p, DensityMethod method) {
  FisherBingham fb(p, method);
  return {fb.log_c(), fb.mean()};
}

std::vector<double> fb_gradient(const FBParams& p, DensityMethod method) {
  FBMoments m = fb_moments(p, method);
  const double c = std::exp(m.log_c);
  for (double& v : m.mean) v *= c;
  return m.mean;
}

}  // namespace minimax::special
