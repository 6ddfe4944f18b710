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

#ifndef MINIMAX_SPECIAL_H_
#define MINIMAX_SPECIAL_H_

#include <memory>
#include <span>
#include <vector>

// Special functions for spherical posterior means: modified Bessel functions
// of the first kind in log space, the Bessel ratio that sets vMF shrinkage,
// and the Fisher-Bingham normalizing constant on the unit sphere.
namespace minimax::special {

/// ln I_nu(x) for nu >= 0, x >= 0. Returns -inf at x = 0 when nu > 0.
/// Internally works with e^{-x} I_nu(x), so x up to 1e4 and beyond is fine.
double log_bessel_i(double nu, double x);

/// ln(I_nu(x) / (x/2)^nu), continuous at x = 0 where it equals
/// -lgamma(nu + 1). nu > -1.
double log_bessel_i_over_power(double nu, double x);

/// ln(I_nu(x) / (x/2)^nu) and I_{nu+1}(x) / I_nu(x) from one evaluation.
struct BesselPair {
  double log_i_over_power = 0.0;
  double ratio = 0.0;
};
BesselPair bessel_pair(double nu, double x);

/// A(gamma) = I_{h}(gamma) / I_{h-1}(gamma) with h = half_dim > 0.
/// In [0, 1), nondecreasing in gamma; A(0) = 0.
double bessel_ratio(double half_dim, double gamma);

/// ln of the integral of exp(kappa <mu, Z>) over the unit sphere S^{d-1}
/// (any unit mu). At kappa = 0 this is the sphere's surface area.
double log_vmf_surface_integral(int d, double kappa);

/// Fisher-Bingham parameters after diagonalization: density on S^{d-1}
/// proportional to exp(-sum a_i Z_i^2 + sum gamma_i Z_i).
struct FBParams {
  std::vector<double> a;
  std::vector<double> gamma;
};

/// Saddle point of the cumulant generating function K of
/// S = sum z_i^2, z_i ~ N(gamma_i / 2a_i, 1 / 2a_i), solved at K'(t) = 1.
struct SaddleState {
  double t_hat = 0.0;
  double K = 0.0;
  double K1 = 0.0;
  double K2 = 0.0;
  double K3 = 0.0;
  double K4 = 0.0;
};

enum class DensityMethod {
  kImhof,        // exact oscillatory integral
  kSaddlepoint,  // second-order saddlepoint approximation
};

SaddleState solve_saddlepoint(const FBParams& p);

/// Density of S at 1 via Imhof's inversion integral, evaluated on the
/// exponentially tilted form whose mean is 1 (so the integral is O(1) and
/// has a monotone phase) and mapped back through exp(K(t) - t).
double imhof_density_at_one(const FBParams& p);

/// Saddlepoint density of S at 1. order = 1 or 2.
double saddlepoint_density_at_one(const FBParams& p, int order);

/// ln C(A, gamma), C = integral over S^{d-1} of exp(-Z'AZ + gamma'Z).
double log_fb_constant(const FBParams& p,
                       DensityMethod method = DensityMethod::kImhof);

/// ln C together with the Fisher-Bingham mean C^{-1} dC/dgamma.
struct FBMoments {
  double log_c = 0.0;
  std::vector<double> mean;
};

/// The mean is the analytic gradient of the Gaussian factor plus central
/// differences (step 1e-5 max(1, |gamma|_inf)) of the log density at one,
/// both at a common tilt, so gamma = 0 gives exactly zero.
FBMoments fb_moments(const FBParams& p,
                     DensityMethod method = DensityMethod::kImhof);

/// ln C now, the mean on demand; both share one tilt and one quadrature
/// layout. Cheaper than fb_moments when the mean is often not needed.
class FisherBingham {
 public:
  FisherBingham(FBParams p, DensityMethod method);
  ~FisherBingham();
  FisherBingham(FisherBingham&&) noexcept;
  FisherBingham& operator=(FisherBingham&&) noexcept;

  double log_c() const { return log_c_; }
  std::vector<double> mean();

  struct State;

 private:
  std::unique_ptr<State> state_;
  double log_c_ = 0.0;
};

/// dC/dgamma = C * mean. Overflows for large constants; prefer fb_moments.
std::vector<double> fb_gradient(const FBParams& p,
                                DensityMethod method = DensityMethod::kImhof);

}  // namespace minimax::special

#endif  // MINIMAX_SPECIAL_H_
