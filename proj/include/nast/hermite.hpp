/*
   Copyright 2026 the nastlib authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <string>
#include <vector>

#include "nast/scattering.hpp"
#include "nast/spectra.hpp"
#include "nast/wavelets.hpp"

namespace nast::hermite {

/// Probabilists' Hermite polynomial H_l(y) via the three-term recurrence.
double hermite_poly(int ell, double y);

struct HermiteExpansion {
  double sigma = 1.0;
  std::vector<double> coeffs;  // C_{sigma,l} against H_l / sqrt(l!), l = 0..L
  int rank = 0;                // min { l >= 1 : |C_l| > rank_tol }
  int truncation = 0;          // L
  double tail_mass = 0.0;      // E[A(sigma Z)^2] - sum_l C_l^2
  double second_moment = 0.0;  // E[A(sigma Z)^2]
};

/// Expansion of A(sigma .) in the Gaussian-Hilbert space. Quadrature is
/// composite Gauss-Legendre split at the origin kink; L grows until the tail
/// mass is below 1e-6 of E[A^2] or the hard cap.
HermiteExpansion expand(const scattering::Activation& A, double sigma,
                        int max_level = 64);

struct KappaResult {
  double kappa_series = 0.0;    // truncated Hermite series route
  double kappa_integral = 0.0;  // (1/2pi) int R_{A(X*psi_j1)}(t) dt route
  double sigma_j1_sq = 0.0;
  std::vector<double> terms;    // per-l contributions to kappa^2 (index from rank)
  double truncation_bound = 0.0;  // sigma^-2r sup f^(*r) * tail-mass estimate
};

/// Both kappa forms for the CLT regime (2 alpha + beta) * rank > 1; throws
/// "non-CLT regime, use nu_theta2" otherwise. The expansion must be taken at
/// sigma = sigma_j1 (checked within 0.5%).
KappaResult kappa(const spectra::SpectralModel& m, const wavelets::Wavelet& w,
                  int j1, const HermiteExpansion& exp_j1,
                  const scattering::Activation& A);

/// Convenience: computes sigma_j1 and the expansion internally.
KappaResult kappa(const spectra::SpectralModel& m, const wavelets::Wavelet& w,
                  int j1, const scattering::Activation& A);

struct Theta1Result {
  double theta = 0.0;        // Theta(j1, alpha, beta)
  double theta_limit = 0.0;  // j1 -> inf limit via the Q-series
  double kappa = 0.0;
  double sigma_j1 = 0.0;
  double psi_l2 = 0.0;  // ||Psi||_{L2}
};

/// Theta(j1) = 2^{-j1/2} kappa sigma_j1^{-1} ||Psi|| with the modulus
/// first-layer activation, plus its large-j1 limit.
Theta1Result theta1(const spectra::SpectralModel& m, const wavelets::Wavelet& w,
                    int j1);

enum class LimitFamily {
  Gaussian,
  FoldedGaussian,
  StandardizedChi2Chaos,
  HermiteRankR,
  GaussianLrd,
  Pushforward,
};

struct LimitDescriptor {
  LimitFamily family = LimitFamily::Gaussian;
  double scale = 1.0;
  double center = 0.0;
  int rank = 1;
  std::string note;
};

std::string to_string(LimitFamily f);

struct NuTheta2Result {
  double nu = 0.0;
  double var_i2 = 0.0;        // variance of the double Wiener integral
  double sigma_eff_sq = 0.0;  // sqrt(var_i2 / 2): single-chaos reduction scale
  double e_abs_i2 = 0.0;      // E|I2| via the chaos identity
  double e_abs_h2_mc = 0.0;   // Monte-Carlo E|Z^2-1| (frozen reference)
  double theta2_printed = 0.0;  // prefactor 1/(2^{3/2} sqrt(pi))
  double theta2_proof = 0.0;    // prefactor sqrt(pi)/2 * C_2 route
  /// Exact skewness of the r = 2 limit law from the kernel trace cumulants;
  /// the single-chaos surrogate would give sqrt(8). The gap measures how far
  /// the true weighted-chi-square law sits from the (Z^2-1)/sqrt(2) reference.
  double limit_skewness = 0.0;
  LimitDescriptor descriptor;
};

/// Non-CLT constants: requires (2 alpha + beta) * r < 1 and C_X(0) > 0.
NuTheta2Result nu_theta2(const spectra::SpectralModel& m, const wavelets::Wavelet& w,
                         int j1, const HermiteExpansion& exp_j1, int r);

/// Output-law mapping for the last-layer activation per the delta method
/// (differentiable at 0) or the continuous mapping route (homogeneous).
LimitDescriptor delta_method_limit(const scattering::Activation& a2,
                                   const LimitDescriptor& base);

/// Covariance of A(U), A(V) for (U,V) centered bivariate normal with common
/// variance sigma^2 and correlation rho: closed forms for modulus/relu/
/// identity, the Mehler series sum_l C_l^2 rho^l otherwise.
double bivariate_activation_covariance(const scattering::Activation& A, double sigma,
                                       double rho);
double bivariate_activation_covariance(const scattering::Activation& A,
                                       const HermiteExpansion& ex, double rho);

/// Monte-Carlo E|Z^2 - 1| over 10^6 standard normals with a fixed seed,
/// computed once and cached (closed form 4 phi(1) is the test oracle).
double mc_e_abs_h2();

}  // namespace nast::hermite
