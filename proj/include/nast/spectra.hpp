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

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "nast/wavelets.hpp"

namespace nast::spectra {

enum class Kind { ParamLrd, GeneralizedFbm, Tabulated };

/// One-sided spectral density evaluator with its origin behavior split off:
/// f(l) = smooth(l) * l^p with smooth finite and positive-limited at 0.
struct Density {
  std::function<double(double)> eval;
  std::function<double(double)> smooth;
  double sing_exponent = 0.0;  // p
  double amp0 = 0.0;           // lim smooth(l) as l -> 0+
};

/// Parametric spectral density: the source of all covariance structure.
/// param-lrd: f(l) = c1 / (|l|^(1-beta1) (l^2 + c2)^beta2)
/// generalized-fbm: f(l) = (2 pi)^-1 |l|^-(2H+1)   (integrable only after
/// wavelet filtering with alpha > H)
class SpectralModel {
 public:
  static SpectralModel param_lrd(double c1, double beta1, double beta2, double c2);
  static SpectralModel generalized_fbm(double H);
  /// One-sided grid (ascending positive lambdas); `sing_exponent` declares the
  /// power-law exponent of f near 0 and is validated against the tabulated
  /// log-log slope within 0.02.
  static SpectralModel tabulated(std::vector<double> lambda, std::vector<double> f,
                                 double sing_exponent);

  Kind kind() const { return kind_; }
  /// f at lambda; symmetric in lambda. Singular models return +inf at 0.
  double eval(double lambda) const;
  bool integrable() const { return sing_exponent_ > -1.0; }
  double sing_exponent() const { return sing_exponent_; }
  /// LRD index beta with f ~ C_X(0) |l|^(beta-1): beta1 for param-lrd, -2H for
  /// generalized-fbm.
  double beta() const { return sing_exponent_ + 1.0; }
  double c_x0() const;
  /// param-lrd with beta1 = 1 degenerates to the Ornstein-Uhlenbeck density.
  bool short_range() const { return short_range_; }
  double hurst() const { return H_; }
  double param(const std::string& name) const;

  Density density() const;
  std::string id() const;

  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }

 private:
  SpectralModel() = default;
  Kind kind_ = Kind::ParamLrd;
  double c1_ = 0, beta1_ = 0, beta2_ = 0, c2_ = 0;
  double H_ = 0;
  double sing_exponent_ = 0;
  double amp0_ = 0;
  bool short_range_ = false;
  std::vector<double> grid_, values_;
};

struct CovarianceTable {
  std::vector<double> lags;
  std::vector<double> values;
  std::string model_id;
};

/// int_R f(lambda) dlambda; throws for non-integrable models.
double total_mass(const SpectralModel& m);
double total_mass(const Density& d);

/// R(t) = int e^{i l t} f(l) dl by symmetric (cosine) quadrature.
CovarianceTable covariance(const SpectralModel& m, const std::vector<double>& tgrid);
double covariance_at(const Density& d, double t);

/// Filtered density g(l) = |Psi(2^j l)|^2 f(l) as an exact evaluator.
Density filtered(const SpectralModel& m, const wavelets::Wavelet& w, int j);

/// Tabulated snapshot of the filtered density on the hybrid grid
/// (256 log points per decade on [1e-6, 1], uniform above).
SpectralModel filtered_density(const SpectralModel& m, const wavelets::Wavelet& w,
                               int j);

/// sigma_j^2 = int |Psi(2^j l)|^2 f(l) dl, refined until relative 1e-4.
double variance_sigma_j(const SpectralModel& m, const wavelets::Wavelet& w, int j);

/// Covariance of a density baked onto quadrature nodes so R(t) is cheap to
/// evaluate repeatedly; valid for |t| <= t_max.
class CovarianceEvaluator {
 public:
  CovarianceEvaluator(const Density& d, double t_max);
  double operator()(double t) const;
  double r0() const { return r0_; }
  double t_max() const { return t_max_; }
  double lambda_mean() const { return lambda_mean_; }

 private:
  std::vector<double> nodes_, wg_;
  double r0_ = 0.0, t_max_ = 0.0, lambda_mean_ = 0.0;
};

/// (1/2pi) int R_g(t)^ell dt for a set of ell >= 1 sharing one covariance
/// evaluation; entry ell=1 is g(0) handled analytically. gamma = p + 1 must
/// satisfy ell * gamma > 1 for every requested ell.
std::vector<double> power_time_integrals(const Density& g, const std::vector<int>& ells);

/// g^(*ell)(0) via the time-domain identity. Requires ell >= 2 and
/// ell*(p+1) > 1, else throws "divergent at origin".
double lfold_convolution_at_zero(const SpectralModel& g, int ell);
double lfold_convolution_at_zero(const Density& g, int ell);

/// Closed-form pair convolution of pure power-law kernels |l|^(gamma-1) for
/// gamma1 + gamma2 < 1 (Riesz composition formula).
double riesz_closed_form(double gamma1, double gamma2, double lambda);

/// Direct frequency-domain quadrature of the same pair convolution; the
/// independent numerical route against the closed form.
double power_pair_convolution(double gamma1, double gamma2, double lambda);

/// Two-column text export (lambda, f) of a tabulated model.
std::string export_two_column(const SpectralModel& m);

}  // namespace nast::spectra
