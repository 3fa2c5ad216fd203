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

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace nast::wavelets {

/// Mother wavelet with Fourier-domain evaluator and time-domain sampler.
/// Dilation convention is L1: psi_j(t) = 2^-j psi(2^-j t), so the Fourier
/// transform of psi_j is Psi(2^j lambda).
///
/// Immutable after construction; evaluators are re-entrant. The Fourier
/// evaluator returns a signed real value whose magnitude is |Psi(lambda)|
/// (even wavelets return Psi itself, odd ones the imaginary part's sign
/// pattern, Daubechies the magnitude).
class Wavelet {
 public:
  const std::string& name() const { return name_; }
  double alpha() const { return alpha_; }
  int declared_vanishing_moments() const { return n_moments_; }
  bool fourier_vanishes_near_zero() const { return vanishes_near_zero_; }
  /// True when the Fourier form is closed-form (preferred for filtering).
  bool analytic_fourier() const { return analytic_fourier_; }
  double norm_factor() const { return norm_; }

  double fourier(double lambda) const;
  double time(double t) const;

  /// C_Psi(0) = lim |Psi(lambda)| / |lambda|^alpha as lambda -> 0+.
  double c_psi0() const;

  /// Half-width T such that the truncated tail mass of |psi| beyond T is
  /// below tol * ||psi||_1, or nullopt when no practical T exists.
  std::optional<double> time_half_support(double tol = 1e-6) const;

  double l1_norm() const;

  /// Copy with all evaluators scaled by c (used for Littlewood-Paley
  /// normalization).
  Wavelet rescaled(double c) const;

  /// Config-style serialization: "name key=value ...".
  std::string spec_string() const;

  /// Constructor parameter lookup (omega0, alpha, gamma, a).
  double param(const std::string& key, double dflt) const;

  /// +1 when the Fourier evaluator is even in lambda, -1 when odd.
  int fourier_parity() const;

  /// int t^order psi(t) dt (table sum for cascade wavelets, quadrature else).
  double moment(int order) const;

  struct Impl;
  explicit Wavelet(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {
    init_from_impl();
  }

 private:
  void init_from_impl();
  std::shared_ptr<const Impl> impl_;
  std::string name_;
  double alpha_ = 0.0;
  int n_moments_ = 0;
  bool vanishes_near_zero_ = false;
  bool analytic_fourier_ = true;
  double norm_ = 1.0;
};

/// Names: daubechies-K (K even, 2..20), real-morlet, mexican-hat,
/// cauchy (param alpha), morse (params alpha, gamma), meyer.
/// Optional params: omega0 (real-morlet, default 5), a (meyer, default pi/2).
Wavelet make_wavelet(const std::string& name,
                     const std::map<std::string, double>& params = {});

double fourier_eval(const Wavelet& w, double lambda);

/// ||Psi||_L2^2 = int |Psi|^2 dlambda over the real line.
double l2_norm_fourier_sq(const Wavelet& w);

/// Taps of psi_j(t) = 2^-j psi(t / 2^j) on the grid m*dt, m in [-M, M].
/// Throws when the requested half-support leaves more than `tail_tol` of the
/// L1 mass outside, naming the required size.
std::vector<double> sample_filter(const Wavelet& w, int j, double dt,
                                  double half_support, double tail_tol = 1e-6);

/// Largest n such that |int t^l psi dt| < tol for all l < n (computed on the
/// sampled support); returns n with moment n >= tol.
int vanishing_moments(const Wavelet& w, double tol = 1e-6, int max_order = 12);

/// Two-column text (t, psi_j(t)) of the sampled filter.
std::string export_filter_two_column(const Wavelet& w, int j, double dt,
                                     double half_support);

/// Dyadic filterbank: LP-normalized mother plus a father wavelet whose
/// Fourier response keeps |Phi(2^J l)|^2 + sum_{j<J} |Psi(2^j l)|^2 <= 1.
class Filterbank {
 public:
  Filterbank(const Wavelet& mother, int J, std::vector<int> scales, double dt,
             double father_width = 1.0);

  const Wavelet& mother() const { return mother_; }
  const std::vector<int>& scales() const { return scales_; }
  int J() const { return J_; }
  double dt() const { return dt_; }
  double mother_rescale_factor() const { return rescale_; }

  /// Father response Phi(lambda); Phi(0) = 1.
  double father_fourier(double lambda) const;

  /// sum_{j<0} |Psi(2^j lambda)|^2 with analytic geometric tail.
  double infinite_low_scale_sum(double lambda) const;

 private:
  Wavelet mother_;
  int J_;
  std::vector<int> scales_;
  double dt_;
  double father_width_;
  double rescale_ = 1.0;
  bool tight_ = false;  // meyer-style exact telescoping family
};

struct LittlewoodPaleyReport {
  double sup = 0.0;
  double argmax = 0.0;
  bool pass = false;
  double suggested_rescale = 1.0;
};

/// Evaluates |Phi(2^J l)|^2 + sum_{j in scales, j<J} |Psi(2^j l)|^2 over the
/// grid and reports the supremum against 1 + tol.
LittlewoodPaleyReport littlewood_paley_report(const Filterbank& fb,
                                              const std::vector<double>& grid,
                                              double tol = 1e-3);

/// Raw mother-only LP scan over all integer scales (used to derive the
/// normalization constant): sup over lambda of sum_j |Psi(2^j lambda)|^2.
double mother_lp_sup(const Wavelet& w);

}  // namespace nast::wavelets
