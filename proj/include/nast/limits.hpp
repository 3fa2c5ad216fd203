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
#include <string>
#include <vector>

#include "nast/scattering.hpp"
#include "nast/stats.hpp"

namespace nast::limits {

enum class RefFamily {
  StandardNormal,
  FoldedNormal,
  StandardizedChi2Chaos,
  Empirical,
};

class ReferenceLaw {
 public:
  static ReferenceLaw standard_normal();
  static ReferenceLaw folded_normal();          // law of |Z|, CDF 2 Phi(x) - 1
  static ReferenceLaw standardized_chi2_chaos();  // law of (Z^2 - 1)/sqrt(2)
  static ReferenceLaw empirical(std::vector<double> samples);

  double cdf(double x) const;
  double quantile(double p) const;
  RefFamily family() const { return family_; }
  const std::string& name() const { return name_; }

 private:
  RefFamily family_ = RefFamily::StandardNormal;
  std::string name_;
  std::vector<double> sorted_;
};

struct StatReport {
  std::string test_name;
  double statistic = 0.0;
  double p_value = -1.0;      // < 0 when not a p-value-style test
  double pass_margin = 0.0;   // criterion-specific slack, >= 0 passes
  bool pass = false;
  std::size_t sample_size = 0;
  std::string seeds;
  std::string config_hash;
  std::string detail;
};

enum class RateRegime { Clt, NonClt, FbmNonClt };

struct RescaleSpec {
  RateRegime regime = RateRegime::Clt;
  double alpha = 0.0;  // wavelet exponent
  double beta = 0.0;   // LRD index (or -2H)
  int rank = 2;
  double hurst = 0.0;
  double rate_exponent() const;  // theta with factor 2^{theta j2}
};

struct RescaledSamples {
  std::vector<double> standardized;
  double raw_variance = 0.0;  // variance of the rescaled, unstandardized values
  double raw_mean = 0.0;
  std::size_t spacing = 0;    // decimation spacing in samples
  std::size_t per_path = 0;
  double lag1_autocorr = 0.0;  // of the decimated stream (first path)
};

/// Collects 2^{theta j2} U^{A1}[j1]X * psi_{j2} at decimated interior times
/// (spacing >= spacing_factor * 2^{j2} samples), standardized by the pooled
/// sample standard deviation.
RescaledSamples rescaled_samples(const scattering::ScatteringEngine& eng,
                                 const std::vector<std::vector<double>>& paths,
                                 int j1, int j2, const scattering::Activation& a1,
                                 const RescaleSpec& spec, double spacing_factor = 4.0,
                                 std::size_t min_samples = 200);

/// Streaming pieces of rescaled_samples: one path at a time, then pool.
std::size_t decimation_spacing(double spacing_factor, int j2, double dt);
std::vector<double> decimate_rescaled_path(const scattering::ScatteringEngine& eng,
                                           const std::vector<double>& path, int j1,
                                           int j2, const scattering::Activation& a1,
                                           const RescaleSpec& spec,
                                           std::size_t spacing);
RescaledSamples pool_standardize(const std::vector<std::vector<double>>& per_path,
                                 std::size_t spacing, std::size_t min_samples);

StatReport ks_test(const std::vector<double>& samples, const ReferenceLaw& ref);

/// 99 paired percentiles (p = 0.01..0.99) for plotting.
std::vector<std::pair<double, double>> qq_data(const std::vector<double>& samples,
                                               const ReferenceLaw& ref);

struct CovarianceMatch {
  std::vector<double> lags;        // macroscopic units
  std::vector<double> empirical;
  std::vector<double> theoretical;
  std::vector<double> z_scores;
  double max_abs_dev = 0.0;
};

/// Empirical covariance of the rescaled process at macroscopic lags against
/// kappa^2 int cos(lambda dt) |Psi|^2 dlambda.
CovarianceMatch covariance_match(const scattering::ScatteringEngine& eng,
                                 const std::vector<std::vector<double>>& paths,
                                 int j1, int j2, const scattering::Activation& a1,
                                 const RescaleSpec& spec, double kappa,
                                 const std::vector<double>& lags);

/// OLS slope of (j, log2 moment) with jackknife-propagated point errors.
stats::LineFit slope_fit(const std::vector<double>& js,
                         const std::vector<double>& log2_moments,
                         const std::vector<double>& log2_sigmas);

struct MomentCurvePoint {
  int j = 0;
  double value = 0.0;   // S~(j1, j1+j)
  double stderr_jk = 0.0;
};

struct InvarianceReport {
  std::map<int, double> intercepts;     // j1 -> compensated level
  std::map<int, double> intercept_ses;
  std::map<int, double> slopes;
  double max_pairwise_z = 0.0;
  bool j1_independent = false;
};

/// Compares compensated intercepts 2^{j/2} S~(j1, j1+j) across j1; verdict
/// "j1-independent" when the largest pairwise difference is within 3 s.e.
InvarianceReport fbm_moment_invariance(
    const std::map<int, std::vector<MomentCurvePoint>>& curves_by_j1);

}  // namespace nast::limits
