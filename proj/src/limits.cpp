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

#include "nast/limits.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nast/quadrature.hpp"
#include "nast/special.hpp"

namespace nast::limits {

ReferenceLaw ReferenceLaw::standard_normal() {
  ReferenceLaw r;
  r.family_ = RefFamily::StandardNormal;
  r.name_ = "standard-normal";
  return r;
}

ReferenceLaw ReferenceLaw::folded_normal() {
  ReferenceLaw r;
  r.family_ = RefFamily::FoldedNormal;
  r.name_ = "folded-normal";
  return r;
}

ReferenceLaw ReferenceLaw::standardized_chi2_chaos() {
  ReferenceLaw r;
  r.family_ = RefFamily::StandardizedChi2Chaos;
  r.name_ = "standardized-chi2-chaos";
  return r;
}

ReferenceLaw ReferenceLaw::empirical(std::vector<double> samples) {
  if (samples.size() < 2) throw std::invalid_argument("empirical law: need samples");
  ReferenceLaw r;
  r.family_ = RefFamily::Empirical;
  r.name_ = "empirical";
  std::sort(samples.begin(), samples.end());
  r.sorted_ = std::move(samples);
  return r;
}

double ReferenceLaw::cdf(double x) const {
  switch (family_) {
    case RefFamily::StandardNormal:
      return special::norm_cdf(x);
    case RefFamily::FoldedNormal:
      return x <= 0.0 ? 0.0 : 2.0 * special::norm_cdf(x) - 1.0;
    case RefFamily::StandardizedChi2Chaos: {
      const double lo = -1.0 / std::sqrt(2.0);
      if (x <= lo) return 0.0;
      const double s = std::sqrt(1.0 + std::sqrt(2.0) * x);
      return 2.0 * special::norm_cdf(s) - 1.0;
    }
    case RefFamily::Empirical: {
      const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
      return static_cast<double>(it - sorted_.begin()) / sorted_.size();
    }
  }
  return 0.0;
}

double ReferenceLaw::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("quantile: p in (0,1)");
  switch (family_) {
    case RefFamily::StandardNormal:
      return special::norm_quantile(p);
    case RefFamily::FoldedNormal:
      return special::norm_quantile(0.5 * (1.0 + p));
    case RefFamily::StandardizedChi2Chaos: {
      const double s = special::norm_quantile(0.5 * (1.0 + p));
      return (s * s - 1.0) / std::sqrt(2.0);
    }
    case RefFamily::Empirical: {
      const double pos = p * (sorted_.size() - 1);
      const std::size_t i = static_cast<std::size_t>(pos);
      const double f = pos - i;
      if (i + 1 >= sorted_.size()) return sorted_.back();
      return sorted_[i] * (1.0 - f) + sorted_[i + 1] * f;
    }
  }
  return 0.0;
}

double RescaleSpec::rate_exponent() const {
  switch (regime) {
    case RateRegime::Clt:
      return 0.5;
    case RateRegime::NonClt:
      return 0.5 * (2.0 * alpha + beta) * rank;
    case RateRegime::FbmNonClt:
      return (alpha - hurst) * rank;
  }
  return 0.5;
}

std::size_t decimation_spacing(double spacing_factor, int j2, double dt) {
  return std::max<std::size_t>(
      1, static_cast<std::size_t>(spacing_factor * std::pow(2.0, j2) / dt));
}

std::vector<double> decimate_rescaled_path(const scattering::ScatteringEngine& eng,
                                           const std::vector<double>& path, int j1,
                                           int j2, const scattering::Activation& a1,
                                           const RescaleSpec& spec,
                                           std::size_t spacing) {
  const std::size_t n = path.size();
  const std::size_t guard = eng.guard(j2);
  const double rate = std::pow(2.0, spec.rate_exponent() * j2);
  std::vector<double> u = eng.cwt(path, j1);
  for (auto& v : u) v = a1(v);
  u = eng.cwt(u, j2);
  std::vector<double> out;
  const std::size_t b = scattering::interior_begin(n, guard);
  const std::size_t e = scattering::interior_end(n, guard);
  out.reserve((e - b) / spacing + 1);
  for (std::size_t i = b; i < e; i += spacing) out.push_back(rate * u[i]);
  return out;
}

RescaledSamples pool_standardize(const std::vector<std::vector<double>>& per_path,
                                 std::size_t spacing, std::size_t min_samples) {
  RescaledSamples out;
  out.spacing = spacing;
  std::vector<double> vals;
  for (const auto& v : per_path) vals.insert(vals.end(), v.begin(), v.end());
  if (vals.size() < min_samples)
    throw std::invalid_argument(
        "rescaled_samples: too few usable decimated points (" +
        std::to_string(vals.size()) + "); use longer paths");
  out.per_path = per_path.front().size();
  out.raw_mean = stats::mean(vals);
  out.raw_variance = stats::variance(vals);
  // lag-1 autocorrelation of the decimated stream, averaged over paths to
  // tame the per-path estimator noise
  double ac = 0.0;
  std::size_t used = 0;
  for (const auto& v : per_path) {
    if (v.size() > 8) {
      ac += stats::lag_autocorr(v, 1);
      ++used;
    }
  }
  out.lag1_autocorr = used > 0 ? ac / static_cast<double>(used) : 0.0;
  const double sd = std::sqrt(out.raw_variance);
  out.standardized.reserve(vals.size());
  for (double v : vals) out.standardized.push_back((v - out.raw_mean) / sd);
  return out;
}

RescaledSamples rescaled_samples(const scattering::ScatteringEngine& eng,
                                 const std::vector<std::vector<double>>& paths,
                                 int j1, int j2, const scattering::Activation& a1,
                                 const RescaleSpec& spec, double spacing_factor,
                                 std::size_t min_samples) {
  if (paths.empty()) throw std::invalid_argument("rescaled_samples: no paths");
  const std::size_t spacing = decimation_spacing(spacing_factor, j2, eng.dt());
  std::vector<std::vector<double>> per_path;
  per_path.reserve(paths.size());
  for (const auto& p : paths)
    per_path.push_back(decimate_rescaled_path(eng, p, j1, j2, a1, spec, spacing));
  return pool_standardize(per_path, spacing, min_samples);
}

StatReport ks_test(const std::vector<double>& samples, const ReferenceLaw& ref) {
  if (samples.size() < 200)
    throw std::invalid_argument("ks_test: need >= 200 samples");
  std::vector<double> s(samples);
  std::sort(s.begin(), s.end());
  const std::size_t n = s.size();
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double F = ref.cdf(s[i]);
    d = std::max(d, std::abs(F - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - F));
  }
  StatReport rep;
  rep.test_name = "ks-vs-" + ref.name();
  rep.statistic = d;
  const double rn = std::sqrt(static_cast<double>(n));
  rep.p_value = special::kolmogorov_q((rn + 0.12 + 0.11 / rn) * d);
  rep.sample_size = n;
  rep.pass = rep.p_value > 0.01;
  rep.pass_margin = rep.p_value - 0.01;
  return rep;
}

std::vector<std::pair<double, double>> qq_data(const std::vector<double>& samples,
                                               const ReferenceLaw& ref) {
  std::vector<double> s(samples);
  std::sort(s.begin(), s.end());
  std::vector<std::pair<double, double>> out;
  out.reserve(99);
  for (int i = 1; i <= 99; ++i) {
    const double p = i / 100.0;
    const double pos = p * (s.size() - 1);
    const std::size_t k = static_cast<std::size_t>(pos);
    const double f = pos - k;
    const double q_emp =
        (k + 1 < s.size()) ? s[k] * (1.0 - f) + s[k + 1] * f : s.back();
    out.emplace_back(q_emp, ref.quantile(p));
  }
  return out;
}

CovarianceMatch covariance_match(const scattering::ScatteringEngine& eng,
                                 const std::vector<std::vector<double>>& paths,
                                 int j1, int j2, const scattering::Activation& a1,
                                 const RescaleSpec& spec, double kappa,
                                 const std::vector<double>& lags) {
  if (spec.regime != RateRegime::Clt)
    throw std::invalid_argument("covariance_match: CLT regime only");
  const std::size_t n = paths.front().size();
  const double dt = eng.dt();
  const std::size_t guard = eng.guard(j2);
  const double rate = std::pow(2.0, 0.5 * j2);
  const double macro = std::pow(2.0, j2) / dt;  // samples per macroscopic unit

  CovarianceMatch out;
  out.lags = lags;
  const auto& w = eng.filterbank().mother();
  std::vector<std::vector<double>> per_path(lags.size());
  for (const auto& path : paths) {
    std::vector<double> u = eng.cwt(path, j1);
    for (auto& v : u) v = a1(v);
    u = eng.cwt(u, j2);
    const std::size_t b = scattering::interior_begin(n, guard);
    const std::size_t e = scattering::interior_end(n, guard);
    double mean = 0.0;
    for (std::size_t i = b; i < e; ++i) mean += u[i];
    mean /= static_cast<double>(e - b);
    for (std::size_t li = 0; li < lags.size(); ++li) {
      const std::size_t off = static_cast<std::size_t>(lags[li] * macro + 0.5);
      double acc = 0.0;
      std::size_t cnt = 0;
      for (std::size_t i = b; i + off < e; ++i) {
        acc += (u[i] - mean) * (u[i + off] - mean);
        ++cnt;
      }
      per_path[li].push_back(rate * rate * acc / static_cast<double>(cnt));
    }
  }
  for (std::size_t li = 0; li < lags.size(); ++li) {
    const double emp = stats::mean(per_path[li]);
    const double se = per_path[li].size() > 1 ? stats::stderr_of_mean(per_path[li])
                                              : 1e-300;
    auto integrand = [&](double l) {
      const double v = w.fourier(l);
      return v * v * std::cos(l * lags[li]);
    };
    const int panels = 32 + static_cast<int>(8.0 * std::abs(lags[li]));
    const double theo =
        kappa * kappa * 2.0 *
        (quad::integrate_composite(integrand, 0.0, 8.0, panels, 16) +
         quad::integrate_decaying_tail(integrand, 8.0, 1e-10));
    out.empirical.push_back(emp);
    out.theoretical.push_back(theo);
    out.z_scores.push_back((emp - theo) / se);
    out.max_abs_dev = std::max(out.max_abs_dev, std::abs(emp - theo));
  }
  return out;
}

stats::LineFit slope_fit(const std::vector<double>& js,
                         const std::vector<double>& log2_moments,
                         const std::vector<double>& log2_sigmas) {
  if (js.size() < 4) throw std::invalid_argument("slope_fit: need >= 4 points");
  return stats::ols_fit(js, log2_moments, log2_sigmas);
}

InvarianceReport fbm_moment_invariance(
    const std::map<int, std::vector<MomentCurvePoint>>& curves_by_j1) {
  InvarianceReport rep;
  for (const auto& [j1, curve] : curves_by_j1) {
    if (curve.size() < 4)
      throw std::invalid_argument("fbm_moment_invariance: need >= 4 points per j1");
    // compensated levels log2(2^{j/2} S~) = log2 S~ + j/2 fitted at the range
    // center; the fit absorbs residual slope
    std::vector<double> x, y, s;
    for (const auto& pt : curve) {
      x.push_back(pt.j);
      y.push_back(std::log2(pt.value) + 0.5 * pt.j);
      s.push_back(pt.stderr_jk / (pt.value * std::log(2.0)));
    }
    const auto fit = stats::ols_fit(x, y, s);
    double xc = 0.0;
    for (double v : x) xc += v;
    xc /= x.size();
    const double level = fit.intercept + fit.slope * xc;
    double se_sq = 0.0;
    for (double v : s) se_sq += v * v;
    rep.intercepts[j1] = level;
    rep.intercept_ses[j1] = std::sqrt(se_sq) / x.size();
    // slope of the uncompensated curve
    std::vector<double> yy;
    for (const auto& pt : curve) yy.push_back(std::log2(pt.value));
    rep.slopes[j1] = stats::ols_fit(x, yy, s).slope;
  }
  for (auto it1 = rep.intercepts.begin(); it1 != rep.intercepts.end(); ++it1) {
    for (auto it2 = std::next(it1); it2 != rep.intercepts.end(); ++it2) {
      const double se = std::hypot(rep.intercept_ses[it1->first],
                                   rep.intercept_ses[it2->first]);
      const double z = std::abs(it1->second - it2->second) / se;
      rep.max_pairwise_z = std::max(rep.max_pairwise_z, z);
    }
  }
  rep.j1_independent = rep.max_pairwise_z <= 3.0;
  return rep;
}

}  // namespace nast::limits
