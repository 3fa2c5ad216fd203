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

#include "nast/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace nast::stats {

double mean(const std::vector<double>& v) {
  if (v.empty()) throw std::invalid_argument("mean: empty");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double variance(const std::vector<double>& v) {
  if (v.size() < 2) throw std::invalid_argument("variance: need >= 2 samples");
  double m = mean(v), s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

double stderr_of_mean(const std::vector<double>& v) {
  return std::sqrt(variance(v) / static_cast<double>(v.size()));
}

double jackknife_stderr(const std::vector<double>& replicates) {
  const std::size_t n = replicates.size();
  if (n < 2) throw std::invalid_argument("jackknife_stderr: need >= 2 replicates");
  double m = mean(replicates), s = 0.0;
  for (double r : replicates) s += (r - m) * (r - m);
  return std::sqrt(s * static_cast<double>(n - 1) / static_cast<double>(n));
}

LineFit ols_fit(const std::vector<double>& x, const std::vector<double>& y,
                const std::vector<double>& point_sigmas) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 2) throw std::invalid_argument("ols_fit: bad sizes");
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("ols_fit: degenerate x");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (!point_sigmas.empty()) {
    if (point_sigmas.size() != n) throw std::invalid_argument("ols_fit: sigma size");
    double v = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double w = (x[i] - mx) / sxx;
      v += w * w * point_sigmas[i] * point_sigmas[i];
    }
    fit.slope_stderr = std::sqrt(v);
  } else if (n > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double r = y[i] - fit.intercept - fit.slope * x[i];
      rss += r * r;
    }
    fit.slope_stderr = std::sqrt(rss / (n - 2) / sxx);
  }
  return fit;
}

double lag_autocorr(const std::vector<double>& v, std::size_t lag) {
  if (v.size() <= lag + 1) throw std::invalid_argument("lag_autocorr: too short");
  const double m = mean(v);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    den += (v[i] - m) * (v[i] - m);
    if (i + lag < v.size()) num += (v[i] - m) * (v[i + lag] - m);
  }
  return num / den;
}

}  // namespace nast::stats
