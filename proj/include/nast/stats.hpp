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

#include <cstddef>
#include <vector>

namespace nast::stats {

double mean(const std::vector<double>& v);
double variance(const std::vector<double>& v);  // unbiased
double stderr_of_mean(const std::vector<double>& v);

/// Delete-one jackknife standard error of a statistic given its leave-one-out
/// replicates.
double jackknife_stderr(const std::vector<double>& replicates);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};

/// Ordinary least squares y = a + b x. When point_sigmas is non-empty the
/// slope standard error is propagated from them instead of from residuals.
LineFit ols_fit(const std::vector<double>& x, const std::vector<double>& y,
                const std::vector<double>& point_sigmas = {});

double lag_autocorr(const std::vector<double>& v, std::size_t lag);

}  // namespace nast::stats
