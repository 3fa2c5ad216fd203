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

#include <cstdint>
#include <string>
#include <vector>

#include "nast/spectra.hpp"

namespace nast::simulate {

struct SamplePath {
  std::vector<double> values;
  double dt = 1.0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::string model_id;
  std::string method;
  std::size_t n() const { return values.size(); }
};

/// Spectral-synthesis plan for a stationary Gaussian model: per-bin variances
/// (bin-integrated near the origin, midpoint plus aliased folds elsewhere)
/// computed once and reused across an ensemble.
class SynthesisPlan {
 public:
  SynthesisPlan(const spectra::SpectralModel& m, std::size_t n, double dt);
  SamplePath generate(std::uint64_t seed, std::uint64_t stream = 0) const;
  double target_variance() const { return target_variance_; }

 private:
  std::size_t n_;
  double dt_;
  std::string model_id_;
  std::vector<double> bin_mass_;  // one-sided masses V_k, k = 0..n/2
  double target_variance_ = 0.0;
};

/// Real zero-mean stationary Gaussian path via Hermitian spectral synthesis.
SamplePath gaussian_stationary(const spectra::SpectralModel& m, std::size_t n,
                               double dt, std::uint64_t seed,
                               std::uint64_t stream = 0);

/// Exact-covariance fractional Brownian motion on the grid via circulant
/// embedding of fractional Gaussian noise, normalized so Var(B_H(1)) = 1 and
/// B_H(0) = 0 (stored at values[0]).
struct FbmPlan {
  FbmPlan(double H, std::size_t n, double dt);
  SamplePath generate(std::uint64_t seed, std::uint64_t stream = 0) const;
  bool eigenvalues_clipped() const { return clipped_; }

 private:
  double H_;
  std::size_t n_;
  double dt_;
  std::vector<double> eig_;  // circulant eigenvalues, clipped at 0
  bool clipped_ = false;
};

SamplePath fbm(double H, std::size_t n, double dt, std::uint64_t seed,
               std::uint64_t stream = 0);

/// L_tau X(t_k) = X(t_k - tau_k) by periodic 4-point cubic interpolation.
/// Requires sup |tau'| <= 1/2 on the grid.
SamplePath warp_path(const SamplePath& path, const std::vector<double>& tau);

}  // namespace nast::simulate
