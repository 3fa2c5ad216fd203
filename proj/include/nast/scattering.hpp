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
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "nast/fft.hpp"
#include "nast/simulate.hpp"
#include "nast/wavelets.hpp"

namespace nast::scattering {

struct Activation {
  std::string name;
  double lipschitz = 1.0;
  double at_zero = 0.0;
  bool differentiable_at_zero = false;
  double deriv_at_zero = 0.0;
  bool homogeneous = false;  // member of F_chi
  double chi = 1.0;
  std::function<double(double)> f;

  bool lemma1_eligible() const {
    return lipschitz <= 1.0 + 1e-12 && at_zero == 0.0;
  }
  double operator()(double x) const { return f(x); }
};

/// modulus, relu, tanh, shifted-sigmoid (1/(1+e^-x) - 1/2), identity.
Activation make_activation(const std::string& name);

/// Piecewise-linear activation from a table; Lipschitz constant measured from
/// the segments.
Activation make_activation_table(const std::vector<double>& x,
                                 const std::vector<double>& y);

/// FFT-domain scattering engine over a fixed path length. Circular
/// convolution throughout; statistics must discard guard(jmax) samples from
/// both ends. Thread-safe; per-scale Daubechies responses are cached.
class ScatteringEngine {
 public:
  ScatteringEngine(const wavelets::Filterbank& fb, std::size_t n);

  const wavelets::Filterbank& filterbank() const { return fb_; }
  std::size_t n() const { return n_; }
  double dt() const { return fb_.dt(); }

  /// Guard margin in samples: max(8 * 2^jmax / dt, filter half-support).
  std::size_t guard(int jmax) const;

  std::vector<fft::cplx> spectrum(const std::vector<double>& x) const;
  std::vector<double> conv_from_spectrum(const std::vector<fft::cplx>& xhat,
                                         int j) const;
  std::vector<double> pool_from_spectrum(const std::vector<fft::cplx>& xhat) const;

  /// X * psi_j by circular FFT convolution.
  std::vector<double> cwt(const std::vector<double>& x, int j) const;
  /// P_J X = X * phi_J.
  std::vector<double> pool(const std::vector<double>& x) const;

  /// U^{A_{1:n}}[j_{1:n}] X: alternating cwt and pointwise activation.
  std::vector<double> nast(const std::vector<double>& x, const std::vector<int>& js,
                           const std::vector<Activation>& as) const;

 private:
  const std::vector<fft::cplx>& response(int j) const;
  wavelets::Filterbank fb_;
  std::size_t n_;
  std::vector<double> father_resp_;
  mutable std::mutex cache_mutex_;
  mutable std::map<int, std::vector<fft::cplx>> resp_cache_;
};

struct ScatteringTree {
  /// orders[m]: scale path (j_1..j_m) -> U series; orders[0] holds {} -> X.
  std::vector<std::map<std::vector<int>, std::vector<double>>> orders;
  /// pooled[m]: same keys -> P_J U series.
  std::vector<std::map<std::vector<int>, std::vector<double>>> pooled;
  std::size_t guard = 0;
};

/// All nodes up to order `order`, pooled through the father wavelet.
/// `freq_decreasing` restricts paths to j_1 < j_2 < ... .
ScatteringTree full_tree(const ScatteringEngine& eng, const std::vector<double>& x,
                         int order, const std::vector<Activation>& as,
                         bool freq_decreasing = false,
                         std::size_t node_budget = 8192);

struct EnergyLedger {
  std::vector<double> order_energy;         // m = 0..n: E ||U^m||^2 (m=0: E|X|^2)
  std::vector<double> order_energy_se;
  std::vector<double> pooled_energy;        // m = 0..n: E ||S^m||^2
  std::vector<double> pooled_energy_se;
  bool monotone_within_2se = false;
  bool total_bounded_within_2se = false;
  double total_pooled = 0.0;
  double input_energy = 0.0;
};

/// Monte-Carlo energy ledger over an ensemble of paths (>= 50).
EnergyLedger energy_ledger(const ScatteringEngine& eng,
                           const std::vector<std::vector<double>>& paths, int order,
                           const std::vector<Activation>& as);

struct MomentEstimate {
  double value = 0.0;
  double stderr_jk = 0.0;  // delete-one-path jackknife
  std::size_t paths = 0;
};

/// S~X(j1,j2) = E_hat | |X*psi_j1| * psi_j2 | / E_hat |X*psi_j1| pooled over
/// interior samples and paths.
MomentEstimate normalized_second_moment(const ScatteringEngine& eng,
                                        const std::vector<std::vector<double>>& paths,
                                        int j1, int j2);

struct DeformationReport {
  double distance = 0.0;       // E || S_J L_tau X - S_J X ||^2
  double distance_se = 0.0;
  double k_tau = 0.0;          // grid K(tau)
  double tau_sup = 0.0;
  double translation_term = 0.0;  // 2^{-2J} (n+1) ||tau||_inf^2 E|X|^2
  double input_energy = 0.0;
};

DeformationReport deformation_distance(const ScatteringEngine& eng,
                                       const std::vector<simulate::SamplePath>& paths,
                                       const std::vector<double>& tau, int order,
                                       const std::vector<Activation>& as);

/// Interior view helpers.
std::size_t interior_begin(std::size_t n, std::size_t guard);
std::size_t interior_end(std::size_t n, std::size_t guard);

/// Tabular tree export: path-key, order, pooled-value, interior-mean,
/// interior-var per node.
std::string export_tree(const ScatteringTree& tree);

}  // namespace nast::scattering
