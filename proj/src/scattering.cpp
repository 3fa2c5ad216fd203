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

#include "nast/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nast/stats.hpp"

namespace nast::scattering {

using fft::cplx;

Activation make_activation(const std::string& name) {
  Activation a;
  a.name = name;
  if (name == "modulus") {
    a.lipschitz = 1.0;
    a.homogeneous = true;
    a.chi = 1.0;
    a.f = [](double x) { return std::abs(x); };
  } else if (name == "relu") {
    a.lipschitz = 1.0;
    a.homogeneous = true;
    a.chi = 1.0;
    a.f = [](double x) { return x > 0.0 ? x : 0.0; };
  } else if (name == "tanh") {
    a.lipschitz = 1.0;
    a.differentiable_at_zero = true;
    a.deriv_at_zero = 1.0;
    a.f = [](double x) { return std::tanh(x); };
  } else if (name == "shifted-sigmoid") {
    a.lipschitz = 0.25;
    a.differentiable_at_zero = true;
    a.deriv_at_zero = 0.25;
    a.f = [](double x) { return 1.0 / (1.0 + std::exp(-x)) - 0.5; };
  } else if (name == "identity") {
    a.lipschitz = 1.0;
    a.differentiable_at_zero = true;
    a.deriv_at_zero = 1.0;
    a.homogeneous = true;
    a.chi = 1.0;
    a.f = [](double x) { return x; };
  } else {
    throw std::invalid_argument("unknown activation: " + name);
  }
  return a;
}

Activation make_activation_table(const std::vector<double>& x,
                                 const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("activation table: need >= 2 matched points");
  Activation a;
  a.name = "custom-table";
  double lip = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (x[i] <= x[i - 1]) throw std::invalid_argument("activation table: x ascending");
    lip = std::max(lip, std::abs((y[i] - y[i - 1]) / (x[i] - x[i - 1])));
  }
  a.lipschitz = lip;
  const std::vector<double> xs = x, ys = y;
  a.f = [xs, ys](double v) {
    if (v <= xs.front()) return ys.front();
    if (v >= xs.back()) return ys.back();
    auto it = std::upper_bound(xs.begin(), xs.end(), v);
    std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
    const double f = (v - xs[i]) / (xs[i + 1] - xs[i]);
    return ys[i] * (1.0 - f) + ys[i + 1] * f;
  };
  // A(0) by evaluation; the flag set drives Lemma-1 eligibility
  a.at_zero = a.f(0.0);
  return a;
}

ScatteringEngine::ScatteringEngine(const wavelets::Filterbank& fb, std::size_t n)
    : fb_(fb), n_(n) {
  if (!fft::is_pow2(n)) throw std::invalid_argument("engine: n must be a power of two");
  const double dl = 2.0 * M_PI / (n_ * fb_.dt());
  father_resp_.resize(n_ / 2 + 1);
  const double scaleJ = std::pow(2.0, fb_.J());
  for (std::size_t k = 0; k <= n_ / 2; ++k)
    father_resp_[k] = fb_.father_fourier(scaleJ * k * dl);
}

std::size_t ScatteringEngine::guard(int jmax) const {
  const double half_support =
      fb_.mother().time_half_support(1e-6).value_or(8.0) * std::pow(2.0, jmax);
  const double g = std::max(8.0 * std::pow(2.0, jmax), half_support) / fb_.dt();
  return std::min(n_ / 4, static_cast<std::size_t>(std::ceil(g)));
}

std::vector<cplx> ScatteringEngine::spectrum(const std::vector<double>& x) const {
  if (x.size() != n_) throw std::invalid_argument("engine: path length mismatch");
  std::vector<cplx> out;
  fft::forward_r2c(x, out);
  return out;
}

const std::vector<cplx>& ScatteringEngine::response(int j) const {
  std::lock_guard<std::mutex> lock(cache_mutex_);
  auto it = resp_cache_.find(j);
  if (it != resp_cache_.end()) return it->second;

  // Frequency-sampled response Psi(2^j lambda_k): circular convolution with
  // the periodized filter. Keeps the Littlewood-Paley bound exact on the
  // discrete grid, which the energy statements require.
  const auto& w = fb_.mother();
  if (16.0 * std::pow(2.0, j) / fb_.dt() > static_cast<double>(n_))
    throw std::invalid_argument("engine: scale too large for signal length");
  std::vector<cplx> resp(n_ / 2 + 1);
  const double dl = 2.0 * M_PI / (n_ * fb_.dt());
  const double scale = std::pow(2.0, j);
  const bool odd = w.fourier_parity() < 0;
  for (std::size_t k = 0; k <= n_ / 2; ++k) {
    const double v = w.fourier(scale * k * dl);
    resp[k] = odd ? cplx(0.0, -v) : cplx(v, 0.0);
  }
  return resp_cache_.emplace(j, std::move(resp)).first->second;
}

std::vector<double> ScatteringEngine::conv_from_spectrum(
    const std::vector<cplx>& xhat, int j) const {
  const auto& H = response(j);
  std::vector<cplx> prod(xhat.size());
  for (std::size_t k = 0; k < xhat.size(); ++k) prod[k] = xhat[k] * H[k];
  std::vector<double> out;
  fft::inverse_c2r(prod, n_, out);
  return out;
}

std::vector<double> ScatteringEngine::pool_from_spectrum(
    const std::vector<cplx>& xhat) const {
  std::vector<cplx> prod(xhat.size());
  for (std::size_t k = 0; k < xhat.size(); ++k) prod[k] = xhat[k] * father_resp_[k];
  std::vector<double> out;
  fft::inverse_c2r(prod, n_, out);
  return out;
}

std::vector<double> ScatteringEngine::cwt(const std::vector<double>& x, int j) const {
  return conv_from_spectrum(spectrum(x), j);
}

std::vector<double> ScatteringEngine::pool(const std::vector<double>& x) const {
  return pool_from_spectrum(spectrum(x));
}

std::vector<double> ScatteringEngine::nast(const std::vector<double>& x,
                                           const std::vector<int>& js,
                                           const std::vector<Activation>& as) const {
  if (js.empty() || js.size() != as.size())
    throw std::invalid_argument("nast: need matching scale/activation lists");
  std::vector<double> cur = cwt(x, js[0]);
  for (std::size_t layer = 0;; ++layer) {
    const auto& A = as[layer];
    for (auto& v : cur) v = A(v);
    if (layer + 1 == js.size()) break;
    cur = cwt(cur, js[layer + 1]);
  }
  return cur;
}

ScatteringTree full_tree(const ScatteringEngine& eng, const std::vector<double>& x,
                         int order, const std::vector<Activation>& as,
                         bool freq_decreasing, std::size_t node_budget) {
  if (order < 0) throw std::invalid_argument("full_tree: order >= 0");
  if (static_cast<int>(as.size()) < order)
    throw std::invalid_argument("full_tree: need one activation per layer");
  const auto& scales = eng.filterbank().scales();
  // node budget check up front
  std::size_t count = 1, level = 1;
  for (int m = 1; m <= order; ++m) {
    level *= scales.size();
    count += level;
    if (count > node_budget)
      throw std::invalid_argument("full_tree: node budget exceeded, need " +
                                  std::to_string(count));
  }
  ScatteringTree tree;
  tree.orders.resize(order + 1);
  tree.pooled.resize(order + 1);
  int jmax = eng.filterbank().J();
  for (int j : scales) jmax = std::max(jmax, j);
  tree.guard = eng.guard(jmax);

  tree.orders[0][{}] = x;
  tree.pooled[0][{}] = eng.pool(x);
  for (int m = 1; m <= order; ++m) {
    const auto& prev = tree.orders[m - 1];
    for (const auto& [key, series] : prev) {
      const auto xhat = eng.spectrum(series);
      for (int j : scales) {
        if (freq_decreasing && !key.empty() && j <= key.back()) continue;
        std::vector<int> nk = key;
        nk.push_back(j);
        std::vector<double> u = eng.conv_from_spectrum(xhat, j);
        const auto& A = as[m - 1];
        for (auto& v : u) v = A(v);
        tree.pooled[m][nk] = eng.pool(u);
        tree.orders[m][nk] = std::move(u);
      }
    }
  }
  return tree;
}

std::size_t interior_begin(std::size_t n, std::size_t guard) {
  return std::min(guard, n / 4);
}
std::size_t interior_end(std::size_t n, std::size_t guard) {
  return n - std::min(guard, n / 4);
}

namespace {

double interior_mean_sq(const std::vector<double>& v, std::size_t guard) {
  const std::size_t b = interior_begin(v.size(), guard);
  const std::size_t e = interior_end(v.size(), guard);
  double s = 0.0;
  for (std::size_t i = b; i < e; ++i) s += v[i] * v[i];
  return s / static_cast<double>(e - b);
}

double interior_mean_abs(const std::vector<double>& v, std::size_t guard) {
  const std::size_t b = interior_begin(v.size(), guard);
  const std::size_t e = interior_end(v.size(), guard);
  double s = 0.0;
  for (std::size_t i = b; i < e; ++i) s += std::abs(v[i]);
  return s / static_cast<double>(e - b);
}

}  // namespace

EnergyLedger energy_ledger(const ScatteringEngine& eng,
                           const std::vector<std::vector<double>>& paths, int order,
                           const std::vector<Activation>& as) {
  if (paths.size() < 50)
    throw std::invalid_argument("energy_ledger: ensemble size >= 50 required");
  for (const auto& A : as)
    if (!A.lemma1_eligible())
      throw std::invalid_argument("energy_ledger: activation not Lemma-1 eligible: " +
                                  A.name);
  const std::size_t P = paths.size();
  // per-path energies: orders 0..order and pooled 0..order
  std::vector<std::vector<double>> u_e(order + 1, std::vector<double>(P, 0.0));
  std::vector<std::vector<double>> s_e(order + 1, std::vector<double>(P, 0.0));
  for (std::size_t p = 0; p < P; ++p) {
    ScatteringTree tree = full_tree(eng, paths[p], order, as);
    for (int m = 0; m <= order; ++m) {
      double eu = 0.0, es = 0.0;
      for (const auto& [k, v] : tree.orders[m]) eu += interior_mean_sq(v, tree.guard);
      for (const auto& [k, v] : tree.pooled[m]) es += interior_mean_sq(v, tree.guard);
      u_e[m][p] = eu;
      s_e[m][p] = es;
    }
  }
  EnergyLedger led;
  led.order_energy.resize(order + 1);
  led.order_energy_se.resize(order + 1);
  led.pooled_energy.resize(order + 1);
  led.pooled_energy_se.resize(order + 1);
  for (int m = 0; m <= order; ++m) {
    led.order_energy[m] = stats::mean(u_e[m]);
    led.order_energy_se[m] = stats::stderr_of_mean(u_e[m]);
    led.pooled_energy[m] = stats::mean(s_e[m]);
    led.pooled_energy_se[m] = stats::stderr_of_mean(s_e[m]);
  }
  led.input_energy = led.order_energy[0];
  led.monotone_within_2se = true;
  for (int m = 1; m <= order; ++m) {
    const double se = std::hypot(led.order_energy_se[m - 1], led.order_energy_se[m]);
    if (led.order_energy[m] > led.order_energy[m - 1] + 2.0 * se)
      led.monotone_within_2se = false;
  }
  led.total_pooled = 0.0;
  double tot_se_sq = 0.0;
  for (int m = 0; m <= order; ++m) {
    led.total_pooled += led.pooled_energy[m];
    tot_se_sq += led.pooled_energy_se[m] * led.pooled_energy_se[m];
  }
  const double comb_se =
      std::sqrt(tot_se_sq + led.order_energy_se[0] * led.order_energy_se[0]);
  led.total_bounded_within_2se =
      led.total_pooled <= led.input_energy + 2.0 * comb_se;
  return led;
}

MomentEstimate normalized_second_moment(const ScatteringEngine& eng,
                                        const std::vector<std::vector<double>>& paths,
                                        int j1, int j2) {
  const std::size_t P = paths.size();
  if (P < 2) throw std::invalid_argument("normalized_second_moment: >= 2 paths");
  const std::size_t guard = eng.guard(std::max(j1, j2));
  std::vector<double> nums(P), dens(P);
  for (std::size_t p = 0; p < P; ++p) {
    std::vector<double> u1 = eng.cwt(paths[p], j1);
    for (auto& v : u1) v = std::abs(v);
    dens[p] = interior_mean_abs(u1, guard);
    std::vector<double> u2 = eng.cwt(u1, j2);
    nums[p] = interior_mean_abs(u2, guard);
  }
  const double num = stats::mean(nums), den = stats::mean(dens);
  if (den == 0.0)
    throw std::invalid_argument("normalized_second_moment: degenerate input");
  MomentEstimate est;
  est.value = num / den;
  est.paths = P;
  std::vector<double> reps(P);
  for (std::size_t p = 0; p < P; ++p) {
    const double nn = (num * P - nums[p]) / (P - 1);
    const double dd = (den * P - dens[p]) / (P - 1);
    reps[p] = nn / dd;
  }
  est.stderr_jk = stats::jackknife_stderr(reps);
  return est;
}

std::string export_tree(const ScatteringTree& tree) {
  std::ostringstream os;
  os << "# path\torder\tpooled_value\tinterior_mean\tinterior_var\n";
  os.precision(10);
  for (std::size_t m = 0; m < tree.orders.size(); ++m) {
    for (const auto& [key, series] : tree.orders.at(m)) {
      std::string k = "(";
      for (std::size_t i = 0; i < key.size(); ++i)
        k += (i ? "," : "") + std::to_string(key[i]);
      k += ")";
      const std::size_t b = interior_begin(series.size(), tree.guard);
      const std::size_t e = interior_end(series.size(), tree.guard);
      double mean = 0.0, sq = 0.0;
      for (std::size_t i = b; i < e; ++i) {
        mean += series[i];
        sq += series[i] * series[i];
      }
      mean /= static_cast<double>(e - b);
      const double var = sq / static_cast<double>(e - b) - mean * mean;
      const auto& pooled = tree.pooled.at(m).at(key);
      double pooled_mean = 0.0;
      for (std::size_t i = b; i < e; ++i) pooled_mean += pooled[i];
      pooled_mean /= static_cast<double>(e - b);
      os << k << "\t" << m << "\t" << pooled_mean << "\t" << mean << "\t" << var
         << "\n";
    }
  }
  return os.str();
}

DeformationReport deformation_distance(const ScatteringEngine& eng,
                                       const std::vector<simulate::SamplePath>& paths,
                                       const std::vector<double>& tau, int order,
                                       const std::vector<Activation>& as) {
  for (const auto& A : as)
    if (!A.lemma1_eligible())
      throw std::invalid_argument("deformation_distance: ineligible activation: " +
                                  A.name);
  if (paths.empty()) throw std::invalid_argument("deformation_distance: no paths");
  const double dt = paths.front().dt;
  const std::size_t n = paths.front().n();
  if (tau.size() != n) throw std::invalid_argument("deformation_distance: tau size");

  // grid K(tau): sup |tau'| (log (||dtau||_inf / ||tau'||_inf) v 1) + sup|tau''|
  double sup_t = 0.0, sup_d1 = 0.0, sup_d2 = 0.0, tmin = tau[0], tmax = tau[0];
  for (std::size_t k = 0; k < n; ++k) {
    const double d1 = (tau[(k + 1) % n] - tau[(k + n - 1) % n]) / (2.0 * dt);
    const double d2 =
        (tau[(k + 1) % n] - 2.0 * tau[k] + tau[(k + n - 1) % n]) / (dt * dt);
    sup_t = std::max(sup_t, std::abs(tau[k]));
    sup_d1 = std::max(sup_d1, std::abs(d1));
    sup_d2 = std::max(sup_d2, std::abs(d2));
    tmin = std::min(tmin, tau[k]);
    tmax = std::max(tmax, tau[k]);
  }
  if (sup_d1 > 0.5 + 1e-12)
    throw std::invalid_argument("deformation_distance: sup |tau'| exceeds 1/2");
  DeformationReport rep;
  rep.tau_sup = sup_t;
  if (sup_d1 == 0.0) {
    rep.k_tau = 0.0;
  } else {
    const double ratio = std::max((tmax - tmin) / sup_d1, 1.0);
    const double inner = sup_d1 * std::max(std::log(ratio), 1.0) + sup_d2;
    rep.k_tau = inner * inner;
  }

  std::vector<double> dists(paths.size());
  std::vector<double> energies(paths.size());
  for (std::size_t p = 0; p < paths.size(); ++p) {
    const auto warped = simulate::warp_path(paths[p], tau);
    ScatteringTree t0 = full_tree(eng, paths[p].values, order, as);
    ScatteringTree t1 = full_tree(eng, warped.values, order, as);
    double d = 0.0;
    for (int m = 0; m <= order; ++m) {
      for (const auto& [key, v0] : t0.pooled[m]) {
        const auto& v1 = t1.pooled[m].at(key);
        const std::size_t b = interior_begin(v0.size(), t0.guard);
        const std::size_t e = interior_end(v0.size(), t0.guard);
        double s = 0.0;
        for (std::size_t i = b; i < e; ++i) {
          const double diff = v1[i] - v0[i];
          s += diff * diff;
        }
        d += s / static_cast<double>(e - b);
      }
    }
    dists[p] = d;
    energies[p] = interior_mean_sq(paths[p].values, t0.guard);
  }
  rep.distance = stats::mean(dists);
  rep.distance_se = paths.size() > 1 ? stats::stderr_of_mean(dists) : 0.0;
  rep.input_energy = stats::mean(energies);
  rep.translation_term = std::pow(2.0, -2.0 * eng.filterbank().J()) *
                         (order + 1.0) * sup_t * sup_t * rep.input_energy;
  return rep;
}

}  // namespace nast::scattering
