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

#include "nast/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace nast::quad {

namespace {

std::mutex g_rule_mutex;

Rule make_gauss_legendre(int n) {
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  // Newton iteration on P_n with the three-term recurrence.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  return r;
}

// Orthonormal physicists' Hermite value via the stable recurrence.
double hermite_orthonormal(int n, double x, double* deriv) {
  double p0 = std::pow(M_PI, -0.25);
  if (n == 0) {
    if (deriv) *deriv = 0.0;
    return p0;
  }
  double p1 = std::sqrt(2.0) * x * p0;
  for (int k = 1; k < n; ++k) {
    double p2 = std::sqrt(2.0 / (k + 1.0)) * x * p1 - std::sqrt(k / (k + 1.0)) * p0;
    p0 = p1;
    p1 = p2;
  }
  if (deriv) *deriv = std::sqrt(2.0 * n) * p0;
  return p1;
}

// Physicists' Gauss-Hermite nodes by interlacing bisection plus Newton polish;
// Christoffel weights from the orthonormal kernel.
Rule make_gauss_hermite(int n) {
  std::vector<double> prev;  // roots of order-m polynomial, ascending
  for (int m = 1; m <= n; ++m) {
    std::vector<double> roots(m);
    double bound = std::sqrt(2.0 * m + 1.0) + 2.0;
    for (int i = 0; i < m; ++i) {
      double lo = (i == 0) ? -bound : prev[i - 1];
      double hi = (i == m - 1) ? bound : prev[i];
      double flo = hermite_orthonormal(m, lo, nullptr);
      double x = 0.5 * (lo + hi);
      for (int it = 0; it < 200; ++it) {
        double fx = hermite_orthonormal(m, x, nullptr);
        if ((fx > 0) == (flo > 0)) {
          lo = x;
          flo = fx;
        } else {
          hi = x;
        }
        x = 0.5 * (lo + hi);
        if (hi - lo < 1e-13) break;
      }
      for (int it = 0; it < 8; ++it) {
        double d;
        double fx = hermite_orthonormal(m, x, &d);
        if (d == 0.0) break;
        double dx = fx / d;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      roots[i] = x;
    }
    prev = std::move(roots);
  }
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = prev[i];
    double s = 0.0;
    for (int k = 0; k < n; ++k) {
      double v = hermite_orthonormal(k, x, nullptr);
      s += v * v;
    }
    r.nodes[i] = x;
    r.weights[i] = 1.0 / s;
  }
  return r;
}

}  // namespace

const Rule& gauss_legendre(int n) {
  static std::map<int, Rule> cache;
  std::lock_guard<std::mutex> lock(g_rule_mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_gauss_legendre(n)).first;
  return it->second;
}

const Rule& gauss_hermite_prob(int n) {
  static std::map<int, Rule> cache;
  std::lock_guard<std::mutex> lock(g_rule_mutex);
  auto it = cache.find(n);
  if (it == cache.end()) {
    Rule phys = make_gauss_hermite(n);
    Rule prob;
    prob.nodes.resize(n);
    prob.weights.resize(n);
    const double inv_sqrt_pi = 1.0 / std::sqrt(M_PI);
    for (int i = 0; i < n; ++i) {
      prob.nodes[i] = phys.nodes[i] * std::sqrt(2.0);
      prob.weights[i] = phys.weights[i] * inv_sqrt_pi;
    }
    it = cache.emplace(n, std::move(prob)).first;
  }
  return it->second;
}

double integrate(const std::function<double(double)>& f, double a, double b, int n) {
  const Rule& r = gauss_legendre(n);
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += r.weights[i] * f(c + h * r.nodes[i]);
  return s * h;
}

double integrate_composite(const std::function<double(double)>& f, double a,
                           double b, int panels, int n) {
  if (panels < 1) throw std::invalid_argument("integrate_composite: panels < 1");
  double s = 0.0;
  const double h = (b - a) / panels;
  for (int k = 0; k < panels; ++k) s += integrate(f, a + k * h, a + (k + 1) * h, n);
  return s;
}

double integrate_power_singular(const std::function<double(double)>& f, double p,
                                double b, int panels, int n) {
  if (p <= -1.0) throw std::invalid_argument("integrate_power_singular: p <= -1");
  if (b <= 0.0) return 0.0;
  const double q = 1.0 + p;
  auto g = [&](double u) { return f(std::pow(u, 1.0 / q)); };
  return integrate_composite(g, 0.0, std::pow(b, q), panels, n) / q;
}

double integrate_decaying_tail(const std::function<double(double)>& f, double a,
                               double rel_tol, int max_doublings, int n) {
  double total = 0.0;
  double lo = a;
  for (int k = 0; k < max_doublings; ++k) {
    double hi = 2.0 * lo;
    double piece = integrate_composite(f, lo, hi, 4, n);
    total += piece;
    if (std::abs(piece) < rel_tol * std::max(std::abs(total), 1e-300)) break;
    lo = hi;
  }
  return total;
}

}  // namespace nast::quad
