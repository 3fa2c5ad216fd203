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
#include <vector>

namespace nast::quad {

struct Rule {
  std::vector<double> nodes;    // on (-1, 1)
  std::vector<double> weights;  // sum to 2
};

/// Gauss-Legendre rule with n points, cached per n.
const Rule& gauss_legendre(int n);

/// Probabilists' Gauss-Hermite rule: nodes y_i and weights w_i with
/// sum_i w_i g(y_i) ~ int g(y) phi(y) dy, phi the standard normal density.
/// Weights sum to 1.
const Rule& gauss_hermite_prob(int n);

double integrate(const std::function<double(double)>& f, double a, double b,
                 int n = 32);

double integrate_composite(const std::function<double(double)>& f, double a,
                           double b, int panels, int n = 16);

/// int_0^b lambda^p f(lambda) dlambda for p > -1 with f smooth on [0,b].
/// The substitution u = lambda^(1+p) removes the endpoint singularity.
double integrate_power_singular(const std::function<double(double)>& f, double p,
                                double b, int panels = 24, int n = 16);

/// int_a^inf f for |f| eventually decaying: sums geometric panels
/// [a 2^k, a 2^(k+1)] until the running tail is below rel_tol * |total|.
double integrate_decaying_tail(const std::function<double(double)>& f, double a,
                               double rel_tol = 1e-10, int max_doublings = 60,
                               int n = 32);

}  // namespace nast::quad
