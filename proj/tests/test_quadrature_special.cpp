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

#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "nast/quadrature.hpp"
#include "nast/special.hpp"

using namespace nast;

TEST_CASE("gauss-legendre integrates polynomials exactly") {
  auto f = [](double x) { return 5 * x * x * x * x - x + 2.0; };
  CHECK(quad::integrate(f, -1.0, 3.0) == doctest::Approx(248.0).epsilon(1e-12));
  CHECK(quad::integrate_composite(f, -1.0, 3.0, 7) ==
        doctest::Approx(quad::integrate(f, -1.0, 3.0)).epsilon(1e-12));
}

TEST_CASE("gauss-hermite probabilists moments") {
  const auto& r = quad::gauss_hermite_prob(64);
  double m0 = 0, m2 = 0, m4 = 0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    m0 += r.weights[i];
    m2 += r.weights[i] * r.nodes[i] * r.nodes[i];
    m4 += r.weights[i] * std::pow(r.nodes[i], 4);
  }
  CHECK(m0 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m4 == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("power-singular substitution removes the endpoint singularity") {
  // int_0^1 x^(-0.8) dx = 5
  const double v = quad::integrate_power_singular([](double) { return 1.0; }, -0.8, 1.0);
  CHECK(v == doctest::Approx(5.0).epsilon(1e-10));
  // int_0^2 x^(-0.5) e^-x dx = sqrt(pi) erf(sqrt(2))
  const double w = quad::integrate_power_singular(
      [](double x) { return std::exp(-x); }, -0.5, 2.0);
  CHECK(w == doctest::Approx(std::sqrt(M_PI) * std::erf(std::sqrt(2.0))).epsilon(1e-10));
}

TEST_CASE("decaying tail integration") {
  const double v = quad::integrate_decaying_tail([](double x) { return std::exp(-x); }, 1.0);
  CHECK(v == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
}

TEST_CASE("normal quantile inverts the cdf") {
  for (double p : {0.001, 0.025, 0.2, 0.5, 0.77, 0.975, 0.999}) {
    const double x = special::norm_quantile(p);
    CHECK(special::norm_cdf(x) == doctest::Approx(p).epsilon(1e-10));
  }
  CHECK_THROWS_AS(special::norm_quantile(0.0), std::invalid_argument);
}

TEST_CASE("kolmogorov tail function endpoints") {
  CHECK(special::kolmogorov_q(0.0) == doctest::Approx(1.0));
  CHECK(special::kolmogorov_q(10.0) == doctest::Approx(0.0));
  // Q(0.8276) ~ 0.5 (median of the Kolmogorov law)
  CHECK(special::kolmogorov_q(0.82757) == doctest::Approx(0.5).epsilon(1e-3));
}
