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

#include "nast/simulate.hpp"

#include <cmath>
#include <stdexcept>

#include "nast/fft.hpp"
#include "nast/quadrature.hpp"
#include "nast/rng.hpp"

namespace nast::simulate {

using fft::cplx;

SynthesisPlan::SynthesisPlan(const spectra::SpectralModel& m, std::size_t n,
                             double dt)
    : n_(n), dt_(dt), model_id_(m.id()) {
  if (!fft::is_pow2(n)) throw std::invalid_argument("path length must be a power of two");
  if (!m.integrable())
    throw std::invalid_argument("non-integrable model: filter first");
  const spectra::Density d = m.density();
  const double delta = 2.0 * M_PI / (n * dt);
  const double omega = 2.0 * M_PI / dt;  // aliasing period
  const std::size_t half = n / 2;
  bin_mass_.assign(half + 1, 0.0);

  const double mass = spectra::total_mass(m);
  // choose the fold count so the un-aliased remainder is small, then spread
  // that remainder flat: it is spectrally white to the accuracy that matters
  int folds = 0;
  double remainder = 0.0;
  for (int M = 1; M <= 64; M *= 2) {
    remainder = 2.0 * quad::integrate_decaying_tail(
                          [&](double l) { return d.eval(l); },
                          (M + 0.5) * omega - 0.5 * delta, 1e-8);
    folds = M;
    if (remainder < 1e-4 * mass) break;
  }

  const double p = d.sing_exponent;
  for (std::size_t k = 1; k <= half; ++k) {
    const double lam = k * delta;
    double v;
    if (k <= 8) {
      // exact bin integral against the origin singularity
      const double a = lam - 0.5 * delta, b = lam + 0.5 * delta;
      if (p < 0.0) {
        const double q = 1.0 + p;
        v = quad::integrate(
                [&](double u) { return d.smooth(std::pow(u, 1.0 / q)); },
                std::pow(a, q), std::pow(b, q), 24) /
            q;
      } else {
        v = quad::integrate([&](double l) { return d.eval(l); }, a, b, 24);
      }
    } else {
      v = d.eval(lam) * delta;
    }
    for (int mfold = 1; mfold <= folds; ++mfold)
      v += (d.eval(lam + mfold * omega) + d.eval(mfold * omega - lam)) * delta;
    bin_mass_[k] = v;
  }
  // flat remainder share over the 2*(half) occupied two-sided bins
  const double flat = remainder / (2.0 * half);
  for (std::size_t k = 1; k <= half; ++k) bin_mass_[k] += flat;
  target_variance_ = 0.0;
  for (std::size_t k = 1; k < half; ++k) target_variance_ += 2.0 * bin_mass_[k];
  target_variance_ += 2.0 * bin_mass_[half];
}

SamplePath SynthesisPlan::generate(std::uint64_t seed, std::uint64_t stream) const {
  rng::Rng rng(seed, stream);
  const std::size_t half = n_ / 2;
  std::vector<cplx> spec(half + 1, cplx(0.0, 0.0));
  for (std::size_t k = 1; k < half; ++k) {
    const double s = std::sqrt(0.5 * bin_mass_[k]);
    const double re = rng.normal(), im = rng.normal();
    spec[k] = cplx(s * re, s * im);
  }
  spec[half] = cplx(std::sqrt(2.0 * bin_mass_[half]) * rng.normal(), 0.0);
  SamplePath p;
  fft::inverse_c2r(spec, n_, p.values);
  // inverse_c2r includes 1/n; the synthesis sum wants the raw transform
  for (auto& v : p.values) v *= static_cast<double>(n_);
  p.dt = dt_;
  p.seed = seed;
  p.stream = stream;
  p.model_id = model_id_;
  p.method = "spectral-synthesis";
  return p;
}

SamplePath gaussian_stationary(const spectra::SpectralModel& m, std::size_t n,
                               double dt, std::uint64_t seed, std::uint64_t stream) {
  return SynthesisPlan(m, n, dt).generate(seed, stream);
}

FbmPlan::FbmPlan(double H, std::size_t n, double dt) : H_(H), n_(n), dt_(dt) {
  if (H <= 0.0 || H >= 1.0) throw std::invalid_argument("fbm: H must lie in (0,1)");
  if (!fft::is_pow2(n)) throw std::invalid_argument("path length must be a power of two");
  // fGn covariance under Var(B_H(1)) = 1
  const double v = std::pow(dt, 2.0 * H);
  auto gamma = [&](std::size_t k) {
    const double kk = static_cast<double>(k);
    return 0.5 * v *
           (std::pow(kk + 1.0, 2.0 * H) - 2.0 * std::pow(kk, 2.0 * H) +
            std::pow(std::abs(kk - 1.0), 2.0 * H));
  };
  const std::size_t two_n = 2 * n;
  std::vector<cplx> c(two_n);
  for (std::size_t k = 0; k <= n; ++k) c[k] = gamma(k);
  for (std::size_t k = n + 1; k < two_n; ++k) c[k] = gamma(two_n - k);
  fft::transform_c2c(c, -1);
  eig_.resize(two_n);
  for (std::size_t k = 0; k < two_n; ++k) {
    double e = c[k].real();
    if (e < 0.0) {
      if (e < -1e-10 * v)
        throw std::runtime_error("fbm: circulant embedding not positive definite");
      e = 0.0;
      clipped_ = true;
    }
    eig_[k] = e;
  }
}

SamplePath FbmPlan::generate(std::uint64_t seed, std::uint64_t stream) const {
  rng::Rng rng(seed, stream);
  const std::size_t two_n = 2 * n_;
  std::vector<cplx> w(two_n);
  w[0] = cplx(std::sqrt(eig_[0]) * rng.normal(), 0.0);
  for (std::size_t k = 1; k < n_; ++k) {
    const double s = std::sqrt(0.5 * eig_[k]);
    const double re = rng.normal(), im = rng.normal();
    w[k] = cplx(s * re, s * im);
    w[two_n - k] = std::conj(w[k]);
  }
  w[n_] = cplx(std::sqrt(eig_[n_]) * rng.normal(), 0.0);
  fft::transform_c2c(w, -1);
  const double scale = 1.0 / std::sqrt(static_cast<double>(two_n));
  SamplePath p;
  p.values.resize(n_);
  double acc = 0.0;
  p.values[0] = 0.0;  // B_H(0) = 0
  for (std::size_t i = 1; i < n_; ++i) {
    acc += w[i - 1].real() * scale;
    p.values[i] = acc;
  }
  p.dt = dt_;
  p.seed = seed;
  p.stream = stream;
  p.model_id = "kind=fbm H=" + std::to_string(H_);
  p.method = "fgn-circulant";
  return p;
}

SamplePath fbm(double H, std::size_t n, double dt, std::uint64_t seed,
               std::uint64_t stream) {
  return FbmPlan(H, n, dt).generate(seed, stream);
}

SamplePath warp_path(const SamplePath& path, const std::vector<double>& tau) {
  const std::size_t n = path.n();
  if (tau.size() != n) throw std::invalid_argument("warp_path: tau size mismatch");
  const double dt = path.dt;
  double max_slope = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double tp = (tau[(k + 1) % n] - tau[(k + n - 1) % n]) / (2.0 * dt);
    max_slope = std::max(max_slope, std::abs(tp));
  }
  if (max_slope > 0.5 + 1e-12)
    throw std::invalid_argument("warp_path: sup |tau'| exceeds 1/2");
  SamplePath out = path;
  out.method = "warp";
  const auto& x = path.values;
  for (std::size_t k = 0; k < n; ++k) {
    const double u = static_cast<double>(k) - tau[k] / dt;
    double fl = std::floor(u);
    const double f = u - fl;
    long i0 = static_cast<long>(fl) % static_cast<long>(n);
    if (i0 < 0) i0 += static_cast<long>(n);
    const std::size_t im = (i0 + n - 1) % n;
    const std::size_t i1 = (i0 + 1) % n;
    const std::size_t i2 = (i0 + 2) % n;
    const double ym = x[im], y0 = x[static_cast<std::size_t>(i0)], y1 = x[i1],
                 y2 = x[i2];
    out.values[k] =
        y0 + 0.5 * f * (y1 - ym +
                        f * (2 * ym - 5 * y0 + 4 * y1 - y2 +
                             f * (3 * (y0 - y1) + y2 - ym)));
  }
  return out;
}

}  // namespace nast::simulate
