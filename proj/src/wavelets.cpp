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

#include "nast/wavelets.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "nast/fft.hpp"
#include "nast/quadrature.hpp"

namespace nast::wavelets {

namespace {

constexpr int kCascadeLevels = 12;
constexpr double kCascadeStep = 1.0 / 4096.0;  // 2^-12

using cplx = std::complex<double>;

// ---------------------------------------------------------------------------
// Daubechies filter coefficients by spectral factorization.
// ---------------------------------------------------------------------------

std::vector<cplx> polynomial_roots(std::vector<cplx> coeffs) {
  // Durand-Kerner on the monic polynomial; coeffs[k] multiplies z^k.
  const int deg = static_cast<int>(coeffs.size()) - 1;
  for (auto& c : coeffs) c /= coeffs.back();
  std::vector<cplx> roots(deg);
  cplx seed(0.4, 0.9);
  cplx acc(1.0, 0.0);
  for (int i = 0; i < deg; ++i) {
    acc *= seed;
    roots[i] = acc;
  }
  for (int iter = 0; iter < 500; ++iter) {
    double shift = 0.0;
    for (int i = 0; i < deg; ++i) {
      cplx num(coeffs[deg]);
      for (int k = deg - 1; k >= 0; --k) num = num * roots[i] + coeffs[k];
      cplx den(1.0, 0.0);
      for (int k = 0; k < deg; ++k)
        if (k != i) den *= roots[i] - roots[k];
      cplx d = num / den;
      roots[i] -= d;
      shift = std::max(shift, std::abs(d));
    }
    if (shift < 1e-15) break;
  }
  return roots;
}

double binomial(int n, int k) {
  double v = 1.0;
  for (int i = 1; i <= k; ++i) v *= static_cast<double>(n - k + i) / i;
  return v;
}

// Scaling filter h (length K, sum sqrt(2)) for the order-K Daubechies wavelet
// with K/2 vanishing moments, extremal-phase convention.
std::vector<double> daubechies_filter(int K) {
  const int p = K / 2;
  if (p == 1) return {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
  // B(y) = sum_{k<p} C(p-1+k, k) y^k
  std::vector<cplx> b(p);
  for (int k = 0; k < p; ++k) b[k] = binomial(p - 1 + k, k);
  std::vector<cplx> yroots = polynomial_roots(b);
  // m0(z) = ((1+z)/2)^p prod_i (z - z_i)/(1 - z_i), z_i the |z|<1 root of
  // z^2 + (4y - 2) z + 1 = 0 for each root y of B.
  std::vector<cplx> poly = {1.0};
  auto mul_linear = [&poly](cplx a0, cplx a1) {
    // poly *= (a0 + a1 z)
    std::vector<cplx> out(poly.size() + 1, cplx(0.0));
    for (std::size_t i = 0; i < poly.size(); ++i) {
      out[i] += poly[i] * a0;
      out[i + 1] += poly[i] * a1;
    }
    poly = std::move(out);
  };
  for (int i = 0; i < p; ++i) mul_linear(0.5, 0.5);
  for (const cplx& y : yroots) {
    cplx bq = 4.0 * y - 2.0;
    cplx disc = std::sqrt(bq * bq - 4.0);
    cplx z1 = (-bq + disc) / 2.0;
    cplx z2 = (-bq - disc) / 2.0;
    cplx zi = (std::abs(z1) < std::abs(z2)) ? z1 : z2;
    mul_linear(-zi / (1.0 - zi), 1.0 / (1.0 - zi));
  }
  if (static_cast<int>(poly.size()) != K)
    throw std::logic_error("daubechies_filter: degree mismatch");
  std::vector<double> h(K);
  double s = 0.0;
  for (int k = 0; k < K; ++k) {
    h[k] = std::sqrt(2.0) * poly[k].real();
    s += h[k];
  }
  // enforce sum = sqrt(2) exactly against rounding drift
  const double corr = std::sqrt(2.0) / s;
  for (auto& v : h) v *= corr;
  return h;
}

std::vector<double> cascade_phi(const std::vector<double>& h, int levels) {
  const int K = static_cast<int>(h.size());
  const double s2 = std::sqrt(2.0);
  std::vector<double> phi(K, 0.0);  // values at integers 0..K-1
  if (K == 2) {
    phi[0] = 1.0;
  } else {
    for (int j = 1; j < K - 1; ++j) phi[j] = 1.0 / (K - 2);
    for (int iter = 0; iter < 256; ++iter) {
      std::vector<double> next(K, 0.0);
      for (int i = 0; i < K; ++i) {
        double v = 0.0;
        for (int j = 0; j < K; ++j) {
          int idx = 2 * i - j;
          if (idx >= 0 && idx < K) v += h[j] * phi[idx];
        }
        next[i] = s2 * v;
      }
      double sum = 0.0;
      for (double v : next) sum += v;
      for (auto& v : next) v /= sum;
      phi = std::move(next);
    }
  }
  // dyadic refinement: level m has (K-1)*2^m + 1 samples at step 2^-m;
  // phi(k 2^-(m+1)) = sqrt(2) sum_j h_j phi(k 2^-m - j), and k 2^-m - j lies
  // exactly on the level-m grid at index k - j 2^m
  for (int m = 0; m < levels; ++m) {
    const long stride = 1L << m;
    const long old_n = (K - 1) * stride;
    const long new_n = 2 * old_n;
    std::vector<double> next(new_n + 1, 0.0);
    for (long k = 0; k <= new_n; ++k) {
      double v = 0.0;
      for (int j = 0; j < K; ++j) {
        const long idx = k - j * stride;
        if (idx >= 0 && idx <= old_n) v += h[j] * phi[idx];
      }
      next[k] = s2 * v;
    }
    phi = std::move(next);
  }
  return phi;
}

struct DbTables {
  int K = 0;
  double delta = kCascadeStep;
  double t0 = 0.0;                // time of psi[0]
  std::vector<double> psi;        // orthonormal mother on the dyadic grid
  double l1 = 0.0;
  double dlam = 0.0;
  std::vector<double> mag;        // |Psi| on uniform grid m*dlam, m=0..
  std::vector<double> moments;    // time moments for the small-lambda series
};

std::shared_ptr<DbTables> build_db_tables(int K) {
  auto tb = std::make_shared<DbTables>();
  tb->K = K;
  std::vector<double> h = daubechies_filter(K);
  std::vector<double> g(K);
  for (int k = 0; k < K; ++k) g[k] = ((k % 2) ? -1.0 : 1.0) * h[K - 1 - k];

  std::vector<double> phi = cascade_phi(h, kCascadeLevels);
  const long phi_n = static_cast<long>(phi.size()) - 1;  // (K-1)*2^12
  const double s2 = std::sqrt(2.0);
  // psi(t) = sqrt(2) sum_k g_k phi(2t - k) on the same grid
  std::vector<double> psi(phi_n + 1, 0.0);
  for (long i = 0; i <= phi_n; ++i) {
    double v = 0.0;
    for (int k = 0; k < K; ++k) {
      long idx = 2 * i - k * (1L << kCascadeLevels);
      if (idx >= 0 && idx <= phi_n) v += g[k] * phi[idx];
    }
    psi[i] = s2 * v;
  }
  tb->psi = std::move(psi);
  tb->t0 = -0.5 * (K - 1);

  double l1 = 0.0;
  for (double v : tb->psi) l1 += std::abs(v);
  tb->l1 = l1 * tb->delta;

  // time moments around the centered grid for the small-lambda series
  tb->moments.resize(29, 0.0);
  for (std::size_t i = 0; i < tb->psi.size(); ++i) {
    const double t = tb->t0 + i * tb->delta;
    double tp = 1.0;
    for (std::size_t m = 0; m < tb->moments.size(); ++m) {
      tb->moments[m] += tb->psi[i] * tp;
      tp *= t;
    }
  }
  for (auto& m : tb->moments) m *= tb->delta;

  // |Psi| via zero-padded FFT of the samples
  const std::size_t nfft = 1u << 21;
  std::vector<double> buf(nfft, 0.0);
  std::copy(tb->psi.begin(), tb->psi.end(), buf.begin());
  std::vector<cplx> spec;
  fft::forward_r2c(buf, spec);
  tb->dlam = 2.0 * M_PI / (nfft * tb->delta);
  const double lam_max = 1024.0;
  const std::size_t keep =
      std::min(spec.size(), static_cast<std::size_t>(lam_max / tb->dlam) + 2);
  tb->mag.resize(keep);
  for (std::size_t m = 0; m < keep; ++m) tb->mag[m] = std::abs(spec[m]) * tb->delta;
  return tb;
}

double interp_cubic(const std::vector<double>& tab, double step, double x) {
  const double u = x / step;
  const long n = static_cast<long>(tab.size());
  long i = static_cast<long>(std::floor(u));
  if (i < 1) i = 1;
  if (i > n - 3) return (u >= n - 1) ? 0.0 : tab[static_cast<std::size_t>(u)];
  const double f = u - i;
  const double ym1 = tab[i - 1], y0 = tab[i], y1 = tab[i + 1], y2 = tab[i + 2];
  // Catmull-Rom
  return y0 + 0.5 * f * (y1 - ym1 +
                         f * (2 * ym1 - 5 * y0 + 4 * y1 - y2 +
                              f * (3 * (y0 - y1) + y2 - ym1)));
}

double db_fourier_mag(const DbTables& tb, double lambda) {
  const double al = std::abs(lambda);
  if (al == 0.0) return 0.0;
  if (al <= 0.3) {
    // moment series: Psi(l) = sum_m (-i l)^m M_m / m!
    cplx acc(0.0, 0.0);
    cplx pw(1.0, 0.0);
    const cplx il(0.0, -al);
    double fact = 1.0;
    for (std::size_t m = 0; m < tb.moments.size(); ++m) {
      if (m > 0) {
        pw *= il;
        fact *= static_cast<double>(m);
      }
      acc += pw * (tb.moments[m] / fact);
    }
    return std::abs(acc);
  }
  if (al >= (tb.mag.size() - 2) * tb.dlam) return 0.0;
  return std::max(0.0, interp_cubic(tb.mag, tb.dlam, al));
}

double db_time(const DbTables& tb, double t) {
  const double x = (t - tb.t0) / tb.delta;
  if (x <= 0.0 || x >= static_cast<double>(tb.psi.size() - 1)) return 0.0;
  const std::size_t i = static_cast<std::size_t>(x);
  const double f = x - i;
  return tb.psi[i] * (1.0 - f) + tb.psi[i + 1] * f;  // linear: psi is only Hoelder
}

// ---------------------------------------------------------------------------
// Meyer symbol
// ---------------------------------------------------------------------------

double meyer_nu(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return x * x * x * x * (35.0 - 84.0 * x + 70.0 * x * x - 20.0 * x * x * x);
}

double meyer_symbol(double lambda, double a) {
  const double al = std::abs(lambda);
  if (al <= a) return 1.0;
  if (al >= 2.0 * a) return 0.0;
  return std::cos(0.5 * M_PI * meyer_nu(al / a - 1.0));
}

double meyer_psi_hat(double lambda, double a) {
  const double s1 = meyer_symbol(lambda, a);
  const double s2 = meyer_symbol(2.0 * lambda, a);
  return std::sqrt(std::max(0.0, s1 * s1 - s2 * s2));
}

}  // namespace

// ---------------------------------------------------------------------------
// Wavelet
// ---------------------------------------------------------------------------

struct Wavelet::Impl {
  // raw-evaluator memos: norm-independent, shared across rescaled copies
  struct Memo {
    std::mutex mutex;
    std::map<double, std::optional<double>> support;
    std::optional<double> l1;
  };
  std::shared_ptr<Memo> memo = std::make_shared<Memo>();
  std::string name;
  double alpha = 0.0;
  int n_moments = 0;
  bool vanishes_near_zero = false;
  bool analytic_fourier = true;
  double norm = 1.0;
  std::map<std::string, double> params;
  std::function<double(double)> fourier_raw;
  std::function<double(double)> time_raw;
  double c_psi0_raw = 0.0;
  std::optional<double> compact_support;  // half-width when exactly compact
  std::shared_ptr<DbTables> db;
};

void Wavelet::init_from_impl() {
  name_ = impl_->name;
  alpha_ = impl_->alpha;
  n_moments_ = impl_->n_moments;
  vanishes_near_zero_ = impl_->vanishes_near_zero;
  analytic_fourier_ = impl_->analytic_fourier;
  norm_ = impl_->norm;
}

double Wavelet::fourier(double lambda) const {
  return norm_ * impl_->fourier_raw(lambda);
}

double Wavelet::time(double t) const { return norm_ * impl_->time_raw(t); }

double Wavelet::c_psi0() const {
  if (vanishes_near_zero_)
    throw std::logic_error("c_psi0: Fourier transform vanishes near the origin");
  return norm_ * impl_->c_psi0_raw;
}

double Wavelet::l1_norm() const {
  if (impl_->db) return norm_ * impl_->db->l1;
  {
    std::lock_guard<std::mutex> lock(impl_->memo->mutex);
    if (impl_->memo->l1) return norm_ * *impl_->memo->l1;
  }
  const auto& f = impl_->time_raw;
  double total = quad::integrate_composite([&](double t) { return std::abs(f(t)); },
                                           -1.0, 1.0, 8, 16);
  total += quad::integrate_decaying_tail([&](double t) { return std::abs(f(t)); },
                                         1.0, 1e-9);
  total += quad::integrate_decaying_tail([&](double t) { return std::abs(f(-t)); },
                                         1.0, 1e-9);
  std::lock_guard<std::mutex> lock(impl_->memo->mutex);
  impl_->memo->l1 = total;
  return norm_ * total;
}

std::optional<double> Wavelet::time_half_support(double tol) const {
  if (impl_->compact_support) return impl_->compact_support;
  {
    std::lock_guard<std::mutex> lock(impl_->memo->mutex);
    auto it = impl_->memo->support.find(tol);
    if (it != impl_->memo->support.end()) return it->second;
  }
  const double l1 = l1_norm() / norm_;
  const auto& f = impl_->time_raw;
  double tail_budget = tol * l1;
  double T = 1.0;
  std::optional<double> found;
  for (int k = 0; k < 40; ++k) {
    double tail = quad::integrate_decaying_tail(
                      [&](double t) { return std::abs(f(t)); }, T, 1e-9) +
                  quad::integrate_decaying_tail(
                      [&](double t) { return std::abs(f(-t)); }, T, 1e-9);
    if (tail < tail_budget) {
      found = T;
      break;
    }
    T *= 2.0;
    if (T > 1e9) break;
  }
  std::lock_guard<std::mutex> lock(impl_->memo->mutex);
  impl_->memo->support[tol] = found;
  return found;
}

Wavelet Wavelet::rescaled(double c) const {
  auto impl = std::make_shared<Impl>(*impl_);
  impl->norm *= c;
  return Wavelet(std::move(impl));
}

std::string Wavelet::spec_string() const {
  std::ostringstream os;
  os << name_;
  for (const auto& [k, v] : impl_->params) os << " " << k << "=" << v;
  if (norm_ != 1.0) os << " norm=" << norm_;
  return os.str();
}

double Wavelet::param(const std::string& key, double dflt) const {
  auto it = impl_->params.find(key);
  return it == impl_->params.end() ? dflt : it->second;
}

int Wavelet::fourier_parity() const { return name_ == "real-morlet" ? -1 : 1; }

double Wavelet::moment(int order) const {
  if (impl_->db) {
    const auto& tb = *impl_->db;
    double acc = 0.0;
    for (std::size_t i = 0; i < tb.psi.size(); ++i)
      acc += tb.psi[i] * std::pow(tb.t0 + i * tb.delta, order);
    return norm_ * acc * tb.delta;
  }
  const auto& f = impl_->time_raw;
  auto g = [&](double t) { return f(t) * std::pow(t, order); };
  double acc = quad::integrate_composite(g, -1.0, 1.0, 16, 16);
  acc += quad::integrate_decaying_tail(g, 1.0, 1e-11);
  double neg = quad::integrate_decaying_tail(
      [&](double t) { return f(-t) * std::pow(-t, order); }, 1.0, 1e-11);
  return norm_ * (acc + neg);
}

Wavelet make_wavelet(const std::string& name,
                     const std::map<std::string, double>& params) {
  auto impl = std::make_shared<Wavelet::Impl>();
  impl->name = name;
  auto get = [&params](const std::string& key, double dflt) {
    auto it = params.find(key);
    return it == params.end() ? dflt : it->second;
  };

  if (name.rfind("daubechies-", 0) == 0) {
    const int K = std::stoi(name.substr(11));
    if (K < 2 || K > 20 || (K % 2) != 0)
      throw std::invalid_argument("daubechies order must be even, 2..20");
    impl->alpha = K / 2.0;
    impl->n_moments = K / 2;
    impl->analytic_fourier = false;
    impl->db = build_db_tables(K);
    auto tb = impl->db;
    impl->fourier_raw = [tb](double l) { return db_fourier_mag(*tb, l); };
    impl->time_raw = [tb](double t) { return db_time(*tb, t); };
    impl->compact_support = 0.5 * (K - 1) + kCascadeStep;
    impl->c_psi0_raw = db_fourier_mag(*tb, std::pow(2.0, -14)) /
                       std::pow(std::pow(2.0, -14), impl->alpha);
  } else if (name == "mexican-hat") {
    impl->alpha = 2.0;
    impl->n_moments = 2;
    impl->fourier_raw = [](double l) {
      return std::sqrt(2.0 * M_PI) * l * l * std::exp(-0.5 * l * l);
    };
    impl->time_raw = [](double t) { return (1.0 - t * t) * std::exp(-0.5 * t * t); };
    impl->c_psi0_raw = std::sqrt(2.0 * M_PI);
  } else if (name == "real-morlet") {
    const double w0 = get("omega0", 5.0);
    impl->params["omega0"] = w0;
    impl->alpha = 1.0;
    impl->n_moments = 1;
    impl->fourier_raw = [w0](double l) {
      return std::sqrt(M_PI / 2.0) *
             (std::exp(-0.5 * (l - w0) * (l - w0)) -
              std::exp(-0.5 * (l + w0) * (l + w0)));
    };
    impl->time_raw = [w0](double t) {
      return std::sin(w0 * t) * std::exp(-0.5 * t * t);
    };
    impl->c_psi0_raw = std::sqrt(2.0 * M_PI) * w0 * std::exp(-0.5 * w0 * w0);
  } else if (name == "cauchy" || name == "morse") {
    const double a = get("alpha", name == "cauchy" ? 1.0 : 0.5);
    const double g = (name == "cauchy") ? 1.0 : get("gamma", 3.0);
    if (a <= 0.0) throw std::invalid_argument("wavelet alpha must be > 0");
    if (g <= 0.0) throw std::invalid_argument("morse gamma must be > 0");
    impl->params["alpha"] = a;
    if (name == "morse") impl->params["gamma"] = g;
    impl->alpha = a;
    impl->n_moments = 1;
    impl->fourier_raw = [a, g](double l) {
      const double al = std::abs(l);
      return al == 0.0 ? 0.0 : std::pow(al, a) * std::exp(-std::pow(al, g));
    };
    if (g == 1.0) {
      const double gam = std::tgamma(a + 1.0);
      impl->time_raw = [a, gam](double t) {
        return gam / M_PI * std::cos((a + 1.0) * std::atan(t)) /
               std::pow(1.0 + t * t, 0.5 * (a + 1.0));
      };
    } else {
      impl->time_raw = [a, g](double t) {
        auto f = [a, g, t](double l) {
          return std::cos(l * t) * std::pow(l, a) * std::exp(-std::pow(l, g));
        };
        const int panels =
            8 + static_cast<int>(std::min(std::abs(t), 20000.0));
        double v = quad::integrate_composite(f, 0.0, 4.0, panels, 16);
        v += quad::integrate_decaying_tail(f, 4.0, 1e-10);
        return v / M_PI;
      };
    }
    impl->c_psi0_raw = 1.0;
  } else if (name == "meyer") {
    const double a = get("a", M_PI / 2.0);
    impl->params["a"] = a;
    impl->alpha = std::numeric_limits<double>::infinity();
    impl->n_moments = 99;
    impl->vanishes_near_zero = true;
    impl->fourier_raw = [a](double l) { return meyer_psi_hat(l, a); };
    // time samples by inverse transform of the compactly supported Psi:
    // psi(t) = (1/pi) int_0^{2a} cos(l t) Psi(l) dl on an FFT grid, even in t
    {
      const std::size_t nsamp = 1u << 12, nfft = 1u << 17;
      const double dl = 2.0 * a / nsamp;
      std::vector<double> buf(nfft, 0.0);
      for (std::size_t k = 0; k < nsamp; ++k)
        buf[k] = meyer_psi_hat((k + 0.5) * dl, a);
      std::vector<cplx> spec;
      fft::forward_r2c(buf, spec);
      const double tstep = 2.0 * M_PI / (nfft * dl);
      auto table = std::make_shared<std::vector<double>>(spec.size());
      for (std::size_t m = 0; m < spec.size(); ++m) {
        // half-bin phase shift from sampling at (k+1/2) dl
        const double ph = 0.5 * dl * m * tstep;
        (*table)[m] =
            (spec[m].real() * std::cos(ph) + spec[m].imag() * std::sin(ph)) *
            dl / M_PI;
      }
      impl->time_raw = [table, tstep](double t) {
        const double x = std::abs(t) / tstep;
        const std::size_t i = static_cast<std::size_t>(x);
        if (i + 1 >= table->size()) return 0.0;
        const double f = x - i;
        return (*table)[i] * (1.0 - f) + (*table)[i + 1] * f;
      };
    }
  } else {
    throw std::invalid_argument("unknown wavelet: " + name);
  }
  return Wavelet(std::move(impl));
}

double fourier_eval(const Wavelet& w, double lambda) { return w.fourier(lambda); }

double l2_norm_fourier_sq(const Wavelet& w) {
  auto f2 = [&w](double l) {
    const double v = w.fourier(l);
    return v * v;
  };
  double v = quad::integrate_composite(f2, 0.0, 1.0, 16, 16);
  v += quad::integrate_decaying_tail(f2, 1.0, 1e-11);
  return 2.0 * v;
}

std::vector<double> sample_filter(const Wavelet& w, int j, double dt,
                                  double half_support, double tail_tol) {
  if (dt <= 0.0) throw std::invalid_argument("sample_filter: dt must be > 0");
  const double scale = std::pow(2.0, j);
  auto required = w.time_half_support(tail_tol);
  if (!required)
    throw std::invalid_argument(
        "sample_filter: wavelet tail too heavy for a truncated filter");
  const double need = *required * scale;
  if (half_support < need) {
    std::ostringstream os;
    os << "sample_filter: half-support " << half_support
       << " too small, required >= " << need;
    throw std::invalid_argument(os.str());
  }
  const long M = static_cast<long>(std::floor(half_support / dt));
  std::vector<double> taps(2 * M + 1);
  for (long m = -M; m <= M; ++m)
    taps[m + M] = w.time(m * dt / scale) / scale;
  return taps;
}

std::string export_filter_two_column(const Wavelet& w, int j, double dt,
                                     double half_support) {
  const auto taps = sample_filter(w, j, dt, half_support);
  const long M = (static_cast<long>(taps.size()) - 1) / 2;
  std::ostringstream os;
  os.precision(12);
  for (long m = -M; m <= M; ++m)
    os << m * dt << "\t" << taps[m + M] << "\n";
  return os.str();
}

int vanishing_moments(const Wavelet& w, double tol, int max_order) {
  int n = 0;
  for (int order = 0; order <= max_order; ++order) {
    if (std::abs(w.moment(order)) >= tol) return order;
    n = order + 1;
  }
  return n;
}

// ---------------------------------------------------------------------------
// Filterbank
// ---------------------------------------------------------------------------

double mother_lp_sup(const Wavelet& w) {
  double sup = 0.0;
  const int steps = 512;
  for (int s = 0; s < steps; ++s) {
    const double lam = std::pow(2.0, static_cast<double>(s) / steps);
    double sum = 0.0;
    for (int j = -60; j <= 60; ++j) {
      const double v = w.fourier(std::ldexp(lam, j));
      sum += v * v;
    }
    sup = std::max(sup, sum);
  }
  return sup;
}

Filterbank::Filterbank(const Wavelet& mother, int J, std::vector<int> scales,
                       double dt, double father_width)
    : mother_(mother),
      J_(J),
      scales_(std::move(scales)),
      dt_(dt),
      father_width_(father_width) {
  for (int j : scales_)
    if (j >= J) throw std::invalid_argument("filterbank: scale j must be < J");
  tight_ = (mother.name() == "meyer");
  if (!tight_) {
    const double sup = mother_lp_sup(mother_);
    rescale_ = 1.0 / std::sqrt(sup);
    mother_ = mother_.rescaled(rescale_);
  }
}

double Filterbank::infinite_low_scale_sum(double lambda) const {
  double sum = 0.0;
  const int m_max = 48;
  for (int j = -1; j >= -m_max; --j) {
    const double v = mother_.fourier(std::ldexp(lambda, j));
    sum += v * v;
  }
  const double alpha = mother_.alpha();
  if (std::isfinite(alpha)) {
    const double last = mother_.fourier(std::ldexp(lambda, -m_max));
    const double q = std::pow(4.0, -alpha);
    sum += last * last * q / (1.0 - q);
  }
  return sum;
}

double Filterbank::father_fourier(double lambda) const {
  if (tight_) {
    const double a = mother_.param("a", M_PI / 2.0);
    return meyer_symbol(lambda, a);
  }
  const double d = std::min(1.0, infinite_low_scale_sum(lambda));
  const double g = std::exp(-0.5 * father_width_ * father_width_ * lambda * lambda);
  return std::sqrt(1.0 - d) * g;
}

LittlewoodPaleyReport littlewood_paley_report(const Filterbank& fb,
                                              const std::vector<double>& grid,
                                              double tol) {
  LittlewoodPaleyReport rep;
  for (double lam : grid) {
    const double ph = fb.father_fourier(std::ldexp(lam, fb.J()));
    double sum = ph * ph;
    for (int j : fb.scales()) {
      const double v = fb.mother().fourier(std::ldexp(lam, j));
      sum += v * v;
    }
    if (sum > rep.sup) {
      rep.sup = sum;
      rep.argmax = lam;
    }
  }
  rep.pass = rep.sup <= 1.0 + tol;
  rep.suggested_rescale = rep.pass ? 1.0 : 1.0 / std::sqrt(rep.sup);
  return rep;
}

}  // namespace nast::wavelets
