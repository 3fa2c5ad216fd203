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

#include "nast/hermite.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>

#include "nast/quadrature.hpp"
#include "nast/rng.hpp"

namespace nast::hermite {

double hermite_poly(int ell, double y) {
  if (ell < 0) throw std::invalid_argument("hermite_poly: ell >= 0");
  if (ell == 0) return 1.0;
  double p0 = 1.0, p1 = y;
  for (int k = 1; k < ell; ++k) {
    const double p2 = y * p1 - k * p0;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

namespace {

// orthonormal probabilists' values h_l(y) = H_l(y)/sqrt(l!) for l = 0..L
void orthonormal_column(double y, int L, std::vector<double>& out) {
  out.resize(L + 1);
  out[0] = 1.0;
  if (L == 0) return;
  out[1] = y;
  for (int l = 1; l < L; ++l)
    out[l + 1] = (y * out[l] - std::sqrt(static_cast<double>(l)) * out[l - 1]) /
                 std::sqrt(static_cast<double>(l + 1));
}

constexpr double kYMax = 12.0;
constexpr int kPanelsPerSide = 60;
constexpr int kNodesPerPanel = 14;

}  // namespace

HermiteExpansion expand(const scattering::Activation& A, double sigma,
                        int max_level) {
  if (sigma <= 0.0) throw std::invalid_argument("expand: sigma > 0 required");
  // growth guard: super-Gaussian activations fall outside the Hilbert space
  const double edge = std::abs(A(sigma * kYMax)) + std::abs(A(-sigma * kYMax));
  if (!(edge * std::exp(-0.25 * kYMax * kYMax) < 1e8))
    throw std::invalid_argument("expand: activation grows too fast for the "
                                "Gaussian-Hilbert space");
  HermiteExpansion ex;
  ex.sigma = sigma;
  const int L = max_level;
  std::vector<double> coeffs(L + 1, 0.0);
  double second = 0.0;
  const auto& rule = quad::gauss_legendre(kNodesPerPanel);
  std::vector<double> col;
  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * M_PI);
  for (int side = 0; side < 2; ++side) {
    const double sgn = side == 0 ? 1.0 : -1.0;
    const double h = kYMax / kPanelsPerSide;
    for (int p = 0; p < kPanelsPerSide; ++p) {
      const double c = (p + 0.5) * h, hw = 0.5 * h;
      for (int i = 0; i < kNodesPerPanel; ++i) {
        const double y = sgn * (c + hw * rule.nodes[i]);
        const double w = rule.weights[i] * hw * inv_sqrt_2pi * std::exp(-0.5 * y * y);
        const double a = A(sigma * y);
        if (!std::isfinite(a))
          throw std::invalid_argument("expand: activation diverges on the Gaussian");
        second += w * a * a;
        orthonormal_column(y, L, col);
        for (int l = 0; l <= L; ++l) coeffs[l] += w * a * col[l];
      }
    }
  }
  ex.second_moment = second;
  const double rank_tol = 1e-8 * std::sqrt(std::max(second, 0.0));
  // adaptive truncation: smallest L with tail below 1e-6 E[A^2], else the cap
  double partial = 0.0;
  int keep = L;
  for (int l = 0; l <= L; ++l) {
    partial += coeffs[l] * coeffs[l];
    if (second - partial < 1e-6 * second) {
      keep = l;
      break;
    }
  }
  ex.truncation = keep;
  ex.coeffs.assign(coeffs.begin(), coeffs.begin() + keep + 1);
  double sum_sq = 0.0;
  for (double c : ex.coeffs) sum_sq += c * c;
  ex.tail_mass = std::max(0.0, second - sum_sq);
  ex.rank = 0;
  for (int l = 1; l <= keep; ++l) {
    if (std::abs(ex.coeffs[l]) > rank_tol) {
      ex.rank = l;
      break;
    }
  }
  if (ex.rank == 0)
    throw std::invalid_argument("expand: no nonzero Hermite coefficient above l=0");
  return ex;
}

namespace {

bool closed_form_covariance(const scattering::Activation& A, double sigma,
                            double rho, double* out) {
  if (A.name == "identity") {
    *out = sigma * sigma * rho;
    return true;
  }
  if (A.name == "modulus") {
    // E|U||V| = (2 sigma^2/pi)(sqrt(1-rho^2) + rho asin rho); E|U| = sigma sqrt(2/pi)
    *out = 2.0 * sigma * sigma / M_PI *
           (std::sqrt(1.0 - rho * rho) + rho * std::asin(rho) - 1.0);
    return true;
  }
  if (A.name == "relu") {
    // E[U+ V+] = (sigma^2/2pi)(sqrt(1-rho^2) + rho(pi/2 + asin rho))
    const double e2 = sigma * sigma / (2.0 * M_PI) *
                      (std::sqrt(1.0 - rho * rho) +
                       rho * (0.5 * M_PI + std::asin(rho)));
    *out = e2 - sigma * sigma / (2.0 * M_PI);
    return true;
  }
  return false;
}

double mehler_covariance(const HermiteExpansion& ex, double rho) {
  double acc = 0.0;
  double rp = 1.0;
  for (std::size_t l = 1; l < ex.coeffs.size(); ++l) {
    rp *= rho;
    acc += ex.coeffs[l] * ex.coeffs[l] * rp;
  }
  return acc;
}

}  // namespace

double bivariate_activation_covariance(const scattering::Activation& A,
                                       const HermiteExpansion& ex, double rho) {
  rho = std::max(-1.0, std::min(1.0, rho));
  double closed;
  if (closed_form_covariance(A, ex.sigma, rho, &closed)) return closed;
  return mehler_covariance(ex, rho);
}

double bivariate_activation_covariance(const scattering::Activation& A, double sigma,
                                       double rho) {
  rho = std::max(-1.0, std::min(1.0, rho));
  double closed;
  if (closed_form_covariance(A, sigma, rho, &closed)) return closed;
  return mehler_covariance(expand(A, sigma), rho);
}

namespace {

void check_sigma_match(const HermiteExpansion& ex, double sigma_sq) {
  const double rel = std::abs(ex.sigma * ex.sigma - sigma_sq) / sigma_sq;
  if (rel > 5e-3)
    throw std::invalid_argument(
        "kappa: expansion sigma does not match sigma_j1 of the model");
}

}  // namespace

KappaResult kappa(const spectra::SpectralModel& m, const wavelets::Wavelet& w,
                  int j1, const HermiteExpansion& ex,
                  const scattering::Activation& A) {
  const double gamma = 2.0 * w.alpha() + m.beta();
  if (!(gamma * ex.rank > 1.0))
    throw std::invalid_argument("non-CLT regime, use nu_theta2");
  const double sigma_sq = spectra::variance_sigma_j(m, w, j1);
  check_sigma_match(ex, sigma_sq);
  const spectra::Density g = spectra::filtered(m, w, j1);

  KappaResult out;
  out.sigma_j1_sq = sigma_sq;

  std::vector<int> ells;
  for (int l = ex.rank; l <= ex.truncation; ++l) ells.push_back(l);
  const std::vector<double> folds = spectra::power_time_integrals(g, ells);
  double k2 = 0.0;
  out.terms.reserve(ells.size());
  for (std::size_t i = 0; i < ells.size(); ++i) {
    const int l = ells[i];
    const double c = ex.coeffs[l];
    const double term = c * c * std::pow(sigma_sq, -static_cast<double>(l)) * folds[i];
    out.terms.push_back(term);
    k2 += term;
  }
  out.kappa_series = std::sqrt(std::max(0.0, k2));

  // truncation bound: sigma^-2r sup f^(*r) sum_{l>L} C_l^2,
  // with sup f^(*r) bounded by (1/2pi) int |R|^r dt
  {
    spectra::CovarianceEvaluator R(g, 64.0);
    const int r = ex.rank;
    double sup_bound = 0.0;
    const int steps = 2048;
    const double h = R.t_max() / steps;
    for (int i = 0; i < steps; ++i)
      sup_bound += std::pow(std::abs(R((i + 0.5) * h)), r) * h;
    sup_bound = 2.0 * sup_bound / (2.0 * M_PI);
    out.truncation_bound =
        std::pow(sigma_sq, -static_cast<double>(r)) * sup_bound * ex.tail_mass;
  }

  // integral route: exact in l through the bivariate covariance
  {
    spectra::CovarianceEvaluator R(g, 8.0);
    // grow the window until the activation covariance integrand has decayed
    double t_max = 8.0;
    for (int grow = 0; grow < 12; ++grow) {
      spectra::CovarianceEvaluator Rg(g, t_max);
      bool ok = true;
      for (double t = 0.9 * t_max; t <= t_max; t += 0.01 * t_max) {
        const double rho = Rg(t) / sigma_sq;
        const double ra = bivariate_activation_covariance(A, ex, rho);
        if (std::abs(ra) > 1e-10 * sigma_sq) ok = false;
      }
      if (ok) {
        R = std::move(Rg);
        break;
      }
      t_max *= 2.0;
      if (t_max > 1e5)
        throw std::runtime_error("kappa: activation covariance decays too slowly");
    }
    const double T = R.t_max();
    const double panel = std::min(0.25 / std::max(R.lambda_mean(), 1e-6), T / 32.0);
    const int panels = std::min(40000, static_cast<int>(std::ceil(T / panel)));
    const auto& rule = quad::gauss_legendre(8);
    const double h = T / panels;
    double acc = 0.0;
    for (int k = 0; k < panels; ++k) {
      const double c = k * h + 0.5 * h, hw = 0.5 * h;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double t = c + hw * rule.nodes[i];
        const double rho = R(t) / sigma_sq;
        acc += rule.weights[i] * hw * bivariate_activation_covariance(A, ex, rho);
      }
    }
    out.kappa_integral = std::sqrt(std::max(0.0, acc / M_PI));
  }
  return out;
}

KappaResult kappa(const spectra::SpectralModel& m, const wavelets::Wavelet& w,
                  int j1, const scattering::Activation& A) {
  const double sigma_sq = spectra::variance_sigma_j(m, w, j1);
  const HermiteExpansion ex = expand(A, std::sqrt(sigma_sq));
  return kappa(m, w, j1, ex, A);
}

Theta1Result theta1(const spectra::SpectralModel& m, const wavelets::Wavelet& w,
                    int j1) {
  const auto modulus = scattering::make_activation("modulus");
  Theta1Result out;
  const KappaResult kr = kappa(m, w, j1, modulus);
  out.kappa = kr.kappa_integral;
  out.sigma_j1 = std::sqrt(kr.sigma_j1_sq);
  out.psi_l2 = std::sqrt(wavelets::l2_norm_fourier_sq(w));
  out.theta = std::pow(2.0, -0.5 * j1) * out.kappa / out.sigma_j1 * out.psi_l2;

  // limit series: ||Psi|| [ sum_{l>=2} ||Q||_1^{-l} Q^(*l)(0) C_l^2 ]^(1/2),
  // Q(l) = |Psi(l)|^2 / |l|^{1-beta}
  const double beta = m.beta();
  spectra::Density Q;
  const wavelets::Wavelet wav = w;
  Q.sing_exponent = 2.0 * w.alpha() + beta - 1.0;
  Q.eval = [wav, beta](double l) {
    const double v = wav.fourier(l);
    return l == 0.0 ? 0.0 : v * v / std::pow(std::abs(l), 1.0 - beta);
  };
  const double alpha = w.alpha();
  Q.smooth = [wav, alpha, beta](double l) {
    if (l <= 0.0) {
      const double c = wav.c_psi0();
      return c * c;
    }
    const double v = wav.fourier(l);
    return v * v / std::pow(l, 2.0 * alpha);
  };
  Q.amp0 = Q.smooth(0.0);
  const double q_mass = spectra::total_mass(Q);
  const auto mod_exp = expand(modulus, 1.0);
  std::vector<int> ells;
  for (int l = 2; l <= mod_exp.truncation; ++l) ells.push_back(l);
  const std::vector<double> folds = spectra::power_time_integrals(Q, ells);
  double s = 0.0;
  for (std::size_t i = 0; i < ells.size(); ++i) {
    const int l = ells[i];
    s += std::pow(q_mass, -static_cast<double>(l)) * folds[i] *
         mod_exp.coeffs[l] * mod_exp.coeffs[l];
  }
  out.theta_limit = out.psi_l2 * std::sqrt(std::max(0.0, s));
  return out;
}

std::string to_string(LimitFamily f) {
  switch (f) {
    case LimitFamily::Gaussian: return "gaussian";
    case LimitFamily::FoldedGaussian: return "folded-gaussian";
    case LimitFamily::StandardizedChi2Chaos: return "standardized-chi2";
    case LimitFamily::HermiteRankR: return "hermite-rank-r";
    case LimitFamily::GaussianLrd: return "gaussian-lrd";
    case LimitFamily::Pushforward: return "pushforward";
  }
  return "unknown";
}

namespace {

// Exact skewness of the r = 2 limit law via trace cumulants of the kernel
// K(l1,l2) = Psi(l1+l2)/|l1 l2|^{(1-gamma)/2}. Under the Hermitian random
// measure the law is sum_k mu+_k (xi^2-1) - sum_k mu-_k (xi^2-1) with mu+/-
// the eigenvalues of A+/- = K(l1,l2) +/- K(l1,-l2) on (0,inf)^2, so
// kappa2 = 2(tr A+^2 + tr A-^2), kappa3 = 8(tr A+^3 - tr A-^3).
double chaos_limit_skewness(const wavelets::Wavelet& w, double gamma) {
  const double s = 0.5 * (1.0 - gamma);
  std::vector<double> nodes, wts;
  const auto& rule = quad::gauss_legendre(8);
  for (double a = 1e-7; a < 1.0; a *= 1.6) {
    const double b = std::min(1.0, a * 1.6);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      nodes.push_back(0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[i]);
      wts.push_back(0.5 * (b - a) * rule.weights[i]);
    }
  }
  for (double a = 1.0; a < 40.0; a += 0.5) {
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      nodes.push_back(a + 0.25 + 0.25 * rule.nodes[i]);
      wts.push_back(0.25 * rule.weights[i]);
    }
  }
  const std::size_t n = nodes.size();
  std::vector<double> ap(n * n), am(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double li = nodes[i], lj = nodes[j];
      const double pre = std::sqrt(wts[i] * wts[j]) * std::pow(li * lj, -s);
      const double kp = w.fourier(li + lj) * pre;
      const double km = w.fourier(li - lj) * pre;
      ap[i * n + j] = kp + km;
      am[i * n + j] = kp - km;
    }
  }
  auto tr2 = [n](const std::vector<double>& a) {
    double t = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) t += a[i * n + j] * a[j * n + i];
    return t;
  };
  auto tr3 = [n](const std::vector<double>& a) {
    std::vector<double> a2(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        const double v = a[i * n + k];
        if (v == 0.0) continue;
        for (std::size_t j = 0; j < n; ++j) a2[i * n + j] += v * a[k * n + j];
      }
    double t = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) t += a2[i * n + j] * a[j * n + i];
    return t;
  };
  const double k2 = 2.0 * (tr2(ap) + tr2(am));
  const double k3 = 8.0 * (tr3(ap) - tr3(am));
  return k3 / std::pow(k2, 1.5);
}

}  // namespace

double mc_e_abs_h2() {
  static std::once_flag flag;
  static double value = 0.0;
  std::call_once(flag, [] {
    rng::Rng rng(20260808ULL, 2ULL);
    double s = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) {
      const double z = rng.normal();
      s += std::abs(z * z - 1.0);
    }
    value = s / n;
  });
  return value;
}

NuTheta2Result nu_theta2(const spectra::SpectralModel& m, const wavelets::Wavelet& w,
                         int j1, const HermiteExpansion& ex, int r) {
  const double alpha = w.alpha();
  const double beta = m.beta();
  const double gamma = 2.0 * alpha + beta;
  if (!(gamma * r < 1.0))
    throw std::invalid_argument("nu_theta2: CLT regime, use kappa/theta1");
  if (!(m.c_x0() > 0.0))
    throw std::invalid_argument("nu_theta2: C_X(0) > 0 required");
  if (r < 1 || r >= static_cast<int>(ex.coeffs.size()))
    throw std::invalid_argument("nu_theta2: rank outside expansion");

  const double sigma_sq = spectra::variance_sigma_j(m, w, j1);
  check_sigma_match(ex, sigma_sq);
  const double sigma = std::sqrt(sigma_sq);
  NuTheta2Result out;
  double rfact = 1.0;
  for (int i = 2; i <= r; ++i) rfact *= i;
  out.nu = ex.coeffs[r] / std::sqrt(rfact) * std::pow(2.0, j1 * alpha * r) *
           std::pow(sigma, -static_cast<double>(r)) * std::pow(w.c_psi0(), r) *
           std::pow(m.c_x0(), 0.5 * r);

  if (r == 1) {
    out.descriptor = {LimitFamily::GaussianLrd, out.nu, 0.0, 1,
                      "gaussian limit with long-range dependence"};
    return out;
  }
  if (r == 2) {
    // int int K^2 with K = Psi(l1+l2)/|l1 l2|^{(1-gamma)/2} collapses through
    // the Riesz composition to int |Psi(eta)|^2 c_R |eta|^{2 gamma - 1} d eta,
    // regular at the origin since |Psi|^2 ~ eta^{2 alpha}
    auto f2 = [&](double eta) {
      const double v = w.fourier(eta);
      return v * v * spectra::riesz_closed_form(gamma, gamma, eta);
    };
    const double kernel_sq = 2.0 * (quad::integrate_composite(f2, 0.0, 1.0, 24, 16) +
                                    quad::integrate_decaying_tail(f2, 1.0, 1e-11));
    out.var_i2 = 2.0 * kernel_sq;  // E|I2|^2 = 2 ||K||^2 for a symmetric kernel
    out.limit_skewness = chaos_limit_skewness(w, gamma);
    out.sigma_eff_sq = std::sqrt(0.5 * out.var_i2);
    out.e_abs_h2_mc = mc_e_abs_h2();
    out.e_abs_i2 = out.sigma_eff_sq * out.e_abs_h2_mc;
    const double common =
        std::pow(2.0, -j1 * beta) / sigma_sq * w.c_psi0() * w.c_psi0() * m.c_x0();
    out.theta2_printed = common / (std::pow(2.0, 1.5) * std::sqrt(M_PI)) * out.e_abs_i2;
    // proof route: 2^{-j1(2a+b)} sqrt(pi/2) sigma^{-1} nu E|I2|
    out.theta2_proof = std::pow(2.0, -j1 * gamma) * std::sqrt(0.5 * M_PI) / sigma *
                       out.nu * out.e_abs_i2;
    out.descriptor = {LimitFamily::StandardizedChi2Chaos, out.nu, 0.0, 2,
                      "standardized (Z^2-1)/sqrt(2) second-chaos law"};
    return out;
  }
  out.descriptor = {LimitFamily::HermiteRankR, out.nu, 0.0, r,
                    "rank-" + std::to_string(r) +
                        " Wiener chaos; moment checks only (no closed CDF)"};
  return out;
}

LimitDescriptor delta_method_limit(const scattering::Activation& a2,
                                   const LimitDescriptor& base) {
  if (a2.differentiable_at_zero && a2.deriv_at_zero != 0.0) {
    LimitDescriptor out = base;
    out.scale = base.scale * a2.deriv_at_zero;
    out.center = a2(0.0);
    out.note = "delta method scaling by A2'(0)";
    return out;
  }
  if (a2.homogeneous) {
    LimitDescriptor out = base;
    out.center = 0.0;
    out.note = "continuous-mapping pushforward, rate exponent scaled by chi";
    if (a2.name == "identity") return base;
    if (a2.name == "modulus" && base.family == LimitFamily::Gaussian) {
      out.family = LimitFamily::FoldedGaussian;
      return out;
    }
    out.family = LimitFamily::Pushforward;
    out.note = "pushforward of " + to_string(base.family) + " by " + a2.name;
    return out;
  }
  throw std::invalid_argument(
      "delta_method_limit: unsupported by Corollaries (A2 neither "
      "differentiable at 0 with nonzero derivative nor homogeneous)");
}

}  // namespace nast::hermite
