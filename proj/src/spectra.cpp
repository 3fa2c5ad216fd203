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

#include "nast/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "nast/quadrature.hpp"
#include "nast/stats.hpp"

namespace nast::spectra {

namespace {

double loglog_slope(const std::vector<double>& lam, const std::vector<double>& val,
                    double lo, double hi) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < lam.size(); ++i) {
    if (lam[i] >= lo && lam[i] <= hi && val[i] > 0.0) {
      x.push_back(std::log(lam[i]));
      y.push_back(std::log(val[i]));
    }
  }
  if (x.size() < 4) throw std::invalid_argument("tabulated: too few points near 0");
  return stats::ols_fit(x, y).slope;
}

double tab_interp(const std::vector<double>& lam, const std::vector<double>& val,
                  double amp0, double p, double x) {
  if (x <= 0.0) return p < 0.0 ? std::numeric_limits<double>::infinity()
                               : (p == 0.0 ? amp0 : 0.0);
  if (x < lam.front()) return amp0 * std::pow(x, p);
  if (x >= lam.back()) return 0.0;
  auto it = std::upper_bound(lam.begin(), lam.end(), x);
  std::size_t i = static_cast<std::size_t>(it - lam.begin()) - 1;
  const double l0 = lam[i], l1 = lam[i + 1];
  const double f = (x - l0) / (l1 - l0);
  return val[i] * (1.0 - f) + val[i + 1] * f;
}

}  // namespace

SpectralModel SpectralModel::param_lrd(double c1, double beta1, double beta2,
                                       double c2) {
  if (c1 <= 0.0 || c2 <= 0.0)
    throw std::invalid_argument("param-lrd: c1 and c2 must be > 0");
  if (beta1 <= 0.0 || beta1 > 1.0)
    throw std::invalid_argument("param-lrd: beta1 must lie in (0, 1]");
  if (beta2 <= 0.5) throw std::invalid_argument("param-lrd: beta2 must be > 1/2");
  SpectralModel m;
  m.kind_ = Kind::ParamLrd;
  m.c1_ = c1;
  m.beta1_ = beta1;
  m.beta2_ = beta2;
  m.c2_ = c2;
  m.sing_exponent_ = beta1 - 1.0;
  m.amp0_ = c1 / std::pow(c2, beta2);
  m.short_range_ = (beta1 == 1.0);
  return m;
}

SpectralModel SpectralModel::generalized_fbm(double H) {
  if (H <= 0.0 || H >= 1.0)
    throw std::invalid_argument("generalized-fbm: H must lie in (0,1)");
  SpectralModel m;
  m.kind_ = Kind::GeneralizedFbm;
  m.H_ = H;
  m.sing_exponent_ = -(2.0 * H + 1.0);
  m.amp0_ = 1.0 / (2.0 * M_PI);
  return m;
}

SpectralModel SpectralModel::tabulated(std::vector<double> lambda,
                                       std::vector<double> f, double sing_exponent) {
  if (lambda.size() != f.size() || lambda.size() < 8)
    throw std::invalid_argument("tabulated: need matching grids with >= 8 points");
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (lambda[i] <= 0.0 || (i > 0 && lambda[i] <= lambda[i - 1]))
      throw std::invalid_argument("tabulated: lambdas must be positive ascending");
    if (f[i] < 0.0) throw std::invalid_argument("tabulated: density must be >= 0");
  }
  SpectralModel m;
  m.kind_ = Kind::Tabulated;
  m.sing_exponent_ = sing_exponent;
  m.grid_ = std::move(lambda);
  m.values_ = std::move(f);
  bool all_zero = true;
  for (double v : m.values_) all_zero = all_zero && v == 0.0;
  if (!all_zero && m.values_.front() > 0.0 && sing_exponent != 0.0) {
    const double slope =
        loglog_slope(m.grid_, m.values_, m.grid_.front(), m.grid_.front() * 100.0);
    if (std::abs(slope - sing_exponent) > 0.02)
      throw std::invalid_argument(
          "tabulated: declared singularity exponent disagrees with log-log slope");
  }
  m.amp0_ = m.values_.front() / std::pow(m.grid_.front(), sing_exponent);
  if (all_zero) m.amp0_ = 0.0;
  return m;
}

double SpectralModel::eval(double lambda) const {
  const double al = std::abs(lambda);
  switch (kind_) {
    case Kind::ParamLrd:
      if (al == 0.0) {
        if (beta1_ == 1.0) return c1_ / std::pow(c2_, beta2_);
        return std::numeric_limits<double>::infinity();
      }
      return c1_ / (std::pow(al, 1.0 - beta1_) * std::pow(al * al + c2_, beta2_));
    case Kind::GeneralizedFbm:
      if (al == 0.0) return std::numeric_limits<double>::infinity();
      return amp0_ * std::pow(al, -(2.0 * H_ + 1.0));
    case Kind::Tabulated:
      return tab_interp(grid_, values_, amp0_, sing_exponent_, al);
  }
  return 0.0;
}

double SpectralModel::c_x0() const {
  switch (kind_) {
    case Kind::ParamLrd:
      return c1_ / std::pow(c2_, beta2_);
    case Kind::GeneralizedFbm:
      return amp0_;
    case Kind::Tabulated:
      return amp0_;
  }
  return 0.0;
}

double SpectralModel::param(const std::string& name) const {
  if (name == "c1") return c1_;
  if (name == "beta1") return beta1_;
  if (name == "beta2") return beta2_;
  if (name == "c2") return c2_;
  if (name == "H") return H_;
  throw std::invalid_argument("unknown model parameter: " + name);
}

Density SpectralModel::density() const {
  Density d;
  d.sing_exponent = sing_exponent_;
  d.amp0 = amp0_;
  const SpectralModel self = *this;
  d.eval = [self](double l) { return self.eval(l); };
  const double p = sing_exponent_;
  switch (kind_) {
    case Kind::ParamLrd: {
      const double c1 = c1_, b2 = beta2_, c2 = c2_;
      d.smooth = [c1, b2, c2](double l) { return c1 / std::pow(l * l + c2, b2); };
      break;
    }
    case Kind::GeneralizedFbm: {
      const double a = amp0_;
      d.smooth = [a](double) { return a; };
      break;
    }
    case Kind::Tabulated: {
      const SpectralModel s = *this;
      d.smooth = [s, p](double l) {
        return l <= 0.0 ? s.amp0_ : s.eval(l) / std::pow(l, p);
      };
      break;
    }
  }
  return d;
}

std::string SpectralModel::id() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::ParamLrd:
      os << "kind=param-lrd c1=" << c1_ << " beta1=" << beta1_
         << " beta2=" << beta2_ << " c2=" << c2_;
      if (short_range_) os << " range=short";
      break;
    case Kind::GeneralizedFbm:
      os << "kind=generalized-fbm H=" << H_;
      break;
    case Kind::Tabulated:
      os << "kind=tabulated n=" << grid_.size() << " sing_exponent=" << sing_exponent_;
      break;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// quadrature over densities
// ---------------------------------------------------------------------------

namespace {

// One-sided integral int_0^inf w(l) d(l) dl with the origin power split off.
// `osc_t` sizes panels so cos(l t) stays resolved.
double one_sided_integral(const Density& d,
                          const std::function<double(double)>& weight, double osc_t,
                          double lam_cut, int refine = 0) {
  const double p = d.sing_exponent;
  const int base = 24 << refine;
  const int panels0 =
      std::max(base, static_cast<int>(std::ceil(std::abs(osc_t) * lam_cut)));
  double head;
  if (p < 0.0) {
    head = quad::integrate_power_singular(
        [&](double l) { return d.smooth(l) * weight(l); }, p, lam_cut, panels0, 16);
  } else {
    // no singularity; the power substitution would starve the bump of nodes
    head = quad::integrate_composite(
        [&](double l) {
          return (l == 0.0 ? (p == 0.0 ? d.amp0 : 0.0) : d.eval(l)) * weight(l);
        },
        0.0, lam_cut, panels0, 16);
  }
  // octaves above lam_cut until the remaining tail is negligible; for cosine
  // weights the Dirichlet bound |int_a^inf f cos(lt) dl| <= 2 f(a)/|t| stops
  // the sweep long before the raw mass does
  double total = head;
  double a = lam_cut;
  int quiet = 0;
  for (int k = 0; k < 80; ++k) {
    const int panels = std::min(
        4096, std::max(8 << refine,
                       static_cast<int>(std::ceil(std::abs(osc_t) * a / 4.0))));
    const double piece = quad::integrate_composite(
        [&](double l) { return d.eval(l) * weight(l); }, a, 2.0 * a, panels, 12);
    total += piece;
    const double scale = std::max(std::abs(total), 1e-300);
    const double f_next = d.eval(2.0 * a);
    double tail_bound = f_next * 2.0 * a;  // crude remaining-mass heuristic
    if (std::abs(osc_t) > 0.0)
      tail_bound = std::min(tail_bound, 2.0 * f_next / std::abs(osc_t));
    if (std::abs(piece) < 1e-10 * scale && tail_bound < 1e-8 * scale) {
      if (++quiet >= 2) break;
    } else {
      quiet = 0;
    }
    a *= 2.0;
  }
  return total;
}

}  // namespace

double total_mass(const Density& d) {
  if (d.sing_exponent <= -1.0)
    throw std::invalid_argument("non-integrable model: filter first");
  auto one = [](double) { return 1.0; };
  return 2.0 * one_sided_integral(d, one, 0.0, 1.0);
}

double total_mass(const SpectralModel& m) { return total_mass(m.density()); }

double covariance_at(const Density& d, double t) {
  if (d.sing_exponent <= -1.0)
    throw std::invalid_argument("non-integrable model: filter first");
  auto w = [t](double l) { return std::cos(l * t); };
  return 2.0 * one_sided_integral(d, w, t, 1.0);
}

CovarianceTable covariance(const SpectralModel& m, const std::vector<double>& tgrid) {
  CovarianceTable tb;
  tb.model_id = m.id();
  tb.lags = tgrid;
  tb.values.reserve(tgrid.size());
  const Density d = m.density();
  for (double t : tgrid) tb.values.push_back(covariance_at(d, t));
  return tb;
}

Density filtered(const SpectralModel& m, const wavelets::Wavelet& w, int j) {
  const Density base = m.density();
  const double alpha = w.alpha();
  if (m.kind() == Kind::GeneralizedFbm && !w.fourier_vanishes_near_zero() &&
      alpha <= m.hurst())
    throw std::invalid_argument(
        "filtered: wavelet alpha must exceed H for generalized-fbm");
  Density g;
  const wavelets::Wavelet wav = w;
  const double scale = std::pow(2.0, j);
  g.eval = [base, wav, scale](double l) {
    const double v = wav.fourier(scale * l);
    const double f = base.eval(l);
    return std::isinf(f) ? std::numeric_limits<double>::infinity() : v * v * f;
  };
  if (w.fourier_vanishes_near_zero()) {
    g.sing_exponent = 0.0;
    g.amp0 = 0.0;
    g.smooth = g.eval;
  } else {
    g.sing_exponent = base.sing_exponent + 2.0 * alpha;
    if (g.sing_exponent <= -1.0)
      throw std::invalid_argument("filtered: product still non-integrable");
    g.smooth = [base, wav, scale, alpha](double l) {
      if (l <= 0.0) {
        const double c = wav.c_psi0();
        return c * c * std::pow(scale, 2.0 * alpha) * base.amp0;
      }
      const double v = wav.fourier(scale * l);
      return v * v * std::pow(l, -2.0 * alpha) * base.smooth(l);
    };
    g.amp0 = g.smooth(0.0);
  }
  return g;
}

SpectralModel filtered_density(const SpectralModel& m, const wavelets::Wavelet& w,
                               int j) {
  const Density g = filtered(m, w, j);
  std::vector<double> lam, val;
  // hybrid grid: 256 log points per decade on [1e-6, 1], uniform above
  for (int dec = -6; dec < 0; ++dec) {
    for (int i = 0; i < 256; ++i) {
      lam.push_back(std::pow(10.0, dec + i / 256.0));
    }
  }
  double peak = 0.0;
  for (double l = 1.0;; l += 1.0 / 64.0) {
    lam.push_back(l);
    if (l > 4.0) {
      const double v = g.eval(l);
      peak = std::max(peak, v);
      if (v < 1e-14 * std::max(peak, g.eval(1.0)) || l > 1e5) break;
    }
  }
  val.reserve(lam.size());
  for (double l : lam) val.push_back(g.eval(l));
  return SpectralModel::tabulated(std::move(lam), std::move(val), g.sing_exponent);
}

double variance_sigma_j(const SpectralModel& m, const wavelets::Wavelet& w, int j) {
  const Density g = filtered(m, w, j);
  const double lam_cut = std::min(1.0, 0.25 * std::pow(2.0, -j) + 1e-9);
  auto one = [](double) { return 1.0; };
  double coarse = 2.0 * one_sided_integral(g, one, 0.0, lam_cut, 0);
  for (int refine = 1; refine <= 3; ++refine) {
    const double fine = 2.0 * one_sided_integral(g, one, 0.0, lam_cut, refine);
    if (std::abs(fine - coarse) <= 1e-4 * std::abs(fine)) return fine;
    coarse = fine;
  }
  return coarse;
}

// ---------------------------------------------------------------------------
// covariance evaluator and l-fold convolutions
// ---------------------------------------------------------------------------

CovarianceEvaluator::CovarianceEvaluator(const Density& d, double t_max)
    : t_max_(t_max) {
  if (d.sing_exponent <= -1.0)
    throw std::invalid_argument("non-integrable model: filter first");
  const double lam_cut = 1.0;
  const double p = d.sing_exponent;
  const int head_panels =
      std::max(48, static_cast<int>(std::ceil(t_max * lam_cut)));
  const auto& rule = quad::gauss_legendre(16);
  if (p < 0.0) {
    // singular head: nodes in u = l^(1+p)
    const double q = 1.0 + p;
    const double ucut = std::pow(lam_cut, q);
    const double h = ucut / head_panels;
    for (int k = 0; k < head_panels; ++k) {
      const double c = (k + 0.5) * h, hw = 0.5 * h;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double u = c + hw * rule.nodes[i];
        const double l = std::pow(u, 1.0 / q);
        nodes_.push_back(l);
        wg_.push_back(rule.weights[i] * hw / q * d.smooth(l));
      }
    }
  } else {
    const double h = lam_cut / head_panels;
    for (int k = 0; k < head_panels; ++k) {
      const double c = (k + 0.5) * h, hw = 0.5 * h;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double l = c + hw * rule.nodes[i];
        nodes_.push_back(l);
        wg_.push_back(rule.weights[i] * hw * d.eval(l));
      }
    }
  }
  // octaves above
  double a = lam_cut;
  double mass_so_far = 0.0;
  for (double v : wg_) mass_so_far += v;
  const auto& orule = quad::gauss_legendre(12);
  for (int oct = 0; oct < 80; ++oct) {
    const int panels = std::max(8, static_cast<int>(std::ceil(t_max * a / 4.0)));
    const double h = a / panels;
    double piece = 0.0;
    for (int k = 0; k < panels; ++k) {
      const double c = a + (k + 0.5) * h, hw = 0.5 * h;
      for (std::size_t i = 0; i < orule.nodes.size(); ++i) {
        const double l = c + hw * orule.nodes[i];
        const double wgt = orule.weights[i] * hw * d.eval(l);
        nodes_.push_back(l);
        wg_.push_back(wgt);
        piece += wgt;
      }
    }
    mass_so_far += piece;
    const double scale = std::max(std::abs(mass_so_far), 1e-300);
    if (std::abs(piece) < 1e-11 * scale && d.eval(2.0 * a) * 2.0 * a < 1e-9 * scale)
      break;
    a *= 2.0;
  }
  double num = 0.0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    r0_ += wg_[i];
    num += wg_[i] * nodes_[i];
  }
  lambda_mean_ = num / r0_;
  r0_ *= 2.0;
}

double CovarianceEvaluator::operator()(double t) const {
  double s = 0.0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) s += wg_[i] * std::cos(nodes_[i] * t);
  return 2.0 * s;
}

std::vector<double> power_time_integrals(const Density& g,
                                         const std::vector<int>& ells) {
  const double gamma = g.sing_exponent + 1.0;
  int min_ell = 1 << 20;
  bool any_conv = false;
  for (int l : ells) {
    if (l < 1) throw std::invalid_argument("power_time_integrals: ell >= 1 required");
    if (l * gamma <= 1.0 && g.amp0 > 0.0)
      throw std::invalid_argument("divergent at origin: ell*gamma <= 1");
    if (l >= 2) {
      min_ell = std::min(min_ell, l);
      any_conv = true;
    }
  }
  std::vector<double> out(ells.size(), 0.0);
  if (!any_conv) {
    for (std::size_t e = 0; e < ells.size(); ++e)
      out[e] = (g.sing_exponent > 0.0) ? 0.0 : g.amp0;
    return out;
  }

  // grow t_max until |R/R0|^min_ell drops below the truncation threshold
  double t_max = 8.0;
  std::unique_ptr<CovarianceEvaluator> R;
  for (int grow = 0; grow < 12; ++grow) {
    R = std::make_unique<CovarianceEvaluator>(g, t_max);
    const double r0 = R->r0();
    const double thresh = std::pow(1e-12, 1.0 / min_ell) * std::abs(r0);
    bool settled = true;
    // require decay over the last tenth of the window
    for (double t = 0.9 * t_max; t <= t_max; t += 0.01 * t_max)
      settled = settled && std::abs((*R)(t)) < thresh;
    if (settled) break;
    t_max *= 2.0;
    if (t_max > 1e5)
      throw std::runtime_error(
          "power_time_integrals: covariance decays too slowly near the regime "
          "boundary");
  }

  double T = R->t_max();
  const double panel = std::min(0.25 / std::max(R->lambda_mean(), 1e-6), T / 32.0);
  const int panels = std::min(40000, static_cast<int>(std::ceil(T / panel)));
  const auto& rule = quad::gauss_legendre(8);
  const double h = T / panels;
  std::vector<double> acc(ells.size(), 0.0);
  for (int k = 0; k < panels; ++k) {
    const double c = k * h + 0.5 * h, hw = 0.5 * h;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double t = c + hw * rule.nodes[i];
      const double r = (*R)(t);
      for (std::size_t e = 0; e < ells.size(); ++e)
        acc[e] += rule.weights[i] * hw * std::pow(r, ells[e]);
    }
  }
  for (std::size_t e = 0; e < ells.size(); ++e) {
    if (ells[e] == 1) {
      // f^(*1)(0) = g(0): zero when the density vanishes at the origin
      out[e] = (g.sing_exponent > 0.0) ? 0.0 : g.amp0;
      continue;
    }
    // (1/2pi) int_{-T}^{T} R^ell dt = int_0^T R^ell dt / pi by evenness
    out[e] = acc[e] / M_PI;
  }
  return out;
}

double lfold_convolution_at_zero(const Density& g, int ell) {
  if (ell < 2) throw std::invalid_argument("lfold: ell >= 2 required");
  const double gamma = g.sing_exponent + 1.0;
  if (ell * gamma <= 1.0)
    throw std::invalid_argument("divergent at origin: ell*gamma <= 1");
  return power_time_integrals(g, {ell})[0];
}

double lfold_convolution_at_zero(const SpectralModel& g, int ell) {
  if (!g.integrable())
    throw std::invalid_argument("non-integrable model: filter first");
  return lfold_convolution_at_zero(g.density(), ell);
}

// ---------------------------------------------------------------------------
// Riesz composition formula and the direct numerical route
// ---------------------------------------------------------------------------

double riesz_closed_form(double g1, double g2, double lambda) {
  if (g1 <= 0 || g2 <= 0 || g1 + g2 >= 1.0)
    throw std::invalid_argument("riesz: need gamma1, gamma2 > 0, gamma1+gamma2 < 1");
  // sqrt(pi) * Gamma(g1/2) Gamma(g2/2) Gamma((1-g1-g2)/2)
  //   / (Gamma((1-g1)/2) Gamma((1-g2)/2) Gamma((g1+g2)/2));
  // equals the composition constant 2 Gamma(g1) cos(pi g1/2) * 2 Gamma(g2)
  // cos(pi g2/2) / (2 Gamma(g1+g2) cos(pi (g1+g2)/2)) by duplication.
  const double c = std::sqrt(M_PI) * std::tgamma(0.5 * g1) * std::tgamma(0.5 * g2) *
                   std::tgamma(0.5 * (1.0 - g1 - g2)) /
                   (std::tgamma(0.5 * (1.0 - g1)) * std::tgamma(0.5 * (1.0 - g2)) *
                    std::tgamma(0.5 * (g1 + g2)));
  return c * std::pow(std::abs(lambda), g1 + g2 - 1.0);
}

double power_pair_convolution(double g1, double g2, double lambda) {
  if (lambda <= 0.0) throw std::invalid_argument("power_pair_convolution: lambda > 0");
  const double l = lambda;
  // I = int |l - e|^(g1-1) |e|^(g2-1) de split at the singular points
  double I = 0.0;
  // e in [0, l/2], singular at 0
  I += quad::integrate_power_singular(
      [&](double e) { return std::pow(std::abs(l - e), g1 - 1.0); }, g2 - 1.0,
      0.5 * l, 32, 16);
  // e in [l/2, l] -> u = l - e, singular at 0
  I += quad::integrate_power_singular(
      [&](double u) { return std::pow(l - u, g2 - 1.0); }, g1 - 1.0, 0.5 * l, 32, 16);
  // e in [-l/2, 0] -> u = -e
  I += quad::integrate_power_singular(
      [&](double u) { return std::pow(l + u, g1 - 1.0); }, g2 - 1.0, 0.5 * l, 32, 16);
  // e in [l, 2l] -> u = e - l
  I += quad::integrate_power_singular(
      [&](double u) { return std::pow(l + u, g2 - 1.0); }, g1 - 1.0, l, 32, 16);
  // |e| >= 2l on the right and e <= -l/2 on the left: smooth decaying tails
  auto right = [&](double e) {
    return std::pow(e - l, g1 - 1.0) * std::pow(e, g2 - 1.0);
  };
  auto left = [&](double u) {  // u = -e >= l/2
    return std::pow(u + l, g1 - 1.0) * std::pow(u, g2 - 1.0);
  };
  const double cap = 1e9;
  double a = 2.0 * l;
  while (a < cap) {
    I += quad::integrate_composite(right, a, 2.0 * a, 8, 16);
    a *= 2.0;
  }
  a = 0.5 * l;
  while (a < cap) {
    I += quad::integrate_composite(left, a, 2.0 * a, 8, 16);
    a *= 2.0;
  }
  // analytic remainder beyond the cap: integrand ~ 2 e^(g1+g2-2)
  I += 2.0 * std::pow(cap, g1 + g2 - 1.0) / (1.0 - g1 - g2);
  return I;
}

std::string export_two_column(const SpectralModel& m) {
  if (m.kind() != Kind::Tabulated)
    throw std::invalid_argument("export_two_column: tabulated models only");
  std::ostringstream os;
  os.precision(12);
  for (std::size_t i = 0; i < m.grid().size(); ++i)
    os << m.grid()[i] << "\t" << m.values()[i] << "\n";
  return os.str();
}

}  // namespace nast::spectra
