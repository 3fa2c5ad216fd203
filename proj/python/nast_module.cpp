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

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nast/hermite.hpp"
#include "nast/limits.hpp"
#include "nast/scattering.hpp"
#include "nast/simulate.hpp"
#include "nast/spectra.hpp"
#include "nast/wavelets.hpp"

namespace py = pybind11;
using namespace nast;

namespace {

spectra::SpectralModel model_from_kwargs(const std::string& kind,
                                         const std::map<std::string, double>& p) {
  auto get = [&](const char* k) {
    auto it = p.find(k);
    if (it == p.end()) throw std::invalid_argument(std::string("missing ") + k);
    return it->second;
  };
  if (kind == "param-lrd")
    return spectra::SpectralModel::param_lrd(get("c1"), get("beta1"), get("beta2"),
                                             get("c2"));
  if (kind == "generalized-fbm") return spectra::SpectralModel::generalized_fbm(get("H"));
  throw std::invalid_argument("unknown model kind: " + kind);
}

py::array_t<double> to_array(const std::vector<double>& v) {
  return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

std::vector<double> from_array(const py::array_t<double, py::array::c_style>& a) {
  return std::vector<double>(a.data(), a.data() + a.size());
}

scattering::ScatteringEngine make_engine(const std::string& wavelet,
                                         const std::map<std::string, double>& wp,
                                         int J, double dt, std::size_t n) {
  std::vector<int> scales;
  for (int j = 1; j < J; ++j) scales.push_back(j);
  wavelets::Filterbank fb(wavelets::make_wavelet(wavelet, wp), J, scales, dt);
  return scattering::ScatteringEngine(fb, n);
}

}  // namespace

PYBIND11_MODULE(_nastlib, m) {
  m.doc() = "scattering-transform limit-theorem toolkit (C++ core bindings)";

  m.def(
      "eval_density",
      [](const std::string& kind, const std::map<std::string, double>& params,
         double lam) { return model_from_kwargs(kind, params).eval(lam); },
      py::arg("kind"), py::arg("params"), py::arg("lam"));

  m.def(
      "covariance",
      [](const std::string& kind, const std::map<std::string, double>& params,
         const std::vector<double>& lags) {
        return spectra::covariance(model_from_kwargs(kind, params), lags).values;
      },
      py::arg("kind"), py::arg("params"), py::arg("lags"));

  m.def(
      "variance_sigma_j",
      [](const std::string& kind, const std::map<std::string, double>& params,
         const std::string& wavelet, const std::map<std::string, double>& wparams,
         int j) {
        return spectra::variance_sigma_j(model_from_kwargs(kind, params),
                                         wavelets::make_wavelet(wavelet, wparams), j);
      },
      py::arg("kind"), py::arg("params"), py::arg("wavelet"), py::arg("wparams"),
      py::arg("j"));

  m.def(
      "wavelet_fourier",
      [](const std::string& name, const std::map<std::string, double>& params,
         double lam) { return wavelets::make_wavelet(name, params).fourier(lam); },
      py::arg("name"), py::arg("params"), py::arg("lam"));

  m.def(
      "gaussian_stationary",
      [](const std::string& kind, const std::map<std::string, double>& params,
         std::size_t n, double dt, std::uint64_t seed, std::uint64_t stream) {
        return to_array(
            simulate::gaussian_stationary(model_from_kwargs(kind, params), n, dt,
                                          seed, stream)
                .values);
      },
      py::arg("kind"), py::arg("params"), py::arg("n"), py::arg("dt"),
      py::arg("seed"), py::arg("stream") = 0);

  m.def(
      "fbm",
      [](double H, std::size_t n, double dt, std::uint64_t seed,
         std::uint64_t stream) {
        return to_array(simulate::fbm(H, n, dt, seed, stream).values);
      },
      py::arg("H"), py::arg("n"), py::arg("dt"), py::arg("seed"),
      py::arg("stream") = 0);

  m.def(
      "cwt",
      [](const py::array_t<double, py::array::c_style>& x,
         const std::string& wavelet, const std::map<std::string, double>& wparams,
         int j, double dt) {
        auto v = from_array(x);
        auto eng = make_engine(wavelet, wparams, j + 1, dt, v.size());
        return to_array(eng.cwt(v, j));
      },
      py::arg("x"), py::arg("wavelet"), py::arg("wparams"), py::arg("j"),
      py::arg("dt") = 1.0);

  m.def(
      "nast",
      [](const py::array_t<double, py::array::c_style>& x,
         const std::string& wavelet, const std::map<std::string, double>& wparams,
         const std::vector<int>& js, const std::vector<std::string>& activations,
         double dt) {
        auto v = from_array(x);
        int J = 2;
        for (int j : js) J = std::max(J, j + 1);
        auto eng = make_engine(wavelet, wparams, J, dt, v.size());
        std::vector<scattering::Activation> acts;
        for (const auto& a : activations)
          acts.push_back(scattering::make_activation(a));
        return to_array(eng.nast(v, js, acts));
      },
      py::arg("x"), py::arg("wavelet"), py::arg("wparams"), py::arg("js"),
      py::arg("activations"), py::arg("dt") = 1.0);

  m.def(
      "hermite_expand",
      [](const std::string& activation, double sigma) {
        const auto ex =
            hermite::expand(scattering::make_activation(activation), sigma);
        py::dict out;
        out["coeffs"] = to_array(ex.coeffs);
        out["rank"] = ex.rank;
        out["tail_mass"] = ex.tail_mass;
        out["second_moment"] = ex.second_moment;
        return out;
      },
      py::arg("activation"), py::arg("sigma"));

  m.def(
      "kappa",
      [](const std::string& kind, const std::map<std::string, double>& params,
         const std::string& wavelet, const std::map<std::string, double>& wparams,
         int j1, const std::string& activation) {
        const auto kr = hermite::kappa(model_from_kwargs(kind, params),
                                       wavelets::make_wavelet(wavelet, wparams), j1,
                                       scattering::make_activation(activation));
        py::dict out;
        out["kappa_series"] = kr.kappa_series;
        out["kappa_integral"] = kr.kappa_integral;
        out["sigma_j1_sq"] = kr.sigma_j1_sq;
        return out;
      },
      py::arg("kind"), py::arg("params"), py::arg("wavelet"), py::arg("wparams"),
      py::arg("j1"), py::arg("activation") = "modulus");

  m.def(
      "theta1",
      [](const std::string& kind, const std::map<std::string, double>& params,
         const std::string& wavelet, const std::map<std::string, double>& wparams,
         int j1) {
        const auto th = hermite::theta1(model_from_kwargs(kind, params),
                                        wavelets::make_wavelet(wavelet, wparams), j1);
        py::dict out;
        out["theta"] = th.theta;
        out["theta_limit"] = th.theta_limit;
        out["kappa"] = th.kappa;
        out["sigma_j1"] = th.sigma_j1;
        return out;
      },
      py::arg("kind"), py::arg("params"), py::arg("wavelet"), py::arg("wparams"),
      py::arg("j1"));

  m.def(
      "ks_test",
      [](const py::array_t<double, py::array::c_style>& samples,
         const std::string& reference) {
        limits::ReferenceLaw law = limits::ReferenceLaw::standard_normal();
        if (reference == "folded-normal") law = limits::ReferenceLaw::folded_normal();
        if (reference == "standardized-chi2-chaos")
          law = limits::ReferenceLaw::standardized_chi2_chaos();
        const auto rep = limits::ks_test(from_array(samples), law);
        return py::make_tuple(rep.statistic, rep.p_value);
      },
      py::arg("samples"), py::arg("reference") = "standard-normal");
}
