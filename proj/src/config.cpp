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

#include "nast/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace nast::config {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::invalid_argument("config: " + path + ": " + what);
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) fail(path + "." + it.key(), "unknown key");
}

void require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) fail(path + "." + key, "missing required key");
}

std::map<std::string, double> number_map(const json& obj, const std::string& path,
                                         const std::set<std::string>& skip = {}) {
  std::map<std::string, double> out;
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (skip.count(it.key())) continue;
    if (!it.value().is_number()) fail(path + "." + it.key(), "expected a number");
    out[it.key()] = it.value().get<double>();
  }
  return out;
}

std::vector<int> int_list(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array");
  std::vector<int> out;
  for (const auto& e : v) out.push_back(e.get<int>());
  return out;
}

}  // namespace

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

ExperimentConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  ExperimentConfig cfg;
  reject_unknown(j,
                 {"schema_version", "model", "wavelet", "activations", "scales",
                  "ensemble", "analysis", "output"},
                 "");
  require(j, "schema_version", "");
  cfg.schema_version = j["schema_version"].get<int>();
  if (cfg.schema_version != 1) fail("schema_version", "unsupported version");

  require(j, "model", "");
  {
    const auto& m = j["model"];
    require(m, "kind", "model");
    cfg.model_kind = m["kind"].get<std::string>();
    cfg.model_params = number_map(m, "model", {"kind"});
  }
  require(j, "wavelet", "");
  {
    const auto& w = j["wavelet"];
    require(w, "name", "wavelet");
    cfg.wavelet_name = w["name"].get<std::string>();
    cfg.wavelet_params = number_map(w, "wavelet", {"name"});
  }
  if (j.contains("activations")) {
    for (const auto& a : j["activations"])
      cfg.activations.push_back(a.get<std::string>());
  }
  if (j.contains("scales")) {
    const auto& s = j["scales"];
    reject_unknown(s, {"j1", "j2", "j_range", "J", "order"}, "scales");
    if (s.contains("j1")) cfg.j1_list = int_list(s["j1"], "scales.j1");
    if (s.contains("j2")) cfg.j2 = s["j2"].get<int>();
    if (s.contains("j_range")) {
      auto r = int_list(s["j_range"], "scales.j_range");
      if (r.size() != 2) fail("scales.j_range", "expected [lo, hi]");
      cfg.j_lo = r[0];
      cfg.j_hi = r[1];
    }
    if (s.contains("J")) cfg.J = s["J"].get<int>();
    if (s.contains("order")) cfg.order = s["order"].get<int>();
  }
  require(j, "ensemble", "");
  {
    const auto& e = j["ensemble"];
    reject_unknown(e, {"paths", "length", "dt", "seed"}, "ensemble");
    require(e, "paths", "ensemble");
    require(e, "length", "ensemble");
    require(e, "seed", "ensemble");
    cfg.paths = e["paths"].get<std::size_t>();
    cfg.length = e["length"].get<std::size_t>();
    if (e.contains("dt")) cfg.dt = e["dt"].get<double>();
    cfg.seed = e["seed"].get<std::uint64_t>();
  }
  require(j, "analysis", "");
  {
    const auto& a = j["analysis"];
    reject_unknown(a,
                   {"target", "spacing_factor", "ks_p_threshold", "min_decimated",
                    "max_samples", "slope_tol", "first_slope_tol",
                    "intercept_rel_tol", "first_order_j1", "hursts",
                    "contrast_model", "deformation_js", "shift"},
                   "analysis");
    require(a, "target", "analysis");
    cfg.target = a["target"].get<std::string>();
    if (a.contains("spacing_factor"))
      cfg.spacing_factor = a["spacing_factor"].get<double>();
    if (a.contains("ks_p_threshold"))
      cfg.ks_p_threshold = a["ks_p_threshold"].get<double>();
    if (a.contains("min_decimated"))
      cfg.min_decimated = a["min_decimated"].get<std::size_t>();
    if (a.contains("max_samples"))
      cfg.max_samples = a["max_samples"].get<std::size_t>();
    if (a.contains("slope_tol")) cfg.slope_tol = a["slope_tol"].get<double>();
    if (a.contains("first_slope_tol"))
      cfg.first_slope_tol = a["first_slope_tol"].get<double>();
    if (a.contains("intercept_rel_tol"))
      cfg.intercept_rel_tol = a["intercept_rel_tol"].get<double>();
    if (a.contains("first_order_j1"))
      cfg.first_order_j1 = int_list(a["first_order_j1"], "analysis.first_order_j1");
    if (a.contains("hursts"))
      for (const auto& h : a["hursts"]) cfg.hursts.push_back(h.get<double>());
    if (a.contains("contrast_model")) {
      const auto& m = a["contrast_model"];
      require(m, "kind", "analysis.contrast_model");
      if (m["kind"].get<std::string>() != "param-lrd")
        fail("analysis.contrast_model.kind", "expected param-lrd");
      cfg.contrast_model = number_map(m, "analysis.contrast_model", {"kind"});
    }
    if (a.contains("deformation_js"))
      cfg.deformation_js = int_list(a["deformation_js"], "analysis.deformation_js");
    if (a.contains("shift")) cfg.shift = a["shift"].get<double>();
  }
  if (j.contains("output")) {
    const auto& o = j["output"];
    reject_unknown(o, {"dir"}, "output");
    if (o.contains("dir")) cfg.out_dir = o["dir"].get<std::string>();
  }
  cfg.raw_json = j.dump();  // nlohmann objects iterate sorted: canonical
  cfg.hash = fnv1a_hex(cfg.raw_json);
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

spectra::SpectralModel ExperimentConfig::make_model() const {
  auto get = [&](const std::string& k) {
    auto it = model_params.find(k);
    if (it == model_params.end())
      throw std::invalid_argument("config: model." + k + ": missing required key");
    return it->second;
  };
  if (model_kind == "param-lrd")
    return spectra::SpectralModel::param_lrd(get("c1"), get("beta1"), get("beta2"),
                                             get("c2"));
  if (model_kind == "generalized-fbm" || model_kind == "fbm-path")
    return spectra::SpectralModel::generalized_fbm(get("H"));
  throw std::invalid_argument("config: model.kind: unknown kind " + model_kind);
}

spectra::SpectralModel ExperimentConfig::make_contrast_model() const {
  if (!contrast_model)
    throw std::invalid_argument("config: analysis.contrast_model: missing");
  auto get = [&](const std::string& k) {
    auto it = contrast_model->find(k);
    if (it == contrast_model->end())
      throw std::invalid_argument("config: analysis.contrast_model." + k +
                                  ": missing required key");
    return it->second;
  };
  return spectra::SpectralModel::param_lrd(get("c1"), get("beta1"), get("beta2"),
                                           get("c2"));
}

wavelets::Wavelet ExperimentConfig::make_wavelet() const {
  return wavelets::make_wavelet(wavelet_name, wavelet_params);
}

double ExperimentConfig::fbm_hurst() const {
  auto it = model_params.find("H");
  if (it == model_params.end())
    throw std::invalid_argument("config: model.H: missing required key");
  return it->second;
}

}  // namespace nast::config
