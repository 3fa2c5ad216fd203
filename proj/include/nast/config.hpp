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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nast/spectra.hpp"
#include "nast/wavelets.hpp"

namespace nast::config {

/// Schema-validated experiment configuration. Unknown keys are rejected with
/// their path; the hash is stable under key reordering.
struct ExperimentConfig {
  int schema_version = 1;

  // model
  std::string model_kind;  // param-lrd | generalized-fbm | fbm-path
  std::map<std::string, double> model_params;

  // wavelet
  std::string wavelet_name;
  std::map<std::string, double> wavelet_params;

  std::vector<std::string> activations;

  // scales
  std::vector<int> j1_list;
  int j2 = 10;
  int j_lo = 6, j_hi = 10;
  int J = 6;
  int order = 2;

  // ensemble
  std::size_t paths = 100;
  std::size_t length = 1u << 16;
  double dt = 1.0;
  std::uint64_t seed = 1;

  // analysis
  std::string target;  // clt | nonclt | slope | fbm-invariance | energy |
                       // deformation | constants
  double spacing_factor = 4.0;
  double ks_p_threshold = 0.01;
  std::size_t min_decimated = 200;
  std::size_t max_samples = 0;  // 0 = unlimited
  double slope_tol = 0.05;
  double first_slope_tol = 0.05;
  double intercept_rel_tol = 0.10;
  std::vector<int> first_order_j1;  // range for the first-order moment curve
  std::vector<double> hursts;       // fbm-invariance
  std::optional<std::map<std::string, double>> contrast_model;  // fbm-invariance
  std::vector<int> deformation_js;  // deformation target: J sweep
  double shift = 64.0;              // deformation translation, time units

  std::string out_dir = "out";
  std::string raw_json;  // canonical dump
  std::string hash;      // fnv-1a of the canonical dump

  spectra::SpectralModel make_model() const;
  spectra::SpectralModel make_contrast_model() const;
  wavelets::Wavelet make_wavelet() const;
  bool is_fbm_path_model() const { return model_kind == "fbm-path"; }
  double fbm_hurst() const;
};

ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

std::string fnv1a_hex(const std::string& data);

}  // namespace nast::config
