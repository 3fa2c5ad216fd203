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
#include <map>
#include <string>
#include <vector>

#include "nast/config.hpp"
#include "nast/limits.hpp"

namespace nast::runner {

struct ValidationResult {
  std::vector<limits::StatReport> reports;
  bool pass = true;
  /// filename -> deterministic file content (no timestamps)
  std::map<std::string, std::string> artifacts;
};

/// Work-stealing loop over [0, count); rethrows the first worker exception.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& fn);

/// Throws std::invalid_argument naming the violated hypothesis when the
/// config regime is inconsistent with the target (checked before simulation).
void precheck_regime(const config::ExperimentConfig& cfg);

ValidationResult run_validate(const config::ExperimentConfig& cfg, int threads);

ValidationResult run_clt(const config::ExperimentConfig& cfg, int threads);
ValidationResult run_nonclt(const config::ExperimentConfig& cfg, int threads);
ValidationResult run_slope(const config::ExperimentConfig& cfg, int threads);
ValidationResult run_fbm_invariance(const config::ExperimentConfig& cfg, int threads);
ValidationResult run_energy(const config::ExperimentConfig& cfg, int threads);
ValidationResult run_deformation(const config::ExperimentConfig& cfg, int threads);
ValidationResult run_constants(const config::ExperimentConfig& cfg, int threads);

/// cmd_simulate support: path files plus metadata sidecars, byte-identical
/// across reruns of the same config.
void write_paths(const config::ExperimentConfig& cfg, const std::string& dir,
                 int threads);

void write_artifacts(const ValidationResult& res, const std::string& dir);

std::string report_table(const std::vector<limits::StatReport>& reports);
std::string summary_lines(const ValidationResult& res);

}  // namespace nast::runner
