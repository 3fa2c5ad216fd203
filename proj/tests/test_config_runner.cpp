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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "nast/config.hpp"
#include "nast/runner.hpp"

using namespace nast;

namespace {

const char* kBase = R"({
  "schema_version": 1,
  "model": {"kind": "param-lrd", "c1": 1.0, "beta1": 0.75, "beta2": 4.0, "c2": 1.0},
  "wavelet": {"name": "daubechies-4"},
  "activations": ["modulus"],
  "scales": {"j1": [1], "j2": 6},
  "ensemble": {"paths": 4, "length": 4096, "dt": 1.0, "seed": 7},
  "analysis": {"target": "clt"},
  "output": {"dir": "out/test"}
})";

}  // namespace

TEST_CASE("config parses and hashes stably under key reordering") {
  const auto a = config::parse_config_text(kBase);
  CHECK(a.model_kind == "param-lrd");
  CHECK(a.paths == 4);
  CHECK(a.j2 == 6);
  // same content, different key order
  const char* reordered = R"({
    "output": {"dir": "out/test"},
    "analysis": {"target": "clt"},
    "ensemble": {"seed": 7, "dt": 1.0, "length": 4096, "paths": 4},
    "scales": {"j2": 6, "j1": [1]},
    "activations": ["modulus"],
    "wavelet": {"name": "daubechies-4"},
    "model": {"c2": 1.0, "beta2": 4.0, "beta1": 0.75, "c1": 1.0, "kind": "param-lrd"},
    "schema_version": 1
  })";
  const auto b = config::parse_config_text(reordered);
  CHECK(a.hash == b.hash);
}

TEST_CASE("unknown and missing keys are rejected with their path") {
  std::string bad = kBase;
  bad.replace(bad.find("\"paths\""), 7, "\"pathz\"");
  CHECK_THROWS_WITH_AS(config::parse_config_text(bad),
                       doctest::Contains("ensemble.pathz"), std::invalid_argument);
  std::string missing = R"({
    "schema_version": 1,
    "model": {"kind": "param-lrd", "c1": 1.0, "beta1": 0.75, "beta2": 4.0, "c2": 1.0},
    "wavelet": {"name": "daubechies-4"},
    "ensemble": {"paths": 4, "length": 4096, "seed": 7},
    "output": {}
  })";
  CHECK_THROWS_WITH_AS(config::parse_config_text(missing),
                       doctest::Contains("analysis"), std::invalid_argument);
}

TEST_CASE("regime precheck names the violated hypothesis") {
  auto cfg = config::parse_config_text(kBase);
  CHECK_NOTHROW(runner::precheck_regime(cfg));
  // cauchy(0.05) with beta1 = 0.2: (2a+b) r = 0.6 < 1 cannot be a CLT run
  cfg.wavelet_name = "cauchy";
  cfg.wavelet_params = {{"alpha", 0.05}};
  cfg.model_params["beta1"] = 0.2;
  CHECK_THROWS_WITH_AS(runner::precheck_regime(cfg),
                       doctest::Contains("non-CLT regime"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(runner::precheck_regime(cfg), doctest::Contains("0.6"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(runner::precheck_regime(cfg), doctest::Contains("Theorem 1"),
                       std::invalid_argument);
  cfg.target = "nonclt";
  CHECK_NOTHROW(runner::precheck_regime(cfg));
  cfg.model_params["beta1"] = 0.75;
  cfg.wavelet_name = "daubechies-4";
  cfg.wavelet_params.clear();
  CHECK_THROWS_WITH_AS(runner::precheck_regime(cfg), doctest::Contains("Theorem 3"),
                       std::invalid_argument);
}

TEST_CASE("simulate writes byte-identical files for the same config") {
  auto cfg = config::parse_config_text(kBase);
  cfg.paths = 2;
  cfg.length = 1024;
  const std::string dir1 = "test-sim-out-a", dir2 = "test-sim-out-b";
  runner::write_paths(cfg, dir1, 2);
  runner::write_paths(cfg, dir2, 1);  // thread count must not matter
  for (const char* name : {"path-000000.txt", "path-000001.txt", "path-000000.meta"}) {
    std::ifstream f1(dir1 + "/" + name), f2(dir2 + "/" + name);
    std::stringstream s1, s2;
    s1 << f1.rdbuf();
    s2 << f2.rdbuf();
    CHECK(s1.str() == s2.str());
    CHECK(!s1.str().empty());
  }
  // fbm config sanity: n values written
  auto fcfg = cfg;
  fcfg.model_kind = "fbm-path";
  fcfg.model_params = {{"H", 0.3}};
  runner::write_paths(fcfg, dir1 + "-fbm", 1);
  std::ifstream pf(dir1 + "-fbm/path-000000.txt");
  std::size_t lines = 0;
  std::string line;
  while (std::getline(pf, line)) ++lines;
  CHECK(lines == 1024);
  std::filesystem::remove_all(dir1);
  std::filesystem::remove_all(dir2);
  std::filesystem::remove_all(dir1 + "-fbm");
}

TEST_CASE("parallel_for propagates worker exceptions") {
  CHECK_THROWS_AS(runner::parallel_for(8, 2, [](std::size_t i) {
    if (i == 3) throw std::runtime_error("boom");
  }), std::runtime_error);
  std::vector<int> hits(16, 0);
  runner::parallel_for(16, 3, [&](std::size_t i) { hits[i] = 1; });
  for (int h : hits) CHECK(h == 1);
}

TEST_CASE("report table is deterministic and tab-clean") {
  limits::StatReport r;
  r.test_name = "demo\ttest";
  r.statistic = 0.123456789;
  r.p_value = 0.5;
  r.pass = true;
  r.sample_size = 10;
  r.detail = "line\nbreak";
  const auto t1 = runner::report_table({r});
  const auto t2 = runner::report_table({r});
  CHECK(t1 == t2);
  CHECK(t1.find("demo test") != std::string::npos);
  CHECK(t1.find("line break") != std::string::npos);
}
