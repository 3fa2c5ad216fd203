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

#include <array>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "nast/config.hpp"
#include "nast/runner.hpp"

namespace fs = std::filesystem;
using nast::config::ExperimentConfig;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitStatFail = 3;

ExperimentConfig load_config(const std::string& path, std::uint64_t seed_override) {
  ExperimentConfig cfg = nast::config::parse_config_file(path);
  if (seed_override != 0) cfg.seed = seed_override;
  return cfg;
}

void append_log(const std::string& dir, const std::string& line) {
  fs::create_directories(dir);
  std::ofstream log(dir + "/run.log", std::ios::app);
  const auto now = std::chrono::system_clock::now();
  const auto t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%S", std::gmtime(&t));
  log << buf << " " << line << "\n";
}

int run_one_validation(const ExperimentConfig& cfg, const std::string& out_dir,
                       int threads) {
  const auto t0 = std::chrono::steady_clock::now();
  nast::runner::ValidationResult res;
  try {
    res = nast::runner::run_validate(cfg, threads);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
  nast::runner::write_artifacts(res, out_dir);
  std::cout << nast::runner::summary_lines(res);
  const auto dt_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
  append_log(out_dir, cfg.target + " config=" + cfg.hash + " elapsed_ms=" +
                          std::to_string(dt_ms) +
                          (res.pass ? " verdict=pass" : " verdict=fail"));
  return res.pass ? kExitPass : kExitStatFail;
}

int cmd_plotdata(const std::string& report_dir, const std::string& config_path,
                 const std::string& out_dir) {
  ExperimentConfig cfg;
  try {
    cfg = nast::config::parse_config_file(config_path);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
  fs::create_directories(out_dir);
  bool wrote = false;

  const std::string samples_path = report_dir + "/samples.txt";
  if (fs::exists(samples_path)) {
    std::ifstream in(samples_path);
    std::vector<double> samples;
    double v;
    while (in >> v) samples.push_back(v);
    if (samples.size() >= 200) {
      const auto ref = cfg.target == "nonclt"
                           ? nast::limits::ReferenceLaw::standardized_chi2_chaos()
                           : nast::limits::ReferenceLaw::standard_normal();
      const auto qq = nast::limits::qq_data(samples, ref);
      std::ofstream qf(out_dir + "/qq.txt");
      qf << "# empirical_quantile\treference_quantile\n";
      qf.precision(10);
      for (const auto& [a, b] : qq) qf << a << "\t" << b << "\n";
      // deterministic histogram: fixed edges given the config target
      const double lo = -6.0, hi = 8.0, width = 0.1;
      const int bins = static_cast<int>((hi - lo) / width);
      std::vector<std::size_t> counts(bins, 0);
      for (double s : samples) {
        const int b = static_cast<int>((s - lo) / width);
        if (b >= 0 && b < bins) ++counts[b];
      }
      std::ofstream hf(out_dir + "/hist.txt");
      hf << "# bin_left\tbin_right\tcount\n";
      hf.precision(10);
      for (int b = 0; b < bins; ++b)
        hf << lo + b * width << "\t" << lo + (b + 1) * width << "\t" << counts[b]
           << "\n";
      // svg scatter of the qq pairs with the identity line
      std::ofstream svg(out_dir + "/qq.svg");
      svg << "<svg xmlns='http://www.w3.org/2000/svg' width='480' height='480' "
             "viewBox='0 0 480 480'>\n";
      double qmin = 1e300, qmax = -1e300;
      for (const auto& [a, b] : qq) {
        qmin = std::min({qmin, a, b});
        qmax = std::max({qmax, a, b});
      }
      auto sx = [&](double q) { return 20 + 440 * (q - qmin) / (qmax - qmin); };
      auto sy = [&](double q) { return 460 - 440 * (q - qmin) / (qmax - qmin); };
      svg << "<line x1='" << sx(qmin) << "' y1='" << sy(qmin) << "' x2='"
          << sx(qmax) << "' y2='" << sy(qmax)
          << "' stroke='gray' stroke-width='1'/>\n";
      for (const auto& [a, b] : qq)
        svg << "<circle cx='" << sx(b) << "' cy='" << sy(a)
            << "' r='2.5' fill='steelblue'/>\n";
      svg << "</svg>\n";
      wrote = true;
    }
  }

  const std::string moments_path = report_dir + "/moments.tsv";
  if (fs::exists(moments_path)) {
    std::ifstream in(moments_path);
    std::string line;
    std::getline(in, line);  // header
    std::map<int, std::vector<std::array<double, 3>>> curves;
    while (std::getline(in, line)) {
      std::istringstream ls(line);
      int j1, j;
      double m, se;
      if (ls >> j1 >> j >> m >> se) curves[j1].push_back({double(j), m, se});
    }
    std::ofstream sf(out_dir + "/slope.txt");
    sf.precision(10);
    for (const auto& [j1, pts] : curves) {
      std::vector<double> x, y, s;
      for (const auto& p : pts) {
        x.push_back(p[0]);
        y.push_back(std::log2(p[1]));
        s.push_back(p[2] / (p[1] * std::log(2.0)));
      }
      const auto fit = nast::stats::ols_fit(x, y, s);
      sf << "# j1=" << j1 << " slope=" << fit.slope
         << " intercept=" << fit.intercept << " slope_stderr=" << fit.slope_stderr
         << "\n";
      for (const auto& p : pts)
        sf << j1 << "\t" << p[0] << "\t" << std::log2(p[1]) << "\t" << s.front()
           << "\n";
    }
    wrote = true;
  }
  if (!wrote) {
    std::cerr << "plotdata: no samples.txt or moments.tsv under " << report_dir
              << "\n";
    return kExitConfigError;
  }
  return kExitPass;
}

struct ManifestEntry {
  std::string config;
  std::string target;
  std::string figure;
  std::string expect;
};

std::vector<ManifestEntry> load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("manifest: cannot open " + path);
  nlohmann::json j;
  in >> j;
  std::vector<ManifestEntry> out;
  for (const auto& e : j.at("runs")) {
    out.push_back({e.at("config").get<std::string>(),
                   e.at("target").get<std::string>(),
                   e.at("figure").get<std::string>(),
                   e.at("expect").get<std::string>()});
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"neural-activation scattering transform experiment runner"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", report_dir, manifest_path;
  std::uint64_t seed = 0;
  int threads = static_cast<int>(std::thread::hardware_concurrency());
  bool run_all = false;
  std::string target;

  app.add_option("--threads", threads, "worker thread count");

  auto* sim = app.add_subcommand("simulate", "generate sample paths + metadata");
  sim->fallthrough();
  sim->add_option("--config", config_path, "config file")->required();
  sim->add_option("--seed", seed, "seed override");
  sim->add_option("--out", out_dir, "output directory");

  auto* val = app.add_subcommand("validate", "run a statistical validation target");
  val->fallthrough();
  val->add_option("target", target, "clt|nonclt|slope|fbm-invariance|energy|"
                                    "deformation|constants");
  val->add_flag("--all", run_all, "run every manifest entry");
  val->add_option("--manifest", manifest_path, "manifest file for --all");
  val->add_option("--config", config_path, "config file");
  val->add_option("--seed", seed, "seed override");
  val->add_option("--out", out_dir, "output directory");

  auto* plot = app.add_subcommand("plotdata", "render plot-ready data from a report");
  plot->fallthrough();
  plot->add_option("--report", report_dir, "validation output directory")->required();
  plot->add_option("--config", config_path, "config file")->required();
  plot->add_option("--out", out_dir, "output directory");

  auto* cons = app.add_subcommand("constants", "hermite/limit constants report");
  cons->fallthrough();
  cons->add_option("--config", config_path, "config file")->required();
  cons->add_option("--seed", seed, "seed override");
  cons->add_option("--out", out_dir, "output directory");

  auto* man = app.add_subcommand("manifest", "list the shipped figure manifest");
  man->fallthrough();
  man->add_option("--manifest", manifest_path, "manifest file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      const auto cfg = load_config(config_path, seed);
      nast::runner::write_paths(cfg, out_dir, threads);
      std::cout << "wrote " << cfg.paths << " paths to " << out_dir << "\n";
      return kExitPass;
    }
    if (val->parsed()) {
      if (run_all) {
        if (manifest_path.empty()) {
          std::cerr << "config error: --all requires --manifest\n";
          return kExitConfigError;
        }
        const auto entries = load_manifest(manifest_path);
        const fs::path base = fs::path(manifest_path).parent_path();
        int worst = kExitPass;
        for (const auto& e : entries) {
          auto cfg = load_config((base / e.config).string(), seed);
          cfg.target = e.target;
          std::cout << "== " << e.figure << " (" << e.config << ", " << e.target
                    << ") ==\n";
          const int rc =
              run_one_validation(cfg, out_dir + "/" + e.target + "-" + e.config,
                                 threads);
          worst = std::max(worst, rc);
        }
        return worst;
      }
      if (target.empty() || config_path.empty()) {
        std::cerr << "config error: validate needs a target and --config\n";
        return kExitConfigError;
      }
      auto cfg = load_config(config_path, seed);
      cfg.target = target;
      return run_one_validation(cfg, out_dir, threads);
    }
    if (plot->parsed()) return cmd_plotdata(report_dir, config_path, out_dir);
    if (cons->parsed()) {
      auto cfg = load_config(config_path, seed);
      cfg.target = "constants";
      return run_one_validation(cfg, out_dir, threads);
    }
    if (man->parsed()) {
      for (const auto& e : load_manifest(manifest_path))
        std::cout << e.figure << "\t" << e.config << "\t" << e.target << "\texpect="
                  << e.expect << "\n";
      return kExitPass;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return kExitPass;
}
