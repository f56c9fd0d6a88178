// Copyright 2026 The nudgecast Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NUDGECAST_RESULTS_IO_HPP_
#define NUDGECAST_RESULTS_IO_HPP_

// Flat-file experiment outputs: adoption.csv, policy.csv, heatmap.csv
// and summary.json. CSV doubles are printed with %.17g; JSON numbers
// use shortest-round-trip formatting, so re-reading reproduces them
// bit-exactly.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "nudgecast/errors.hpp"
#include "nudgecast/harness.hpp"

namespace nudgecast {

namespace detail {
inline std::string fmt17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}
}  // namespace detail

/// Config echo embedded in summary.json. The output directory is
/// deliberately omitted so identical experiments serialize identically
/// wherever they land.
inline nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["scenario"] = to_string(cfg.scenario);
  j["policy"] = to_string(cfg.policy);
  j["T"] = cfg.horizon;
  j["n_runs"] = cfg.n_runs;
  j["base_seed"] = cfg.base_seed;
  j["threshold_eps"] = cfg.threshold_eps;
  nlohmann::json net;
  net["source"] =
      cfg.network.source == NetworkConfig::Source::file ? "file" : "watts_strogatz";
  if (cfg.network.source == NetworkConfig::Source::file) {
    net["path"] = cfg.network.path;
  } else {
    net["n"] = cfg.network.n;
    net["k"] = cfg.network.k;
    net["p_rewire"] = cfg.network.p_rewire;
    net["seed"] = cfg.network.seed;
  }
  j["network"] = net;
  j["agents"] = {{"path", cfg.agents_path}};
  j["mpc"] = {{"L", cfg.mpc.horizon},         {"budget", cfg.mpc.budget},
              {"q", cfg.mpc.q},               {"r", cfg.mpc.r},
              {"delta", cfg.mpc.delta},       {"m_equity", cfg.mpc.m_equity},
              {"n_equality", cfg.mpc.n_equality}, {"solver_tol", cfg.mpc.solver_tol},
              {"max_iter", cfg.mpc.max_iter}};
  return j;
}

/// Writes the four result files into `out_dir` (created if missing):
///   adoption.csv  run,t,gamma rows for t = 0..T
///   policy.csv    run,t,agent,u rows for t = 0..T-1
///   heatmap.csv   agent x t policy matrix of the median-adoption run
///   summary.json  aggregates, config echo, and per-run seeds
inline void write_results(const ExperimentResult& result, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  const int T = result.config.horizon;
  const int n = result.runs.empty() ? 0 : static_cast<int>(result.runs.front().policy.rows());

  {
    auto out = detail::open_out(out_dir / "adoption.csv");
    out << "run,t,gamma\n";
    for (std::size_t i = 0; i < result.runs.size(); ++i)
      for (int t = 0; t <= T; ++t)
        out << i << ',' << t << ','
            << detail::fmt17(result.runs[i].gamma[static_cast<std::size_t>(t)]) << '\n';
  }
  {
    auto out = detail::open_out(out_dir / "policy.csv");
    out << "run,t,agent,u\n";
    for (std::size_t i = 0; i < result.runs.size(); ++i)
      for (int t = 0; t < T; ++t)
        for (int v = 0; v < n; ++v)
          out << i << ',' << t << ',' << v << ','
              << detail::fmt17(result.runs[i].policy(v, t)) << '\n';
  }
  {
    auto out = detail::open_out(out_dir / "heatmap.csv");
    const auto& run = result.runs[static_cast<std::size_t>(result.median_run)];
    for (int v = 0; v < n; ++v) {
      for (int t = 0; t < T; ++t) {
        if (t > 0) out << ',';
        out << detail::fmt17(run.policy(v, t));
      }
      out << '\n';
    }
  }
  {
    nlohmann::json j;
    j["config"] = config_to_json(result.config);
    nlohmann::json seeds = nlohmann::json::array();
    for (const auto& run : result.runs) seeds.push_back(run.seed);
    j["run_seeds"] = seeds;
    j["gamma_mean"] = result.gamma_mean;
    j["gamma_std"] = result.gamma_std;
    j["u_bar"] = result.u_bar;
    j["policy_dispersion"] = result.policy_dispersion;
    j["rho_dispersion"] = result.rho_dispersion;
    j["median_run"] = result.median_run;
    auto out = detail::open_out(out_dir / "summary.json");
    out << j.dump(2) << '\n';
  }
}

}  // namespace nudgecast

#endif  // NUDGECAST_RESULTS_IO_HPP_
