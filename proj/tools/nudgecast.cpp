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

// Command-line front end: simulate | oracle | compare | validate.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nudgecast/nudgecast.hpp"

namespace {

struct RawOverrides {
  std::string seed;
  std::string runs;
  std::string scenario;
  std::string policy;
  std::string out_dir;
};

void add_override_flags(CLI::App* sub, RawOverrides& raw) {
  sub->add_option("--seed", raw.seed, "Override base_seed (u64)");
  sub->add_option("--runs", raw.runs, "Override n_runs");
  sub->add_option("--scenario", raw.scenario, "Override scenario: nd|cd|rd|crd");
  sub->add_option("--policy", raw.policy, "Override policy: none|one-sided|equity|equality|fair");
  sub->add_option("--out", raw.out_dir, "Override output directory");
}

nudgecast::ConfigOverrides parse_overrides(const RawOverrides& raw) {
  nudgecast::ConfigOverrides ov;
  if (!raw.seed.empty()) ov.base_seed = std::stoull(raw.seed);
  if (!raw.runs.empty()) ov.n_runs = std::stoi(raw.runs);
  if (!raw.scenario.empty()) ov.scenario = nudgecast::parse_scenario(raw.scenario);
  if (!raw.policy.empty()) ov.policy = nudgecast::parse_policy_mode(raw.policy);
  if (!raw.out_dir.empty()) ov.out_dir = raw.out_dir;
  return ov;
}

int cmd_simulate(const std::string& config_path, const RawOverrides& raw) {
  const auto cfg = nudgecast::load_config(config_path, parse_overrides(raw));
  const auto result = nudgecast::run_experiment(cfg);
  nudgecast::write_results(result, cfg.out_dir);
  std::printf("scenario=%s policy=%s runs=%d T=%d\n", nudgecast::to_string(cfg.scenario),
              nudgecast::to_string(cfg.policy), cfg.n_runs, cfg.horizon);
  std::printf("terminal adoption: mean=%.4f std=%.4f\n", result.gamma_mean.back(),
              result.gamma_std.back());
  std::printf("wrote adoption.csv policy.csv heatmap.csv summary.json to %s\n",
              cfg.out_dir.c_str());
  return 0;
}

int cmd_oracle(const std::string& config_path, const RawOverrides& raw) {
  const auto cfg = nudgecast::load_config(config_path, parse_overrides(raw));
  if (cfg.policy != nudgecast::PolicyMode::none)
    throw nudgecast::InvalidParameterError("oracle: policy mode must be `none`");
  const auto net = nudgecast::load_network(cfg.network);
  if (net.n_agents() > nudgecast::kOracleMaxAgents)
    throw nudgecast::OutOfRangeError("oracle: network has " + std::to_string(net.n_agents()) +
                                     " agents, limit is " +
                                     std::to_string(nudgecast::kOracleMaxAgents));
  const auto records = nudgecast::load_agent_records(cfg.agents_path);
  const auto result = nudgecast::run_experiment(net, records, cfg);
  const auto params = nudgecast::build_population(records, cfg.scenario, cfg.param_seed());
  const auto exact =
      nudgecast::exact_markov_oracle(net, params, cfg.horizon, cfg.threshold_eps);

  constexpr double kGate = 0.02;
  double worst = 0.0;
  std::printf("%4s %12s %12s %12s\n", "t", "monte-carlo", "exact", "|gap|");
  for (int t = 0; t <= cfg.horizon; ++t) {
    const double gap = std::abs(result.gamma_mean[static_cast<std::size_t>(t)] -
                                exact[static_cast<std::size_t>(t)]);
    worst = std::max(worst, gap);
    std::printf("%4d %12.6f %12.6f %12.6f\n", t,
                result.gamma_mean[static_cast<std::size_t>(t)],
                exact[static_cast<std::size_t>(t)], gap);
  }
  const bool pass = worst <= kGate;
  std::printf("max gap %.6f over %d runs: %s (gate %.2f)\n", worst, cfg.n_runs,
              pass ? "PASS" : "FAIL", kGate);
  return pass ? 0 : 1;
}

int cmd_compare(const std::vector<std::string>& config_paths, const RawOverrides& raw) {
  std::vector<nudgecast::ExperimentConfig> cfgs;
  for (const auto& p : config_paths) cfgs.push_back(nudgecast::load_config(p, parse_overrides(raw)));
  for (std::size_t i = 1; i < cfgs.size(); ++i) {
    if (!(cfgs[i].network == cfgs[0].network))
      throw nudgecast::InvalidParameterError("compare: configs use different networks");
    if (cfgs[i].agents_path != cfgs[0].agents_path ||
        cfgs[i].horizon != cfgs[0].horizon || cfgs[i].n_runs != cfgs[0].n_runs ||
        cfgs[i].base_seed != cfgs[0].base_seed ||
        cfgs[i].threshold_eps != cfgs[0].threshold_eps || !(cfgs[i].mpc == cfgs[0].mpc))
      throw nudgecast::InvalidParameterError(
          "compare: configs may differ only in scenario and policy mode");
  }
  const auto net = nudgecast::load_network(cfgs[0].network);
  const auto records = nudgecast::load_agent_records(cfgs[0].agents_path);

  std::printf("%-10s %-10s %12s %12s %16s %16s\n", "scenario", "policy", "gammaT_mean",
              "gammaT_std", "mean_u_spread", "final_rho_var");
  for (const auto& cfg : cfgs) {
    const auto result = nudgecast::run_experiment(net, records, cfg);
    double u_spread = 0.0;
    for (double s : result.policy_dispersion) u_spread += s;
    u_spread /= static_cast<double>(result.policy_dispersion.size());
    std::printf("%-10s %-10s %12.6f %12.6f %16.6f %16.6f\n",
                nudgecast::to_string(cfg.scenario), nudgecast::to_string(cfg.policy),
                result.gamma_mean.back(), result.gamma_std.back(), u_spread,
                result.rho_dispersion.back());
  }
  return 0;
}

int cmd_validate(const std::string& config_path) {
  const auto cfg = nudgecast::load_config(config_path);
  const auto net = nudgecast::load_network(cfg.network);
  const auto records = nudgecast::load_agent_records(cfg.agents_path);
  if (net.n_agents() != static_cast<int>(records.size()))
    throw nudgecast::InvalidParameterError(
        "network has " + std::to_string(net.n_agents()) + " agents but records have " +
        std::to_string(records.size()));
  int seeds = 0;
  for (const auto& rec : records) seeds += rec.is_seed ? 1 : 0;
  if (seeds == 0) throw nudgecast::EmptySeedSetError("no initial adopters in agent records");
  std::printf("ok: %d agents, %zu edges, %d initial adopters, scenario=%s policy=%s T=%d runs=%d\n",
              net.n_agents(), net.n_edges(), seeds, nudgecast::to_string(cfg.scenario),
              nudgecast::to_string(cfg.policy), cfg.horizon, cfg.n_runs);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nudgecast: innovation-diffusion simulation and fairness-aware nudging policies"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> config_paths;
  RawOverrides raw;

  auto* simulate = app.add_subcommand("simulate", "Run a Monte Carlo experiment and write results");
  simulate->add_option("--config", config_path, "Experiment config file")->required();
  add_override_flags(simulate, raw);

  auto* oracle = app.add_subcommand(
      "oracle", "Check Monte Carlo adoption rates against the exact small-network chain");
  oracle->add_option("--config", config_path, "Experiment config file")->required();
  add_override_flags(oracle, raw);

  auto* compare = app.add_subcommand("compare", "Run several configs and tabulate the outcomes");
  compare->add_option("--config", config_paths, "Config files (repeatable)")->required();
  add_override_flags(compare, raw);

  auto* validate = app.add_subcommand("validate", "Check a config and its inputs; writes nothing");
  validate->add_option("--config", config_path, "Experiment config file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return cmd_simulate(config_path, raw);
    if (oracle->parsed()) return cmd_oracle(config_path, raw);
    if (compare->parsed()) return cmd_compare(config_paths, raw);
    return cmd_validate(config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
