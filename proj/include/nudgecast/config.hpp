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

#ifndef NUDGECAST_CONFIG_HPP_
#define NUDGECAST_CONFIG_HPP_

// Experiment config files: flat `key = value` lines with [network],
// [agents] and [mpc] sections mirroring the ExperimentConfig fields.
// `#` starts a comment; unknown keys are rejected. Relative paths are
// resolved against the config file's directory.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include "nudgecast/errors.hpp"
#include "nudgecast/harness.hpp"

namespace nudgecast {

/// Command-line overrides; file values lose to these.
struct ConfigOverrides {
  std::optional<std::uint64_t> base_seed;
  std::optional<int> n_runs;
  std::optional<Scenario> scenario;
  std::optional<PolicyMode> policy;
  std::optional<std::string> out_dir;
};

namespace detail {
inline std::string trimmed(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double to_double(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ParseError("config: bad number for `" + key + "`: " + v);
  }
}

inline long long to_int(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ParseError("config: bad integer for `" + key + "`: " + v);
  }
}

inline std::uint64_t to_u64(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    const std::uint64_t x = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ParseError("config: bad seed for `" + key + "`: " + v);
  }
}
}  // namespace detail

/// Parses a config file. Values not present keep their defaults.
inline ExperimentConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path.string());
  const auto base_dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  auto resolve = [&](const std::string& p) {
    const std::filesystem::path fp(p);
    return fp.is_absolute() ? fp.string() : (base_dir / fp).string();
  };

  ExperimentConfig cfg;
  std::string section;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trimmed(line);
    if (line.empty()) continue;
    const auto at = [&] { return path.string() + ":" + std::to_string(lineno) + ": "; };
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(at() + "unterminated section header");
      section = detail::trimmed(line.substr(1, line.size() - 2));
      if (section != "network" && section != "agents" && section != "mpc")
        throw ParseError(at() + "unknown section `" + section + "`");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(at() + "expected `key = value`");
    const std::string key = detail::trimmed(line.substr(0, eq));
    const std::string value = detail::trimmed(line.substr(eq + 1));
    if (key.empty() || value.empty()) throw ParseError(at() + "expected `key = value`");

    if (section.empty()) {
      if (key == "scenario") cfg.scenario = parse_scenario(value);
      else if (key == "policy") cfg.policy = parse_policy_mode(value);
      else if (key == "T") cfg.horizon = static_cast<int>(detail::to_int(value, key));
      else if (key == "n_runs") cfg.n_runs = static_cast<int>(detail::to_int(value, key));
      else if (key == "base_seed") cfg.base_seed = detail::to_u64(value, key);
      else if (key == "threshold_eps") cfg.threshold_eps = detail::to_double(value, key);
      else if (key == "out_dir") cfg.out_dir = value;
      else throw ParseError(at() + "unknown key `" + key + "`");
    } else if (section == "network") {
      if (key == "source") {
        if (value == "file") cfg.network.source = NetworkConfig::Source::file;
        else if (value == "watts_strogatz") cfg.network.source = NetworkConfig::Source::watts_strogatz;
        else throw ParseError(at() + "unknown network source `" + value + "`");
      } else if (key == "path") cfg.network.path = resolve(value);
      else if (key == "n") cfg.network.n = static_cast<int>(detail::to_int(value, key));
      else if (key == "k") cfg.network.k = static_cast<int>(detail::to_int(value, key));
      else if (key == "p_rewire") cfg.network.p_rewire = detail::to_double(value, key);
      else if (key == "seed") cfg.network.seed = detail::to_u64(value, key);
      else throw ParseError(at() + "unknown key `network." + key + "`");
    } else if (section == "agents") {
      if (key == "path") cfg.agents_path = resolve(value);
      else throw ParseError(at() + "unknown key `agents." + key + "`");
    } else {  // mpc
      if (key == "L") cfg.mpc.horizon = static_cast<int>(detail::to_int(value, key));
      else if (key == "budget") cfg.mpc.budget = detail::to_double(value, key);
      else if (key == "q") cfg.mpc.q = detail::to_double(value, key);
      else if (key == "r") cfg.mpc.r = detail::to_double(value, key);
      else if (key == "delta") cfg.mpc.delta = detail::to_double(value, key);
      else if (key == "m_equity") cfg.mpc.m_equity = detail::to_double(value, key);
      else if (key == "n_equality") cfg.mpc.n_equality = detail::to_double(value, key);
      else if (key == "solver_tol") cfg.mpc.solver_tol = detail::to_double(value, key);
      else if (key == "max_iter") cfg.mpc.max_iter = static_cast<int>(detail::to_int(value, key));
      else throw ParseError(at() + "unknown key `mpc." + key + "`");
    }
  }
  return cfg;
}

inline void apply_overrides(ExperimentConfig& cfg, const ConfigOverrides& ov) {
  if (ov.base_seed) cfg.base_seed = *ov.base_seed;
  if (ov.n_runs) cfg.n_runs = *ov.n_runs;
  if (ov.scenario) cfg.scenario = *ov.scenario;
  if (ov.policy) cfg.policy = *ov.policy;
  if (ov.out_dir) cfg.out_dir = *ov.out_dir;
}

inline ExperimentConfig load_config(const std::filesystem::path& path,
                                    const ConfigOverrides& ov = {}) {
  ExperimentConfig cfg = parse_config_file(path);
  apply_overrides(cfg, ov);
  cfg.validate();
  return cfg;
}

}  // namespace nudgecast

#endif  // NUDGECAST_CONFIG_HPP_
