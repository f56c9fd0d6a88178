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

#ifndef NUDGECAST_POPULATION_HPP_
#define NUDGECAST_POPULATION_HPP_

// Per-agent parameters and state: reluctance, receptivity, reliability,
// credibility (with prejudice-based halving), the seed set, and the four
// deficit scenarios.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "nudgecast/errors.hpp"
#include "nudgecast/random.hpp"

namespace nudgecast {

enum class EducationLevel { low, medium, high };

inline EducationLevel parse_education(const std::string& s) {
  if (s == "low") return EducationLevel::low;
  if (s == "medium") return EducationLevel::medium;
  if (s == "high") return EducationLevel::high;
  throw ParseError("unknown education level `" + s + "`");
}

inline const char* to_string(EducationLevel e) {
  switch (e) {
    case EducationLevel::low: return "low";
    case EducationLevel::medium: return "medium";
    default: return "high";
  }
}

/// Membership in groups subject to social prejudice.
struct GroupFlags {
  bool gender_discriminated = false;
  bool age_discriminated = false;
  bool income_discriminated = false;

  int count() const {
    return static_cast<int>(gender_discriminated) + static_cast<int>(age_discriminated) +
           static_cast<int>(income_discriminated);
  }
};

/// Immutable per-agent parameters.
///
/// rho0 in [0,1] is the initial barrier to adoption; b in [-1,0]
/// converts policy effort into reluctance reduction; zeta in [0,1] is
/// the agent's actual competence weight; gamma in [0, zeta] is the
/// competence its neighbors perceive.
struct AgentParams {
  double rho0 = 0.0;
  double b = -1.0;
  double zeta = 0.0;
  double gamma = 0.0;
  EducationLevel education = EducationLevel::medium;
  GroupFlags flags;
  bool is_seed = false;

  double credibility_deficit() const { return zeta - gamma; }
};

/// Mutable per-run state: adoption bits and current reluctances.
struct PopulationState {
  std::vector<std::uint8_t> x;
  std::vector<double> rho;
  int t = 0;

  int n_agents() const { return static_cast<int>(x.size()); }

  int n_adopters() const {
    int total = 0;
    for (auto bit : x) total += bit;
    return total;
  }

  double adopter_fraction() const {
    return static_cast<double>(n_adopters()) / static_cast<double>(n_agents());
  }
};

/// Deficit scenarios: no deficit, credibility deficit, receptivity
/// deficit, and both combined.
enum class Scenario { nd, cd, rd, crd };

inline Scenario parse_scenario(const std::string& s) {
  if (s == "nd") return Scenario::nd;
  if (s == "cd") return Scenario::cd;
  if (s == "rd") return Scenario::rd;
  if (s == "crd") return Scenario::crd;
  throw ParseError("unknown scenario `" + s + "` (expected nd|cd|rd|crd)");
}

inline const char* to_string(Scenario s) {
  switch (s) {
    case Scenario::nd: return "nd";
    case Scenario::cd: return "cd";
    case Scenario::rd: return "rd";
    default: return "crd";
  }
}

/// One row of the agent ingestion CSV.
struct AgentRecord {
  int id = 0;
  double rho0 = 0.0;
  EducationLevel education = EducationLevel::medium;
  GroupFlags flags;
  bool is_seed = false;
};

namespace detail {
inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ls(line);
  while (std::getline(ls, field, ',')) {
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : field.substr(b, e - b + 1));
  }
  return out;
}

inline bool parse_flag(const std::string& s, const std::string& what) {
  if (s == "0") return false;
  if (s == "1") return true;
  throw ParseError(what + " must be 0 or 1, got `" + s + "`");
}
}  // namespace detail

/// Reads agent records from a CSV with header
/// `id,rho0,education,gender_flag,age_flag,income_flag,is_seed`.
/// Rows must carry sequential ids starting at 0.
inline std::vector<AgentRecord> load_agent_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open agent records: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.string() + ": empty file");
  static const std::string kHeader = "id,rho0,education,gender_flag,age_flag,income_flag,is_seed";
  {
    auto cols = detail::split_csv_line(line);
    auto want = detail::split_csv_line(kHeader);
    if (cols != want) throw ParseError(path.string() + ": expected header `" + kHeader + "`");
  }
  std::vector<AgentRecord> records;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto cols = detail::split_csv_line(line);
    if (cols.size() != 7)
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": expected 7 fields");
    AgentRecord rec;
    try {
      rec.id = std::stoi(cols[0]);
      rec.rho0 = std::stod(cols[1]);
    } catch (const std::exception&) {
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": bad numeric field");
    }
    rec.education = parse_education(cols[2]);
    rec.flags.gender_discriminated = detail::parse_flag(cols[3], "gender_flag");
    rec.flags.age_discriminated = detail::parse_flag(cols[4], "age_flag");
    rec.flags.income_discriminated = detail::parse_flag(cols[5], "income_flag");
    rec.is_seed = detail::parse_flag(cols[6], "is_seed");
    if (rec.id != static_cast<int>(records.size()))
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": ids must be sequential");
    if (!(rec.rho0 >= 0.0 && rec.rho0 <= 1.0))
      throw OutOfRangeError(path.string() + ":" + std::to_string(lineno) +
                            ": rho0 outside [0, 1]");
    records.push_back(rec);
  }
  return records;
}

/// Draws a reliability from the uniform band matching the agent's
/// education level: [0.7,1] high, [0.4,0.7] medium, [0,0.4] low.
template <class Urbg>
double sample_reliability(EducationLevel education, Urbg& rng) {
  double lo = 0.0, hi = 0.4;
  if (education == EducationLevel::medium) {
    lo = 0.4;
    hi = 0.7;
  } else if (education == EducationLevel::high) {
    lo = 0.7;
    hi = 1.0;
  }
  return lo + (hi - lo) * rng::uniform01(rng);
}

/// Credibility after prejudice: reliability halved once per
/// discriminated-group membership.
inline double apply_credibility_halving(double zeta, GroupFlags flags) {
  if (!(zeta >= 0.0 && zeta <= 1.0)) throw OutOfRangeError("reliability outside [0, 1]");
  double gamma = zeta;
  for (int i = 0; i < flags.count(); ++i) gamma *= 0.5;
  return gamma;
}

/// Materializes agent parameters for a deficit scenario.
///
/// Reliabilities are drawn per record in all scenarios; receptivities
/// are drawn only in rd/crd. The two draws use separate substreams of
/// `param_seed`, so populations are paired across scenarios for a fixed
/// seed: nd/cd/rd/crd share zetas, and rd/crd share receptivities.
inline std::vector<AgentParams> build_population(const std::vector<AgentRecord>& records,
                                                 Scenario scenario, std::uint64_t param_seed) {
  auto zeta_eng = rng::engine_at(rng::derive_seed(param_seed, rng::kTagReliability));
  auto b_eng = rng::engine_at(rng::derive_seed(param_seed, rng::kTagReceptivity));
  const bool credibility_deficit = scenario == Scenario::cd || scenario == Scenario::crd;
  const bool receptivity_deficit = scenario == Scenario::rd || scenario == Scenario::crd;

  std::vector<AgentParams> params;
  params.reserve(records.size());
  for (const auto& rec : records) {
    if (!(rec.rho0 >= 0.0 && rec.rho0 <= 1.0))
      throw OutOfRangeError("agent " + std::to_string(rec.id) + ": rho0 outside [0, 1]");
    AgentParams p;
    p.rho0 = rec.rho0;
    p.education = rec.education;
    p.flags = rec.flags;
    p.is_seed = rec.is_seed;
    p.zeta = sample_reliability(rec.education, zeta_eng);
    p.gamma = credibility_deficit ? apply_credibility_halving(p.zeta, rec.flags) : p.zeta;
    p.b = receptivity_deficit ? -rng::uniform01(b_eng) : -1.0;
    params.push_back(p);
  }
  return params;
}

/// Initial state: adoption bit set exactly on the seed set, reluctances
/// at their initial values, step index zero.
inline PopulationState init_state(const std::vector<AgentParams>& params) {
  PopulationState state;
  state.x.reserve(params.size());
  state.rho.reserve(params.size());
  bool any_seed = false;
  for (const auto& p : params) {
    state.x.push_back(p.is_seed ? 1 : 0);
    state.rho.push_back(p.rho0);
    any_seed = any_seed || p.is_seed;
  }
  if (!any_seed) throw EmptySeedSetError("seed set is empty");
  return state;
}

}  // namespace nudgecast

#endif  // NUDGECAST_POPULATION_HPP_
