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

#ifndef NUDGECAST_TESTS_FIXTURES_HPP_
#define NUDGECAST_TESTS_FIXTURES_HPP_

#include <utility>
#include <vector>

#include "nudgecast/graph.hpp"
#include "nudgecast/population.hpp"
#include "nudgecast/random.hpp"

namespace fixtures {

inline nudgecast::SocialNetwork ring(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int v = 0; v < n; ++v) edges.emplace_back(v, (v + 1) % n);
  return nudgecast::SocialNetwork::from_edges(n, edges);
}

inline nudgecast::SocialNetwork path(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
  return nudgecast::SocialNetwork::from_edges(n, edges);
}

/// Star with the center at index 0 and `leaves` leaves.
inline nudgecast::SocialNetwork star(int leaves) {
  std::vector<std::pair<int, int>> edges;
  for (int v = 1; v <= leaves; ++v) edges.emplace_back(0, v);
  return nudgecast::SocialNetwork::from_edges(leaves + 1, edges);
}

/// Survey-like agent records: mixed education, moderately reluctant
/// population, scattered initial adopters. Deterministic in (n, seed).
inline std::vector<nudgecast::AgentRecord> synthetic_records(int n, std::uint64_t seed,
                                                             int n_seeds = 3) {
  auto eng = nudgecast::rng::engine_at(nudgecast::rng::derive_seed(seed, 0xA6E275u));
  std::vector<nudgecast::AgentRecord> records;
  records.reserve(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    nudgecast::AgentRecord rec;
    rec.id = v;
    rec.rho0 = 0.45 + 0.5 * nudgecast::rng::uniform01(eng);
    const double e = nudgecast::rng::uniform01(eng);
    rec.education = e < 1.0 / 3.0   ? nudgecast::EducationLevel::low
                    : e < 2.0 / 3.0 ? nudgecast::EducationLevel::medium
                                    : nudgecast::EducationLevel::high;
    rec.flags.gender_discriminated = nudgecast::rng::uniform01(eng) < 0.45;
    rec.flags.age_discriminated = nudgecast::rng::uniform01(eng) < 0.35;
    rec.flags.income_discriminated = nudgecast::rng::uniform01(eng) < 0.35;
    rec.is_seed = false;
    records.push_back(rec);
  }
  for (int s = 0; s < n_seeds; ++s) {
    const int idx = static_cast<int>((static_cast<double>(s) + 0.5) / n_seeds * n);
    records[static_cast<std::size_t>(idx)].is_seed = true;
    records[static_cast<std::size_t>(idx)].rho0 = 0.0;
  }
  return records;
}

}  // namespace fixtures

#endif  // NUDGECAST_TESTS_FIXTURES_HPP_
