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

#ifndef NUDGECAST_ORACLE_HPP_
#define NUDGECAST_ORACLE_HPP_

// Exact adoption-rate oracle for small networks: propagates the full
// distribution over adopter sets of the cascade's 2^n-state Markov
// chain, with reluctances evolving deterministically under an optional
// fixed open-loop policy schedule.

#include <bit>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "nudgecast/diffusion.hpp"
#include "nudgecast/errors.hpp"
#include "nudgecast/graph.hpp"
#include "nudgecast/population.hpp"

namespace nudgecast {

inline constexpr int kOracleMaxAgents = 12;

/// Exact expected adoption fraction for t = 0..T.
///
/// From adopter set S, each non-adopter independently adopts with the
/// incomplete-beta probability of its influence meeting a fresh
/// threshold; the schedule (n x T, defaults to zero) shifts reluctances
/// before each transition, mirroring the simulation's step order.
inline std::vector<double> exact_markov_oracle(
    const SocialNetwork& net, const std::vector<AgentParams>& params, int horizon,
    double eps = kDefaultThresholdEps,
    const std::optional<Eigen::MatrixXd>& schedule = std::nullopt) {
  const int n = net.n_agents();
  if (n > kOracleMaxAgents)
    throw OutOfRangeError("exact oracle supports at most " + std::to_string(kOracleMaxAgents) +
                          " agents, got " + std::to_string(n));
  if (horizon < 0) throw InvalidParameterError("oracle horizon must be >= 0");
  if (static_cast<int>(params.size()) != n)
    throw InvalidParameterError("oracle: params/network size mismatch");
  if (schedule && (schedule->rows() != n || schedule->cols() < horizon))
    throw InvalidParameterError("oracle: schedule must be n x T");

  std::uint32_t seed_mask = 0;
  std::vector<double> rho(static_cast<std::size_t>(n));
  bool any_seed = false;
  for (int v = 0; v < n; ++v) {
    rho[static_cast<std::size_t>(v)] = params[static_cast<std::size_t>(v)].rho0;
    if (params[static_cast<std::size_t>(v)].is_seed) {
      seed_mask |= 1u << v;
      any_seed = true;
    }
  }
  if (!any_seed) throw EmptySeedSetError("seed set is empty");

  const std::uint32_t full = n == 32 ? ~0u : (1u << n) - 1u;
  std::vector<double> dist(static_cast<std::size_t>(full) + 1, 0.0);
  dist[seed_mask] = 1.0;

  auto expected_fraction = [&](const std::vector<double>& d) {
    double acc = 0.0;
    for (std::uint32_t s = 0; s <= full; ++s)
      if (d[s] > 0.0) acc += d[s] * static_cast<double>(std::popcount(s));
    return acc / static_cast<double>(n);
  };

  std::vector<double> gamma;
  gamma.reserve(static_cast<std::size_t>(horizon) + 1);
  gamma.push_back(expected_fraction(dist));

  std::vector<double> next(dist.size());
  std::vector<double> p_adopt(static_cast<std::size_t>(n));
  for (int t = 0; t < horizon; ++t) {
    if (schedule)
      for (int v = 0; v < n; ++v)
        rho[static_cast<std::size_t>(v)] = update_reluctance(
            rho[static_cast<std::size_t>(v)], params[static_cast<std::size_t>(v)].b,
            (*schedule)(v, t));

    std::fill(next.begin(), next.end(), 0.0);
    for (std::uint32_t s = 0; s <= full; ++s) {
      const double ps = dist[s];
      if (ps == 0.0) continue;
      const std::uint32_t free_mask = full & ~s;
      if (free_mask == 0) {
        next[s] += ps;
        continue;
      }
      for (int v = 0; v < n; ++v) {
        if (!(free_mask & (1u << v))) continue;
        double influence = 0.0;
        for (int w : net.neighbors(v))
          if (s & (1u << w)) influence += params[static_cast<std::size_t>(w)].gamma;
        influence /= static_cast<double>(net.degree(v));
        p_adopt[static_cast<std::size_t>(v)] =
            adoption_probability(influence, rho[static_cast<std::size_t>(v)], eps);
      }
      // All subsets of the free agents, including the empty one.
      std::uint32_t sub = free_mask;
      for (;;) {
        double prob = ps;
        for (int v = 0; v < n; ++v) {
          if (!(free_mask & (1u << v))) continue;
          const double pv = p_adopt[static_cast<std::size_t>(v)];
          prob *= (sub & (1u << v)) ? pv : 1.0 - pv;
        }
        next[s | sub] += prob;
        if (sub == 0) break;
        sub = (sub - 1) & free_mask;
      }
    }
    dist.swap(next);
    gamma.push_back(expected_fraction(dist));
  }
  return gamma;
}

}  // namespace nudgecast

#endif  // NUDGECAST_ORACLE_HPP_
