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

#ifndef NUDGECAST_GRAPH_HPP_
#define NUDGECAST_GRAPH_HPP_

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "nudgecast/errors.hpp"
#include "nudgecast/random.hpp"

namespace nudgecast {

/// Undirected social influence network over N agents.
///
/// Immutable after construction and safe to share across threads.
/// Construction enforces: no self-loops, mutual adjacency, minimum
/// degree 1 (fractional influence needs a nonempty neighborhood) and
/// connectivity.
class SocialNetwork {
 public:
  /// Builds a network from an undirected edge set. Duplicate edges are
  /// deduplicated; orientation of each pair is irrelevant.
  static SocialNetwork from_edges(int n_agents, const std::vector<std::pair<int, int>>& edges) {
    if (n_agents <= 0) throw InvalidParameterError("network needs at least one agent");
    std::vector<std::set<int>> adj(static_cast<std::size_t>(n_agents));
    for (const auto& [v, w] : edges) {
      if (v < 0 || v >= n_agents || w < 0 || w >= n_agents)
        throw OutOfRangeError("edge endpoint " + std::to_string(v) + "-" + std::to_string(w) +
                              " outside [0, " + std::to_string(n_agents) + ")");
      if (v == w) throw SelfLoopError("self-loop at agent " + std::to_string(v));
      adj[static_cast<std::size_t>(v)].insert(w);
      adj[static_cast<std::size_t>(w)].insert(v);
    }
    SocialNetwork net;
    net.adj_.reserve(adj.size());
    for (int v = 0; v < n_agents; ++v) {
      if (adj[static_cast<std::size_t>(v)].empty())
        throw IsolatedAgentError("agent " + std::to_string(v) + " has no neighbors");
      net.adj_.emplace_back(adj[static_cast<std::size_t>(v)].begin(),
                            adj[static_cast<std::size_t>(v)].end());
    }
    if (!net.is_connected()) throw DisconnectedError("influence graph is not connected");
    return net;
  }

  int n_agents() const { return static_cast<int>(adj_.size()); }

  /// Sorted, nonempty neighbor list of agent v.
  const std::vector<int>& neighbors(int v) const {
    if (v < 0 || v >= n_agents())
      throw OutOfRangeError("agent index " + std::to_string(v) + " outside [0, " +
                            std::to_string(n_agents()) + ")");
    return adj_[static_cast<std::size_t>(v)];
  }

  int degree(int v) const { return static_cast<int>(neighbors(v).size()); }

  std::size_t n_edges() const {
    std::size_t total = 0;
    for (const auto& nb : adj_) total += nb.size();
    return total / 2;
  }

 private:
  SocialNetwork() = default;

  bool is_connected() const {
    const int n = n_agents();
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int w : adj_[static_cast<std::size_t>(v)]) {
        if (!seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = 1;
          ++reached;
          stack.push_back(w);
        }
      }
    }
    return reached == n;
  }

  std::vector<std::vector<int>> adj_;
};

/// Loads a network from an edge-list text file.
///
/// Format: optional `#` comment lines; first significant line `n <N>`;
/// then one `v w` pair per line (0-based, whitespace-separated).
inline SocialNetwork load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open edge list: " + path.string());
  std::string line;
  int n = -1;
  std::vector<std::pair<int, int>> edges;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    if (n < 0) {
      std::string tag;
      if (!(ls >> tag >> n) || tag != "n" || n <= 0)
        throw ParseError(path.string() + ":" + std::to_string(lineno) +
                         ": expected header `n <N>`");
      continue;
    }
    int v = 0, w = 0;
    if (!(ls >> v >> w))
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": expected `v w`");
    std::string extra;
    if (ls >> extra)
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": trailing tokens");
    edges.emplace_back(v, w);
  }
  if (n < 0) throw ParseError(path.string() + ": missing `n <N>` header");
  return SocialNetwork::from_edges(n, edges);
}

/// Generates a connected Watts-Strogatz small-world network.
///
/// Ring of n agents, each tied to its k nearest neighbors, then each
/// ring edge rewired with probability p_rewire. Regenerates with a
/// derived seed until connected (bounded retries). Bit-reproducible for
/// equal (n, k, p_rewire, seed).
inline SocialNetwork generate_watts_strogatz(int n, int k, double p_rewire, std::uint64_t seed) {
  if (k < 2 || k % 2 != 0 || n <= k)
    throw InvalidParameterError("watts-strogatz needs n > k >= 2 with k even");
  if (!(p_rewire >= 0.0 && p_rewire <= 1.0))
    throw InvalidParameterError("rewire probability must lie in [0, 1]");

  constexpr int kMaxAttempts = 64;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    auto eng = rng::engine_at(rng::derive_seed(seed, 0x5753u, static_cast<std::uint64_t>(attempt)));
    std::vector<std::set<int>> adj(static_cast<std::size_t>(n));
    auto has_edge = [&](int v, int w) { return adj[static_cast<std::size_t>(v)].count(w) > 0; };
    auto add_edge = [&](int v, int w) {
      adj[static_cast<std::size_t>(v)].insert(w);
      adj[static_cast<std::size_t>(w)].insert(v);
    };
    auto drop_edge = [&](int v, int w) {
      adj[static_cast<std::size_t>(v)].erase(w);
      adj[static_cast<std::size_t>(w)].erase(v);
    };
    for (int j = 1; j <= k / 2; ++j)
      for (int v = 0; v < n; ++v) add_edge(v, (v + j) % n);
    for (int j = 1; j <= k / 2; ++j) {
      for (int v = 0; v < n; ++v) {
        if (rng::uniform01(eng) >= p_rewire) continue;
        if (static_cast<int>(adj[static_cast<std::size_t>(v)].size()) >= n - 1) continue;
        int w = 0;
        do {
          w = static_cast<int>(rng::uniform_below(eng, static_cast<std::uint64_t>(n)));
        } while (w == v || has_edge(v, w));
        const int w_old = (v + j) % n;
        if (has_edge(v, w_old)) drop_edge(v, w_old);
        add_edge(v, w);
      }
    }
    std::vector<std::pair<int, int>> edges;
    for (int v = 0; v < n; ++v)
      for (int w : adj[static_cast<std::size_t>(v)])
        if (v < w) edges.emplace_back(v, w);
    try {
      return SocialNetwork::from_edges(n, edges);
    } catch (const DisconnectedError&) {
      continue;  // retry with the next derived seed
    }
  }
  throw ConnectivityRetryError("no connected watts-strogatz instance within retry bound");
}

}  // namespace nudgecast

#endif  // NUDGECAST_GRAPH_HPP_
