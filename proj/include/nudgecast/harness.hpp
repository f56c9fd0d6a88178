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

#ifndef NUDGECAST_HARNESS_HPP_
#define NUDGECAST_HARNESS_HPP_

// Monte Carlo experiment runner: the per-run closed loop (policy ->
// reluctance update -> cascade), seeded run replication, and the
// adoption/policy/dispersion metrics.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Core>

#include "nudgecast/control.hpp"
#include "nudgecast/diffusion.hpp"
#include "nudgecast/errors.hpp"
#include "nudgecast/graph.hpp"
#include "nudgecast/population.hpp"

namespace nudgecast {

enum class PolicyMode { none, one_sided, equity_only, equality_only, fair };

inline PolicyMode parse_policy_mode(const std::string& s) {
  if (s == "none") return PolicyMode::none;
  if (s == "one-sided" || s == "one_sided") return PolicyMode::one_sided;
  if (s == "equity" || s == "equity_only") return PolicyMode::equity_only;
  if (s == "equality" || s == "equality_only") return PolicyMode::equality_only;
  if (s == "fair") return PolicyMode::fair;
  throw ParseError("unknown policy mode `" + s + "` (expected none|one-sided|equity|equality|fair)");
}

inline const char* to_string(PolicyMode m) {
  switch (m) {
    case PolicyMode::none: return "none";
    case PolicyMode::one_sided: return "one-sided";
    case PolicyMode::equity_only: return "equity";
    case PolicyMode::equality_only: return "equality";
    default: return "fair";
  }
}

/// Where the influence network comes from: an edge-list file or the
/// synthetic small-world generator.
struct NetworkConfig {
  enum class Source { file, watts_strogatz };
  Source source = Source::watts_strogatz;
  std::string path;
  int n = 112;
  int k = 6;
  double p_rewire = 0.1;
  std::uint64_t seed = 1;

  bool operator==(const NetworkConfig&) const = default;
};

struct ExperimentConfig {
  NetworkConfig network;
  std::string agents_path;
  Scenario scenario = Scenario::crd;
  PolicyMode policy = PolicyMode::one_sided;
  int horizon = 11;  // T, intervention steps
  int n_runs = 10;
  std::uint64_t base_seed = 1;
  double threshold_eps = kDefaultThresholdEps;
  MpcConfig mpc;
  std::string out_dir = "results";

  void validate() const {
    if (horizon < 1) throw InvalidParameterError("config: T must be >= 1");
    if (n_runs < 1) throw InvalidParameterError("config: n_runs must be >= 1");
    if (!(threshold_eps > 0.0 && threshold_eps < 0.5))
      throw InvalidParameterError("config: threshold_eps must lie in (0, 1/2)");
    if (network.source == NetworkConfig::Source::file) {
      if (network.path.empty()) throw InvalidParameterError("config: network path missing");
    } else {
      if (network.k < 2 || network.k % 2 != 0 || network.n <= network.k)
        throw InvalidParameterError("config: watts-strogatz needs n > k >= 2 with k even");
      if (!(network.p_rewire >= 0.0 && network.p_rewire <= 1.0))
        throw InvalidParameterError("config: p_rewire must lie in [0, 1]");
    }
    if (agents_path.empty()) throw InvalidParameterError("config: agents path missing");
    mpc.validate();
  }

  /// Fairness weights after applying the policy mode's masking.
  MpcConfig effective_mpc() const {
    MpcConfig eff = mpc;
    if (policy == PolicyMode::one_sided) {
      eff.m_equity = 0.0;
      eff.n_equality = 0.0;
    } else if (policy == PolicyMode::equity_only) {
      eff.n_equality = 0.0;
    } else if (policy == PolicyMode::equality_only) {
      eff.m_equity = 0.0;
    }
    return eff;
  }

  std::uint64_t param_seed() const { return rng::derive_seed(base_seed, rng::kTagParams); }

  std::uint64_t run_seed(int run) const {
    return rng::derive_seed(base_seed, rng::kTagRun, static_cast<std::uint64_t>(run));
  }
};

inline SocialNetwork load_network(const NetworkConfig& net) {
  if (net.source == NetworkConfig::Source::file) return load_edge_list(net.path);
  return generate_watts_strogatz(net.n, net.k, net.p_rewire, net.seed);
}

/// One Monte Carlo run's trajectories.
struct RunResult {
  std::vector<double> gamma;  // adoption fraction, t = 0..T
  Eigen::MatrixXd policy;     // n x T
  Eigen::MatrixXd rho;        // n x (T+1)
  Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> adopted;  // n x (T+1)
  std::uint64_t seed = 0;
  int solver_warnings = 0;
};

/// Aggregates over runs plus the per-run records.
struct ExperimentResult {
  ExperimentConfig config;
  std::vector<RunResult> runs;
  std::vector<double> gamma_mean;         // per t
  std::vector<double> gamma_std;          // per t, population std over runs
  std::vector<double> u_bar;              // per t, mean over runs of agent-average policy
  std::vector<double> policy_dispersion;  // per t, mean over runs of cross-agent std of u
  std::vector<double> rho_dispersion;     // per t, mean over runs of cross-non-adopter var of rho
  int median_run = 0;                     // run with median terminal adoption
};

/// One closed-loop run: per step, design the policy, apply it to the
/// reluctances, then advance the cascade with fresh thresholds.
/// Deterministic given (inputs, run_seed).
inline RunResult run_simulation(const SocialNetwork& net, const std::vector<AgentParams>& params,
                                const ExperimentConfig& cfg, std::uint64_t run_seed) {
  const int n = net.n_agents();
  if (static_cast<int>(params.size()) != n)
    throw InvalidParameterError("run: params/network size mismatch");
  const int T = cfg.horizon;
  const MpcConfig mpc_cfg = cfg.effective_mpc();
  const bool use_policy = cfg.policy != PolicyMode::none;

  RunResult run;
  run.seed = run_seed;
  run.gamma.reserve(static_cast<std::size_t>(T) + 1);
  run.policy = Eigen::MatrixXd::Zero(n, T);
  run.rho = Eigen::MatrixXd::Zero(n, T + 1);
  run.adopted.resize(n, T + 1);

  PopulationState state = init_state(params);
  const StepSeeder seeder{run_seed};
  auto record = [&](int t) {
    for (int v = 0; v < n; ++v) {
      run.rho(v, t) = state.rho[static_cast<std::size_t>(v)];
      run.adopted(v, t) = state.x[static_cast<std::size_t>(v)];
    }
  };
  run.gamma.push_back(state.adopter_fraction());
  record(0);

  MpcWarmStart warm;
  for (int t = 0; t < T; ++t) {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
    if (use_policy && state.n_adopters() < n) {
      auto step = mpc_step(state, params, mpc_cfg, &warm);
      u = std::move(step.u);
      if (step.status == QpStatus::max_iter) ++run.solver_warnings;
    }
    for (int v = 0; v < n; ++v) {
      if (state.x[static_cast<std::size_t>(v)]) continue;
      state.rho[static_cast<std::size_t>(v)] = update_reluctance(
          state.rho[static_cast<std::size_t>(v)], params[static_cast<std::size_t>(v)].b, u[v]);
    }
    cascade_step(net, state, params, cfg.threshold_eps, seeder);
    run.policy.col(t) = u;
    run.gamma.push_back(state.adopter_fraction());
    record(t + 1);
  }
  return run;
}

namespace detail {
inline double mean_of(const std::vector<double>& xs) {
  return xs.empty() ? 0.0 : std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

/// Population (ddof = 0) standard deviation.
inline double std_of(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  const double mu = mean_of(xs);
  double acc = 0.0;
  for (double x : xs) acc += (x - mu) * (x - mu);
  return std::sqrt(acc / static_cast<double>(xs.size()));
}

inline int parallel_cap() {
  if (const char* env = std::getenv("NUDGECAST_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) return cap;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}
}  // namespace detail

/// Replicates the run over derived seeds (parallel across runs, capped
/// by NUDGECAST_THREADS) and aggregates. Outputs depend only on
/// (inputs, config); the thread schedule cannot change them.
inline ExperimentResult run_experiment(const SocialNetwork& net,
                                       const std::vector<AgentRecord>& records,
                                       const ExperimentConfig& cfg) {
  cfg.validate();
  if (net.n_agents() != static_cast<int>(records.size()))
    throw InvalidParameterError("experiment: network has " + std::to_string(net.n_agents()) +
                                " agents but records have " + std::to_string(records.size()));
  const auto params = build_population(records, cfg.scenario, cfg.param_seed());

  ExperimentResult result;
  result.config = cfg;
  result.runs.resize(static_cast<std::size_t>(cfg.n_runs));

  const int workers = std::min(detail::parallel_cap(), cfg.n_runs);
  std::atomic<int> next(0);
  std::atomic<bool> failed(false);
  std::string failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= cfg.n_runs || failed.load()) return;
      try {
        result.runs[static_cast<std::size_t>(i)] =
            run_simulation(net, params, cfg, cfg.run_seed(i));
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        failed.store(true);
        if (failure.empty()) failure = "run " + std::to_string(i) + ": " + e.what();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failed.load()) throw Error(failure);

  const int n = net.n_agents();
  const int T = cfg.horizon;
  result.gamma_mean.resize(static_cast<std::size_t>(T) + 1);
  result.gamma_std.resize(static_cast<std::size_t>(T) + 1);
  result.u_bar.resize(static_cast<std::size_t>(T));
  result.policy_dispersion.resize(static_cast<std::size_t>(T));
  result.rho_dispersion.resize(static_cast<std::size_t>(T) + 1);

  std::vector<double> per_run;
  per_run.reserve(result.runs.size());
  for (int t = 0; t <= T; ++t) {
    per_run.clear();
    for (const auto& run : result.runs) per_run.push_back(run.gamma[static_cast<std::size_t>(t)]);
    result.gamma_mean[static_cast<std::size_t>(t)] = detail::mean_of(per_run);
    result.gamma_std[static_cast<std::size_t>(t)] = detail::std_of(per_run);

    per_run.clear();
    for (const auto& run : result.runs) {
      std::vector<double> rho_free;
      for (int v = 0; v < n; ++v)
        if (!run.adopted(v, t)) rho_free.push_back(run.rho(v, t));
      const double mu = detail::mean_of(rho_free);
      double var = 0.0;
      for (double x : rho_free) var += (x - mu) * (x - mu);
      per_run.push_back(rho_free.empty() ? 0.0 : var / static_cast<double>(rho_free.size()));
    }
    result.rho_dispersion[static_cast<std::size_t>(t)] = detail::mean_of(per_run);
  }
  for (int t = 0; t < T; ++t) {
    per_run.clear();
    std::vector<double> spread;
    for (const auto& run : result.runs) {
      per_run.push_back(run.policy.col(t).mean());
      std::vector<double> us(run.policy.col(t).data(), run.policy.col(t).data() + n);
      spread.push_back(detail::std_of(us));
    }
    result.u_bar[static_cast<std::size_t>(t)] = detail::mean_of(per_run);
    result.policy_dispersion[static_cast<std::size_t>(t)] = detail::mean_of(spread);
  }

  // Median terminal adoption picks the run shown in the policy heatmap;
  // ties break toward the lower run index.
  std::vector<int> order(result.runs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double ga = result.runs[static_cast<std::size_t>(a)].gamma.back();
    const double gb = result.runs[static_cast<std::size_t>(b)].gamma.back();
    if (ga != gb) return ga < gb;
    return a < b;
  });
  result.median_run = order[(order.size() - 1) / 2];
  return result;
}

/// Resolves the network and agent sources named in the config, then
/// delegates to the in-memory overload.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const SocialNetwork net = load_network(cfg.network);
  const auto records = load_agent_records(cfg.agents_path);
  return run_experiment(net, records, cfg);
}

}  // namespace nudgecast

#endif  // NUDGECAST_HARNESS_HPP_
