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

#ifndef NUDGECAST_CONTROL_HPP_
#define NUDGECAST_CONTROL_HPP_

// Fairness-aware receding-horizon policy design.
//
// Each non-adopter's reluctance follows the scalar affine dynamics
// rho(k+1) = rho(k) + b u(k), so states are eliminated exactly and the
// per-step design problem condenses to a box- and budget-constrained QP
// over the stacked inputs. Terminal weights come from the scalar
// discrete Riccati equation of those dynamics; fairness enters as
// quadratic penalties on the spread of predicted reluctances (equity)
// and of allocated inputs (equality) around their means.

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "nudgecast/errors.hpp"
#include "nudgecast/population.hpp"
#include "nudgecast/qp.hpp"

namespace nudgecast {

/// Tuning knobs of the receding-horizon designer. Weight matrices are
/// scalar multiples of identity, exposed as scalars.
struct MpcConfig {
  int horizon = 10;         // L, prediction steps
  double budget = 50.0;     // per-step cap on the summed policy
  double q = 1.0;           // state weight
  double r = 1.0;           // input weight
  double delta = 2.0;       // terminal scaling, >= 1
  double m_equity = 10.0;   // weight on reluctance spread
  double n_equality = 10.0; // weight on input spread
  double solver_tol = 1e-8;
  int max_iter = 50000;

  bool operator==(const MpcConfig&) const = default;

  void validate() const {
    if (horizon < 1) throw InvalidParameterError("mpc: horizon must be >= 1");
    if (!(budget > 0.0)) throw InvalidParameterError("mpc: budget must be positive");
    if (!(q > 0.0)) throw InvalidParameterError("mpc: state weight must be positive");
    if (!(r > 0.0)) throw InvalidParameterError("mpc: input weight must be positive");
    if (!(delta >= 1.0)) throw InvalidParameterError("mpc: terminal scaling must be >= 1");
    if (!(m_equity >= 0.0)) throw InvalidParameterError("mpc: equity weight must be >= 0");
    if (!(n_equality >= 0.0)) throw InvalidParameterError("mpc: equality weight must be >= 0");
    if (!(solver_tol > 0.0)) throw InvalidParameterError("mpc: solver tolerance must be positive");
    if (max_iter < 1) throw InvalidParameterError("mpc: iteration cap must be >= 1");
  }
};

/// Receptivities this close to zero are capped before the Riccati solve;
/// the uncontrollable limit b -> 0 has no finite solution.
inline constexpr double kDareReceptivityFloor = 1e-3;

/// Residual of the scalar discrete Riccati equation with unit state
/// transition and input gain b.
inline double dare_residual(double p, double q, double r, double b) {
  return std::abs(p * p * b * b / (r + b * b * p) - q);
}

/// Unique positive root of the scalar discrete Riccati equation for the
/// dynamics rho(k+1) = rho(k) + b u(k):
///   p = [q b^2 + sqrt(q^2 b^4 + 4 q r b^2)] / (2 b^2).
/// Receptivities in (-floor, 0] are evaluated at -floor.
inline double solve_scalar_dare(double q, double r, double b) {
  if (!(q > 0.0)) throw InvalidParameterError("dare: state weight must be positive");
  if (!(r > 0.0)) throw InvalidParameterError("dare: input weight must be positive");
  if (!(b >= -1.0 && b <= 0.0)) throw OutOfRangeError("dare: receptivity outside [-1, 0]");
  const double be = std::min(b, -kDareReceptivityFloor);
  const double b2 = be * be;
  return (q * b2 + std::sqrt(q * q * b2 * b2 + 4.0 * q * r * b2)) / (2.0 * b2);
}

/// Condenses the L-step design problem over `n_free` non-adopters into a
/// QP on the stacked inputs (step-major).
///
/// Cost, with rho(k) = rho_now + diag(b) * sum_{j<k} u(j) and the
/// centering operator C = I - 11'/n_free:
///   sum_{k=0}^{L-1} [ q|rho(k)|^2 + r|u(k)|^2 ]  +  delta |rho(L)|^2_P
///   + m_equity sum_{k=1}^{L} |C rho(k)|^2
///   + n_equality sum_{k=0}^{L-1} |C u(k)|^2,
/// subject to 0 <= u <= 1 and each step's input sum <= budget.
inline QpProblem assemble_qp(const Eigen::VectorXd& rho_now, const Eigen::VectorXd& b_free,
                             const MpcConfig& cfg, const Eigen::VectorXd& p_diag) {
  cfg.validate();
  const int n = static_cast<int>(rho_now.size());
  if (n < 1) throw InvalidParameterError("qp assembly: empty non-adopter set");
  if (b_free.size() != n || p_diag.size() != n)
    throw InvalidParameterError("qp assembly: inconsistent array lengths");
  const int L = cfg.horizon;
  const double nn = static_cast<double>(n);

  QpProblem p;
  p.n_free = n;
  p.horizon = L;
  p.hessian = Eigen::MatrixXd::Zero(n * L, n * L);
  p.linear = Eigen::VectorXd::Zero(n * L);
  p.lower = Eigen::VectorXd::Zero(n * L);
  p.upper = Eigen::VectorXd::Ones(n * L);
  p.budget = Eigen::VectorXd::Constant(L, cfg.budget);

  const Eigen::VectorXd b2 = b_free.cwiseProduct(b_free);
  const double rho_mean = rho_now.mean();
  const Eigen::VectorXd rho_centered = rho_now.array() - rho_mean;

  // Cross-agent coupling appears only through the centering operator.
  Eigen::MatrixXd equity_step;   // diag(b) C diag(b), scaled by m
  Eigen::MatrixXd equality_step; // C, scaled by n_equality
  if (cfg.m_equity > 0.0)
    equity_step = cfg.m_equity *
                  (Eigen::MatrixXd(b2.asDiagonal()) - (b_free * b_free.transpose()) / nn);
  if (cfg.n_equality > 0.0)
    equality_step = cfg.n_equality *
                    (Eigen::MatrixXd::Identity(n, n) -
                     Eigen::MatrixXd::Constant(n, n, 1.0 / nn));

  for (int j = 0; j < L; ++j) {
    for (int jp = 0; jp < L; ++jp) {
      auto block = p.hessian.block(j * n, jp * n, n, n);
      const int m = std::max(j, jp);
      const int stage_count = std::max(0, (L - 1) - m);  // k in [1, L-1], k > max(j, jp)
      const int equity_count = L - m;                    // k in [1, L],   k > max(j, jp)
      // Per-agent terms: stage state cost and terminal cost.
      block.diagonal() += static_cast<double>(stage_count) * cfg.q * b2 +
                          cfg.delta * p_diag.cwiseProduct(b2);
      if (cfg.m_equity > 0.0) block += static_cast<double>(equity_count) * equity_step;
      if (j == jp) {
        block.diagonal().array() += cfg.r;
        if (cfg.n_equality > 0.0) block += equality_step;
      }
    }
    // Gradient at u = 0.
    const int stage_count = (L - 1) - j;
    const int equity_count = L - j;
    p.linear.segment(j * n, n) =
        2.0 * cfg.q * static_cast<double>(stage_count) * b_free.cwiseProduct(rho_now) +
        2.0 * cfg.delta * p_diag.cwiseProduct(b_free).cwiseProduct(rho_now) +
        2.0 * cfg.m_equity * static_cast<double>(equity_count) *
            b_free.cwiseProduct(rho_centered);
  }

  p.constant = static_cast<double>(L) * cfg.q * rho_now.squaredNorm() +
               cfg.delta * p_diag.dot(rho_now.cwiseProduct(rho_now)) +
               cfg.m_equity * static_cast<double>(L) * rho_centered.squaredNorm();
  return p;
}

/// Shifted previous solution used to warm-start the next step's solve.
struct MpcWarmStart {
  std::vector<int> agents;      // free agents of the stored solution
  Eigen::VectorXd solution;     // step-major over those agents
  int horizon = 0;
};

struct MpcStepResult {
  Eigen::VectorXd u;  // over all agents; exactly zero on adopters
  QpStatus status = QpStatus::optimal;
  int iterations = 0;
};

/// One receding-horizon step: solve the condensed QP for the current
/// non-adopters and return the first-step policy over all agents.
/// Returns a zero vector when everyone has adopted. A max_iter solver
/// exit is reported in the status; the best iterate is still applied.
inline MpcStepResult mpc_step(const PopulationState& state,
                              const std::vector<AgentParams>& params, const MpcConfig& cfg,
                              MpcWarmStart* warm = nullptr) {
  cfg.validate();
  const int n = state.n_agents();
  MpcStepResult result;
  result.u = Eigen::VectorXd::Zero(n);

  std::vector<int> free_agents;
  free_agents.reserve(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v)
    if (!state.x[static_cast<std::size_t>(v)]) free_agents.push_back(v);
  if (free_agents.empty()) return result;

  const int nf = static_cast<int>(free_agents.size());
  Eigen::VectorXd rho_now(nf), b_free(nf), p_diag(nf);
  for (int i = 0; i < nf; ++i) {
    const auto& a = params[static_cast<std::size_t>(free_agents[static_cast<std::size_t>(i)])];
    rho_now[i] = state.rho[static_cast<std::size_t>(free_agents[static_cast<std::size_t>(i)])];
    b_free[i] = a.b;
    p_diag[i] = solve_scalar_dare(cfg.q, cfg.r, a.b);
  }

  const QpProblem problem = assemble_qp(rho_now, b_free, cfg, p_diag);

  std::optional<Eigen::VectorXd> guess;
  if (warm && warm->horizon == cfg.horizon && warm->solution.size() > 0) {
    std::unordered_map<int, int> prev_pos;
    prev_pos.reserve(warm->agents.size());
    for (int i = 0; i < static_cast<int>(warm->agents.size()); ++i)
      prev_pos.emplace(warm->agents[static_cast<std::size_t>(i)], i);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(problem.dim());
    const int n_prev = static_cast<int>(warm->agents.size());
    bool any = false;
    for (int i = 0; i < nf; ++i) {
      const auto it = prev_pos.find(free_agents[static_cast<std::size_t>(i)]);
      if (it == prev_pos.end()) continue;
      any = true;
      for (int k = 0; k < cfg.horizon; ++k) {
        const int k_prev = std::min(k + 1, cfg.horizon - 1);
        g[k * nf + i] = warm->solution[k_prev * n_prev + it->second];
      }
    }
    if (any) guess = std::move(g);
  }

  const QpSolution sol = solve_qp(problem, cfg.solver_tol, cfg.max_iter, guess);
  if (sol.status == QpStatus::infeasible)
    throw InvalidParameterError("mpc: solver reported an infeasible problem");
  for (int i = 0; i < nf; ++i)
    result.u[free_agents[static_cast<std::size_t>(i)]] = sol.u[i];
  result.status = sol.status;
  result.iterations = sol.iterations;

  if (warm) {
    warm->agents = free_agents;
    warm->solution = sol.u;
    warm->horizon = cfg.horizon;
  }
  return result;
}

}  // namespace nudgecast

#endif  // NUDGECAST_CONTROL_HPP_
