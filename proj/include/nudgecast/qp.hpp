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

#ifndef NUDGECAST_QP_HPP_
#define NUDGECAST_QP_HPP_

// Box- and budget-constrained convex quadratic programs.
//
//   minimize   u' H u + c' u + k
//   subject to lower <= u <= upper,
//              sum of each step's variables <= that step's budget.
//
// Variables are step-major: all agents at step 0, then step 1, and so
// on. The solver is an accelerated projected-gradient method; the
// feasible set factors per step, and projection onto one step's
// box-plus-budget set is computed exactly by a breakpoint sweep.
// Solutions are certified by an independent KKT re-check that uses only
// the problem data and the returned primal/dual pair.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "nudgecast/errors.hpp"

namespace nudgecast {

enum class QpStatus { optimal, max_iter, infeasible };

inline const char* to_string(QpStatus s) {
  switch (s) {
    case QpStatus::optimal: return "optimal";
    case QpStatus::max_iter: return "max_iter";
    default: return "infeasible";
  }
}

/// Condensed QP over the free (non-adopter) policies of L steps.
struct QpProblem {
  Eigen::MatrixXd hessian;  // quadratic coefficient matrix (objective u'Hu + ...)
  Eigen::VectorXd linear;   // gradient of the objective at u = 0
  double constant = 0.0;    // objective value at u = 0
  Eigen::VectorXd lower;    // per-variable box, 0 in the MPC use
  Eigen::VectorXd upper;    // per-variable box, 1 in the MPC use
  Eigen::VectorXd budget;   // per-step cap on the step's variable sum
  int n_free = 0;           // variables per step
  int horizon = 0;          // number of steps

  int dim() const { return n_free * horizon; }

  double objective(const Eigen::VectorXd& u) const {
    return u.dot(hessian * u) + linear.dot(u) + constant;
  }

  Eigen::VectorXd gradient(const Eigen::VectorXd& u) const {
    return 2.0 * (hessian * u) + linear;
  }

  void validate() const {
    if (n_free < 1 || horizon < 1) throw InvalidParameterError("qp: empty decision set");
    const int d = dim();
    if (hessian.rows() != d || hessian.cols() != d || linear.size() != d ||
        lower.size() != d || upper.size() != d || budget.size() != horizon)
      throw InvalidParameterError("qp: inconsistent dimensions");
    const double asym = (hessian - hessian.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12) throw InvalidParameterError("qp: hessian asymmetry " + std::to_string(asym));
    for (int i = 0; i < d; ++i)
      if (!(lower[i] <= upper[i])) throw InvalidParameterError("qp: crossed bounds");
  }
};

struct KktResiduals {
  double stationarity = 0.0;
  double primal = 0.0;
  double complementarity = 0.0;

  bool within(double tol) const {
    return stationarity <= tol && primal <= tol && complementarity <= tol;
  }
};

struct QpSolution {
  Eigen::VectorXd u;
  double objective = 0.0;
  Eigen::VectorXd budget_dual;  // one multiplier per step, >= 0
  double kkt_stationarity = 0.0;
  double kkt_primal = 0.0;
  double kkt_complementarity = 0.0;
  int iterations = 0;
  QpStatus status = QpStatus::optimal;
};

/// Exact Euclidean projection of `y` onto
/// {u : lo <= u <= hi, sum(u) <= cap}. Returns the nonnegative shift
/// tau such that the projection is clamp(y - tau, lo, hi).
inline double project_box_budget(const Eigen::VectorXd& y, const Eigen::VectorXd& lo,
                                 const Eigen::VectorXd& hi, double cap, Eigen::VectorXd& out) {
  const int n = static_cast<int>(y.size());
  out = y.cwiseMax(lo).cwiseMin(hi);
  if (out.sum() <= cap) return 0.0;
  if (lo.sum() > cap)
    throw InvalidParameterError("projection target is empty: sum of lower bounds exceeds cap");

  // As tau grows from -inf, coordinate i contributes hi_i until
  // tau = y_i - hi_i, then y_i - tau, then lo_i from tau = y_i - lo_i.
  // Sweep the breakpoints and solve the active linear segment for
  // sum = cap.
  struct Event {
    double tau;
    int idx;
    bool enters_linear;  // true: hi -> linear; false: linear -> lo
  };
  std::vector<Event> events;
  events.reserve(static_cast<std::size_t>(2 * n));
  for (int i = 0; i < n; ++i) {
    events.push_back({y[i] - hi[i], i, true});
    events.push_back({y[i] - lo[i], i, false});
  }
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    if (a.tau != b.tau) return a.tau < b.tau;
    if (a.enters_linear != b.enters_linear) return a.enters_linear;
    return a.idx < b.idx;
  });

  double sum_hi_active = hi.sum();  // coords still pinned at hi
  double sum_lo_done = 0.0;         // coords already at lo
  double sum_y_linear = 0.0;
  int n_linear = 0;
  double tau = 0.0;
  std::size_t e = 0;
  for (;;) {
    const double seg_end = e < events.size() ? events[e].tau : std::numeric_limits<double>::infinity();
    if (n_linear > 0) {
      const double candidate = (sum_hi_active + sum_lo_done + sum_y_linear - cap) /
                               static_cast<double>(n_linear);
      if (candidate <= seg_end) {
        tau = candidate;
        break;
      }
    }
    if (e >= events.size())
      throw InvalidParameterError("projection sweep exhausted without matching the cap");
    const auto& ev = events[e++];
    if (ev.enters_linear) {
      sum_hi_active -= hi[ev.idx];
      sum_y_linear += y[ev.idx];
      ++n_linear;
    } else {
      sum_y_linear -= y[ev.idx];
      --n_linear;
      sum_lo_done += lo[ev.idx];
    }
  }
  tau = std::max(tau, 0.0);
  for (int i = 0; i < n; ++i) out[i] = std::clamp(y[i] - tau, lo[i], hi[i]);
  return tau;
}

/// Projects a full step-major vector onto the product of per-step
/// box-plus-budget sets. Fills `shift` with one tau per step.
inline void project_feasible(const QpProblem& p, const Eigen::VectorXd& y, Eigen::VectorXd& out,
                             Eigen::VectorXd& shift) {
  const int n = p.n_free;
  out.resize(p.dim());
  shift.resize(p.horizon);
  Eigen::VectorXd block;
  for (int k = 0; k < p.horizon; ++k) {
    const int off = k * n;
    shift[k] = project_box_budget(y.segment(off, n), p.lower.segment(off, n),
                                  p.upper.segment(off, n), p.budget[k], block);
    out.segment(off, n) = block;
  }
}

/// Independent KKT certification of a primal/dual pair.
///
/// Recomputes the gradient from the problem data; multipliers for the
/// box are reconstructed on the active sets, so interior coordinates
/// must carry a vanishing shifted gradient for stationarity to pass.
inline KktResiduals check_kkt(const QpProblem& p, const Eigen::VectorXd& u,
                              const Eigen::VectorXd& budget_dual) {
  constexpr double kActive = 1e-9;
  const Eigen::VectorXd g = p.gradient(u);
  KktResiduals res;
  for (int k = 0; k < p.horizon; ++k) {
    const int off = k * p.n_free;
    const double tau = budget_dual[k];
    res.stationarity = std::max(res.stationarity, -tau);  // dual feasibility
    double block_sum = 0.0;
    for (int i = off; i < off + p.n_free; ++i) {
      block_sum += u[i];
      res.primal = std::max({res.primal, p.lower[i] - u[i], u[i] - p.upper[i]});
      const double d = g[i] + tau;
      const bool at_lo = u[i] - p.lower[i] <= kActive;
      const bool at_hi = p.upper[i] - u[i] <= kActive;
      const double mu_lo = at_lo ? std::max(0.0, d) : 0.0;
      const double mu_hi = at_hi ? std::max(0.0, -d) : 0.0;
      res.stationarity = std::max(res.stationarity, std::abs(d - mu_lo + mu_hi));
      res.complementarity = std::max({res.complementarity, mu_lo * (u[i] - p.lower[i]),
                                      mu_hi * (p.upper[i] - u[i])});
    }
    res.primal = std::max(res.primal, block_sum - p.budget[k]);
    res.complementarity = std::max(res.complementarity, tau * std::abs(p.budget[k] - block_sum));
  }
  res.primal = std::max(res.primal, 0.0);
  return res;
}

namespace detail {
/// Largest eigenvalue estimate by power iteration, with a curvature
/// guard: any Rayleigh quotient below -1e-10 rejects the problem.
inline double estimate_lambda_max(const Eigen::MatrixXd& h) {
  const int d = static_cast<int>(h.rows());
  Eigen::VectorXd v(d);
  std::uint64_t s = 0x6e75646765ull;
  for (int i = 0; i < d; ++i) {
    s = s * 6364136223846793005ull + 1442695040888963407ull;
    v[i] = 0.5 + static_cast<double>(s >> 40) * 0x1.0p-25;
  }
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < 100; ++it) {
    Eigen::VectorXd w = h * v;
    const double rayleigh = v.dot(w);
    if (rayleigh < -1e-10)
      throw InvalidParameterError("qp: negative curvature detected (hessian not PSD)");
    const double norm = w.norm();
    if (norm <= 1e-300) return std::max(rayleigh, 0.0);
    w /= norm;
    const double next = std::abs(rayleigh);
    if (it > 4 && std::abs(next - lambda) <= 1e-9 * std::max(1.0, next)) {
      lambda = next;
      break;
    }
    lambda = next;
    v = w;
  }
  return lambda;
}
}  // namespace detail

/// Solves the QP with FISTA over the exact per-step projection.
///
/// Returns status `optimal` once the independent KKT residuals fall
/// below `tol`; `max_iter` hands back the best iterate with its
/// residuals. Deterministic for fixed inputs; an optional warm start is
/// projected onto the feasible set before use.
inline QpSolution solve_qp(const QpProblem& p, double tol, int max_iter,
                           const std::optional<Eigen::VectorXd>& warm_start = std::nullopt) {
  p.validate();
  if (!(tol > 0.0)) throw InvalidParameterError("qp: tolerance must be positive");
  if (max_iter < 1) throw InvalidParameterError("qp: iteration cap must be >= 1");

  QpSolution sol;
  for (int k = 0; k < p.horizon; ++k) {
    double lo_sum = 0.0;
    for (int i = k * p.n_free; i < (k + 1) * p.n_free; ++i) lo_sum += p.lower[i];
    if (lo_sum > p.budget[k]) {
      sol.status = QpStatus::infeasible;
      sol.u = Eigen::VectorXd::Zero(p.dim());
      sol.budget_dual = Eigen::VectorXd::Zero(p.horizon);
      return sol;
    }
  }

  const double lambda_max = detail::estimate_lambda_max(p.hessian);
  double step = 1.0 / std::max(2.0 * lambda_max * 1.05, 1e-12);

  Eigen::VectorXd x, shift;
  {
    Eigen::VectorXd x0 = warm_start && warm_start->size() == p.dim()
                             ? *warm_start
                             : Eigen::VectorXd::Zero(p.dim());
    project_feasible(p, x0, x, shift);
  }
  Eigen::VectorXd x_prev = x;
  Eigen::VectorXd y = x;
  double t_mom = 1.0;
  double f_best = p.objective(x);

  auto finalize = [&](int iters, QpStatus status) {
    Eigen::VectorXd u, tau_hat;
    project_feasible(p, x - step * p.gradient(x), u, tau_hat);
    sol.u = u;
    sol.budget_dual = tau_hat / step;
    const auto res = check_kkt(p, sol.u, sol.budget_dual);
    sol.kkt_stationarity = res.stationarity;
    sol.kkt_primal = res.primal;
    sol.kkt_complementarity = res.complementarity;
    sol.objective = p.objective(sol.u);
    sol.iterations = iters;
    sol.status = status;
    return sol;
  };

  constexpr int kCheckEvery = 10;
  for (int iter = 1; iter <= max_iter; ++iter) {
    const Eigen::VectorXd g_y = p.gradient(y);
    Eigen::VectorXd x_next, tau_hat;
    project_feasible(p, y - step * g_y, x_next, tau_hat);

    // Gradient-based adaptive restart.
    if (g_y.dot(x_next - x) > 0.0) {
      t_mom = 1.0;
      y = x_next;
    } else {
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_mom * t_mom));
      y = x_next + ((t_mom - 1.0) / t_next) * (x_next - x);
      t_mom = t_next;
    }
    x_prev = x;
    x = x_next;

    if (iter % kCheckEvery == 0 || iter == max_iter) {
      const Eigen::VectorXd g_x = p.gradient(x);
      // Curvature sanity along the step actually taken.
      const Eigen::VectorXd s = x - x_prev;
      const double ss = s.squaredNorm();
      if (ss > 0.0) {
        const double curv = s.dot(p.gradient(x) - p.gradient(x_prev));
        if (curv < -1e-10 * ss)
          throw InvalidParameterError("qp: negative curvature detected (hessian not PSD)");
      }
      Eigen::VectorXd u, tau;
      project_feasible(p, x - step * g_x, u, tau);
      const auto res = check_kkt(p, u, tau / step);
      if (res.within(tol)) {
        sol.u = u;
        sol.budget_dual = tau / step;
        sol.kkt_stationarity = res.stationarity;
        sol.kkt_primal = res.primal;
        sol.kkt_complementarity = res.complementarity;
        sol.objective = p.objective(u);
        sol.iterations = iter;
        sol.status = QpStatus::optimal;
        return sol;
      }
      // Fixed-step safeguard: if the objective rose, the Lipschitz
      // estimate was low; shrink the step and drop momentum.
      const double f_now = p.objective(x);
      if (f_now > f_best + 1e-12 * (1.0 + std::abs(f_best))) {
        step *= 0.5;
        t_mom = 1.0;
        y = x;
      }
      f_best = std::min(f_best, f_now);
    }
  }
  return finalize(max_iter, QpStatus::max_iter);
}

}  // namespace nudgecast

#endif  // NUDGECAST_QP_HPP_
