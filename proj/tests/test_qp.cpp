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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <Eigen/Core>

#include "nudgecast/qp.hpp"
#include "nudgecast/random.hpp"

using namespace nudgecast;

namespace {

QpProblem make_problem(const Eigen::MatrixXd& h, const Eigen::VectorXd& c, int n_free,
                       int horizon, double budget) {
  QpProblem p;
  p.hessian = h;
  p.linear = c;
  p.lower = Eigen::VectorXd::Zero(n_free * horizon);
  p.upper = Eigen::VectorXd::Ones(n_free * horizon);
  p.budget = Eigen::VectorXd::Constant(horizon, budget);
  p.n_free = n_free;
  p.horizon = horizon;
  return p;
}

/// Random PSD problem with box [0,1] and one budget row per step.
QpProblem random_problem(rng::Engine& eng, int n_free, int horizon) {
  const int d = n_free * horizon;
  Eigen::MatrixXd a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = 2.0 * rng::uniform01(eng) - 1.0;
  Eigen::MatrixXd h = a.transpose() * a / d;
  h.diagonal().array() += 0.1 + rng::uniform01(eng);
  h = ((h + h.transpose()) / 2.0).eval();
  Eigen::VectorXd c(d);
  for (int i = 0; i < d; ++i) c[i] = 4.0 * rng::uniform01(eng) - 2.0;
  // Budgets between clearly active and clearly slack.
  const double budget = 0.2 + rng::uniform01(eng) * n_free;
  return make_problem(h, c, n_free, horizon, budget);
}

}  // namespace

TEST_CASE("projection returns the box clamp when the budget is slack", "[qp]") {
  Eigen::VectorXd y(3), out;
  y << -0.5, 0.4, 1.7;
  const double tau = project_box_budget(y, Eigen::VectorXd::Zero(3), Eigen::VectorXd::Ones(3),
                                        10.0, out);
  CHECK(tau == 0.0);
  CHECK(out[0] == 0.0);
  CHECK(out[1] == 0.4);
  CHECK(out[2] == 1.0);
}

TEST_CASE("projection water-fills an active budget", "[qp]") {
  Eigen::VectorXd y(3), out;
  y << 0.9, 0.7, 0.5;
  const double tau = project_box_budget(y, Eigen::VectorXd::Zero(3), Eigen::VectorXd::Ones(3),
                                        1.0, out);
  CHECK(tau > 0.0);
  CHECK_THAT(out.sum(), Catch::Matchers::WithinAbs(1.0, 1e-12));
  // Equal shifts preserve the gaps of interior coordinates.
  CHECK_THAT(out[0] - out[1], Catch::Matchers::WithinAbs(0.2, 1e-12));
  CHECK_THAT(out[1] - out[2], Catch::Matchers::WithinAbs(0.2, 1e-12));
}

TEST_CASE("projection agrees with a dense scan on random blocks", "[qp]") {
  auto eng = rng::engine_at(41);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng::uniform_below(eng, 6));
    Eigen::VectorXd y(n), out;
    for (int i = 0; i < n; ++i) y[i] = 3.0 * rng::uniform01(eng) - 1.0;
    const double cap = 0.2 + rng::uniform01(eng) * n;
    project_box_budget(y, Eigen::VectorXd::Zero(n), Eigen::VectorXd::Ones(n), cap, out);
    REQUIRE(out.minCoeff() >= 0.0);
    REQUIRE(out.maxCoeff() <= 1.0);
    REQUIRE(out.sum() <= cap + 1e-10);
    // No feasible point may be closer; check against jittered candidates.
    const double dist = (out - y).squaredNorm();
    for (int probe = 0; probe < 40; ++probe) {
      Eigen::VectorXd z = out;
      for (int i = 0; i < n; ++i) z[i] += 0.2 * (rng::uniform01(eng) - 0.5);
      z = z.cwiseMax(0.0).cwiseMin(1.0);
      if (z.sum() > cap) continue;
      CHECK(dist <= (z - y).squaredNorm() + 1e-9);
    }
  }
}

TEST_CASE("one-variable solve matches the closed form", "[qp]") {
  // min r u^2 + dp (rho + b u)^2 over [0,1] with slack budget:
  // u* = clamp(-dp b rho / (r + dp b^2), 0, 1).
  for (const auto& [rho, b, r, dp] :
       std::vector<std::array<double, 4>>{{0.6, -1.0, 1.0, 3.236},
                                          {0.9, -0.5, 0.001, 10.08},
                                          {0.0, -1.0, 1.0, 3.236},
                                          {0.2, -0.1, 2.0, 1.0}}) {
    Eigen::MatrixXd h(1, 1);
    h << r + dp * b * b;
    Eigen::VectorXd c(1);
    c << 2.0 * dp * b * rho;
    auto p = make_problem(h, c, 1, 1, 10.0);
    p.constant = dp * rho * rho;
    const auto sol = solve_qp(p, 1e-10, 20000);
    REQUIRE(sol.status == QpStatus::optimal);
    const double expected = std::clamp(-dp * b * rho / (r + dp * b * b), 0.0, 1.0);
    CHECK_THAT(sol.u[0], Catch::Matchers::WithinAbs(expected, 1e-8));
  }
}

TEST_CASE("symmetric budget-active instance splits the budget evenly", "[qp]") {
  // Three identical agents, one step, budget 1; each would take much
  // more on its own, so the optimum is the uniform split.
  const double r = 1.0, dp = 3.236, b = -1.0, rho = 0.9;
  Eigen::MatrixXd h = (r + dp * b * b) * Eigen::MatrixXd::Identity(3, 3);
  Eigen::VectorXd c = Eigen::VectorXd::Constant(3, 2.0 * dp * b * rho);
  const auto p = make_problem(h, c, 3, 1, 1.0);
  const auto sol = solve_qp(p, 1e-10, 20000);
  REQUIRE(sol.status == QpStatus::optimal);
  for (int i = 0; i < 3; ++i)
    CHECK_THAT(sol.u[i], Catch::Matchers::WithinAbs(1.0 / 3.0, 1e-6));
  CHECK(sol.budget_dual[0] >= 0.0);
  // The budget multiplier prices the active constraint.
  CHECK(sol.budget_dual[0] > 1.0);
}

TEST_CASE("zero linear term yields the zero solution", "[qp]") {
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(4, 4);
  const auto p = make_problem(h, Eigen::VectorXd::Zero(4), 2, 2, 1.5);
  const auto sol = solve_qp(p, 1e-10, 10000);
  REQUIRE(sol.status == QpStatus::optimal);
  CHECK(sol.u.cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(sol.iterations <= 20);
}

TEST_CASE("randomized instances certify their KKT conditions", "[qp]") {
  auto eng = rng::engine_at(43);
  for (int trial = 0; trial < 60; ++trial) {
    const int n_free = 1 + static_cast<int>(rng::uniform_below(eng, 8));
    const int horizon = 1 + static_cast<int>(rng::uniform_below(eng, 5));
    const auto p = random_problem(eng, n_free, horizon);
    const auto sol = solve_qp(p, 1e-9, 50000);
    REQUIRE(sol.status == QpStatus::optimal);
    const auto res = check_kkt(p, sol.u, sol.budget_dual);
    CHECK(res.stationarity <= 1e-7);
    CHECK(res.primal <= 1e-9);
    CHECK(res.complementarity <= 1e-7);
    // Feasibility of the returned point is exact up to roundoff.
    for (int k = 0; k < p.horizon; ++k)
      CHECK(sol.u.segment(k * p.n_free, p.n_free).sum() <= p.budget[k] + 1e-10);
  }
}

TEST_CASE("two-variable optimum survives a dense grid scan", "[qp]") {
  auto eng = rng::engine_at(47);
  for (int trial = 0; trial < 5; ++trial) {
    const auto p = random_problem(eng, 2, 1);
    const auto sol = solve_qp(p, 1e-10, 50000);
    REQUIRE(sol.status == QpStatus::optimal);
    double best = 1e300;
    const int grid = 400;
    for (int i = 0; i <= grid; ++i)
      for (int j = 0; j <= grid; ++j) {
        Eigen::VectorXd u(2);
        u << static_cast<double>(i) / grid, static_cast<double>(j) / grid;
        if (u.sum() > p.budget[0]) continue;
        best = std::min(best, p.objective(u));
      }
    CHECK(sol.objective <= best + 1e-5);
  }
}

TEST_CASE("warm starts do not change the optimum", "[qp]") {
  auto eng = rng::engine_at(53);
  const auto p = random_problem(eng, 6, 4);
  const auto cold = solve_qp(p, 1e-10, 50000);
  Eigen::VectorXd guess = Eigen::VectorXd::Constant(p.dim(), 0.37);
  const auto warm = solve_qp(p, 1e-10, 50000, guess);
  REQUIRE(cold.status == QpStatus::optimal);
  REQUIRE(warm.status == QpStatus::optimal);
  CHECK((cold.u - warm.u).cwiseAbs().maxCoeff() <= 1e-6);
  // Warm-starting from the solution itself converges immediately.
  const auto hot = solve_qp(p, 1e-10, 50000, cold.u);
  CHECK(hot.iterations <= cold.iterations);
}

TEST_CASE("solver output is deterministic", "[qp]") {
  auto eng = rng::engine_at(59);
  const auto p = random_problem(eng, 5, 3);
  const auto a = solve_qp(p, 1e-9, 50000);
  const auto b = solve_qp(p, 1e-9, 50000);
  CHECK(a.u == b.u);
  CHECK(a.objective == b.objective);
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("iteration cap reports max_iter with the best iterate", "[qp]") {
  auto eng = rng::engine_at(61);
  const auto p = random_problem(eng, 6, 3);
  const auto sol = solve_qp(p, 1e-12, 3);
  CHECK(sol.status == QpStatus::max_iter);
  CHECK(sol.u.minCoeff() >= 0.0);
  CHECK(sol.u.maxCoeff() <= 1.0);
}

TEST_CASE("indefinite hessians are rejected", "[qp]") {
  // The stiff convex coordinate keeps steps small, so the solver has to
  // walk the negative-curvature direction and trip the guard instead of
  // jumping straight to a bound.
  Eigen::MatrixXd h(2, 2);
  h << 50.0, 0.0, 0.0, -1.0;
  Eigen::VectorXd c(2);
  c << 1.0, -1.0;
  auto p = make_problem(h, c, 2, 1, 1.5);
  CHECK_THROWS_AS(solve_qp(p, 1e-8, 1000), InvalidParameterError);
}

TEST_CASE("a budget below the lower bounds is infeasible", "[qp]") {
  auto p = make_problem(Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Zero(2), 2, 1, 1.0);
  p.lower = Eigen::VectorXd::Constant(2, 0.6);  // forces sum >= 1.2 > budget
  const auto sol = solve_qp(p, 1e-8, 100);
  CHECK(sol.status == QpStatus::infeasible);
}

TEST_CASE("malformed problems are rejected", "[qp]") {
  Eigen::MatrixXd h(2, 2);
  h << 1.0, 0.5, 0.4, 1.0;  // asymmetric
  auto p = make_problem(h, Eigen::VectorXd::Zero(2), 2, 1, 1.0);
  CHECK_THROWS_AS(solve_qp(p, 1e-8, 100), InvalidParameterError);
}
