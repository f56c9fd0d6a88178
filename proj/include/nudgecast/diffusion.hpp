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

#ifndef NUDGECAST_DIFFUSION_HPP_
#define NUDGECAST_DIFFUSION_HPP_

// Stochastic cascade dynamics: reluctance-dependent Beta thresholds,
// credibility-weighted influence, synchronous irreversible adoption
// updates, and reluctance updates under policy.
//
// Thresholds are re-sampled independently at every step because their
// Beta shapes track the time-varying reluctance.

#include <algorithm>
#include <cstdint>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "nudgecast/errors.hpp"
#include "nudgecast/graph.hpp"
#include "nudgecast/population.hpp"
#include "nudgecast/random.hpp"

namespace nudgecast {

/// Clamp margin keeping the threshold shapes 1/rho and 1/(1-rho) finite.
inline constexpr double kDefaultThresholdEps = 1e-6;

/// Shape parameters of the reluctance-dependent threshold distribution.
/// The mean alpha/(alpha+beta) equals the clamped reluctance.
struct ThresholdParams {
  double alpha = 0.0;
  double beta = 0.0;

  double mean() const { return alpha / (alpha + beta); }
};

namespace detail {
inline double clamp_rho(double rho, double eps) {
  if (!(eps > 0.0 && eps < 0.5)) throw InvalidParameterError("clamp margin must lie in (0, 1/2)");
  if (!(rho >= 0.0 && rho <= 1.0)) throw OutOfRangeError("reluctance outside [0, 1]");
  return std::clamp(rho, eps, 1.0 - eps);
}
}  // namespace detail

/// Threshold shapes at the clamped reluctance: alpha = 1/(1-rho),
/// beta = 1/rho.
inline ThresholdParams beta_params(double rho, double eps = kDefaultThresholdEps) {
  const double rc = detail::clamp_rho(rho, eps);
  return ThresholdParams{1.0 / (1.0 - rc), 1.0 / rc};
}

/// One independent threshold draw; support [0, 1], mean equal to the
/// clamped reluctance.
template <class Urbg>
double sample_threshold(double rho, double eps, Urbg& rng) {
  const auto p = beta_params(rho, eps);
  return rng::beta(rng, p.alpha, p.beta);
}

/// Probability that a non-adopter with reluctance rho adopts under
/// influence theta: the regularized incomplete beta I_theta(alpha, beta).
inline double adoption_probability(double theta, double rho, double eps = kDefaultThresholdEps) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw OutOfRangeError("influence outside [0, 1]");
  const auto p = beta_params(rho, eps);
  if (theta <= 0.0) return 0.0;
  if (theta >= 1.0) return 1.0;
  return boost::math::ibeta(p.alpha, p.beta, theta);
}

/// Credibility-weighted influence on agent v: the sum of adopter
/// neighbors' credibilities over the neighborhood size. Reduces to the
/// plain adopter fraction when all credibilities are 1.
inline double epistemic_influence(const SocialNetwork& net, const PopulationState& state,
                                  const std::vector<double>& gammas, int v) {
  const auto& nb = net.neighbors(v);
  double sum = 0.0;
  for (int w : nb)
    if (state.x[static_cast<std::size_t>(w)]) sum += gammas[static_cast<std::size_t>(w)];
  return sum / static_cast<double>(nb.size());
}

/// Reluctance update under policy effort u with receptivity b, clamped
/// back into [0, 1].
inline double update_reluctance(double rho, double b, double u) {
  constexpr double slack = 1e-12;
  if (!(rho >= -slack && rho <= 1.0 + slack)) throw OutOfRangeError("reluctance outside [0, 1]");
  if (!(b >= -1.0 - slack && b <= slack)) throw OutOfRangeError("receptivity outside [-1, 0]");
  if (!(u >= -slack && u <= 1.0 + slack)) throw OutOfRangeError("policy outside [0, 1]");
  return std::clamp(rho + b * u, 0.0, 1.0);
}

/// Hands out one threshold engine per (step, agent), so per-agent draws
/// are independent and any parallel evaluation order yields the same run.
struct StepSeeder {
  std::uint64_t run_seed = 0;

  rng::Engine engine(int t, int v) const {
    return rng::engine_at(rng::derive_seed(run_seed, rng::kTagThreshold,
                                           static_cast<std::uint64_t>(t),
                                           static_cast<std::uint64_t>(v)));
  }
};

/// Synchronous cascade update. Adopters stay adopters; each non-adopter
/// draws a fresh threshold and adopts iff its influence (computed from
/// the pre-step adopter set) meets it. Increments the step index.
inline void cascade_step(const SocialNetwork& net, PopulationState& state,
                         const std::vector<AgentParams>& params, double eps,
                         const StepSeeder& seeder) {
  const int n = net.n_agents();
  std::vector<double> gammas(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) gammas[static_cast<std::size_t>(v)] = params[static_cast<std::size_t>(v)].gamma;

  // Influences from the frozen pre-step adopter set.
  std::vector<double> theta(static_cast<std::size_t>(n), 0.0);
  for (int v = 0; v < n; ++v)
    if (!state.x[static_cast<std::size_t>(v)])
      theta[static_cast<std::size_t>(v)] = epistemic_influence(net, state, gammas, v);

  const int t = state.t;
  for (int v = 0; v < n; ++v) {
    if (state.x[static_cast<std::size_t>(v)]) continue;
    auto eng = seeder.engine(t, v);
    const double phi = sample_threshold(state.rho[static_cast<std::size_t>(v)], eps, eng);
    if (theta[static_cast<std::size_t>(v)] >= phi) state.x[static_cast<std::size_t>(v)] = 1;
  }
  state.t = t + 1;
}

}  // namespace nudgecast

#endif  // NUDGECAST_DIFFUSION_HPP_
