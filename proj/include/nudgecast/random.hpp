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

#ifndef NUDGECAST_RANDOM_HPP_
#define NUDGECAST_RANDOM_HPP_

// Seeded random streams with a fixed cross-platform sequence.
//
// Every stochastic quantity in the toolkit is drawn from an mt19937_64
// engine (whose output sequence the C++ standard pins down) through the
// explicit transforms below, never through std::*_distribution (whose
// sequences are implementation-defined). Substreams are derived by
// hashing (seed, tag, indices...) so that results are independent of
// evaluation order and thread schedule.

#include <cmath>
#include <cstdint>
#include <random>

namespace nudgecast::rng {

using Engine = std::mt19937_64;

/// SplitMix64 finalizer; the standard 64-bit avalanche mix.
constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Combines a running seed with one more word.
constexpr std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  return splitmix64(h ^ (splitmix64(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2)));
}

/// Derives one seed from an ordered tuple of words.
template <class... Rest>
constexpr std::uint64_t derive_seed(std::uint64_t first, Rest... rest) {
  std::uint64_t h = splitmix64(first);
  ((h = mix(h, static_cast<std::uint64_t>(rest))), ...);
  return h;
}

// Substream tags. Each independent consumer of randomness hangs off the
// experiment base seed through its own tag.
inline constexpr std::uint64_t kTagReliability = 0x5245'4c49'4142ull;  // zeta draws
inline constexpr std::uint64_t kTagReceptivity = 0x5245'4345'5054ull;  // b draws
inline constexpr std::uint64_t kTagRun = 0x52554eull;                  // per-run seeds
inline constexpr std::uint64_t kTagThreshold = 0x544852ull;            // per-(t,v) draws
inline constexpr std::uint64_t kTagParams = 0x504152ull;               // population params

inline Engine engine_at(std::uint64_t seed) { return Engine(seed); }

/// Uniform double in [0, 1) with 53 random bits.
template <class Urbg>
double uniform01(Urbg& g) {
  static_assert(sizeof(typename Urbg::result_type) == 8, "need a 64-bit engine");
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

/// Uniform double in (0, 1]; safe as a log argument.
template <class Urbg>
double uniform01_open_low(Urbg& g) {
  static_assert(sizeof(typename Urbg::result_type) == 8, "need a 64-bit engine");
  return static_cast<double>((g() >> 11) + 1) * 0x1.0p-53;
}

/// Uniform integer in [0, m). Multiply-shift; the O(2^-53) bias is
/// irrelevant for graph rewiring.
template <class Urbg>
std::uint64_t uniform_below(Urbg& g, std::uint64_t m) {
  return static_cast<std::uint64_t>(uniform01(g) * static_cast<double>(m));
}

/// Standard normal via Box-Muller (two uniforms per call).
template <class Urbg>
double normal(Urbg& g) {
  const double u1 = uniform01_open_low(g);
  const double u2 = uniform01(g);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

/// Gamma(shape, 1) for shape >= 1 via Marsaglia-Tsang squeeze.
template <class Urbg>
double gamma_shape_ge1(Urbg& g, double shape) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = 0.0;
    double v = 0.0;
    do {
      x = normal(g);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform01(g);
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

/// Beta(a, b) draw as a gamma ratio; both shapes must be >= 1 (always
/// the case for reluctance-derived shapes on a clamped domain).
template <class Urbg>
double beta(Urbg& g, double a, double b) {
  const double x = gamma_shape_ge1(g, a);
  const double y = gamma_shape_ge1(g, b);
  return x / (x + y);
}

}  // namespace nudgecast::rng

#endif  // NUDGECAST_RANDOM_HPP_
