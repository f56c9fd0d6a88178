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

#ifndef NUDGECAST_ERRORS_HPP_
#define NUDGECAST_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace nudgecast {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed text input (edge lists, agent CSVs, config files).
struct ParseError : Error {
  using Error::Error;
};

/// An edge list contains an edge from an agent to itself.
struct SelfLoopError : Error {
  using Error::Error;
};

/// An agent has no neighbors, so its fractional influence is undefined.
struct IsolatedAgentError : Error {
  using Error::Error;
};

/// The influence graph is not connected.
struct DisconnectedError : Error {
  using Error::Error;
};

/// An index or value lies outside its declared domain.
struct OutOfRangeError : Error {
  using Error::Error;
};

/// A configuration or algorithm parameter violates its precondition.
struct InvalidParameterError : Error {
  using Error::Error;
};

/// No agent is marked as an initial adopter.
struct EmptySeedSetError : Error {
  using Error::Error;
};

/// The synthetic network generator could not reach a connected graph
/// within its retry bound.
struct ConnectivityRetryError : Error {
  using Error::Error;
};

/// Filesystem-level failure while reading or writing artifacts.
struct IoError : Error {
  using Error::Error;
};

}  // namespace nudgecast

#endif  // NUDGECAST_ERRORS_HPP_
