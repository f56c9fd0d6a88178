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

#ifndef NUDGECAST_NUDGECAST_HPP_
#define NUDGECAST_NUDGECAST_HPP_

// Umbrella header.

#include "nudgecast/config.hpp"
#include "nudgecast/control.hpp"
#include "nudgecast/diffusion.hpp"
#include "nudgecast/errors.hpp"
#include "nudgecast/graph.hpp"
#include "nudgecast/harness.hpp"
#include "nudgecast/oracle.hpp"
#include "nudgecast/population.hpp"
#include "nudgecast/qp.hpp"
#include "nudgecast/random.hpp"
#include "nudgecast/results_io.hpp"

#endif  // NUDGECAST_NUDGECAST_HPP_
