// Copyright 2026 The idmem Authors
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

#ifndef IDMEM_RENN_HPP
#define IDMEM_RENN_HPP

#include <cstddef>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "idmem/core.hpp"
#include "idmem/knn.hpp"

namespace idmem::renn {

// Marks the missing second neighbour of a single-observation frame.
inline constexpr std::size_t kNoObservation = std::numeric_limits<std::size_t>::max();

struct MatchEntry {
  std::size_t memory_index = 0;
  knn::TwoNearest nearest;
};

// Memory elements whose reverse distance ratio passed the threshold, in
// ascending memory_index order.
struct MatchSet {
  std::vector<MatchEntry> entries;
};

struct Support {
  IdentityId identity;
  std::size_t memory_index = 0;
  double distance = 0.0;
};

// std::nullopt means the observation starts a new identity.
using Assignment = std::optional<Support>;

struct Conflict {
  std::size_t observation = 0;
  // Identities other than the winner, each at its closest supporting distance.
  std::vector<std::pair<IdentityId, double>> competitors;
};

struct AssignmentResult {
  std::vector<Assignment> assignments;
  std::vector<Conflict> conflicts;
};

// d1/d2 with the perfect-duplicate case 0/0 reported as 0.
double distance_ratio(const knn::TwoNearest& nearest);

// Reverse nearest neighbour test: every memory element queries the frame's
// observations and passes when d1/d2 < rho_bar. Needs >= 2 observations.
MatchSet renn_match(const Memory& memory, const Frame& frame, const Config& config,
                    unsigned workers = 1);

// Single-observation frames: matches elements within config.abs_gate of the
// observation, or nothing when the gate is unset.
MatchSet fallback_match(const Memory& memory, const Frame& frame, const Config& config);

// Dispatches on the observation count (0 observations match nothing).
MatchSet match_frame(const Memory& memory, const Frame& frame, const Config& config,
                     unsigned workers = 1);

AssignmentResult assign_identities(const MatchSet& match_set, const Memory& memory,
                                   const Frame& frame);

}  // namespace idmem::renn

#endif  // IDMEM_RENN_HPP
