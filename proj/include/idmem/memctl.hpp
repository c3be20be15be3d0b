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

#ifndef IDMEM_MEMCTL_HPP
#define IDMEM_MEMCTL_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "idmem/core.hpp"
#include "idmem/renn.hpp"

namespace idmem::memctl {

// Lower bound applied to the decay factor so that an exact duplicate does not
// erase an element in one step.
inline constexpr double kEtaFloor = 1e-3;

struct DecayEvent {
  std::size_t memory_index = 0;
  double eta = 0.0;
  double eligibility_before = 0.0;
  double eligibility_after = 0.0;
};

struct PruneReport {
  std::vector<std::size_t> removed_by_eligibility;
  std::vector<std::size_t> removed_by_staleness;
};

// eta = (d1 / d2)^alpha / rho_bar. Requires 0 <= d1 <= d2 and d2 > 0.
double decay_factor(double d1, double d2, const Config& config);

// The factor actually applied for one match: the ratio follows the 0/0 and
// d2 = inf conventions of the matcher, and the result is floored at kEtaFloor.
double effective_decay(const knn::TwoNearest& nearest, const Config& config);

// Pure preview of apply_decay.
std::vector<DecayEvent> plan_decay(const Memory& memory, const renn::MatchSet& match_set,
                                   const Config& config);

// Multiplies each matched element's eligibility by its factor and stamps
// last_matched_at with `frame_index`. Each element decays at most once.
std::vector<DecayEvent> apply_decay(Memory& memory, const renn::MatchSet& match_set,
                                    const Config& config, std::uint64_t frame_index);

// Removes elements with eligibility strictly below e_bar. Returned indices
// refer to positions before removal.
std::vector<std::size_t> prune_eligibility(Memory& memory, const Config& config);

// Removes elements unmatched for more than max_stale frames, measured against
// memory.frame_counter. Returned indices refer to positions before removal.
std::vector<std::size_t> prune_stale(Memory& memory, const Config& config);

bool is_stale(const MemoryElement& element, std::uint64_t now, const Config& config);

}  // namespace idmem::memctl

#endif  // IDMEM_MEMCTL_HPP
