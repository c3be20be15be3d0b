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

#include "idmem/memctl.hpp"

#include <algorithm>
#include <cmath>

namespace idmem::memctl {

namespace {

template <typename Pred>
std::vector<std::size_t> remove_where(Memory& memory, Pred pred) {
  std::vector<std::size_t> removed;
  for (std::size_t i = 0; i < memory.size(); ++i) {
    if (pred(memory.elements[i])) removed.push_back(i);
  }
  if (!removed.empty()) std::erase_if(memory.elements, pred);
  return removed;
}

}  // namespace

double decay_factor(double d1, double d2, const Config& config) {
  if (!(d2 > 0.0) || d1 < 0.0 || d1 > d2) {
    throw Error(ErrorCode::kInvalidArgument, "decay factor needs 0 <= d1 <= d2 and d2 > 0");
  }
  return std::pow(d1 / d2, config.alpha) / config.rho_bar;
}

double effective_decay(const knn::TwoNearest& nearest, const Config& config) {
  const double ratio = renn::distance_ratio(nearest);
  const double eta = std::pow(ratio, config.alpha) / config.rho_bar;
  return std::max(eta, kEtaFloor);
}

std::vector<DecayEvent> plan_decay(const Memory& memory, const renn::MatchSet& match_set,
                                   const Config& config) {
  std::vector<DecayEvent> events;
  events.reserve(match_set.entries.size());
  std::vector<bool> seen(memory.size(), false);
  for (const auto& entry : match_set.entries) {
    if (entry.memory_index >= memory.size()) {
      throw Error(ErrorCode::kInvalidArgument, "match set refers past the end of memory");
    }
    if (seen[entry.memory_index]) {
      throw Error(ErrorCode::kInvalidArgument, "memory element matched twice in one frame");
    }
    seen[entry.memory_index] = true;
    const double eta = effective_decay(entry.nearest, config);
    const double before = memory.elements[entry.memory_index].eligibility;
    events.push_back({entry.memory_index, eta, before, eta * before});
  }
  return events;
}

std::vector<DecayEvent> apply_decay(Memory& memory, const renn::MatchSet& match_set,
                                    const Config& config, std::uint64_t frame_index) {
  auto events = plan_decay(memory, match_set, config);
  for (const auto& ev : events) {
    auto& el = memory.elements[ev.memory_index];
    el.eligibility = ev.eligibility_after;
    el.last_matched_at = frame_index;
  }
  return events;
}

std::vector<std::size_t> prune_eligibility(Memory& memory, const Config& config) {
  return remove_where(memory, [&](const MemoryElement& el) { return el.eligibility < config.e_bar; });
}

bool is_stale(const MemoryElement& element, std::uint64_t now, const Config& config) {
  return now > element.last_matched_at && now - element.last_matched_at > config.max_stale;
}

std::vector<std::size_t> prune_stale(Memory& memory, const Config& config) {
  const std::uint64_t now = memory.frame_counter;
  return remove_where(memory, [&](const MemoryElement& el) { return is_stale(el, now, config); });
}

}  // namespace idmem::memctl
