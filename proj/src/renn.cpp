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

#include "idmem/renn.hpp"

#include <algorithm>
#include <map>

namespace idmem::renn {

double distance_ratio(const knn::TwoNearest& nearest) {
  if (nearest.second_distance == 0.0) return 0.0;
  return nearest.first_distance / nearest.second_distance;
}

MatchSet renn_match(const Memory& memory, const Frame& frame, const Config& config,
                    unsigned workers) {
  if (frame.observations.size() < 2) {
    throw Error(ErrorCode::kInsufficientPoints,
                "reverse matching needs at least 2 observations in frame " +
                    std::to_string(frame.index));
  }
  check_frame(frame, config.dimension);

  std::vector<DescriptorView> queries;
  queries.reserve(memory.size());
  for (const auto& el : memory.elements) queries.push_back(el.descriptor.view());
  const auto points = knn::views_of(frame.observations);

  const auto rows = knn::batch_two_nearest(queries, points, workers);
  MatchSet out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (distance_ratio(rows[i]) < config.rho_bar) out.entries.push_back({i, rows[i]});
  }
  return out;
}

MatchSet fallback_match(const Memory& memory, const Frame& frame, const Config& config) {
  if (frame.observations.size() != 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "fallback matching expects exactly one observation");
  }
  check_frame(frame, config.dimension);
  MatchSet out;
  if (!config.abs_gate) return out;

  const auto lone = frame.observations.front().view();
  for (std::size_t i = 0; i < memory.size(); ++i) {
    const double d = knn::distance(memory.elements[i].descriptor.view(), lone);
    if (d <= *config.abs_gate) {
      out.entries.push_back(
          {i, {0, d, kNoObservation, std::numeric_limits<double>::infinity()}});
    }
  }
  return out;
}

MatchSet match_frame(const Memory& memory, const Frame& frame, const Config& config,
                     unsigned workers) {
  switch (frame.observations.size()) {
    case 0:
      return {};
    case 1:
      return fallback_match(memory, frame, config);
    default:
      return renn_match(memory, frame, config, workers);
  }
}

AssignmentResult assign_identities(const MatchSet& match_set, const Memory& memory,
                                   const Frame& frame) {
  const std::size_t n_obs = frame.observations.size();
  AssignmentResult result;
  result.assignments.assign(n_obs, std::nullopt);

  // Per observation, the closest supporting element of every identity.
  std::vector<std::map<IdentityId, Support>> best(n_obs);
  for (const auto& entry : match_set.entries) {
    const std::size_t obs = entry.nearest.first_index;
    if (obs >= n_obs || entry.memory_index >= memory.size()) {
      throw Error(ErrorCode::kInvalidArgument, "match set does not belong to this frame");
    }
    const IdentityId id = memory.elements[entry.memory_index].identity;
    const Support candidate{id, entry.memory_index, entry.nearest.first_distance};
    auto [it, inserted] = best[obs].try_emplace(id, candidate);
    if (!inserted) {
      const Support& cur = it->second;
      if (candidate.distance < cur.distance ||
          (candidate.distance == cur.distance && candidate.memory_index < cur.memory_index)) {
        it->second = candidate;
      }
    }
  }

  for (std::size_t obs = 0; obs < n_obs; ++obs) {
    if (best[obs].empty()) continue;
    const Support* winner = nullptr;
    for (const auto& [id, s] : best[obs]) {
      if (!winner || s.distance < winner->distance ||
          (s.distance == winner->distance && s.memory_index < winner->memory_index)) {
        winner = &s;
      }
    }
    result.assignments[obs] = *winner;
    if (best[obs].size() > 1) {
      Conflict c{obs, {}};
      for (const auto& [id, s] : best[obs]) {
        if (id != winner->identity) c.competitors.emplace_back(id, s.distance);
      }
      result.conflicts.push_back(std::move(c));
    }
  }
  return result;
}

}  // namespace idmem::renn
