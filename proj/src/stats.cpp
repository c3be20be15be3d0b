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

#include <algorithm>
#include <numeric>

#include "idmem/engine.hpp"

namespace idmem {

std::size_t Histogram::total() const {
  return std::accumulate(counts.begin(), counts.end(), below + above);
}

Histogram make_histogram(std::span<const double> values, std::vector<double> edges) {
  if (edges.size() < 2 || !std::is_sorted(edges.begin(), edges.end()) ||
      std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
    throw Error(ErrorCode::kInvalidArgument,
                "histogram edges must be at least two strictly increasing values");
  }
  Histogram h;
  h.counts.assign(edges.size() - 1, 0);
  for (double v : values) {
    if (v < edges.front()) {
      ++h.below;
    } else if (v > edges.back()) {
      ++h.above;
    } else if (v == edges.back()) {
      ++h.counts.back();
    } else {
      const auto it = std::upper_bound(edges.begin(), edges.end(), v);
      ++h.counts[static_cast<std::size_t>(it - edges.begin()) - 1];
    }
  }
  h.edges = std::move(edges);
  return h;
}

MemoryStats stats(const Memory& memory, const StatsOptions& options) {
  MemoryStats s;
  s.element_count = memory.size();
  s.frame_counter = memory.frame_counter;
  s.next_identity = memory.next_identity;

  std::vector<double> eligibility;
  std::vector<double> age;
  eligibility.reserve(memory.size());
  age.reserve(memory.size());
  for (const auto& el : memory.elements) {
    ++s.identity_counts[el.identity];
    eligibility.push_back(el.eligibility);
    age.push_back(static_cast<double>(memory.frame_counter - el.inserted_at));
  }
  s.eligibility = make_histogram(eligibility, options.eligibility_edges);
  s.age = make_histogram(age, options.age_edges);
  return s;
}

}  // namespace idmem
