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

#include "idmem/knn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

namespace idmem::knn {

namespace {

// Below this many rows per worker the thread start-up dominates.
constexpr std::size_t kMinRowsPerWorker = 256;

double unchecked_distance(DescriptorView a, DescriptorView b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

TwoNearest scan(DescriptorView query, std::span<const DescriptorView> points) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  TwoNearest best{0, kInf, 0, kInf};
  bool have_first = false;
  bool have_second = false;
  for (std::size_t j = 0; j < points.size(); ++j) {
    const double d = unchecked_distance(query, points[j]);
    // Strict comparisons keep the earlier index on ties.
    if (!have_first || d < best.first_distance) {
      if (have_first) {
        best.second_index = best.first_index;
        best.second_distance = best.first_distance;
        have_second = true;
      }
      best.first_index = j;
      best.first_distance = d;
      have_first = true;
    } else if (!have_second || d < best.second_distance) {
      best.second_index = j;
      best.second_distance = d;
      have_second = true;
    }
  }
  return best;
}

void check_points(DescriptorView query, std::span<const DescriptorView> points) {
  if (points.size() < 2) {
    throw Error(ErrorCode::kInsufficientPoints,
                "two-nearest search needs at least 2 points, got " +
                    std::to_string(points.size()));
  }
  for (const auto& p : points) {
    if (p.size() != query.size()) {
      throw Error(ErrorCode::kDimension, "point dimension " + std::to_string(p.size()) +
                                             " differs from query dimension " +
                                             std::to_string(query.size()));
    }
  }
}

}  // namespace

double distance(DescriptorView a, DescriptorView b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDimension, "distance between descriptors of dimension " +
                                           std::to_string(a.size()) + " and " +
                                           std::to_string(b.size()));
  }
  return unchecked_distance(a, b);
}

TwoNearest two_nearest(DescriptorView query, std::span<const DescriptorView> points) {
  check_points(query, points);
  return scan(query, points);
}

std::vector<TwoNearest> batch_two_nearest(std::span<const DescriptorView> queries,
                                          std::span<const DescriptorView> points,
                                          unsigned workers) {
  if (queries.empty()) return {};
  check_points(queries.front(), points);
  const std::size_t dim = queries.front().size();
  for (const auto& q : queries) {
    if (q.size() != dim) {
      throw Error(ErrorCode::kDimension, "queries have mixed dimensions");
    }
  }

  std::vector<TwoNearest> out(queries.size());
  auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) out[k] = scan(queries[k], points);
  };

  const std::size_t max_workers =
      std::max<std::size_t>(1, queries.size() / kMinRowsPerWorker);
  const std::size_t n_workers = std::min<std::size_t>(std::max(1u, workers), max_workers);
  if (n_workers == 1) {
    run_range(0, queries.size());
    return out;
  }

  // Contiguous chunks; each thread writes a disjoint slice of `out`.
  const std::size_t chunk = (queries.size() + n_workers - 1) / n_workers;
  std::vector<std::jthread> pool;
  pool.reserve(n_workers - 1);
  for (std::size_t w = 1; w < n_workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(queries.size(), begin + chunk);
    if (begin >= end) break;
    pool.emplace_back(run_range, begin, end);
  }
  run_range(0, std::min(chunk, queries.size()));
  // Join before `out` can be moved into the return value.
  pool.clear();
  return out;
}

std::vector<DescriptorView> views_of(std::span<const Descriptor> descriptors) {
  std::vector<DescriptorView> views;
  views.reserve(descriptors.size());
  for (const auto& d : descriptors) views.push_back(d.view());
  return views;
}

}  // namespace idmem::knn
