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

#ifndef IDMEM_KNN_HPP
#define IDMEM_KNN_HPP

#include <cstddef>
#include <vector>

#include "idmem/core.hpp"

namespace idmem::knn {

// First and second nearest points of one query. first_distance is d1,
// second_distance is d2.
struct TwoNearest {
  std::size_t first_index = 0;
  double first_distance = 0.0;
  std::size_t second_index = 0;
  double second_distance = 0.0;

  bool operator==(const TwoNearest&) const = default;
};

// Euclidean distance. Components are summed in index order and the square
// root is taken once, so results are reproducible bit for bit.
double distance(DescriptorView a, DescriptorView b);

// Single linear pass keeping the best two; ties go to the lower index.
TwoNearest two_nearest(DescriptorView query, std::span<const DescriptorView> points);

// Row k equals two_nearest(queries[k], points). Rows are partitioned across
// `workers` threads; the output never depends on the worker count.
std::vector<TwoNearest> batch_two_nearest(std::span<const DescriptorView> queries,
                                          std::span<const DescriptorView> points,
                                          unsigned workers = 1);

std::vector<DescriptorView> views_of(std::span<const Descriptor> descriptors);

}  // namespace idmem::knn

#endif  // IDMEM_KNN_HPP
