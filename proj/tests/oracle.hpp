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

// Reference implementations written independently of the library, used to
// check it. Nothing here calls into idmem.

#ifndef IDMEM_TESTS_ORACLE_HPP
#define IDMEM_TESTS_ORACLE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;

// Euclidean distance; squares summed in component order, one final sqrt.
inline double dist(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

struct Nearest2 {
  std::size_t i1, i2;
  double d1, d2;
};

// Full sort of every distance; ties broken by index.
inline Nearest2 two_nearest(const Vec& q, const std::vector<Vec>& pts) {
  std::vector<std::pair<double, std::size_t>> all;
  for (std::size_t j = 0; j < pts.size(); ++j) all.emplace_back(dist(q, pts[j]), j);
  std::sort(all.begin(), all.end());
  return {all[0].second, all[1].second, all[0].first, all[1].first};
}

inline double ratio(double d1, double d2) { return d2 == 0.0 ? 0.0 : d1 / d2; }

inline double eta(double d1, double d2, double rho, double alpha) {
  return std::max(std::pow(ratio(d1, d2), alpha) / rho, 1e-3);
}

// Which observation each memory element matches under the ratio test, or -1.
inline std::vector<long> reverse_matches(const std::vector<Vec>& memory,
                                         const std::vector<Vec>& obs, double rho) {
  std::vector<long> out;
  for (const auto& m : memory) {
    const auto n = two_nearest(m, obs);
    out.push_back(ratio(n.d1, n.d2) < rho ? static_cast<long>(n.i1) : -1);
  }
  return out;
}

inline Vec random_vec(std::mt19937_64& rng, std::size_t dim, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vec v(dim);
  for (double& x : v) x = u(rng);
  return v;
}

// Integer-valued coordinates: produces many exactly tied distances.
inline Vec lattice_vec(std::mt19937_64& rng, std::size_t dim, int span = 2) {
  std::uniform_int_distribution<int> u(-span, span);
  Vec v(dim);
  for (double& x : v) x = u(rng);
  return v;
}

inline double median(Vec v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace oracle

#endif  // IDMEM_TESTS_ORACLE_HPP
