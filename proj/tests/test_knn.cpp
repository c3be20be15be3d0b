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

#include <bit>
#include <cmath>
#include <random>

#include "doctest.h"
#include "idmem/knn.hpp"
#include "oracle.hpp"

using namespace idmem;

namespace {

std::vector<Descriptor> to_desc(const std::vector<oracle::Vec>& vs) {
  std::vector<Descriptor> out;
  for (const auto& v : vs) out.emplace_back(v);
  return out;
}

bool bit_equal(double a, double b) {
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

}  // namespace

TEST_CASE("distance examples") {
  const Descriptor a{0.3, 0.7};
  CHECK(knn::distance(a.view(), a.view()) == 0.0);
  CHECK(knn::distance(Descriptor{0.0}.view(), Descriptor{3.0}.view()) == 3.0);
  CHECK(knn::distance(Descriptor{1.0, 0.0}.view(), Descriptor{0.0, 1.0}.view()) ==
        doctest::Approx(1.41421356).epsilon(1e-9));
  CHECK_THROWS_AS(knn::distance(Descriptor{1.0}.view(), Descriptor{1.0, 2.0}.view()), Error);
}

TEST_CASE("distance is symmetric and zero only on equality") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 1000; ++t) {
    const Descriptor a(oracle::random_vec(rng, 5));
    const Descriptor b(oracle::random_vec(rng, 5));
    CHECK(knn::distance(a.view(), b.view()) == knn::distance(b.view(), a.view()));
    CHECK(knn::distance(a.view(), b.view()) > 0.0);
  }
}

TEST_CASE("two_nearest examples") {
  const auto pts = to_desc({{0.0}, {1.0}, {5.0}});
  const auto views = knn::views_of(pts);
  const Descriptor q{0.4};
  const auto r = knn::two_nearest(q.view(), views);
  CHECK(r.first_index == 0);
  CHECK(r.first_distance == doctest::Approx(0.4));
  CHECK(r.second_index == 1);
  CHECK(r.second_distance == doctest::Approx(0.6));

  const auto tie_pts = to_desc({{0.0}, {1.0}});
  const auto tv = knn::views_of(tie_pts);
  const Descriptor mid{0.5};
  const auto t = knn::two_nearest(mid.view(), tv);
  CHECK(t.first_index == 0);
  CHECK(t.second_index == 1);
  CHECK(t.first_distance == t.second_distance);
}

TEST_CASE("two_nearest needs two points of matching dimension") {
  const auto one = to_desc({{0.0}});
  const auto v1 = knn::views_of(one);
  const Descriptor q{0.0};
  try {
    knn::two_nearest(q.view(), v1);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInsufficientPoints);
  }
  const auto mixed = to_desc({{0.0}, {0.0, 1.0}});
  const auto vm = knn::views_of(mixed);
  CHECK_THROWS_AS(knn::two_nearest(q.view(), vm), Error);
}

TEST_CASE("two_nearest agrees with a full-sort oracle (16-D)") {
  std::mt19937_64 rng(2);
  std::vector<oracle::Vec> raw;
  for (int i = 0; i < 200; ++i) raw.push_back(oracle::random_vec(rng, 16));
  const auto pts = to_desc(raw);
  const auto views = knn::views_of(pts);
  for (int k = 0; k < 50; ++k) {
    const auto q = oracle::random_vec(rng, 16);
    const auto got = knn::two_nearest(Descriptor(q).view(), views);
    const auto want = oracle::two_nearest(q, raw);
    CHECK(got.first_index == want.i1);
    CHECK(got.second_index == want.i2);
    CHECK(bit_equal(got.first_distance, want.d1));
    CHECK(bit_equal(got.second_distance, want.d2));
  }
}

TEST_CASE("property: result ordering invariants over lattice ties") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 1000; ++t) {
    std::vector<oracle::Vec> raw;
    const int n = 2 + static_cast<int>(rng() % 8);
    for (int i = 0; i < n; ++i) raw.push_back(oracle::lattice_vec(rng, 3, 1));
    const auto pts = to_desc(raw);
    const auto views = knn::views_of(pts);
    const auto q = oracle::lattice_vec(rng, 3, 1);
    const auto got = knn::two_nearest(Descriptor(q).view(), views);
    const auto want = oracle::two_nearest(q, raw);
    REQUIRE(got.first_index != got.second_index);
    REQUIRE(got.first_distance <= got.second_distance);
    REQUIRE(got.first_index == want.i1);
    REQUIRE(got.second_index == want.i2);
  }
}

TEST_CASE("batch_two_nearest matches sequential two_nearest") {
  std::mt19937_64 rng(4);
  std::vector<oracle::Vec> raw;
  for (int i = 0; i < 6; ++i) raw.push_back(oracle::random_vec(rng, 4));
  const auto pts = to_desc(raw);
  const auto views = knn::views_of(pts);
  // Queries are the points in reverse order.
  std::vector<DescriptorView> queries(views.rbegin(), views.rend());
  const auto batch = knn::batch_two_nearest(queries, views, 1);
  REQUIRE(batch.size() == queries.size());
  for (std::size_t k = 0; k < queries.size(); ++k) {
    const auto one = knn::two_nearest(queries[k], views);
    CHECK(batch[k].first_index == one.first_index);
    CHECK(batch[k].second_index == one.second_index);
    CHECK(batch[k].first_distance == 0.0);
  }
  CHECK(knn::batch_two_nearest({}, views, 4).empty());
}

TEST_CASE("batch_two_nearest: 10000 x 8 in 64-D equals the oracle bitwise for any worker count") {
  std::mt19937_64 rng(5);
  std::vector<oracle::Vec> raw_q;
  std::vector<oracle::Vec> raw_p;
  for (int i = 0; i < 10000; ++i) raw_q.push_back(oracle::random_vec(rng, 64));
  for (int i = 0; i < 8; ++i) raw_p.push_back(oracle::random_vec(rng, 64));
  const auto qd = to_desc(raw_q);
  const auto pd = to_desc(raw_p);
  const auto qv = knn::views_of(qd);
  const auto pv = knn::views_of(pd);
  const auto base = knn::batch_two_nearest(qv, pv, 1);
  for (unsigned workers : {2u, 4u, 8u}) {
    const auto other = knn::batch_two_nearest(qv, pv, workers);
    for (std::size_t k = 0; k < base.size(); ++k) {
      REQUIRE(other[k].first_index == base[k].first_index);
      REQUIRE(bit_equal(other[k].second_distance, base[k].second_distance));
    }
  }
  std::size_t mismatches = 0;
  for (std::size_t k = 0; k < raw_q.size(); ++k) {
    const auto w = oracle::two_nearest(raw_q[k], raw_p);
    mismatches += !(base[k].first_index == w.i1 && base[k].second_index == w.i2 &&
                    bit_equal(base[k].first_distance, w.d1) &&
                    bit_equal(base[k].second_distance, w.d2));
  }
  CHECK(mismatches == 0);
}
