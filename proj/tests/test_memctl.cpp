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

#include <cmath>
#include <random>

#include "doctest.h"
#include "idmem/memctl.hpp"
#include "oracle.hpp"

using namespace idmem;

namespace {

MemoryElement el(double e, std::uint64_t last = 0) {
  return MemoryElement{Descriptor{0.0}, IdentityId{0}, e, 0, last};
}

renn::MatchSet match_one(std::size_t index, double d1, double d2) {
  renn::MatchSet ms;
  ms.entries.push_back({index, {0, d1, 1, d2}});
  return ms;
}

}  // namespace

TEST_CASE("decay_factor examples") {
  Config c;
  CHECK(memctl::decay_factor(0.4, 1.0, c) == doctest::Approx(0.5));
  c.alpha = 2.0;
  CHECK(memctl::decay_factor(0.4, 1.0, c) == doctest::Approx(0.2));
  CHECK(memctl::decay_factor(0.0, 1.0, c) == 0.0);
  CHECK_THROWS_AS(memctl::decay_factor(2.0, 1.0, c), Error);
  CHECK_THROWS_AS(memctl::decay_factor(0.0, 0.0, c), Error);
}

TEST_CASE("effective_decay floors exact duplicates and handles a missing second neighbour") {
  Config c;
  CHECK(memctl::effective_decay({0, 0.0, 1, 1.0}, c) == memctl::kEtaFloor);
  CHECK(memctl::effective_decay({0, 0.0, 1, 0.0}, c) == memctl::kEtaFloor);
  CHECK(memctl::effective_decay({0, 0.3, renn::kNoObservation, INFINITY}, c) ==
        memctl::kEtaFloor);
}

TEST_CASE("apply_decay: one step, two steps, and untouched elements") {
  Config c;
  Memory m;
  m.elements = {el(1.0), el(0.7, 4)};
  const auto ev = memctl::apply_decay(m, match_one(0, 0.4, 1.0), c, 5);
  REQUIRE(ev.size() == 1);
  CHECK(ev[0].eta == doctest::Approx(0.5));
  CHECK(ev[0].eligibility_before == 1.0);
  CHECK(m.elements[0].eligibility == doctest::Approx(0.5));
  CHECK(m.elements[0].last_matched_at == 5);
  CHECK(m.elements[1].eligibility == 0.7);
  CHECK(m.elements[1].last_matched_at == 4);

  memctl::apply_decay(m, match_one(0, 0.4, 1.0), c, 6);
  CHECK(m.elements[0].eligibility == doctest::Approx(0.25));
}

TEST_CASE("plan_decay rejects duplicated or out-of-range entries") {
  Config c;
  Memory m;
  m.elements = {el(1.0)};
  auto ms = match_one(0, 0.1, 1.0);
  ms.entries.push_back(ms.entries[0]);
  CHECK_THROWS_AS(memctl::plan_decay(m, ms, c), Error);
  CHECK_THROWS_AS(memctl::plan_decay(m, match_one(3, 0.1, 1.0), c), Error);
  // plan_decay is pure.
  const Memory before = m;
  memctl::plan_decay(m, match_one(0, 0.1, 1.0), c);
  CHECK(m == before);
}

TEST_CASE("prune_eligibility is strict and reports pre-removal indices") {
  Config c;
  Memory m;
  m.elements = {el(0.5), el(0.05), el(0.10)};
  const auto gone = memctl::prune_eligibility(m, c);
  CHECK(gone == std::vector<std::size_t>{1});
  REQUIRE(m.size() == 2);
  CHECK(m.elements[0].eligibility == 0.5);
  CHECK(m.elements[1].eligibility == 0.10);

  Memory empty;
  CHECK(memctl::prune_eligibility(empty, c).empty());
}

TEST_CASE("three halvings from 0.8 land exactly on e_bar and survive") {
  Config c;
  Memory m;
  m.elements = {el(0.8)};
  for (int k = 0; k < 3; ++k) memctl::apply_decay(m, match_one(0, 0.4, 1.0), c, k + 1);
  CHECK(m.elements[0].eligibility == 0.8 * 0.5 * 0.5 * 0.5);
  CHECK(m.elements[0].eligibility == 0.1);
  CHECK(memctl::prune_eligibility(m, c).empty());
}

TEST_CASE("prune_stale boundaries") {
  Config c;
  Memory m;
  m.elements = {el(1.0, 0)};
  m.frame_counter = 300;
  CHECK(memctl::prune_stale(m, c).empty());
  m.frame_counter = 301;
  CHECK(memctl::prune_stale(m, c) == std::vector<std::size_t>{0});
  CHECK(m.elements.empty());

  Memory fresh;
  fresh.elements = {MemoryElement{Descriptor{0.0}, IdentityId{0}, 1.0, 900, 900}};
  fresh.frame_counter = 900;
  CHECK(memctl::prune_stale(fresh, c).empty());
}

TEST_CASE("property: decay is a contraction and the product formula holds") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 1000; ++t) {
    Config c;
    c.rho_bar = 0.05 + 0.95 * u(rng);
    c.alpha = 1.0 + 3.0 * u(rng);
    const double d2 = 0.1 + u(rng);
    const double d1 = d2 * c.rho_bar * u(rng) * 0.999;  // matched: d1/d2 < rho
    Memory m;
    const double e0 = 0.2 + 0.8 * u(rng);
    m.elements = {el(e0)};
    const double want_eta = oracle::eta(d1, d2, c.rho_bar, c.alpha);
    double expected = e0;
    for (int k = 0; k < 5; ++k) {
      const auto ev = memctl::apply_decay(m, match_one(0, d1, d2), c, k + 1);
      REQUIRE(ev[0].eta < 1.0);
      REQUIRE(ev[0].eta == doctest::Approx(want_eta).epsilon(1e-12));
      REQUIRE(ev[0].eligibility_after < ev[0].eligibility_before);
      expected *= ev[0].eta;
    }
    REQUIRE(std::abs(m.elements[0].eligibility - expected) <= 1e-12);
  }
}

TEST_CASE("property: pruning never alters survivors") {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 1000; ++t) {
    Config c;
    c.max_stale = 1 + rng() % 20;
    Memory m;
    m.frame_counter = 30;
    for (int i = 0; i < 10; ++i) {
      m.elements.push_back(MemoryElement{Descriptor{u(rng)}, IdentityId{rng() % 3}, u(rng),
                                         0, rng() % 31});
    }
    const Memory before = m;
    const auto low = memctl::prune_eligibility(m, c);
    const auto stale = memctl::prune_stale(m, c);
    std::size_t kept = 0;
    for (const auto& b : before.elements) {
      const bool removed = b.eligibility < c.e_bar || memctl::is_stale(b, 30, c);
      if (!removed) REQUIRE(m.elements[kept++] == b);
    }
    REQUIRE(kept == m.size());
    REQUIRE(low.size() + stale.size() + m.size() == before.size());
    for (const auto& e : m.elements) {
      REQUIRE(e.eligibility >= c.e_bar);
      REQUIRE_FALSE(memctl::is_stale(e, 30, c));
    }
  }
}
