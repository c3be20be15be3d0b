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
#include <limits>

#include "doctest.h"
#include "idmem/core.hpp"

using namespace idmem;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an idmem::Error");
  return ErrorCode::kIo;
}

}  // namespace

TEST_CASE("new_memory starts empty with identity counter at zero") {
  Config cfg;
  cfg.dimension = 4;
  const Memory m = new_memory(cfg);
  CHECK(m.elements.empty());
  CHECK(m.next_identity.value == 0);
  CHECK(m.frame_counter == 0);
  CHECK_FALSE(m.started);
}

TEST_CASE("config validation rejects out-of-range values") {
  auto bad = [](auto mutate) {
    Config c;
    mutate(c);
    return code_of([&] { c.validate(); });
  };
  CHECK(bad([](Config& c) { c.rho_bar = 1.5; }) == ErrorCode::kConfig);
  CHECK(bad([](Config& c) { c.rho_bar = 0.0; }) == ErrorCode::kConfig);
  CHECK(bad([](Config& c) { c.e_bar = 0.0; }) == ErrorCode::kConfig);
  CHECK(bad([](Config& c) { c.e_bar = 1.0; }) == ErrorCode::kConfig);
  CHECK(bad([](Config& c) { c.alpha = 0.5; }) == ErrorCode::kConfig);
  CHECK(bad([](Config& c) { c.alpha = std::numeric_limits<double>::infinity(); }) ==
        ErrorCode::kConfig);
  CHECK(bad([](Config& c) { c.max_stale = 0; }) == ErrorCode::kConfig);
  CHECK(bad([](Config& c) { c.dimension = 0; }) == ErrorCode::kConfig);
  CHECK(bad([](Config& c) { c.abs_gate = -1.0; }) == ErrorCode::kConfig);
  CHECK(bad([](Config& c) { c.rho_bar = std::nan(""); }) == ErrorCode::kConfig);

  Config edge;
  edge.rho_bar = 1.0;
  edge.alpha = 1.0;
  CHECK_NOTHROW(edge.validate());
  Config dim0;
  dim0.dimension = 0;
  CHECK(code_of([&] { new_memory(dim0); }) == ErrorCode::kConfig);
}

TEST_CASE("config digest ignores the seed and tracks behavioural fields") {
  Config a;
  Config b = a;
  b.seed = 99;
  CHECK(a.digest() == b.digest());
  b.rho_bar = 0.7;
  CHECK(a.digest() != b.digest());
  Config g = a;
  g.abs_gate = 0.0;  // presence alone changes the digest even at value 0
  CHECK(a.digest() != g.digest());
  Config n = a;
  n.normalize = true;
  CHECK(a.digest() != n.digest());
}

TEST_CASE("descriptors reject non-finite components") {
  CHECK(code_of([] { Descriptor({1.0, std::nan("")}); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([] { Descriptor({std::numeric_limits<double>::infinity()}); }) ==
        ErrorCode::kInvalidArgument);
  const Descriptor d{3.0, 4.0};
  CHECK(d.dimension() == 2);
  CHECK(d[1] == 4.0);
}

TEST_CASE("normalize scales to unit length and leaves zero alone") {
  Descriptor d{3.0, 4.0};
  d.normalize();
  CHECK(d[0] == doctest::Approx(0.6));
  CHECK(d[1] == doctest::Approx(0.8));
  Descriptor z{0.0, 0.0};
  z.normalize();
  CHECK(z == Descriptor{0.0, 0.0});
}

TEST_CASE("check_frame validates dimension and labels") {
  Frame f;
  f.index = 3;
  f.observations = {Descriptor{1.0, 2.0}, Descriptor{1.0}};
  CHECK(code_of([&] { check_frame(f, 2); }) == ErrorCode::kDimension);
  f.observations.pop_back();
  CHECK_NOTHROW(check_frame(f, 2));
  f.labels = std::vector<std::string>{"a", "b"};
  CHECK(code_of([&] { check_frame(f, 2); }) == ErrorCode::kInvalidArgument);
}
