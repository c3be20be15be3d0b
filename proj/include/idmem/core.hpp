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

#ifndef IDMEM_CORE_HPP
#define IDMEM_CORE_HPP

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace idmem {

enum class ErrorCode {
  kConfig,
  kDimension,
  kStreamOrder,
  kInsufficientPoints,
  kInvalidArgument,
  kSnapshot,
  kIo,
};

// Every failure raised by the library carries one of the codes above so the
// C boundary can translate it without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

using DescriptorView = std::span<const double>;

// Fixed-dimension embedding vector. Components are always finite.
class Descriptor {
 public:
  Descriptor() = default;
  explicit Descriptor(std::vector<double> values);
  Descriptor(std::initializer_list<double> values);

  std::size_t dimension() const noexcept { return values_.size(); }
  DescriptorView view() const noexcept { return values_; }
  const std::vector<double>& values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  // Scales to unit Euclidean length; the zero vector is left untouched.
  void normalize();

  bool operator==(const Descriptor&) const = default;

 private:
  std::vector<double> values_;
};

struct IdentityId {
  std::uint64_t value = 0;
  auto operator<=>(const IdentityId&) const = default;
};

struct MemoryElement {
  Descriptor descriptor;
  IdentityId identity;
  double eligibility = 1.0;
  std::uint64_t inserted_at = 0;
  std::uint64_t last_matched_at = 0;

  bool operator==(const MemoryElement&) const = default;
};

struct Config {
  double rho_bar = 0.8;
  double e_bar = 0.1;
  double alpha = 1.0;
  std::uint64_t max_stale = 300;
  std::size_t dimension = 1;
  std::optional<double> abs_gate;
  bool normalize = false;
  std::uint64_t seed = 0;

  // Throws Error{kConfig} naming the first violated constraint.
  void validate() const;

  // FNV-1a over the fields that change learner behaviour (seed excluded).
  std::uint64_t digest() const;

  bool operator==(const Config&) const = default;
};

// Memory module state: the element tuples plus the identity and frame clocks.
struct Memory {
  std::vector<MemoryElement> elements;
  IdentityId next_identity;
  std::uint64_t frame_counter = 0;
  // False until the first frame commits, so that frame index 0 is accepted.
  bool started = false;

  std::size_t size() const noexcept { return elements.size(); }
  bool operator==(const Memory&) const = default;
};

struct Frame {
  std::uint64_t index = 0;
  std::vector<Descriptor> observations;
  // Ground-truth tags for evaluation; the learner never reads them.
  std::optional<std::vector<std::string>> labels;
};

Memory new_memory(const Config& config);

// Validates dimension and finiteness of every observation in the frame.
void check_frame(const Frame& frame, std::size_t dimension);

}  // namespace idmem

#endif  // IDMEM_CORE_HPP
