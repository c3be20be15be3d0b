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
#include <cstring>

#include "idmem/engine.hpp"

namespace idmem {

namespace {

constexpr char kMagic[8] = {'I', 'D', 'M', 'E', 'M', 'S', 'N', 'P'};
constexpr std::size_t kHeaderSize = 8 + 4 + 4 + 8 + 8 + 8 + 8 + 1;

std::uint64_t fnv1a(std::span<const std::uint8_t> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

class Writer {
 public:
  void raw(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    out_.insert(out_.end(), b, b + n);
  }
  template <typename T>
  void le(T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      out_.push_back(static_cast<std::uint8_t>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xffu));
    }
  }
  void f64(double v) { le(std::bit_cast<std::uint64_t>(v)); }
  std::vector<std::uint8_t>& bytes() { return out_; }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  template <typename T>
  T le() {
    need(sizeof(T));
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      v |= static_cast<std::uint64_t>(in_[pos_ + i]) << (8 * i);
    }
    pos_ += sizeof(T);
    return static_cast<T>(v);
  }
  double f64() { return std::bit_cast<double>(le<std::uint64_t>()); }
  void expect_magic() {
    need(sizeof(kMagic));
    if (std::memcmp(in_.data() + pos_, kMagic, sizeof(kMagic)) != 0) {
      throw Error(ErrorCode::kSnapshot, "not an idmem snapshot (bad magic)");
    }
    pos_ += sizeof(kMagic);
  }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (remaining() < n) throw Error(ErrorCode::kSnapshot, "snapshot is truncated");
  }
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> snapshot(const Memory& memory, const Config& config) {
  Writer w;
  w.raw(kMagic, sizeof(kMagic));
  w.le<std::uint32_t>(kSnapshotVersion);
  w.le<std::uint32_t>(static_cast<std::uint32_t>(config.dimension));
  w.le<std::uint64_t>(config.digest());
  w.le<std::uint64_t>(memory.size());
  w.le<std::uint64_t>(memory.next_identity.value);
  w.le<std::uint64_t>(memory.frame_counter);
  w.le<std::uint8_t>(memory.started ? 1 : 0);
  for (const auto& el : memory.elements) {
    if (el.descriptor.dimension() != config.dimension) {
      throw Error(ErrorCode::kDimension, "memory element dimension differs from config");
    }
    w.le<std::uint64_t>(el.identity.value);
    w.f64(el.eligibility);
    w.le<std::uint64_t>(el.inserted_at);
    w.le<std::uint64_t>(el.last_matched_at);
    for (double v : el.descriptor.values()) w.f64(v);
  }
  const std::uint64_t checksum = fnv1a(w.bytes());
  w.le<std::uint64_t>(checksum);
  return std::move(w.bytes());
}

SnapshotContents read_snapshot(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderSize + 8) {
    throw Error(ErrorCode::kSnapshot, "snapshot is truncated");
  }
  Reader tail(bytes.subspan(bytes.size() - 8));
  if (tail.le<std::uint64_t>() != fnv1a(bytes.first(bytes.size() - 8))) {
    throw Error(ErrorCode::kSnapshot, "snapshot checksum mismatch");
  }

  Reader r(bytes.first(bytes.size() - 8));
  r.expect_magic();
  SnapshotContents out;
  out.version = r.le<std::uint32_t>();
  if (out.version != kSnapshotVersion) {
    throw Error(ErrorCode::kSnapshot,
                "unsupported snapshot version " + std::to_string(out.version));
  }
  out.dimension = r.le<std::uint32_t>();
  out.config_digest = r.le<std::uint64_t>();
  const auto count = r.le<std::uint64_t>();
  out.memory.next_identity.value = r.le<std::uint64_t>();
  out.memory.frame_counter = r.le<std::uint64_t>();
  const auto started = r.le<std::uint8_t>();
  if (started > 1) throw Error(ErrorCode::kSnapshot, "snapshot header is corrupt");
  out.memory.started = started == 1;
  if (out.dimension == 0) throw Error(ErrorCode::kSnapshot, "snapshot dimension is zero");

  const std::size_t record = 8 * (4 + out.dimension);
  if (count > r.remaining() / record || count * record != r.remaining()) {
    throw Error(ErrorCode::kSnapshot, "snapshot element count does not match its size");
  }
  out.memory.elements.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    MemoryElement el;
    el.identity.value = r.le<std::uint64_t>();
    el.eligibility = r.f64();
    el.inserted_at = r.le<std::uint64_t>();
    el.last_matched_at = r.le<std::uint64_t>();
    std::vector<double> values(out.dimension);
    for (double& v : values) v = r.f64();
    if (!(el.eligibility > 0.0 && el.eligibility <= 1.0) ||
        el.identity >= out.memory.next_identity) {
      throw Error(ErrorCode::kSnapshot, "snapshot element " + std::to_string(i) + " is corrupt");
    }
    try {
      el.descriptor = Descriptor(std::move(values));
    } catch (const Error&) {
      throw Error(ErrorCode::kSnapshot, "snapshot element " + std::to_string(i) +
                                            " has a non-finite component");
    }
    out.memory.elements.push_back(std::move(el));
  }
  return out;
}

Memory restore(std::span<const std::uint8_t> bytes, const Config& config) {
  config.validate();
  auto contents = read_snapshot(bytes);
  if (contents.dimension != config.dimension) {
    throw Error(ErrorCode::kSnapshot, "snapshot dimension " + std::to_string(contents.dimension) +
                                          " differs from configured dimension " +
                                          std::to_string(config.dimension));
  }
  if (contents.config_digest != config.digest()) {
    throw Error(ErrorCode::kSnapshot, "snapshot was written under a different configuration");
  }
  return std::move(contents.memory);
}

}  // namespace idmem
