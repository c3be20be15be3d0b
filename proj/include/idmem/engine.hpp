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

#ifndef IDMEM_ENGINE_HPP
#define IDMEM_ENGINE_HPP

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "idmem/core.hpp"
#include "idmem/memctl.hpp"
#include "idmem/renn.hpp"

namespace idmem {

struct ObservationOutcome {
  IdentityId identity;
  bool is_new = false;
  // Supporting memory element (pre-frame index) and its d1; unset when new.
  std::size_t memory_index = 0;
  double distance = 0.0;
};

// Audit record of one committed frame. Memory indices in decay events and
// prune lists refer to the memory as it stood before the frame.
struct FrameReport {
  std::uint64_t frame_index = 0;
  std::vector<ObservationOutcome> assignments;
  std::vector<IdentityId> new_identities;
  std::vector<memctl::DecayEvent> decay_events;
  memctl::PruneReport prune_report;
  std::size_t memory_size_before = 0;
  std::size_t memory_size_after = 0;
  std::vector<renn::Conflict> conflicts;
};

// Runs frames through match, assign, decay, prune and insert. A frame either
// commits completely or leaves the memory untouched.
class Engine {
 public:
  explicit Engine(Config config);
  Engine(Config config, Memory memory);

  FrameReport observe(const Frame& frame);

  // Read-only identity assignment for a frame against the current memory.
  renn::AssignmentResult classify(const Frame& frame) const;

  const Memory& memory() const noexcept { return memory_; }
  const Config& config() const noexcept { return config_; }

  // Search parallelism; results are identical for every value.
  void set_workers(unsigned workers) noexcept { workers_ = workers == 0 ? 1 : workers; }
  unsigned workers() const noexcept { return workers_; }

 private:
  Frame prepare(const Frame& frame) const;

  Config config_;
  Memory memory_;
  unsigned workers_ = 1;
};

// Snapshot layout (little-endian), format version 1:
//   magic "IDMEMSNP" | u32 version | u32 dimension | u64 config digest
//   u64 element count | u64 next identity | u64 frame counter | u8 started
//   per element: u64 identity | f64 eligibility | u64 inserted_at
//                u64 last_matched_at | f64 x dimension
//   u64 FNV-1a checksum of every preceding byte
inline constexpr std::uint32_t kSnapshotVersion = 1;

struct SnapshotContents {
  std::uint32_t version = 0;
  std::size_t dimension = 0;
  std::uint64_t config_digest = 0;
  Memory memory;
};

std::vector<std::uint8_t> snapshot(const Memory& memory, const Config& config);

// Parses without checking against a config (used for inspection).
SnapshotContents read_snapshot(std::span<const std::uint8_t> bytes);

// Parses and rejects snapshots whose dimension or config digest differ.
Memory restore(std::span<const std::uint8_t> bytes, const Config& config);

struct Histogram {
  // counts[k] covers [edges[k], edges[k+1]); the last bucket is closed.
  std::vector<double> edges;
  std::vector<std::size_t> counts;
  std::size_t below = 0;
  std::size_t above = 0;

  std::size_t total() const;
};

Histogram make_histogram(std::span<const double> values, std::vector<double> edges);

struct StatsOptions {
  std::vector<double> eligibility_edges{0.0, 0.1, 0.2, 0.3, 0.4, 0.5,
                                        0.6, 0.7, 0.8, 0.9, 1.0};
  std::vector<double> age_edges{0.0, 1.0, 10.0, 100.0, 1000.0, 10000.0};
};

struct MemoryStats {
  std::size_t element_count = 0;
  std::uint64_t frame_counter = 0;
  IdentityId next_identity;
  std::map<IdentityId, std::size_t> identity_counts;
  Histogram eligibility;
  // Age = frame_counter - inserted_at.
  Histogram age;
};

MemoryStats stats(const Memory& memory, const StatsOptions& options = {});

}  // namespace idmem

#endif  // IDMEM_ENGINE_HPP
