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

#include "idmem/engine.hpp"

#include <algorithm>
#include <utility>

namespace idmem {

Engine::Engine(Config config) : config_(std::move(config)), memory_(new_memory(config_)) {}

Engine::Engine(Config config, Memory memory)
    : config_(std::move(config)), memory_(std::move(memory)) {
  config_.validate();
  for (const auto& el : memory_.elements) {
    if (el.descriptor.dimension() != config_.dimension) {
      throw Error(ErrorCode::kDimension, "memory element dimension differs from config");
    }
    if (el.identity >= memory_.next_identity) {
      throw Error(ErrorCode::kInvalidArgument, "memory holds an identity not yet issued");
    }
  }
}

Frame Engine::prepare(const Frame& frame) const {
  if (memory_.started && frame.index <= memory_.frame_counter) {
    throw Error(ErrorCode::kStreamOrder, "frame index " + std::to_string(frame.index) +
                                             " does not follow " +
                                             std::to_string(memory_.frame_counter));
  }
  check_frame(frame, config_.dimension);
  Frame prepared = frame;
  if (config_.normalize) {
    for (auto& obs : prepared.observations) obs.normalize();
  }
  return prepared;
}

renn::AssignmentResult Engine::classify(const Frame& frame) const {
  check_frame(frame, config_.dimension);
  Frame prepared = frame;
  if (config_.normalize) {
    for (auto& obs : prepared.observations) obs.normalize();
  }
  const auto matches = renn::match_frame(memory_, prepared, config_, workers_);
  return renn::assign_identities(matches, memory_, prepared);
}

FrameReport Engine::observe(const Frame& frame) {
  Frame prepared = prepare(frame);

  const auto matches = renn::match_frame(memory_, prepared, config_, workers_);
  auto assigned = renn::assign_identities(matches, memory_, prepared);

  // Everything below runs on a working copy that is swapped in at the end.
  Memory next = memory_;
  next.frame_counter = prepared.index;
  next.started = true;

  FrameReport report;
  report.frame_index = prepared.index;
  report.memory_size_before = memory_.size();
  report.decay_events = memctl::apply_decay(next, matches, config_, prepared.index);
  report.prune_report.removed_by_eligibility = memctl::prune_eligibility(next, config_);

  // Stale indices come back relative to the survivors; map them to the
  // pre-frame positions.
  std::vector<std::size_t> survivors;
  survivors.reserve(next.size());
  {
    const auto& gone = report.prune_report.removed_by_eligibility;
    std::size_t g = 0;
    for (std::size_t i = 0; i < memory_.size(); ++i) {
      if (g < gone.size() && gone[g] == i) {
        ++g;
        continue;
      }
      survivors.push_back(i);
    }
  }
  for (std::size_t idx : memctl::prune_stale(next, config_)) {
    report.prune_report.removed_by_staleness.push_back(survivors[idx]);
  }

  report.assignments.reserve(prepared.observations.size());
  next.elements.reserve(next.size() + prepared.observations.size());
  for (std::size_t k = 0; k < prepared.observations.size(); ++k) {
    ObservationOutcome outcome;
    if (const auto& a = assigned.assignments[k]) {
      outcome.identity = a->identity;
      outcome.memory_index = a->memory_index;
      outcome.distance = a->distance;
    } else {
      outcome.identity = next.next_identity;
      outcome.is_new = true;
      ++next.next_identity.value;
      report.new_identities.push_back(outcome.identity);
    }
    next.elements.push_back(MemoryElement{std::move(prepared.observations[k]),
                                          outcome.identity, 1.0, prepared.index,
                                          prepared.index});
    report.assignments.push_back(outcome);
  }
  report.conflicts = std::move(assigned.conflicts);
  report.memory_size_after = next.size();

  memory_ = std::move(next);
  return report;
}

}  // namespace idmem
