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

#include "idmem/core.hpp"

#include <bit>
#include <cmath>
#include <sstream>

namespace idmem {

namespace {

void require_finite(const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw Error(ErrorCode::kInvalidArgument,
                  "descriptor component " + std::to_string(i) + " is not finite");
    }
  }
}

class Fnv1a {
 public:
  void add(std::uint64_t word) {
    for (int b = 0; b < 8; ++b) {
      hash_ ^= (word >> (8 * b)) & 0xffu;
      hash_ *= 0x100000001b3ULL;
    }
  }
  void add(double value) { add(std::bit_cast<std::uint64_t>(value)); }
  std::uint64_t value() const { return hash_; }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

}  // namespace

Descriptor::Descriptor(std::vector<double> values) : values_(std::move(values)) {
  require_finite(values_);
}

Descriptor::Descriptor(std::initializer_list<double> values) : values_(values) {
  require_finite(values_);
}

void Descriptor::normalize() {
  double sum = 0.0;
  for (double v : values_) sum += v * v;
  if (sum == 0.0) return;
  const double norm = std::sqrt(sum);
  for (double& v : values_) v /= norm;
}

void Config::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::kConfig, msg); };
  if (!(rho_bar > 0.0 && rho_bar <= 1.0)) fail("rho_bar must lie in (0, 1]");
  if (!(e_bar > 0.0 && e_bar < 1.0)) fail("e_bar must lie in (0, 1)");
  if (!(alpha >= 1.0) || !std::isfinite(alpha)) fail("alpha must be finite and >= 1");
  if (max_stale == 0) fail("max_stale must be a positive number of frames");
  if (dimension == 0) fail("dimension must be >= 1");
  if (abs_gate && !(*abs_gate > 0.0 && std::isfinite(*abs_gate))) {
    fail("abs_gate must be a positive finite distance");
  }
}

std::uint64_t Config::digest() const {
  Fnv1a h;
  h.add(rho_bar);
  h.add(e_bar);
  h.add(alpha);
  h.add(max_stale);
  h.add(static_cast<std::uint64_t>(dimension));
  h.add(static_cast<std::uint64_t>(abs_gate.has_value()));
  h.add(abs_gate.value_or(0.0));
  h.add(static_cast<std::uint64_t>(normalize));
  return h.value();
}

Memory new_memory(const Config& config) {
  config.validate();
  return Memory{};
}

void check_frame(const Frame& frame, std::size_t dimension) {
  for (std::size_t k = 0; k < frame.observations.size(); ++k) {
    const auto& obs = frame.observations[k];
    if (obs.dimension() != dimension) {
      std::ostringstream msg;
      msg << "frame " << frame.index << " observation " << k << " has dimension "
          << obs.dimension() << ", expected " << dimension;
      throw Error(ErrorCode::kDimension, msg.str());
    }
    require_finite(obs.values());
  }
  if (frame.labels && frame.labels->size() != frame.observations.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "frame " + std::to_string(frame.index) +
                    " label count does not match observation count");
  }
}

}  // namespace idmem
