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

#ifndef IDMEM_SYNTH_HPP
#define IDMEM_SYNTH_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "idmem/core.hpp"
#include "idmem/engine.hpp"

namespace idmem::synth {

inline const std::string kInlierLabel = "inlier";
inline const std::string kOutlierLabel = "outlier";
inline const std::string kTargetLabel = "target";
inline const std::string kDistractorLabel = "distractor";

// Outlier means of the three separation regimes: far, medium, overlapping.
inline constexpr std::array<double, 3> kStandardOutlierMeans{3.0, 1.0, 0.5};

// Two Gaussian sources per component: inliers model true detections of one
// subject, outliers (wider) model false detections.
struct GaussianStreamSpec {
  double inlier_mean = 0.0;
  double inlier_std = 0.1;
  double outlier_mean = 3.0;
  double outlier_std = 0.5;
  double outlier_fraction = 0.2;
  std::uint64_t iterations = 1000;
  std::size_t dimension = 1;
  std::size_t observations_per_frame = 2;
  std::uint64_t seed = 0;

  void validate() const;

  // inlier N(0, 0.1), outliers N(outlier_mean, 0.5), 20% outliers,
  // 2 observations per frame, 1000 frames.
  static GaussianStreamSpec standard(double outlier_mean, std::uint64_t seed = 0);
};

// Frames 0..iterations-1; every observation carries kInlierLabel or
// kOutlierLabel.
std::vector<Frame> gen_gaussian_stream(const GaussianStreamSpec& spec);

struct ScatterPoint {
  double value = 0.0;  // first descriptor component
  double eligibility = 0.0;
  IdentityId identity;
};

struct StabilityReport {
  // Over every memory element (mass equals the memory size).
  Histogram histogram;
  std::vector<ScatterPoint> scatter;
  // Identity holding the most elements; informational only.
  IdentityId dominant_identity;
  std::size_t dominant_count = 0;
  // The learned subject model: elements of every identity whose assigned
  // observations were mostly inliers over the run.
  std::vector<IdentityId> subject_identities;
  std::size_t subject_count = 0;
  double learned_mode = 0.0;
  double learned_mean = 0.0;
  // 1.4826 * MAD, a consistent estimate of the std under normality.
  double learned_std = 0.0;
  double learned_sample_std = 0.0;
  double inlier_mean = 0.0;
  double inlier_std = 0.0;
  std::size_t memory_size = 0;
};

// Per label, how often each identity was assigned during one pass.
using LabelTally = std::map<std::string, std::map<IdentityId, std::size_t>>;

// Identities assigned to `label` strictly more often than to any other label.
std::vector<IdentityId> majority_identities(const LabelTally& tally, const std::string& label);

StabilityReport summarize_stability(const Memory& memory, const GaussianStreamSpec& spec,
                                    const LabelTally& tally, std::size_t histogram_bins = 40);

// Engine settings used by both benchmarks: defaults, except that eligibility
// pruning is effectively disabled so staleness alone bounds the memory.
Config benchmark_config(std::size_t dimension);

StabilityReport stability_experiment(const GaussianStreamSpec& spec, const Config& config,
                                     std::size_t histogram_bins = 40);

// Peak of a Gaussian kernel density estimate (Silverman bandwidth) over a
// fixed 1024-point grid.
double kde_mode(std::span<const double> values);

// Labeled images for the multipass precision/recall experiment. The target
// subject is seen from several views placed along a chain; distractor
// subjects sit at least `separation` target stds away from every view.
struct PrBenchmarkSpec {
  std::size_t dimension = 8;
  double target_std = 0.1;
  std::size_t views = 4;
  double view_step = 0.3;
  double separation = 8.0;
  std::size_t distractor_identities = 12;
  std::size_t warmup_frames = 48;
  std::size_t subset_a_frames = 400;
  std::size_t subset_b_frames = 400;
  double target_frame_fraction = 0.5;
  std::uint64_t seed = 7;

  void validate() const;
};

struct PrBenchmark {
  // Target seen only in view 0, standing in for pre-training on video.
  std::vector<Frame> warmup;
  std::vector<Frame> subset_a;
  std::vector<Frame> subset_b;
};

PrBenchmark make_pr_benchmark(const PrBenchmarkSpec& spec);

// Feeds `frames` once, re-indexed to follow the engine's last frame.
LabelTally train_pass(Engine& engine, const std::vector<Frame>& frames);

// Runs `passes` consecutive passes of train_pass. passes must be >= 1.
std::vector<LabelTally> multipass_train(Engine& engine, const std::vector<Frame>& subset_a,
                                        unsigned passes);

std::optional<IdentityId> dominant_identity(const LabelTally& tally, const std::string& label);

struct PrCurvePoint {
  unsigned pass_number = 0;
  double precision = 1.0;
  double recall = 0.0;
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  // Set when nothing was predicted positive; precision is then reported as 1.
  bool no_predictions = true;
};

// Read-only: classifies every subset-B frame against the current memory and
// scores "assigned identity == target" against "label == target_label".
PrCurvePoint pr_eval(const Engine& engine, const std::vector<Frame>& subset_b,
                     std::optional<IdentityId> target,
                     const std::string& target_label = kTargetLabel);

// Alternates one training pass over A with one evaluation over B. The target
// identity is the one most often given to target-labeled items in that pass.
std::vector<PrCurvePoint> multipass_pr(Engine& engine, const std::vector<Frame>& subset_a,
                                       const std::vector<Frame>& subset_b, unsigned passes,
                                       const std::string& target_label = kTargetLabel);

}  // namespace idmem::synth

#endif  // IDMEM_SYNTH_HPP
