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

#include "idmem/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "idmem/knn.hpp"

namespace idmem::synth {

namespace {

using Rng = std::mt19937_64;

std::vector<double> gaussian_point(Rng& rng, std::span<const double> center, double std) {
  std::normal_distribution<double> noise(0.0, std);
  std::vector<double> v(center.begin(), center.end());
  for (double& x : v) x += noise(rng);
  return v;
}

std::vector<double> random_unit(Rng& rng, std::size_t dim) {
  std::normal_distribution<double> n01(0.0, 1.0);
  std::vector<double> u(dim);
  double norm = 0.0;
  do {
    norm = 0.0;
    for (double& x : u) {
      x = n01(rng);
      norm += x * x;
    }
  } while (norm == 0.0);
  norm = std::sqrt(norm);
  for (double& x : u) x /= norm;
  return u;
}

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

MeanStd mean_std(std::span<const double> values) {
  MeanStd out;
  if (values.empty()) return out;
  for (double v : values) out.mean += v;
  out.mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.std = values.size() > 1 ? std::sqrt(ss / static_cast<double>(values.size() - 1)) : 0.0;
  return out;
}

double median(std::vector<double> v) {
  const std::size_t n = v.size();
  std::nth_element(v.begin(), v.begin() + n / 2, v.end());
  const double upper = v[n / 2];
  if (n % 2 == 1) return upper;
  return 0.5 * (upper + *std::max_element(v.begin(), v.begin() + n / 2));
}

double mad(std::span<const double> values) {
  const double m = median({values.begin(), values.end()});
  std::vector<double> dev;
  dev.reserve(values.size());
  for (double v : values) dev.push_back(std::abs(v - m));
  return median(std::move(dev));
}

}  // namespace

void GaussianStreamSpec::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::kInvalidArgument, msg); };
  if (!(inlier_std > 0.0)) fail("inlier_std must be positive");
  if (!(outlier_std > 0.0)) fail("outlier_std must be positive");
  if (!(outlier_fraction >= 0.0 && outlier_fraction < 1.0)) {
    fail("outlier_fraction must lie in [0, 1)");
  }
  if (iterations == 0) fail("iterations must be positive");
  if (dimension == 0) fail("dimension must be positive");
  if (observations_per_frame < 2) fail("observations_per_frame must be at least 2");
  if (!std::isfinite(inlier_mean) || !std::isfinite(outlier_mean)) fail("means must be finite");
}

GaussianStreamSpec GaussianStreamSpec::standard(double outlier_mean, std::uint64_t seed) {
  GaussianStreamSpec spec;
  spec.outlier_mean = outlier_mean;
  spec.seed = seed;
  return spec;
}

std::vector<Frame> gen_gaussian_stream(const GaussianStreamSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  std::bernoulli_distribution is_outlier(spec.outlier_fraction);
  const std::vector<double> inlier_center(spec.dimension, spec.inlier_mean);
  const std::vector<double> outlier_center(spec.dimension, spec.outlier_mean);

  std::vector<Frame> frames(spec.iterations);
  for (std::uint64_t t = 0; t < spec.iterations; ++t) {
    Frame& f = frames[t];
    f.index = t;
    f.labels.emplace();
    for (std::size_t k = 0; k < spec.observations_per_frame; ++k) {
      const bool outlier = is_outlier(rng);
      f.observations.emplace_back(outlier ? gaussian_point(rng, outlier_center, spec.outlier_std)
                                          : gaussian_point(rng, inlier_center, spec.inlier_std));
      f.labels->push_back(outlier ? kOutlierLabel : kInlierLabel);
    }
  }
  return frames;
}

double kde_mode(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::kInvalidArgument, "mode of an empty sample");
  if (values.size() == 1) return values.front();
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (lo == hi) return lo;

  const auto ms = mean_std(values);
  const double n = static_cast<double>(values.size());
  double bandwidth = 1.06 * ms.std * std::pow(n, -0.2);
  if (!(bandwidth > 0.0)) bandwidth = (hi - lo) / 10.0;

  constexpr std::size_t kGrid = 1024;
  double best_x = lo;
  double best_density = -1.0;
  for (std::size_t g = 0; g < kGrid; ++g) {
    const double x = lo + (hi - lo) * static_cast<double>(g) / static_cast<double>(kGrid - 1);
    double density = 0.0;
    for (double v : values) {
      const double z = (x - v) / bandwidth;
      density += std::exp(-0.5 * z * z);
    }
    if (density > best_density) {
      best_density = density;
      best_x = x;
    }
  }
  return best_x;
}

std::vector<IdentityId> majority_identities(const LabelTally& tally, const std::string& label) {
  std::map<IdentityId, std::pair<std::size_t, std::size_t>> votes;  // (label, other)
  for (const auto& [l, ids] : tally) {
    for (const auto& [id, n] : ids) {
      auto& v = votes[id];
      (l == label ? v.first : v.second) += n;
    }
  }
  std::vector<IdentityId> out;
  for (const auto& [id, v] : votes) {
    if (v.first > v.second) out.push_back(id);
  }
  return out;
}

Config benchmark_config(std::size_t dimension) {
  Config cfg;
  cfg.dimension = dimension;
  cfg.e_bar = 1e-300;
  return cfg;
}

StabilityReport summarize_stability(const Memory& memory, const GaussianStreamSpec& spec,
                                    const LabelTally& tally, std::size_t histogram_bins) {
  if (histogram_bins == 0) throw Error(ErrorCode::kInvalidArgument, "histogram needs >= 1 bin");
  StabilityReport report;
  report.inlier_mean = spec.inlier_mean;
  report.inlier_std = spec.inlier_std;
  report.memory_size = memory.size();

  std::vector<double> all;
  all.reserve(memory.size());
  std::map<IdentityId, std::size_t> counts;
  for (const auto& el : memory.elements) {
    all.push_back(el.descriptor[0]);
    report.scatter.push_back({el.descriptor[0], el.eligibility, el.identity});
    ++counts[el.identity];
  }

  double lo = spec.inlier_mean - 4.0 * spec.inlier_std;
  double hi = spec.inlier_mean + 4.0 * spec.inlier_std;
  if (!all.empty()) {
    lo = std::min(lo, *std::min_element(all.begin(), all.end()));
    hi = std::max(hi, *std::max_element(all.begin(), all.end()));
  }
  std::vector<double> edges(histogram_bins + 1);
  for (std::size_t b = 0; b <= histogram_bins; ++b) {
    edges[b] = lo + (hi - lo) * static_cast<double>(b) / static_cast<double>(histogram_bins);
  }
  edges.back() = hi;
  report.histogram = make_histogram(all, std::move(edges));

  if (counts.empty()) return report;
  // Ties go to the lowest identity (std::map iterates in ascending order).
  auto dominant = counts.begin();
  for (auto it = counts.begin(); it != counts.end(); ++it) {
    if (it->second > dominant->second) dominant = it;
  }
  report.dominant_identity = dominant->first;
  report.dominant_count = dominant->second;

  report.subject_identities = majority_identities(tally, kInlierLabel);
  std::vector<double> own;
  for (const auto& el : memory.elements) {
    if (std::binary_search(report.subject_identities.begin(), report.subject_identities.end(),
                           el.identity)) {
      own.push_back(el.descriptor[0]);
    }
  }
  report.subject_count = own.size();
  if (own.empty()) return report;
  const auto ms = mean_std(own);
  report.learned_mean = ms.mean;
  report.learned_sample_std = ms.std;
  report.learned_std = 1.4826 * mad(own);
  report.learned_mode = kde_mode(own);
  return report;
}

StabilityReport stability_experiment(const GaussianStreamSpec& spec, const Config& config,
                                     std::size_t histogram_bins) {
  spec.validate();
  if (config.dimension != spec.dimension) {
    throw Error(ErrorCode::kDimension, "config dimension differs from the stream dimension");
  }
  Engine engine(config);
  const auto tally = train_pass(engine, gen_gaussian_stream(spec));
  return summarize_stability(engine.memory(), spec, tally, histogram_bins);
}

void PrBenchmarkSpec::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::kInvalidArgument, msg); };
  if (dimension == 0) fail("dimension must be positive");
  if (!(target_std > 0.0)) fail("target_std must be positive");
  if (views == 0) fail("views must be positive");
  if (!(view_step >= 0.0)) fail("view_step must be non-negative");
  if (!(separation > 0.0)) fail("separation must be positive");
  if (distractor_identities < 2) fail("need at least 2 distractor identities");
  if (!(target_frame_fraction >= 0.0 && target_frame_fraction <= 1.0)) {
    fail("target_frame_fraction must lie in [0, 1]");
  }
}

PrBenchmark make_pr_benchmark(const PrBenchmarkSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  const std::size_t dim = spec.dimension;

  std::vector<std::vector<double>> views{std::vector<double>(dim, 0.0)};
  while (views.size() < spec.views) {
    auto next = views.back();
    const auto u = random_unit(rng, dim);
    for (std::size_t i = 0; i < dim; ++i) next[i] += spec.view_step * u[i];
    views.push_back(std::move(next));
  }

  // Distractor centres: a random view pushed out along a random direction,
  // kept only if every view and every other distractor is at least
  // `separation` stds away.
  const double min_gap = spec.separation * spec.target_std;
  std::uniform_int_distribution<std::size_t> pick_view(0, views.size() - 1);
  std::uniform_real_distribution<double> extra(0.0, 1.0);
  std::vector<std::vector<double>> distractors;
  while (distractors.size() < spec.distractor_identities) {
    auto c = views[pick_view(rng)];
    const auto u = random_unit(rng, dim);
    const double r = min_gap * (1.0 + extra(rng));
    for (std::size_t i = 0; i < dim; ++i) c[i] += r * u[i];
    auto far = [&](const auto& v) { return knn::distance(v, c) >= min_gap; };
    const bool clear = std::all_of(views.begin(), views.end(), far) &&
                       std::all_of(distractors.begin(), distractors.end(), far);
    if (clear) distractors.push_back(std::move(c));
  }

  std::uniform_int_distribution<std::size_t> pick_distractor(0, distractors.size() - 1);
  std::bernoulli_distribution has_target(spec.target_frame_fraction);
  std::bernoulli_distribution swap_order(0.5);

  auto make_frame = [&](std::uint64_t index, std::optional<std::size_t> target_view,
                        std::optional<std::size_t> forced_distractor = std::nullopt) {
    Frame f;
    f.index = index;
    f.labels.emplace();
    const std::size_t first = pick_distractor(rng);
    if (target_view) {
      f.observations.emplace_back(gaussian_point(rng, views[*target_view], spec.target_std));
      f.labels->push_back(kTargetLabel);
    } else {
      f.observations.emplace_back(gaussian_point(rng, distractors[first], spec.target_std));
      f.labels->push_back(kDistractorLabel + "-" + std::to_string(first));
    }
    std::size_t second = forced_distractor.value_or(pick_distractor(rng));
    while (!target_view && second == first) second = pick_distractor(rng);
    f.observations.emplace_back(gaussian_point(rng, distractors[second], spec.target_std));
    f.labels->push_back(kDistractorLabel + "-" + std::to_string(second));
    if (swap_order(rng)) {
      std::swap(f.observations[0], f.observations[1]);
      std::swap((*f.labels)[0], (*f.labels)[1]);
    }
    return f;
  };

  PrBenchmark out;
  // Every distractor is met next to the target during warm-up, so each one
  // owns an identity before it can appear without the target.
  for (std::size_t t = 0; t < spec.warmup_frames; ++t) {
    out.warmup.push_back(make_frame(t, std::size_t{0}, t % distractors.size()));
  }
  auto make_subset = [&](std::size_t n) {
    std::vector<Frame> frames;
    for (std::size_t t = 0; t < n; ++t) {
      std::optional<std::size_t> view;
      if (has_target(rng)) view = pick_view(rng);
      frames.push_back(make_frame(t, view));
    }
    return frames;
  };
  out.subset_a = make_subset(spec.subset_a_frames);
  out.subset_b = make_subset(spec.subset_b_frames);
  return out;
}

LabelTally train_pass(Engine& engine, const std::vector<Frame>& frames) {
  LabelTally tally;
  std::uint64_t next_index = engine.memory().started ? engine.memory().frame_counter + 1 : 0;
  for (const auto& source : frames) {
    Frame f = source;
    f.index = next_index++;
    const auto report = engine.observe(f);
    if (!f.labels) continue;
    for (std::size_t k = 0; k < report.assignments.size(); ++k) {
      ++tally[(*f.labels)[k]][report.assignments[k].identity];
    }
  }
  return tally;
}

std::vector<LabelTally> multipass_train(Engine& engine, const std::vector<Frame>& subset_a,
                                        unsigned passes) {
  if (passes == 0) throw Error(ErrorCode::kInvalidArgument, "passes must be >= 1");
  std::vector<LabelTally> out;
  out.reserve(passes);
  for (unsigned p = 0; p < passes; ++p) out.push_back(train_pass(engine, subset_a));
  return out;
}

std::optional<IdentityId> dominant_identity(const LabelTally& tally, const std::string& label) {
  const auto it = tally.find(label);
  if (it == tally.end() || it->second.empty()) return std::nullopt;
  auto best = it->second.begin();
  for (auto jt = it->second.begin(); jt != it->second.end(); ++jt) {
    if (jt->second > best->second) best = jt;
  }
  return best->first;
}

PrCurvePoint pr_eval(const Engine& engine, const std::vector<Frame>& subset_b,
                     std::optional<IdentityId> target, const std::string& target_label) {
  PrCurvePoint point;
  for (const auto& frame : subset_b) {
    if (!frame.labels) {
      throw Error(ErrorCode::kInvalidArgument,
                  "evaluation frame " + std::to_string(frame.index) + " has no labels");
    }
    const auto result = engine.classify(frame);
    for (std::size_t k = 0; k < frame.observations.size(); ++k) {
      const bool actual = (*frame.labels)[k] == target_label;
      const auto& a = result.assignments[k];
      const bool predicted = target && a && a->identity == *target;
      if (predicted && actual) ++point.true_positives;
      if (predicted && !actual) ++point.false_positives;
      if (!predicted && actual) ++point.false_negatives;
    }
  }
  const std::size_t predicted = point.true_positives + point.false_positives;
  const std::size_t actual = point.true_positives + point.false_negatives;
  point.no_predictions = predicted == 0;
  point.precision = predicted == 0 ? 1.0
                                   : static_cast<double>(point.true_positives) /
                                         static_cast<double>(predicted);
  point.recall = actual == 0 ? 0.0
                             : static_cast<double>(point.true_positives) /
                                   static_cast<double>(actual);
  return point;
}

std::vector<PrCurvePoint> multipass_pr(Engine& engine, const std::vector<Frame>& subset_a,
                                       const std::vector<Frame>& subset_b, unsigned passes,
                                       const std::string& target_label) {
  if (passes == 0) throw Error(ErrorCode::kInvalidArgument, "passes must be >= 1");
  std::vector<PrCurvePoint> curve;
  for (unsigned p = 1; p <= passes; ++p) {
    const auto tally = train_pass(engine, subset_a);
    auto point = pr_eval(engine, subset_b, dominant_identity(tally, target_label), target_label);
    point.pass_number = p;
    curve.push_back(point);
  }
  return curve;
}

}  // namespace idmem::synth
