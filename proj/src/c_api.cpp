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

#include "idmem/idmem.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "idmem/engine.hpp"
#include "idmem/synth.hpp"
#include "json.hpp"

using nlohmann::json;

struct idmem_engine {
  idmem::Engine engine;
};

struct idmem_report {
  idmem::FrameReport report;
};

struct idmem_dataset {
  std::size_t dimension = 0;
  std::vector<idmem::Frame> frames;
  // Flattened observation rows per frame, kept in sync with `frames`.
  std::vector<std::vector<double>> rows;
};

namespace {

thread_local std::string g_last_error;

idmem_status fail(idmem_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

idmem_status to_status(idmem::ErrorCode code) {
  switch (code) {
    case idmem::ErrorCode::kConfig: return IDMEM_ERR_CONFIG;
    case idmem::ErrorCode::kDimension: return IDMEM_ERR_DIMENSION;
    case idmem::ErrorCode::kStreamOrder: return IDMEM_ERR_STREAM_ORDER;
    case idmem::ErrorCode::kInsufficientPoints: return IDMEM_ERR_INSUFFICIENT_POINTS;
    case idmem::ErrorCode::kInvalidArgument: return IDMEM_ERR_INVALID_ARGUMENT;
    case idmem::ErrorCode::kSnapshot: return IDMEM_ERR_SNAPSHOT;
    case idmem::ErrorCode::kIo: return IDMEM_ERR_IO;
  }
  return IDMEM_ERR_INTERNAL;
}

// Runs `fn`, translating exceptions into status codes.
template <typename Fn>
idmem_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return IDMEM_OK;
  } catch (const idmem::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(IDMEM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(IDMEM_ERR_INTERNAL, e.what());
  }
}

#define IDMEM_REQUIRE(ptr)                                            \
  do {                                                                \
    if ((ptr) == nullptr) return fail(IDMEM_ERR_NULL_POINTER, #ptr " is null"); \
  } while (0)

idmem::Config from_c(const idmem_config& c) {
  idmem::Config cfg;
  cfg.rho_bar = c.rho_bar;
  cfg.e_bar = c.e_bar;
  cfg.alpha = c.alpha;
  cfg.max_stale = c.max_stale;
  cfg.dimension = c.dimension;
  if (c.has_abs_gate != 0) cfg.abs_gate = c.abs_gate;
  cfg.normalize = c.normalize != 0;
  cfg.seed = c.seed;
  return cfg;
}

void to_c(const idmem::Config& cfg, idmem_config* out) {
  out->rho_bar = cfg.rho_bar;
  out->e_bar = cfg.e_bar;
  out->alpha = cfg.alpha;
  out->max_stale = cfg.max_stale;
  out->dimension = cfg.dimension;
  out->has_abs_gate = cfg.abs_gate ? 1 : 0;
  out->abs_gate = cfg.abs_gate.value_or(0.0);
  out->normalize = cfg.normalize ? 1 : 0;
  out->seed = cfg.seed;
}

std::vector<idmem::Descriptor> rows_to_descriptors(const double* data, std::size_t n,
                                                   std::size_t dim) {
  if (n > 0 && data == nullptr) {
    throw idmem::Error(idmem::ErrorCode::kInvalidArgument, "observations is null");
  }
  std::vector<idmem::Descriptor> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.emplace_back(std::vector<double>(data + k * dim, data + (k + 1) * dim));
  }
  return out;
}

char* dup_string(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

json histogram_json(const idmem::Histogram& h) {
  return {{"edges", h.edges}, {"counts", h.counts}, {"below", h.below}, {"above", h.above}};
}

json stats_json(const idmem::Memory& memory) {
  const auto s = idmem::stats(memory);
  json ids = json::array();
  for (const auto& [id, n] : s.identity_counts) ids.push_back({{"identity", id.value}, {"elements", n}});
  return {{"elements", s.element_count},
          {"frame_counter", s.frame_counter},
          {"started", memory.started},
          {"next_identity", s.next_identity.value},
          {"identities", ids},
          {"eligibility_histogram", histogram_json(s.eligibility)},
          {"age_histogram", histogram_json(s.age)}};
}

json report_json(const idmem::FrameReport& r) {
  json assignments = json::array();
  for (const auto& a : r.assignments) {
    json j{{"identity", a.identity.value}, {"new", a.is_new}};
    if (!a.is_new) {
      j["support"] = a.memory_index;
      j["distance"] = a.distance;
    }
    assignments.push_back(std::move(j));
  }
  json decay = json::array();
  for (const auto& d : r.decay_events) {
    decay.push_back({{"index", d.memory_index},
                     {"eta", d.eta},
                     {"before", d.eligibility_before},
                     {"after", d.eligibility_after}});
  }
  json new_ids = json::array();
  for (const auto& id : r.new_identities) new_ids.push_back(id.value);
  json conflicts = json::array();
  for (const auto& c : r.conflicts) {
    json comp = json::array();
    for (const auto& [id, d] : c.competitors) comp.push_back({{"identity", id.value}, {"distance", d}});
    conflicts.push_back({{"observation", c.observation}, {"competitors", comp}});
  }
  return {{"frame", r.frame_index},
          {"assignments", assignments},
          {"new_identities", new_ids},
          {"decay", decay},
          {"pruned_eligibility", r.prune_report.removed_by_eligibility},
          {"pruned_stale", r.prune_report.removed_by_staleness},
          {"size_before", r.memory_size_before},
          {"size_after", r.memory_size_after},
          {"conflicts", conflicts}};
}

idmem::synth::GaussianStreamSpec from_c(const idmem_stability_spec& c) {
  idmem::synth::GaussianStreamSpec s;
  s.inlier_mean = c.inlier_mean;
  s.inlier_std = c.inlier_std;
  s.outlier_mean = c.outlier_mean;
  s.outlier_std = c.outlier_std;
  s.outlier_fraction = c.outlier_fraction;
  s.iterations = c.iterations;
  s.dimension = c.dimension;
  s.observations_per_frame = c.observations_per_frame;
  s.seed = c.seed;
  return s;
}

idmem::synth::PrBenchmarkSpec from_c(const idmem_pr_spec& c) {
  idmem::synth::PrBenchmarkSpec s;
  s.dimension = c.dimension;
  s.target_std = c.target_std;
  s.views = c.views;
  s.view_step = c.view_step;
  s.separation = c.separation;
  s.distractor_identities = c.distractor_identities;
  s.warmup_frames = c.warmup_frames;
  s.subset_a_frames = c.subset_a_frames;
  s.subset_b_frames = c.subset_b_frames;
  s.target_frame_fraction = c.target_frame_fraction;
  s.seed = c.seed;
  return s;
}

std::unique_ptr<idmem_dataset> wrap_frames(std::size_t dim, std::vector<idmem::Frame> frames) {
  auto ds = std::make_unique<idmem_dataset>(idmem_dataset{dim, std::move(frames), {}});
  ds->rows.reserve(ds->frames.size());
  for (const auto& f : ds->frames) {
    std::vector<double> flat;
    flat.reserve(f.observations.size() * dim);
    for (const auto& o : f.observations) flat.insert(flat.end(), o.values().begin(), o.values().end());
    ds->rows.push_back(std::move(flat));
  }
  return ds;
}

}  // namespace

extern "C" {

const char* idmem_version(void) { return "1.0.0"; }

const char* idmem_status_name(idmem_status status) {
  switch (status) {
    case IDMEM_OK: return "ok";
    case IDMEM_ERR_CONFIG: return "config";
    case IDMEM_ERR_DIMENSION: return "dimension";
    case IDMEM_ERR_STREAM_ORDER: return "stream_order";
    case IDMEM_ERR_INSUFFICIENT_POINTS: return "insufficient_points";
    case IDMEM_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case IDMEM_ERR_SNAPSHOT: return "snapshot";
    case IDMEM_ERR_IO: return "io";
    case IDMEM_ERR_NULL_POINTER: return "null_pointer";
    case IDMEM_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* idmem_last_error(void) { return g_last_error.c_str(); }

void idmem_string_free(char* s) { std::free(s); }
void idmem_bytes_free(uint8_t* bytes) { std::free(bytes); }

void idmem_config_default(idmem_config* config) {
  if (config != nullptr) to_c(idmem::Config{}, config);
}

idmem_status idmem_config_validate(const idmem_config* config) {
  IDMEM_REQUIRE(config);
  return guarded([&] { from_c(*config).validate(); });
}

void idmem_config_benchmark(idmem_config* config, size_t dimension) {
  if (config != nullptr) to_c(idmem::synth::benchmark_config(dimension), config);
}

idmem_status idmem_engine_create(const idmem_config* config, idmem_engine** out) {
  IDMEM_REQUIRE(config);
  IDMEM_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    auto cfg = from_c(*config);
    cfg.validate();
    *out = new idmem_engine{idmem::Engine(std::move(cfg))};
  });
}

idmem_status idmem_engine_restore(const idmem_config* config, const uint8_t* bytes, size_t size,
                                  idmem_engine** out) {
  IDMEM_REQUIRE(config);
  IDMEM_REQUIRE(bytes);
  IDMEM_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    auto cfg = from_c(*config);
    auto memory = idmem::restore({bytes, size}, cfg);
    *out = new idmem_engine{idmem::Engine(std::move(cfg), std::move(memory))};
  });
}

void idmem_engine_destroy(idmem_engine* engine) { delete engine; }

idmem_status idmem_engine_set_workers(idmem_engine* engine, unsigned workers) {
  IDMEM_REQUIRE(engine);
  engine->engine.set_workers(workers);
  return IDMEM_OK;
}

idmem_status idmem_engine_observe(idmem_engine* engine, uint64_t frame_index,
                                  const double* observations, size_t n_obs, idmem_report** out) {
  IDMEM_REQUIRE(engine);
  if (out != nullptr) *out = nullptr;
  return guarded([&] {
    idmem::Frame frame;
    frame.index = frame_index;
    frame.observations =
        rows_to_descriptors(observations, n_obs, engine->engine.config().dimension);
    auto report = engine->engine.observe(frame);
    if (out != nullptr) *out = new idmem_report{std::move(report)};
  });
}

idmem_status idmem_engine_classify(const idmem_engine* engine, const double* observations,
                                   size_t n_obs, uint64_t* identities, uint8_t* matched) {
  IDMEM_REQUIRE(engine);
  if (n_obs > 0) {
    IDMEM_REQUIRE(identities);
    IDMEM_REQUIRE(matched);
  }
  return guarded([&] {
    idmem::Frame frame;
    frame.observations =
        rows_to_descriptors(observations, n_obs, engine->engine.config().dimension);
    const auto result = engine->engine.classify(frame);
    for (std::size_t k = 0; k < n_obs; ++k) {
      const auto& a = result.assignments[k];
      matched[k] = a ? 1 : 0;
      identities[k] = a ? a->identity.value : 0;
    }
  });
}

size_t idmem_engine_memory_size(const idmem_engine* engine) {
  return engine == nullptr ? 0 : engine->engine.memory().size();
}

uint64_t idmem_engine_frame_counter(const idmem_engine* engine) {
  return engine == nullptr ? 0 : engine->engine.memory().frame_counter;
}

uint64_t idmem_engine_next_identity(const idmem_engine* engine) {
  return engine == nullptr ? 0 : engine->engine.memory().next_identity.value;
}

int idmem_engine_started(const idmem_engine* engine) {
  return engine != nullptr && engine->engine.memory().started ? 1 : 0;
}

idmem_status idmem_engine_snapshot(const idmem_engine* engine, uint8_t** bytes, size_t* size) {
  IDMEM_REQUIRE(engine);
  IDMEM_REQUIRE(bytes);
  IDMEM_REQUIRE(size);
  *bytes = nullptr;
  *size = 0;
  return guarded([&] {
    const auto buf = idmem::snapshot(engine->engine.memory(), engine->engine.config());
    auto* out = static_cast<uint8_t*>(std::malloc(buf.size()));
    if (out == nullptr) throw std::bad_alloc();
    std::memcpy(out, buf.data(), buf.size());
    *bytes = out;
    *size = buf.size();
  });
}

idmem_status idmem_engine_stats_json(const idmem_engine* engine, char** json_out) {
  IDMEM_REQUIRE(engine);
  IDMEM_REQUIRE(json_out);
  *json_out = nullptr;
  return guarded([&] { *json_out = dup_string(stats_json(engine->engine.memory()).dump()); });
}

idmem_status idmem_snapshot_inspect_json(const uint8_t* bytes, size_t size, char** json_out) {
  IDMEM_REQUIRE(bytes);
  IDMEM_REQUIRE(json_out);
  *json_out = nullptr;
  return guarded([&] {
    const auto contents = idmem::read_snapshot({bytes, size});
    json j{{"version", contents.version},
           {"dimension", contents.dimension},
           {"config_digest", contents.config_digest},
           {"stats", stats_json(contents.memory)}};
    *json_out = dup_string(j.dump());
  });
}

void idmem_report_destroy(idmem_report* report) { delete report; }

uint64_t idmem_report_frame_index(const idmem_report* report) {
  return report == nullptr ? 0 : report->report.frame_index;
}

size_t idmem_report_observation_count(const idmem_report* report) {
  return report == nullptr ? 0 : report->report.assignments.size();
}

idmem_status idmem_report_assignment(const idmem_report* report, size_t k, uint64_t* identity,
                                     int* is_new) {
  IDMEM_REQUIRE(report);
  IDMEM_REQUIRE(identity);
  IDMEM_REQUIRE(is_new);
  if (k >= report->report.assignments.size()) {
    return fail(IDMEM_ERR_INVALID_ARGUMENT, "observation index out of range");
  }
  *identity = report->report.assignments[k].identity.value;
  *is_new = report->report.assignments[k].is_new ? 1 : 0;
  return IDMEM_OK;
}

size_t idmem_report_memory_size_after(const idmem_report* report) {
  return report == nullptr ? 0 : report->report.memory_size_after;
}

idmem_status idmem_report_json(const idmem_report* report, char** json_out) {
  IDMEM_REQUIRE(report);
  IDMEM_REQUIRE(json_out);
  *json_out = nullptr;
  return guarded([&] { *json_out = dup_string(report_json(report->report).dump()); });
}

idmem_status idmem_dataset_create(size_t dimension, idmem_dataset** out) {
  IDMEM_REQUIRE(out);
  *out = nullptr;
  if (dimension == 0) return fail(IDMEM_ERR_INVALID_ARGUMENT, "dimension must be positive");
  return guarded([&] { *out = new idmem_dataset{dimension, {}, {}}; });
}

void idmem_dataset_destroy(idmem_dataset* dataset) { delete dataset; }

idmem_status idmem_dataset_add_frame(idmem_dataset* dataset, uint64_t frame_index,
                                     const double* observations, size_t n_obs,
                                     const char* const* labels) {
  IDMEM_REQUIRE(dataset);
  return guarded([&] {
    idmem::Frame frame;
    frame.index = frame_index;
    frame.observations = rows_to_descriptors(observations, n_obs, dataset->dimension);
    if (labels != nullptr) {
      frame.labels.emplace();
      for (std::size_t k = 0; k < n_obs; ++k) {
        if (labels[k] == nullptr) {
          throw idmem::Error(idmem::ErrorCode::kInvalidArgument, "label is null");
        }
        frame.labels->emplace_back(labels[k]);
      }
    }
    idmem::check_frame(frame, dataset->dimension);
    std::vector<double> flat;
    if (n_obs > 0) flat.assign(observations, observations + n_obs * dataset->dimension);
    dataset->frames.push_back(std::move(frame));
    dataset->rows.push_back(std::move(flat));
  });
}

size_t idmem_dataset_dimension(const idmem_dataset* dataset) {
  return dataset == nullptr ? 0 : dataset->dimension;
}

size_t idmem_dataset_frame_count(const idmem_dataset* dataset) {
  return dataset == nullptr ? 0 : dataset->frames.size();
}

idmem_status idmem_dataset_frame(const idmem_dataset* dataset, size_t i, uint64_t* frame_index,
                                 size_t* n_obs, const double** observations, int* labeled) {
  IDMEM_REQUIRE(dataset);
  if (i >= dataset->frames.size()) return fail(IDMEM_ERR_INVALID_ARGUMENT, "frame out of range");
  const auto& f = dataset->frames[i];
  if (frame_index != nullptr) *frame_index = f.index;
  if (n_obs != nullptr) *n_obs = f.observations.size();
  if (observations != nullptr) *observations = dataset->rows[i].data();
  if (labeled != nullptr) *labeled = f.labels ? 1 : 0;
  return IDMEM_OK;
}

const char* idmem_dataset_label(const idmem_dataset* dataset, size_t i, size_t k) {
  if (dataset == nullptr || i >= dataset->frames.size()) return nullptr;
  const auto& labels = dataset->frames[i].labels;
  if (!labels || k >= labels->size()) return nullptr;
  return (*labels)[k].c_str();
}

void idmem_stability_spec_standard(idmem_stability_spec* spec, double outlier_mean,
                                   uint64_t seed) {
  if (spec == nullptr) return;
  const auto s = idmem::synth::GaussianStreamSpec::standard(outlier_mean, seed);
  spec->inlier_mean = s.inlier_mean;
  spec->inlier_std = s.inlier_std;
  spec->outlier_mean = s.outlier_mean;
  spec->outlier_std = s.outlier_std;
  spec->outlier_fraction = s.outlier_fraction;
  spec->iterations = s.iterations;
  spec->dimension = s.dimension;
  spec->observations_per_frame = s.observations_per_frame;
  spec->seed = s.seed;
}

idmem_status idmem_stability_stream(const idmem_stability_spec* spec, idmem_dataset** out) {
  IDMEM_REQUIRE(spec);
  IDMEM_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    const auto s = from_c(*spec);
    *out = wrap_frames(s.dimension, idmem::synth::gen_gaussian_stream(s)).release();
  });
}

idmem_status idmem_stability_run_json(const idmem_stability_spec* spec,
                                      const idmem_config* config, size_t bins, char** json_out) {
  IDMEM_REQUIRE(spec);
  IDMEM_REQUIRE(config);
  IDMEM_REQUIRE(json_out);
  *json_out = nullptr;
  return guarded([&] {
    const auto r = idmem::synth::stability_experiment(from_c(*spec), from_c(*config), bins);
    json scatter = json::array();
    for (const auto& p : r.scatter) {
      scatter.push_back({{"value", p.value}, {"eligibility", p.eligibility}, {"identity", p.identity.value}});
    }
    json subject = json::array();
    for (const auto& id : r.subject_identities) subject.push_back(id.value);
    json summary{{"memory_size", r.memory_size},
                 {"dominant_identity", r.dominant_identity.value},
                 {"dominant_count", r.dominant_count},
                 {"subject_identities", subject},
                 {"subject_elements", r.subject_count},
                 {"learned_mode", r.learned_mode},
                 {"learned_mean", r.learned_mean},
                 {"learned_std", r.learned_std},
                 {"learned_sample_std", r.learned_sample_std},
                 {"inlier_mean", r.inlier_mean},
                 {"inlier_std", r.inlier_std},
                 {"outlier_mean", spec->outlier_mean},
                 {"outlier_std", spec->outlier_std}};
    json j{{"histogram", histogram_json(r.histogram)}, {"scatter", scatter}, {"summary", summary}};
    *json_out = dup_string(j.dump());
  });
}

void idmem_pr_spec_default(idmem_pr_spec* spec) {
  if (spec == nullptr) return;
  const idmem::synth::PrBenchmarkSpec s;
  spec->dimension = s.dimension;
  spec->target_std = s.target_std;
  spec->views = s.views;
  spec->view_step = s.view_step;
  spec->separation = s.separation;
  spec->distractor_identities = s.distractor_identities;
  spec->warmup_frames = s.warmup_frames;
  spec->subset_a_frames = s.subset_a_frames;
  spec->subset_b_frames = s.subset_b_frames;
  spec->target_frame_fraction = s.target_frame_fraction;
  spec->seed = s.seed;
}

idmem_status idmem_pr_generate(const idmem_pr_spec* spec, idmem_dataset** warmup,
                               idmem_dataset** subset_a, idmem_dataset** subset_b) {
  IDMEM_REQUIRE(spec);
  IDMEM_REQUIRE(warmup);
  IDMEM_REQUIRE(subset_a);
  IDMEM_REQUIRE(subset_b);
  *warmup = *subset_a = *subset_b = nullptr;
  return guarded([&] {
    const auto s = from_c(*spec);
    auto bench = idmem::synth::make_pr_benchmark(s);
    auto w = wrap_frames(s.dimension, std::move(bench.warmup));
    auto a = wrap_frames(s.dimension, std::move(bench.subset_a));
    auto b = wrap_frames(s.dimension, std::move(bench.subset_b));
    *warmup = w.release();
    *subset_a = a.release();
    *subset_b = b.release();
  });
}

idmem_status idmem_train_pass(idmem_engine* engine, const idmem_dataset* frames) {
  IDMEM_REQUIRE(engine);
  IDMEM_REQUIRE(frames);
  return guarded([&] { idmem::synth::train_pass(engine->engine, frames->frames); });
}

idmem_status idmem_multipass_pr_json(idmem_engine* engine, const idmem_dataset* subset_a,
                                     const idmem_dataset* subset_b, unsigned passes,
                                     const char* target_label, char** json_out) {
  IDMEM_REQUIRE(engine);
  IDMEM_REQUIRE(subset_a);
  IDMEM_REQUIRE(subset_b);
  IDMEM_REQUIRE(json_out);
  *json_out = nullptr;
  return guarded([&] {
    const std::string label = target_label ? target_label : idmem::synth::kTargetLabel;
    const auto curve = idmem::synth::multipass_pr(engine->engine, subset_a->frames,
                                                  subset_b->frames, passes, label);
    json j = json::array();
    for (const auto& p : curve) {
      j.push_back({{"pass", p.pass_number},
                   {"precision", p.precision},
                   {"recall", p.recall},
                   {"tp", p.true_positives},
                   {"fp", p.false_positives},
                   {"fn", p.false_negatives},
                   {"no_predictions", p.no_predictions}});
    }
    *json_out = dup_string(j.dump());
  });
}

}  // extern "C"
