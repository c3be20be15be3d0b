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

// Command-line front end. Talks to the engine only through the C API.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "idmem/idmem.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

constexpr const char* kStreamFormat = "idmem-stream";
constexpr int kStreamVersion = 1;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad flag values surface as usage errors; everything else is a data error.
void check(idmem_status status, const std::string& what) {
  if (status == IDMEM_OK) return;
  const std::string msg = what + ": " + idmem_last_error();
  if (status == IDMEM_ERR_CONFIG) throw UsageError(msg);
  throw DataError(msg);
}

struct EngineDeleter {
  void operator()(idmem_engine* e) const { idmem_engine_destroy(e); }
};
struct ReportDeleter {
  void operator()(idmem_report* r) const { idmem_report_destroy(r); }
};
struct DatasetDeleter {
  void operator()(idmem_dataset* d) const { idmem_dataset_destroy(d); }
};
using EnginePtr = std::unique_ptr<idmem_engine, EngineDeleter>;
using ReportPtr = std::unique_ptr<idmem_report, ReportDeleter>;
using DatasetPtr = std::unique_ptr<idmem_dataset, DatasetDeleter>;

std::string take_string(char* s) {
  std::string out(s);
  idmem_string_free(s);
  return out;
}

// ---- config flags ----

struct ConfigFlags {
  std::string profile;
  std::optional<double> rho_bar;
  std::optional<double> e_bar;
  std::optional<double> alpha;
  std::optional<std::uint64_t> max_stale;
  std::optional<double> abs_gate;
  bool normalize = false;
  std::uint64_t seed = 0;
  unsigned workers = 1;

  idmem_config build(std::size_t dimension) const {
    idmem_config c;
    if (profile == "benchmark") {
      idmem_config_benchmark(&c, dimension);
    } else {
      idmem_config_default(&c);
      c.dimension = dimension;
    }
    if (rho_bar) c.rho_bar = *rho_bar;
    if (e_bar) c.e_bar = *e_bar;
    if (alpha) c.alpha = *alpha;
    if (max_stale) c.max_stale = *max_stale;
    if (abs_gate) {
      c.has_abs_gate = 1;
      c.abs_gate = *abs_gate;
    }
    c.normalize = normalize ? 1 : 0;
    c.seed = seed;
    check(idmem_config_validate(&c), "invalid configuration");
    return c;
  }
};

void add_config_flags(CLI::App* app, ConfigFlags& f, const std::string& default_profile) {
  f.profile = default_profile;
  app->add_option("--profile", f.profile,
                  "Base settings: 'default' or 'benchmark' (eligibility pruning off)")
      ->check(CLI::IsMember({"default", "benchmark"}))
      ->envname("IDMEM_PROFILE")
      ->capture_default_str();
  app->add_option("--rho-bar", f.rho_bar, "Distance-ratio threshold in (0, 1] [0.8]")
      ->envname("IDMEM_RHO_BAR");
  app->add_option("--e-bar", f.e_bar, "Eligibility pruning threshold in (0, 1) [0.1]")
      ->envname("IDMEM_E_BAR");
  app->add_option("--alpha", f.alpha, "Decay exponent, >= 1 [1]")->envname("IDMEM_ALPHA");
  app->add_option("--max-stale", f.max_stale, "Frames an element may go unmatched [300]")
      ->envname("IDMEM_MAX_STALE");
  app->add_option("--abs-gate", f.abs_gate,
                  "Distance gate for single-observation frames (unset: no matching)")
      ->envname("IDMEM_ABS_GATE");
  app->add_flag("--normalize", f.normalize, "L2-normalize observations on ingest")
      ->envname("IDMEM_NORMALIZE");
  app->add_option("--seed", f.seed, "Seed recorded in the config")->envname("IDMEM_SEED");
  app->add_option("--workers", f.workers, "Search threads; never changes results")
      ->envname("IDMEM_WORKERS")
      ->capture_default_str();
}

// ---- files ----

std::vector<std::uint8_t> read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Writes through a temporary so a failed run never leaves a partial file.
void write_file(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + path);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw DataError("cannot write " + path);
  }
  fs::rename(tmp, path);
}

struct StreamFrame {
  std::uint64_t index = 0;
  std::size_t n_obs = 0;
  std::vector<double> rows;
  std::optional<std::vector<std::string>> labels;
};

// Reads a stream file: a header line, then one frame object per line. Calls
// `on_header` with the declared dimension before the first frame.
void read_stream(const std::string& path, const std::function<void(std::size_t)>& on_header,
                 const std::function<void(const StreamFrame&)>& on_frame) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::size_t> dim;
  std::optional<std::uint64_t> last_index;
  auto bad = [&](const std::string& why) {
    return DataError(path + ":" + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw bad(std::string("malformed line: ") + e.what());
    }
    try {
      if (!dim) {
        if (j.value("format", "") != kStreamFormat) throw bad("missing idmem-stream header");
        if (j.at("version").get<int>() != kStreamVersion) throw bad("unsupported stream version");
        const auto d = j.at("dimension").get<std::int64_t>();
        if (d <= 0) throw bad("dimension must be positive");
        dim = static_cast<std::size_t>(d);
        on_header(*dim);
        continue;
      }
      StreamFrame f;
      if (!j.at("frame").is_number_unsigned()) throw bad("frame must be a non-negative integer");
      f.index = j.at("frame").get<std::uint64_t>();
      if (last_index && f.index <= *last_index) {
        throw bad("frame " + std::to_string(f.index) + " does not follow " +
                  std::to_string(*last_index));
      }
      last_index = f.index;
      const auto& obs = j.at("observations");
      if (!obs.is_array()) throw bad("observations must be a list");
      f.n_obs = obs.size();
      f.rows.reserve(f.n_obs * *dim);
      for (const auto& o : obs) {
        if (!o.is_array() || o.size() != *dim) {
          throw bad("observation length differs from dimension " + std::to_string(*dim));
        }
        for (const auto& v : o) {
          if (!v.is_number()) throw bad("observation components must be numbers");
          f.rows.push_back(v.get<double>());
        }
      }
      if (j.contains("labels") && !j["labels"].is_null()) {
        f.labels = j["labels"].get<std::vector<std::string>>();
        if (f.labels->size() != f.n_obs) throw bad("label count differs from observation count");
      }
      on_frame(f);
    } catch (const json::exception& e) {
      throw bad(std::string("malformed line: ") + e.what());
    }
  }
  if (!dim) throw DataError(path + ": empty stream (no header line)");
}

DatasetPtr load_dataset(const std::string& path, bool* all_labeled = nullptr) {
  DatasetPtr ds;
  bool labeled = true;
  read_stream(
      path,
      [&](std::size_t dim) {
        idmem_dataset* raw = nullptr;
        check(idmem_dataset_create(dim, &raw), path);
        ds.reset(raw);
      },
      [&](const StreamFrame& f) {
        std::vector<const char*> labels;
        if (f.labels) {
          for (const auto& l : *f.labels) labels.push_back(l.c_str());
        } else {
          labeled = false;
        }
        check(idmem_dataset_add_frame(ds.get(), f.index, f.rows.data(), f.n_obs,
                                      f.labels ? labels.data() : nullptr),
              path + ": frame " + std::to_string(f.index));
      });
  if (all_labeled != nullptr) *all_labeled = labeled;
  return ds;
}

std::string dataset_to_stream(const idmem_dataset* ds) {
  const std::size_t dim = idmem_dataset_dimension(ds);
  std::ostringstream out;
  out << json{{"format", kStreamFormat}, {"version", kStreamVersion}, {"dimension", dim}}.dump()
      << '\n';
  for (std::size_t i = 0; i < idmem_dataset_frame_count(ds); ++i) {
    std::uint64_t index = 0;
    std::size_t n = 0;
    const double* rows = nullptr;
    int labeled = 0;
    check(idmem_dataset_frame(ds, i, &index, &n, &rows, &labeled), "dataset");
    json obs = json::array();
    for (std::size_t k = 0; k < n; ++k) obs.push_back(std::vector<double>(rows + k * dim, rows + (k + 1) * dim));
    json frame{{"frame", index}, {"observations", obs}};
    if (labeled != 0) {
      json labels = json::array();
      for (std::size_t k = 0; k < n; ++k) labels.push_back(idmem_dataset_label(ds, i, k));
      frame["labels"] = labels;
    }
    out << frame.dump() << '\n';
  }
  return out.str();
}

// Text sink that is either stdout or a file written at the end.
class Output {
 public:
  explicit Output(std::string path) : path_(std::move(path)) {}
  void line(const std::string& s) {
    if (path_.empty() || path_ == "-") {
      std::cout << s << '\n';
    } else {
      buf_ << s << '\n';
    }
  }
  void finish() {
    if (!path_.empty() && path_ != "-") write_file(path_, buf_.str());
    std::cout.flush();
  }

 private:
  std::string path_;
  std::ostringstream buf_;
};

// ---- commands ----

struct RunArgs {
  std::string stream;
  std::string snapshot_in;
  std::string snapshot_out;
  std::string report = "-";
  ConfigFlags config;
};

void cmd_run(const RunArgs& a) {
  a.config.build(1);  // reject bad flags before touching any file
  EnginePtr engine;
  Output out(a.report);
  read_stream(
      a.stream,
      [&](std::size_t dim) {
        const idmem_config cfg = a.config.build(dim);
        idmem_engine* raw = nullptr;
        if (a.snapshot_in.empty()) {
          check(idmem_engine_create(&cfg, &raw), "engine");
        } else {
          const auto bytes = read_bytes(a.snapshot_in);
          check(idmem_engine_restore(&cfg, bytes.data(), bytes.size(), &raw), a.snapshot_in);
        }
        engine.reset(raw);
        check(idmem_engine_set_workers(engine.get(), a.config.workers), "workers");
      },
      [&](const StreamFrame& f) {
        idmem_report* raw = nullptr;
        check(idmem_engine_observe(engine.get(), f.index, f.rows.data(), f.n_obs, &raw),
              a.stream + ": frame " + std::to_string(f.index));
        ReportPtr report(raw);
        char* js = nullptr;
        check(idmem_report_json(report.get(), &js), "report");
        out.line(take_string(js));
      });
  out.finish();
  if (!a.snapshot_out.empty()) {
    std::uint8_t* bytes = nullptr;
    std::size_t size = 0;
    check(idmem_engine_snapshot(engine.get(), &bytes, &size), "snapshot");
    std::string contents(reinterpret_cast<const char*>(bytes), size);
    idmem_bytes_free(bytes);
    write_file(a.snapshot_out, contents);
  }
}

struct SimulateArgs {
  std::string preset = "far";
  std::optional<double> outlier_mean;
  std::optional<double> outlier_std;
  std::optional<double> inlier_mean;
  std::optional<double> inlier_std;
  std::optional<double> outlier_fraction;
  std::uint64_t iterations = 1000;
  std::size_t dimension = 1;
  std::size_t observations_per_frame = 2;
  std::size_t bins = 40;
  std::uint64_t stream_seed = 0;
  std::string out_dir;
  ConfigFlags config;
};

struct Preset {
  const char* name;
  double outlier_mean;
};
constexpr Preset kPresets[] = {{"far", 3.0}, {"medium", 1.0}, {"overlapping", 0.5}};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void simulate_one(const SimulateArgs& a, double preset_mean, const fs::path& dir) {
  idmem_stability_spec spec;
  idmem_stability_spec_standard(&spec, a.outlier_mean.value_or(preset_mean), a.stream_seed);
  if (a.outlier_std) spec.outlier_std = *a.outlier_std;
  if (a.inlier_mean) spec.inlier_mean = *a.inlier_mean;
  if (a.inlier_std) spec.inlier_std = *a.inlier_std;
  if (a.outlier_fraction) spec.outlier_fraction = *a.outlier_fraction;
  spec.iterations = a.iterations;
  spec.dimension = a.dimension;
  spec.observations_per_frame = a.observations_per_frame;

  const idmem_config cfg = a.config.build(a.dimension);
  char* raw = nullptr;
  const idmem_status st = idmem_stability_run_json(&spec, &cfg, a.bins, &raw);
  if (st == IDMEM_ERR_INVALID_ARGUMENT) throw UsageError(idmem_last_error());
  check(st, "simulate");
  const json r = json::parse(take_string(raw));

  fs::create_directories(dir);
  json summary = r.at("summary");
  summary["iterations"] = spec.iterations;
  summary["outlier_fraction"] = spec.outlier_fraction;
  summary["seed"] = spec.seed;
  write_file((dir / "summary.json").string(), summary.dump(2) + "\n");

  std::ostringstream hist;
  hist << "lo,hi,count\n";
  const auto& h = r.at("histogram");
  const auto& edges = h.at("edges");
  for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
    hist << fmt(edges[b].get<double>()) << ',' << fmt(edges[b + 1].get<double>()) << ','
         << h.at("counts")[b].get<std::size_t>() << '\n';
  }
  write_file((dir / "histogram.csv").string(), hist.str());

  std::ostringstream scatter;
  scatter << "value,eligibility,identity\n";
  for (const auto& p : r.at("scatter")) {
    scatter << fmt(p.at("value").get<double>()) << ',' << fmt(p.at("eligibility").get<double>())
            << ',' << p.at("identity").get<std::uint64_t>() << '\n';
  }
  write_file((dir / "scatter.csv").string(), scatter.str());
  std::cout << dir.string() << ": mode " << fmt(summary.at("learned_mode").get<double>())
            << ", std " << fmt(summary.at("learned_std").get<double>()) << '\n';
}

void cmd_simulate(const SimulateArgs& a) {
  const fs::path root(a.out_dir);
  if (a.preset == "all") {
    for (const auto& p : kPresets) simulate_one(a, p.outlier_mean, root / p.name);
    return;
  }
  for (const auto& p : kPresets) {
    if (a.preset == p.name) return simulate_one(a, p.outlier_mean, root);
  }
  throw UsageError("unknown preset " + a.preset);
}

struct EvalArgs {
  std::string subset_a;
  std::string subset_b;
  std::string warmup;
  unsigned passes = 3;
  std::string target_label = "target";
  std::string out = "-";
  ConfigFlags config;
};

void cmd_eval(const EvalArgs& a) {
  if (a.passes == 0) throw UsageError("--passes must be at least 1");
  auto subset_a = load_dataset(a.subset_a);
  bool b_labeled = true;
  auto subset_b = load_dataset(a.subset_b, &b_labeled);
  if (!b_labeled) throw UsageError(a.subset_b + ": every evaluation frame needs labels");
  const std::size_t dim = idmem_dataset_dimension(subset_a.get());
  if (idmem_dataset_dimension(subset_b.get()) != dim) {
    throw DataError("subset A and subset B declare different dimensions");
  }

  const idmem_config cfg = a.config.build(dim);
  idmem_engine* raw = nullptr;
  check(idmem_engine_create(&cfg, &raw), "engine");
  EnginePtr engine(raw);
  check(idmem_engine_set_workers(engine.get(), a.config.workers), "workers");
  if (!a.warmup.empty()) {
    auto warmup = load_dataset(a.warmup);
    check(idmem_train_pass(engine.get(), warmup.get()), a.warmup);
  }
  char* js = nullptr;
  check(idmem_multipass_pr_json(engine.get(), subset_a.get(), subset_b.get(), a.passes,
                                a.target_label.c_str(), &js),
        "eval");
  Output out(a.out);
  for (const auto& point : json::parse(take_string(js))) out.line(point.dump());
  out.finish();
}

struct GenerateArgs {
  std::string kind = "pr";
  std::string out_dir;
  idmem_pr_spec pr{};
  double outlier_mean = 3.0;
  std::uint64_t iterations = 1000;
};

void cmd_generate(const GenerateArgs& a) {
  fs::create_directories(a.out_dir);
  const fs::path root(a.out_dir);
  if (a.kind == "pr") {
    idmem_dataset *w = nullptr, *sa = nullptr, *sb = nullptr;
    const idmem_status st = idmem_pr_generate(&a.pr, &w, &sa, &sb);
    if (st == IDMEM_ERR_INVALID_ARGUMENT) throw UsageError(idmem_last_error());
    check(st, "generate");
    DatasetPtr warmup(w), subset_a(sa), subset_b(sb);
    write_file((root / "warmup.jsonl").string(), dataset_to_stream(warmup.get()));
    write_file((root / "subset_a.jsonl").string(), dataset_to_stream(subset_a.get()));
    write_file((root / "subset_b.jsonl").string(), dataset_to_stream(subset_b.get()));
  } else {
    idmem_stability_spec spec;
    idmem_stability_spec_standard(&spec, a.outlier_mean, a.pr.seed);
    spec.iterations = a.iterations;
    idmem_dataset* raw = nullptr;
    const idmem_status st = idmem_stability_stream(&spec, &raw);
    if (st == IDMEM_ERR_INVALID_ARGUMENT) throw UsageError(idmem_last_error());
    check(st, "generate");
    DatasetPtr ds(raw);
    write_file((root / "stream.jsonl").string(), dataset_to_stream(ds.get()));
  }
}

void cmd_inspect(const std::string& path) {
  const auto bytes = read_bytes(path);
  char* raw = nullptr;
  check(idmem_snapshot_inspect_json(bytes.data(), bytes.size(), &raw), path);
  const json j = json::parse(take_string(raw));
  const auto& s = j.at("stats");
  std::cout << "snapshot       " << path << '\n'
            << "version        " << j.at("version") << '\n'
            << "dimension      " << j.at("dimension") << '\n'
            << "config digest  " << j.at("config_digest") << '\n'
            << "elements       " << s.at("elements") << '\n'
            << "frame counter  " << s.at("frame_counter") << (s.at("started") ? "" : " (not started)")
            << '\n'
            << "next identity  " << s.at("next_identity") << '\n'
            << "identities     " << s.at("identities").size() << '\n';
  for (const auto& id : s.at("identities")) {
    std::cout << "  id " << id.at("identity") << ": " << id.at("elements") << " elements\n";
  }
  auto print_hist = [](const char* title, const json& h) {
    std::cout << title << '\n';
    const auto& e = h.at("edges");
    for (std::size_t b = 0; b + 1 < e.size(); ++b) {
      std::cout << "  [" << e[b] << ", " << e[b + 1] << (b + 2 == e.size() ? "]" : ")") << "  "
                << h.at("counts")[b] << '\n';
    }
    if (h.at("above").get<std::size_t>() > 0) std::cout << "  above  " << h.at("above") << '\n';
  };
  print_hist("eligibility", s.at("eligibility_histogram"));
  print_hist("age (frames since insertion)", s.at("age_histogram"));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"idmem: streaming identity memory with reverse nearest neighbour matching"};
  app.set_version_flag("--version", idmem_version());
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Stream frames through the engine");
  run_cmd->add_option("stream", run.stream, "Stream file (JSON lines)")->required();
  run_cmd->add_option("--snapshot-in", run.snapshot_in, "Resume from this snapshot");
  run_cmd->add_option("--snapshot-out", run.snapshot_out, "Write the final state here");
  run_cmd->add_option("--report", run.report, "Per-frame report file ('-' for stdout)")
      ->capture_default_str();
  add_config_flags(run_cmd, run.config, "default");

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Stability experiment on a Gaussian stream");
  sim_cmd->add_option("--preset", sim.preset, "far | medium | overlapping | all")
      ->check(CLI::IsMember({"far", "medium", "overlapping", "all"}))
      ->capture_default_str();
  sim_cmd->add_option("--outlier-mean", sim.outlier_mean, "Overrides the preset outlier mean");
  sim_cmd->add_option("--outlier-std", sim.outlier_std, "Outlier std [0.5]");
  sim_cmd->add_option("--inlier-mean", sim.inlier_mean, "Inlier mean [0]");
  sim_cmd->add_option("--inlier-std", sim.inlier_std, "Inlier std [0.1]");
  sim_cmd->add_option("--outlier-fraction", sim.outlier_fraction, "Outlier fraction [0.2]");
  sim_cmd->add_option("--iterations", sim.iterations, "Frames")->capture_default_str();
  sim_cmd->add_option("--dimension", sim.dimension, "Descriptor dimension")->capture_default_str();
  sim_cmd->add_option("--observations-per-frame", sim.observations_per_frame)
      ->capture_default_str();
  sim_cmd->add_option("--bins", sim.bins, "Histogram bins")->capture_default_str();
  sim_cmd->add_option("--stream-seed", sim.stream_seed, "Generator seed")
      ->envname("IDMEM_STREAM_SEED")
      ->capture_default_str();
  sim_cmd->add_option("--out", sim.out_dir, "Output directory")->required();
  add_config_flags(sim_cmd, sim.config, "benchmark");

  EvalArgs ev;
  auto* eval_cmd = app.add_subcommand("eval", "Multipass precision/recall evaluation");
  eval_cmd->add_option("--subset-a", ev.subset_a, "Training stream")->required();
  eval_cmd->add_option("--subset-b", ev.subset_b, "Labeled evaluation stream")->required();
  eval_cmd->add_option("--warmup", ev.warmup, "Stream fed once before the passes");
  eval_cmd->add_option("--passes", ev.passes)->capture_default_str();
  eval_cmd->add_option("--target-label", ev.target_label)->capture_default_str();
  eval_cmd->add_option("--out", ev.out, "P/R series file ('-' for stdout)")
      ->capture_default_str();
  add_config_flags(eval_cmd, ev.config, "benchmark");

  GenerateArgs gen;
  idmem_pr_spec_default(&gen.pr);
  auto* gen_cmd = app.add_subcommand("generate", "Write synthetic benchmark streams");
  gen_cmd->add_option("--kind", gen.kind, "pr | stability")
      ->check(CLI::IsMember({"pr", "stability"}))
      ->capture_default_str();
  gen_cmd->add_option("--out", gen.out_dir, "Output directory")->required();
  gen_cmd->add_option("--seed", gen.pr.seed)->envname("IDMEM_STREAM_SEED")->capture_default_str();
  gen_cmd->add_option("--dimension", gen.pr.dimension)->capture_default_str();
  gen_cmd->add_option("--views", gen.pr.views)->capture_default_str();
  gen_cmd->add_option("--view-step", gen.pr.view_step)->capture_default_str();
  gen_cmd->add_option("--separation", gen.pr.separation, "Distractor gap in target stds")
      ->capture_default_str();
  gen_cmd->add_option("--distractors", gen.pr.distractor_identities)->capture_default_str();
  gen_cmd->add_option("--warmup-frames", gen.pr.warmup_frames)->capture_default_str();
  gen_cmd->add_option("--subset-a-frames", gen.pr.subset_a_frames)->capture_default_str();
  gen_cmd->add_option("--subset-b-frames", gen.pr.subset_b_frames)->capture_default_str();
  gen_cmd->add_option("--outlier-mean", gen.outlier_mean, "stability kind only")
      ->capture_default_str();
  gen_cmd->add_option("--iterations", gen.iterations, "stability kind only")
      ->capture_default_str();

  std::string inspect_path;
  auto* inspect_cmd = app.add_subcommand("inspect", "Print a snapshot's statistics");
  inspect_cmd->add_option("snapshot", inspect_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (run_cmd->parsed()) cmd_run(run);
    if (sim_cmd->parsed()) cmd_simulate(sim);
    if (eval_cmd->parsed()) cmd_eval(ev);
    if (gen_cmd->parsed()) cmd_generate(gen);
    if (inspect_cmd->parsed()) cmd_inspect(inspect_path);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}
