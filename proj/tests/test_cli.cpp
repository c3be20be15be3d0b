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

// Runs the idmem binary as a subprocess.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "json.hpp"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kWork = fs::path(IDMEM_TEST_WORKDIR) / "cli_test";

int run(const std::string& args) {
  const std::string cmd = std::string(IDMEM_CLI_PATH) + " " + args + " > " +
                          (kWork / "stdout.txt").string() + " 2> " +
                          (kWork / "stderr.txt").string();
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string out() { return slurp(kWork / "stdout.txt"); }

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

void write(const fs::path& p, const std::string& s) { std::ofstream(p, std::ios::binary) << s; }

// Header plus `frames` frames of two 2-D identities, starting at `first`.
std::string stream(std::size_t first, std::size_t frames, std::uint64_t seed = 1) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 0.1);
  std::string s = R"({"format":"idmem-stream","version":1,"dimension":2})" "\n";
  for (std::size_t t = 0; t < first + frames; ++t) {
    json obs = json::array({json::array({n(rng), n(rng)}), json::array({4.0 + n(rng), n(rng)})});
    if (t >= first) s += json{{"frame", t}, {"observations", obs}}.dump() + "\n";
  }
  return s;
}

struct Workdir {
  Workdir() {
    fs::remove_all(kWork);
    fs::create_directories(kWork);
  }
};

}  // namespace

TEST_CASE_FIXTURE(Workdir, "run: toy stream gives one report line per frame and a snapshot") {
  write(kWork / "toy.jsonl", stream(0, 2));
  REQUIRE(run("run " + (kWork / "toy.jsonl").string() + " --snapshot-out " +
              (kWork / "s.bin").string()) == 0);
  const std::string o = out();
  CHECK(count_lines(o) == 2);
  REQUIRE(run("inspect " + (kWork / "s.bin").string()) == 0);
  // Frame 1 re-matches both frame-0 elements with a tiny ratio, which prunes
  // them; only the two frame-1 observations remain.
  CHECK(out().find("elements       2") != std::string::npos);
}

TEST_CASE_FIXTURE(Workdir, "run: usage and data errors map to exit codes") {
  write(kWork / "toy.jsonl", stream(0, 2));
  CHECK(run("run " + (kWork / "toy.jsonl").string() + " --rho-bar 1.5") == 1);
  CHECK(run("run") == 1);
  CHECK(run("bogus") == 1);
  CHECK(run("IDMEM_RHO_BAR=0 " + std::string(IDMEM_CLI_PATH) + " run x") != 0);

  write(kWork / "bad.jsonl", R"({"format":"idmem-stream","version":1,"dimension":2})" "\n"
                             R"({"frame":0,"observations":[[0,0],[1,1]]})" "\n"
                             R"({"frame":1,"observations":[[0,0],[1]]})" "\n");
  CHECK(run("run " + (kWork / "bad.jsonl").string()) == 2);
  CHECK(slurp(kWork / "stderr.txt").find(":3:") != std::string::npos);

  write(kWork / "order.jsonl", R"({"format":"idmem-stream","version":1,"dimension":1})" "\n"
                               R"({"frame":4,"observations":[[0],[1]]})" "\n"
                               R"({"frame":4,"observations":[[0],[1]]})" "\n");
  CHECK(run("run " + (kWork / "order.jsonl").string()) == 2);
  CHECK(run("run " + (kWork / "missing.jsonl").string()) == 2);
  CHECK(run("inspect " + (kWork / "order.jsonl").string()) == 2);
}

TEST_CASE_FIXTURE(Workdir, "run: environment variables override defaults") {
  write(kWork / "toy.jsonl", stream(0, 2));
  const std::string cmd = "IDMEM_RHO_BAR=1.5 " + std::string(IDMEM_CLI_PATH) + " run " +
                          (kWork / "toy.jsonl").string() + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  CHECK(WEXITSTATUS(rc) == 1);
}

TEST_CASE_FIXTURE(Workdir, "run: split and resume equals one continuous run") {
  write(kWork / "all.jsonl", stream(0, 500));
  write(kWork / "head.jsonl", [] {
    std::string s = stream(0, 500);
    // Keep the header and the first 200 frames.
    std::size_t pos = 0;
    for (int i = 0; i < 201; ++i) pos = s.find('\n', pos) + 1;
    return s.substr(0, pos);
  }());
  write(kWork / "tail.jsonl", stream(200, 300));

  REQUIRE(run("run " + (kWork / "all.jsonl").string() + " --snapshot-out " +
              (kWork / "all.bin").string() + " --report " + (kWork / "all.txt").string()) == 0);
  REQUIRE(run("run " + (kWork / "head.jsonl").string() + " --snapshot-out " +
              (kWork / "head.bin").string() + " --report " + (kWork / "head.txt").string()) == 0);
  REQUIRE(run("run " + (kWork / "tail.jsonl").string() + " --snapshot-in " +
              (kWork / "head.bin").string() + " --snapshot-out " + (kWork / "tail.bin").string() +
              " --report " + (kWork / "tail.txt").string() + " --workers 4") == 0);
  CHECK(slurp(kWork / "all.bin") == slurp(kWork / "tail.bin"));
  CHECK(slurp(kWork / "all.txt") == slurp(kWork / "head.txt") + slurp(kWork / "tail.txt"));

  // A resumed run under a different config is refused.
  CHECK(run("run " + (kWork / "tail.jsonl").string() + " --snapshot-in " +
            (kWork / "head.bin").string() + " --rho-bar 0.7") == 2);
}

TEST_CASE_FIXTURE(Workdir, "simulate: presets, determinism, one-iteration mass") {
  REQUIRE(run("simulate --preset all --out " + (kWork / "a").string()) == 0);
  for (const char* p : {"far", "medium", "overlapping"}) {
    CHECK(fs::exists(kWork / "a" / p / "summary.json"));
    CHECK(fs::exists(kWork / "a" / p / "histogram.csv"));
    CHECK(fs::exists(kWork / "a" / p / "scatter.csv"));
  }
  REQUIRE(run("simulate --preset far --stream-seed 3 --out " + (kWork / "b").string()) == 0);
  REQUIRE(run("simulate --preset far --stream-seed 3 --out " + (kWork / "c").string()) == 0);
  for (const char* f : {"summary.json", "histogram.csv", "scatter.csv"}) {
    CHECK(slurp(kWork / "b" / f) == slurp(kWork / "c" / f));
  }

  REQUIRE(run("simulate --iterations 1 --out " + (kWork / "one").string()) == 0);
  std::istringstream hist(slurp(kWork / "one" / "histogram.csv"));
  std::string line;
  std::getline(hist, line);  // header
  std::size_t mass = 0;
  while (std::getline(hist, line)) mass += std::stoul(line.substr(line.rfind(',') + 1));
  CHECK(mass == 2);
  CHECK(run("simulate --iterations 0 --out " + (kWork / "zero").string()) == 1);
}

TEST_CASE_FIXTURE(Workdir, "generate and eval") {
  REQUIRE(run("generate --out " + (kWork / "pr").string() + " --subset-a-frames 120 --subset-b-frames 60") == 0);
  const std::string a = (kWork / "pr" / "subset_a.jsonl").string();
  const std::string b = (kWork / "pr" / "subset_b.jsonl").string();
  const std::string w = (kWork / "pr" / "warmup.jsonl").string();
  REQUIRE(run("eval --subset-a " + a + " --subset-b " + b + " --warmup " + w + " --passes 3") == 0);
  std::istringstream rows(out());
  std::string line;
  std::vector<json> points;
  while (std::getline(rows, line)) points.push_back(json::parse(line));
  REQUIRE(points.size() == 3);
  CHECK(points[2]["recall"].get<double>() >= points[0]["recall"].get<double>());

  // Unlabeled evaluation data is a usage error.
  write(kWork / "unlabeled.jsonl", stream(0, 3));
  write(kWork / "a2.jsonl", stream(0, 3));
  CHECK(run("eval --subset-a " + (kWork / "a2.jsonl").string() + " --subset-b " +
            (kWork / "unlabeled.jsonl").string()) == 1);

  // Empty subset A: one row with recall 0.
  write(kWork / "empty.jsonl", R"({"format":"idmem-stream","version":1,"dimension":8})" "\n");
  REQUIRE(run("eval --subset-a " + (kWork / "empty.jsonl").string() + " --subset-b " + b +
              " --passes 1") == 0);
  const auto row = json::parse(out());
  CHECK(row["recall"] == 0.0);
}
