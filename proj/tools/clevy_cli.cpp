// Copyright 2026 The clevy Authors
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


// clevy command-line front end. Talks to the library only through clevy.h.

#include <unistd.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "clevy/clevy.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;

struct CliError : std::runtime_error {
  CliError(int code, const std::string& msg) : std::runtime_error(msg), exit_code(code) {}
  int exit_code;
};

void check(clevy_status st, const std::string& context) {
  if (st == CLEVY_OK) return;
  const int code = st == CLEVY_ERR_IO ? kExitIo : kExitValidation;
  throw CliError(code, context + ": " + clevy_status_name(st) + ": " + clevy_last_error());
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using StructurePtr = std::unique_ptr<clevy_structure, Deleter<clevy_structure, clevy_structure_free>>;
using MeasurePtr = std::unique_ptr<clevy_measure, Deleter<clevy_measure, clevy_measure_free>>;
using WalkPtr = std::unique_ptr<clevy_walk, Deleter<clevy_walk, clevy_walk_free>>;
using IntensityPtr = std::unique_ptr<clevy_intensity, Deleter<clevy_intensity, clevy_intensity_free>>;
using LevyPtr = std::unique_ptr<clevy_levy, Deleter<clevy_levy, clevy_levy_free>>;

std::string take(char* s) {
  std::string out(s ? s : "");
  clevy_string_free(s);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError(kExitIo, "cannot open input file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw CliError(kExitIo, "read failed: " + path);
  return ss.str();
}

void require_input(const std::string& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) throw CliError(kExitIo, "input file not found: " + path);
}

void require_output(const std::string& path) {
  if (path.empty()) throw CliError(kExitValidation, "empty output path");
  const fs::path parent = fs::path(path).parent_path();
  std::error_code ec;
  if (!parent.empty() && !fs::is_directory(parent, ec))
    throw CliError(kExitIo, "output directory does not exist: " + parent.string());
}

// Temp file in the destination directory, then rename over the target.
void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CliError(kExitIo, "cannot create file: " + tmp);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::remove(tmp.c_str());
      throw CliError(kExitIo, "write failed: " + tmp);
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    std::remove(tmp.c_str());
    throw CliError(kExitIo, "rename failed: " + path + ": " + ec.message());
  }
}

std::string replicate_path(const std::string& base, std::size_t r, std::size_t replicates) {
  return replicates > 1 ? base + ".r" + std::to_string(r) : base;
}

// Manifest next to the primary output. Records names only, so output
// directories can be compared byte for byte.
void write_manifest(const std::string& out, const std::string& command, json config,
                    const std::vector<std::string>& outputs) {
  json files = json::array();
  for (const auto& p : outputs) files.push_back(fs::path(p).filename().string());
  json m;
  m["tool"] = "clevy";
  m["version"] = clevy_version();
  m["rng"] = clevy_rng_algorithm();
  m["command"] = command;
  m["config"] = std::move(config);
  m["outputs"] = std::move(files);
  write_atomic(out + ".manifest.json", m.dump(2) + "\n");
}

enum class TrajectoryKind { kWalkCsv, kLevyCsv, kLevyJsonl };

TrajectoryKind detect_kind(const std::string& text, const std::string& path) {
  const std::string head = text.substr(0, text.find('\n'));
  const auto starts = [&](const char* p) { return head.rfind(p, 0) == 0; };
  if (starts("step,structure")) return TrajectoryKind::kWalkCsv;
  if (starts("time,structure")) return TrajectoryKind::kLevyCsv;
  if (starts("{")) return TrajectoryKind::kLevyJsonl;
  throw CliError(kExitValidation, "unrecognized trajectory format: " + path);
}

// Walk view of a trajectory file; continuous-time inputs use their jump chain.
WalkPtr load_walk(const std::string& path) {
  const std::string text = read_file(path);
  clevy_walk* w = nullptr;
  const TrajectoryKind kind = detect_kind(text, path);
  if (kind == TrajectoryKind::kWalkCsv) {
    check(clevy_walk_from_csv(text.c_str(), &w), path);
    return WalkPtr(w);
  }
  clevy_levy* x = nullptr;
  if (kind == TrajectoryKind::kLevyCsv) {
    check(clevy_levy_from_csv(text.c_str(), &x), path);
  } else {
    check(clevy_levy_from_jsonl(text.c_str(), &x), path);
  }
  LevyPtr levy(x);
  check(clevy_levy_jump_chain(levy.get(), &w), path);
  return WalkPtr(w);
}

std::vector<double> build_grid(const std::vector<double>& grid, std::optional<double> step,
                               double horizon) {
  if (!grid.empty() && step) throw CliError(kExitValidation, "--grid and --grid-step are exclusive");
  if (!grid.empty()) return grid;
  std::vector<double> out;
  if (step) {
    if (!(*step > 0.0)) throw CliError(kExitValidation, "--grid-step must be positive");
    const double count = std::floor(horizon / *step + 1e-9);
    if (count > 1e6) throw CliError(kExitValidation, "--grid-step yields too many points");
    for (std::size_t k = 0; k <= static_cast<std::size_t>(count); ++k) {
      out.push_back(std::min(horizon, static_cast<double>(k) * *step));
    }
    return out;
  }
  constexpr int kDefaultPoints = 20;
  for (int k = 0; k <= kDefaultPoints; ++k) out.push_back(horizon * k / kDefaultPoints);
  return out;
}

struct WalkOpts {
  std::string measure, x0, out;
  std::size_t steps = 0, replicates = 1;
  std::uint64_t seed = 0;
};

struct LevyOpts {
  std::string intensity, out, format = "csv", limit_out;
  std::size_t n = 0, replicates = 1, limit_level = 0;
  double horizon = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> grid;
  std::optional<double> grid_step;
};

struct TestOpts {
  std::string trajectory, out;
  std::vector<double> alphas;
};

struct OrbitOpts {
  std::string signature, out;
  std::size_t n = 0;
};

struct DecomposeOpts {
  std::string measure, out;
};

struct DensityOpts {
  std::string structure, out;
  std::size_t level = 0;
};

struct JumpOpts {
  std::string trajectory, out;
};

void run_simulate_walk(const WalkOpts& o) {
  require_input(o.measure);
  require_output(o.out);
  if (o.replicates == 0) throw CliError(kExitValidation, "--replicates must be at least 1");
  const std::string text = read_file(o.measure);
  clevy_measure* m = nullptr;
  check(clevy_measure_from_json(text.c_str(), &m), o.measure);
  MeasurePtr mu(m);
  StructurePtr x0;
  if (!o.x0.empty()) {
    clevy_structure* s = nullptr;
    check(clevy_structure_parse(o.x0.c_str(), &s), "--x0");
    x0.reset(s);
  }
  std::vector<std::string> outputs;
  for (std::size_t r = 0; r < o.replicates; ++r) {
    clevy_walk* w = nullptr;
    check(clevy_walk_simulate(mu.get(), x0.get(), o.steps, o.seed, r, &w), "simulate-walk");
    WalkPtr walk(w);
    char* csv = nullptr;
    check(clevy_walk_to_csv(walk.get(), &csv), "simulate-walk");
    const std::string path = replicate_path(o.out, r, o.replicates);
    write_atomic(path, take(csv));
    outputs.push_back(path);
  }
  json cfg = {{"measure", o.measure},   {"steps", o.steps}, {"seed", o.seed},
              {"replicates", o.replicates}, {"x0", o.x0},     {"out", fs::path(o.out).filename().string()}};
  write_manifest(o.out, "simulate-walk", cfg, outputs);
}

void run_simulate_levy(const LevyOpts& o) {
  require_input(o.intensity);
  require_output(o.out);
  if (o.replicates == 0) throw CliError(kExitValidation, "--replicates must be at least 1");
  if (o.format != "csv" && o.format != "jsonl")
    throw CliError(kExitValidation, "--format must be csv or jsonl");
  if (!(o.horizon >= 0.0) || !std::isfinite(o.horizon))
    throw CliError(kExitValidation, "--horizon must be finite and nonnegative");
  const bool want_limit = o.limit_level > 0;
  const std::string limit_base = o.limit_out.empty() ? o.out + ".limit.csv" : o.limit_out;
  if (want_limit) require_output(limit_base);
  const std::vector<double> grid =
      want_limit ? build_grid(o.grid, o.grid_step, o.horizon) : std::vector<double>{};

  const std::string text = read_file(o.intensity);
  clevy_intensity* in = nullptr;
  check(clevy_intensity_from_json(text.c_str(), &in), o.intensity);
  IntensityPtr intensity(in);

  std::vector<std::string> outputs;
  for (std::size_t r = 0; r < o.replicates; ++r) {
    clevy_levy* x = nullptr;
    check(clevy_levy_simulate(intensity.get(), o.n, o.horizon, o.seed, r, &x), "simulate-levy");
    LevyPtr traj(x);
    char* body = nullptr;
    if (o.format == "csv") {
      check(clevy_levy_to_csv(traj.get(), &body), "simulate-levy");
    } else {
      check(clevy_levy_to_jsonl(traj.get(), o.seed, &body), "simulate-levy");
    }
    const std::string path = replicate_path(o.out, r, o.replicates);
    write_atomic(path, take(body));
    outputs.push_back(path);
    if (want_limit) {
      char* csv = nullptr;
      check(clevy_levy_limit_path_csv(traj.get(), o.limit_level, grid.data(), grid.size(), &csv),
            "--limit-level");
      const std::string lpath = replicate_path(limit_base, r, o.replicates);
      write_atomic(lpath, take(csv));
      outputs.push_back(lpath);
    }
  }
  json cfg = {{"intensity", o.intensity}, {"n", o.n},           {"horizon", o.horizon},
              {"seed", o.seed},           {"replicates", o.replicates}, {"format", o.format},
              {"out", fs::path(o.out).filename().string()}};
  if (want_limit) {
    cfg["limit_level"] = o.limit_level;
    cfg["grid"] = grid;
    cfg["limit_out"] = fs::path(limit_base).filename().string();
  }
  write_manifest(o.out, "simulate-levy", cfg, outputs);
}

void run_test_exchangeability(TestOpts o) {
  require_input(o.trajectory);
  require_output(o.out);
  if (o.alphas.empty()) o.alphas.push_back(0.05);
  WalkPtr walk = load_walk(o.trajectory);
  char* report = nullptr;
  check(clevy_walk_test_exchangeability(walk.get(), o.alphas.data(), o.alphas.size(), &report),
        "test-exchangeability");
  write_atomic(o.out, take(report));
  json cfg = {{"trajectory", o.trajectory}, {"alphas", o.alphas},
              {"out", fs::path(o.out).filename().string()}};
  write_manifest(o.out, "test-exchangeability", cfg, {o.out});
}

void run_orbits(const OrbitOpts& o) {
  require_output(o.out);
  char* js = nullptr;
  check(clevy_orbits_json(o.signature.c_str(), o.n, &js), "orbits");
  write_atomic(o.out, take(js));
  json cfg = {{"signature", o.signature}, {"n", o.n}, {"out", fs::path(o.out).filename().string()}};
  write_manifest(o.out, "orbits", cfg, {o.out});
}

void run_decompose(const DecomposeOpts& o) {
  require_input(o.measure);
  require_output(o.out);
  const std::string text = read_file(o.measure);
  clevy_measure* m = nullptr;
  check(clevy_measure_from_json(text.c_str(), &m), o.measure);
  MeasurePtr mu(m);
  char* js = nullptr;
  check(clevy_measure_decompose_json(mu.get(), &js), "decompose");
  write_atomic(o.out, take(js));
  json cfg = {{"measure", o.measure}, {"out", fs::path(o.out).filename().string()}};
  write_manifest(o.out, "decompose", cfg, {o.out});
}

void run_density(const DensityOpts& o) {
  require_output(o.out);
  clevy_structure* s = nullptr;
  check(clevy_structure_parse(o.structure.c_str(), &s), "--structure");
  StructurePtr m(s);
  char* csv = nullptr;
  check(clevy_density_csv(m.get(), o.level, &csv), "density");
  write_atomic(o.out, take(csv));
  json cfg = {{"structure", o.structure}, {"level", o.level},
              {"out", fs::path(o.out).filename().string()}};
  write_manifest(o.out, "density", cfg, {o.out});
}

void run_estimate_jumps(const JumpOpts& o) {
  require_input(o.trajectory);
  require_output(o.out);
  WalkPtr walk = load_walk(o.trajectory);
  clevy_measure* m = nullptr;
  check(clevy_walk_estimate_jumps(walk.get(), &m), "estimate-jumps");
  MeasurePtr mu(m);
  char* js = nullptr;
  check(clevy_measure_to_json(mu.get(), &js), "estimate-jumps");
  write_atomic(o.out, take(js));
  json cfg = {{"trajectory", o.trajectory}, {"out", fs::path(o.out).filename().string()}};
  write_manifest(o.out, "estimate-jumps", cfg, {o.out});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation and inference for Levy processes on labeled combinatorial structures",
               "clevy"};
  app.set_version_flag("--version", std::string(clevy_version()));
  app.require_subcommand(1);

  WalkOpts walk;
  auto* sw = app.add_subcommand("simulate-walk", "Simulate a discrete-time walk from a jump measure");
  sw->add_option("--measure", walk.measure, "Measure JSON file")->required();
  sw->add_option("--steps", walk.steps, "Number of steps")->required();
  sw->add_option("--seed", walk.seed, "RNG seed")->required();
  sw->add_option("--replicates", walk.replicates, "Independent replicates (stream = index)");
  sw->add_option("--x0", walk.x0, "Initial structure (default: empty)");
  sw->add_option("--out", walk.out, "Output CSV path")->required();

  LevyOpts levy;
  auto* sl = app.add_subcommand("simulate-levy", "Simulate a continuous-time process at level n");
  sl->add_option("--intensity", levy.intensity, "Intensity JSON file")->required();
  sl->add_option("--n", levy.n, "Base set size")->required();
  sl->add_option("--horizon", levy.horizon, "Time horizon T")->required();
  sl->add_option("--seed", levy.seed, "RNG seed")->required();
  sl->add_option("--replicates", levy.replicates, "Independent replicates (stream = index)");
  sl->add_option("--format", levy.format, "csv or jsonl");
  sl->add_option("--limit-level", levy.limit_level, "Also write densities over L_[m]");
  sl->add_option("--grid", levy.grid, "Comma-separated time grid")->delimiter(',');
  sl->add_option("--grid-step", levy.grid_step, "Uniform grid spacing");
  sl->add_option("--limit-out", levy.limit_out, "Density path CSV (default: <out>.limit.csv)");
  sl->add_option("--out", levy.out, "Output trajectory path")->required();

  TestOpts test;
  auto* st = app.add_subcommand("test-exchangeability", "Pearson test of exchangeable jumps");
  st->add_option("--trajectory", test.trajectory, "Walk CSV, Levy CSV or Levy JSONL")->required();
  st->add_option("--alpha", test.alphas, "Significance level (repeatable, default 0.05)");
  st->add_option("--out", test.out, "Report JSON path")->required();

  OrbitOpts orb;
  auto* so = app.add_subcommand("orbits", "Enumerate isomorphism classes");
  so->add_option("--signature", orb.signature, "Signature, e.g. \"(1,2)\"")->required();
  so->add_option("--n", orb.n, "Base set size")->required();
  so->add_option("--out", orb.out, "Output JSON path")->required();

  DecomposeOpts dec;
  auto* sd = app.add_subcommand("decompose", "Orbit weights of an exchangeable measure");
  sd->add_option("--measure", dec.measure, "Measure JSON file")->required();
  sd->add_option("--out", dec.out, "Output JSON path")->required();

  DensityOpts den;
  auto* sn = app.add_subcommand("density", "Homomorphism densities over L_[level]");
  sn->add_option("--structure", den.structure, "Structure in canonical text form")->required();
  sn->add_option("--level", den.level, "Pattern size m")->required();
  sn->add_option("--out", den.out, "Output CSV path")->required();

  JumpOpts jumps;
  auto* se = app.add_subcommand("estimate-jumps", "Empirical jump measure of a trajectory");
  se->add_option("--trajectory", jumps.trajectory, "Walk CSV, Levy CSV or Levy JSONL")->required();
  se->add_option("--out", jumps.out, "Output measure JSON path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*sw) run_simulate_walk(walk);
    if (*sl) run_simulate_levy(levy);
    if (*st) run_test_exchangeability(test);
    if (*so) run_orbits(orb);
    if (*sd) run_decompose(dec);
    if (*sn) run_density(den);
    if (*se) run_estimate_jumps(jumps);
  } catch (const CliError& e) {
    std::cerr << "clevy: " << e.what() << "\n";
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "clevy: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}
