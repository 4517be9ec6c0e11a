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

// Text formats shared by the CLI and the C API.
//
//   structure          canonical serialization (see structure.hpp)
//   measure (JSON)     {"signature": "(1)", "n": 2,
//                       "entries": [{"structure": "...", "mass": 0.5}, ...]}
//   orbit table (JSON) [{"canonical": "...", "size": 3}, ...]
//   orbit weights      {"signature", "n", "weights": [{"orbit", "p"}]}
//   intensity (JSON)   {"signature": "(1)", "components": [{"type": ..., ...}]}
//   walk (CSV)         step,structure
//   levy (CSV)         time,structure
//   levy (JSONL)       {"signature","n","T","seed"} then one {"t","increment"} per jump
//   density (CSV)      pattern,density
//   limit path (CSV)   time,pattern,density
//   test report (JSON) {"statistic","df","p_value","cells_used","pooled_cells",
//                       "inconclusive","alphas": {"0.05": true}}
//
// Structure fields in CSV are always double-quoted since they contain commas.
// Reals are written in shortest round-trip decimal form.

#ifndef CLEVY_IO_HPP
#define CLEVY_IO_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "clevy/inference.hpp"
#include "clevy/levy.hpp"
#include "clevy/limits.hpp"
#include "clevy/measures.hpp"
#include "clevy/orbits.hpp"
#include "clevy/walk.hpp"

namespace clevy::io {

std::string format_double(double x);

std::string orbit_table_to_json(const OrbitTable& table);

std::string measure_to_json(const FiniteMeasure& mu);
FiniteMeasure measure_from_json(std::string_view text);

std::string orbit_weights_to_json(const OrbitWeights& w);
OrbitWeights orbit_weights_from_json(std::string_view text);

std::string intensity_to_json(const LevyIntensity& intensity);
LevyIntensity intensity_from_json(std::string_view text);

std::string walk_to_csv(const WalkTrajectory& traj);
WalkTrajectory walk_from_csv(std::string_view text);

std::string levy_to_csv(const LevyTrajectory& traj);
// The CSV carries no horizon; it is set to the last event time.
LevyTrajectory levy_from_csv(std::string_view text);
std::string levy_to_jsonl(const LevyTrajectory& traj, std::uint64_t seed);
LevyTrajectory levy_from_jsonl(std::string_view text);

std::string density_to_csv(const DensityVector& dv);
std::string limit_path_to_csv(std::span<const double> grid, std::span<const DensityVector> path);

std::string report_to_json(const TestReport& report);

}  // namespace clevy::io

#endif  // CLEVY_IO_HPP
