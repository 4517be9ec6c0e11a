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

// Jump-measure estimation from an observed walk and a Pearson chi-square
// test of the orbit-averaged (exchangeable) fit against the raw estimate.
//
// Methodology, not derived from first principles:
//  * cells are the structures in the union support of the empirical measure
//    and its orbit average; expected counts are T times the orbit average;
//  * within an orbit, cells with expected count below 5 are pooled in
//    ascending canonical order until each pool reaches 5; a short remainder
//    joins the orbit's last emitted cell;
//  * an orbit whose total expected count is below 5 becomes one pooled cell
//    attached to the next orbit in canonical order (the previous one for the
//    last orbit);
//  * df = final cells - orbits represented, since the orbit average fixes one
//    total per orbit;
//  * with fewer than two final cells, or df = 0, the test is inconclusive
//    (statistic 0, p-value 1, no rejections).

#ifndef CLEVY_INFERENCE_HPP
#define CLEVY_INFERENCE_HPP

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "clevy/measures.hpp"
#include "clevy/walk.hpp"

namespace clevy {

inline constexpr double kMinExpectedCount = 5.0;

FiniteMeasure empirical_jump_measure(const WalkTrajectory& traj);

struct PearsonCell {
  std::vector<std::string> members;  // structure keys
  std::string orbit;                 // orbit the cell is attributed to
  double observed = 0.0;
  double expected = 0.0;
};

struct TestReport {
  double statistic = 0.0;
  unsigned df = 0;
  double p_value = 1.0;
  std::size_t cells_used = 0;
  std::size_t pooled_cells = 0;  // original cells merged into a pool
  bool inconclusive = false;
  std::vector<std::pair<double, bool>> decisions;  // (alpha, reject)
  std::vector<PearsonCell> cells;
};

TestReport chi_square_exchangeability(const WalkTrajectory& traj, std::span<const double> alphas);

// P{chi^2_df > x}.
double chi2_upper_tail(double x, unsigned df);

}  // namespace clevy

#endif  // CLEVY_INFERENCE_HPP
