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

// Discrete-time combinatorial random walks: X_m = increment(X_{m-1}, D_m)
// with D_1, D_2, ... i.i.d. from an increment distribution on L_[n].

#ifndef CLEVY_WALK_HPP
#define CLEVY_WALK_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "clevy/measures.hpp"
#include "clevy/orbits.hpp"
#include "clevy/rng.hpp"
#include "clevy/structure.hpp"

namespace clevy {

struct WalkTrajectory {
  std::vector<Structure> states;  // X_0, ..., X_T

  std::size_t steps() const noexcept { return states.empty() ? 0 : states.size() - 1; }
  // D_m = increment(X_m, X_{m-1}), 1 <= m <= T.
  Structure increment_at(std::size_t m) const;
};

// Inverse-CDF sampler over the support in ascending key order.
class IncrementSampler {
 public:
  // Throws kNotNormalized unless mu is a probability measure.
  explicit IncrementSampler(const FiniteMeasure& mu);

  const Structure& operator()(Rng& rng) const;

 private:
  std::vector<Structure> atoms_;
  std::vector<double> cdf_;
};

Structure sample_increment(const FiniteMeasure& mu, Rng& rng);

WalkTrajectory simulate_walk(const FiniteMeasure& mu, const Structure& x0, std::size_t steps,
                             Rng& rng);
// X_0 = empty structure.
WalkTrajectory simulate_walk(const FiniteMeasure& mu, std::size_t steps, Rng& rng);

// Exact law of X_T by repeated convolution under increment.
FiniteMeasure walk_distribution_exact(const FiniteMeasure& mu, const Structure& x0,
                                      std::size_t steps);

std::vector<OrbitId> project_orbit_chain(const WalkTrajectory& traj);

// Row of the aggregated one-step kernel from a specific state M:
// row[Y'] = sum over M'' in orbit Y' of P(M -> M''). Valid for any mu.
std::map<std::string, double> aggregated_row(const FiniteMeasure& mu, const Structure& from);

// K(Y, Y') for every orbit Y of L_[n]; throws kNotExchangeable for
// non-exchangeable mu, where the aggregated row would depend on the
// representative.
using OrbitKernel = std::map<std::pair<std::string, std::string>, double>;
OrbitKernel orbit_kernel(const FiniteMeasure& mu);

}  // namespace clevy

#endif  // CLEVY_WALK_HPP
