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

#include "clevy/walk.hpp"

#include <algorithm>
#include <unordered_map>

#include "clevy/cells.hpp"
#include "clevy/error.hpp"

namespace clevy {

Structure WalkTrajectory::increment_at(std::size_t m) const {
  if (m == 0 || m >= states.size()) fail(ErrorCode::kInvalidArgument, "step index out of range");
  return increment(states[m], states[m - 1]);
}

IncrementSampler::IncrementSampler(const FiniteMeasure& mu) {
  if (!mu.is_probability())
    fail(ErrorCode::kNotNormalized, "increment distribution must be a probability measure");
  double acc = 0.0;
  for (const auto& [key, atom] : mu.atoms()) {
    acc += atom.mass;
    atoms_.push_back(atom.structure);
    cdf_.push_back(acc);
  }
}

const Structure& IncrementSampler::operator()(Rng& rng) const {
  const double u = rng.uniform() * cdf_.back();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) --it;
  return atoms_[static_cast<std::size_t>(it - cdf_.begin())];
}

Structure sample_increment(const FiniteMeasure& mu, Rng& rng) {
  return IncrementSampler(mu)(rng);
}

WalkTrajectory simulate_walk(const FiniteMeasure& mu, const Structure& x0, std::size_t steps,
                             Rng& rng) {
  if (mu.signature() != x0.signature() || mu.size() != x0.size())
    fail(ErrorCode::kShapeMismatch, "initial state and increment distribution differ in shape");
  const IncrementSampler draw(mu);
  WalkTrajectory traj;
  traj.states.reserve(steps + 1);
  traj.states.push_back(x0);
  for (std::size_t m = 1; m <= steps; ++m) {
    Structure next = traj.states.back();
    next ^= draw(rng);
    traj.states.push_back(std::move(next));
  }
  return traj;
}

WalkTrajectory simulate_walk(const FiniteMeasure& mu, std::size_t steps, Rng& rng) {
  return simulate_walk(mu, empty_structure(mu.signature(), mu.size()), steps, rng);
}

FiniteMeasure walk_distribution_exact(const FiniteMeasure& mu, const Structure& x0,
                                      std::size_t steps) {
  if (mu.signature() != x0.signature() || mu.size() != x0.size())
    fail(ErrorCode::kShapeMismatch, "initial state and increment distribution differ in shape");
  const CellLayout layout(x0.signature(), x0.size());
  if (layout.cell_count() > kMaxEnumerationCells)
    fail(ErrorCode::kCapExceeded, "exact walk distribution needs an enumerable L_[n]");
  std::vector<std::pair<CellMask, double>> inc;
  for (const auto& [key, atom] : mu.atoms()) inc.emplace_back(layout.encode(atom.structure), atom.mass);

  std::unordered_map<CellMask, double> dist{{layout.encode(x0), 1.0}};
  for (std::size_t step = 0; step < steps; ++step) {
    std::unordered_map<CellMask, double> next;
    for (const auto& [state, p] : dist)
      for (const auto& [d, q] : inc) next[state ^ d] += p * q;
    dist = std::move(next);
  }
  std::vector<std::pair<CellMask, double>> sorted(dist.begin(), dist.end());
  std::sort(sorted.begin(), sorted.end());
  FiniteMeasure out(x0.signature(), x0.size());
  for (const auto& [state, p] : sorted) out.add(layout.decode(state), p);
  return out;
}

std::vector<OrbitId> project_orbit_chain(const WalkTrajectory& traj) {
  std::vector<OrbitId> out;
  out.reserve(traj.states.size());
  for (const auto& s : traj.states) out.push_back(orbit_of(s));
  return out;
}

std::map<std::string, double> aggregated_row(const FiniteMeasure& mu, const Structure& from) {
  if (mu.signature() != from.signature() || mu.size() != from.size())
    fail(ErrorCode::kShapeMismatch, "state and increment distribution differ in shape");
  std::map<std::string, double> row;
  if (total_cells(from.signature(), from.size()) <= kMaxEnumerationCells &&
      from.size() <= kDefaultOrbitCap) {
    const auto& space = enumerated_space(from.signature(), from.size());
    const CellMask x = space.layout().encode(from);
    std::vector<double> acc(space.orbit_count(), 0.0);
    for (const auto& [key, atom] : mu.atoms())
      acc[space.orbit_index(x ^ space.layout().encode(atom.structure))] += atom.mass;
    for (std::uint32_t y = 0; y < acc.size(); ++y)
      if (acc[y] != 0.0) row[space.table().entries[y].id.canonical] = acc[y];
    return row;
  }
  for (const auto& [key, atom] : mu.atoms())
    row[orbit_of(increment(from, atom.structure)).canonical] += atom.mass;
  return row;
}

OrbitKernel orbit_kernel(const FiniteMeasure& mu) {
  if (!is_exchangeable(mu))
    fail(ErrorCode::kNotExchangeable,
         "orbit kernel is representative-dependent for non-exchangeable increments");
  const auto& space = enumerated_space(mu.signature(), mu.size());
  OrbitKernel k;
  for (std::uint32_t y = 0; y < space.orbit_count(); ++y) {
    const Structure rep = space.layout().decode(space.representative(y));
    const std::string& from = space.table().entries[y].id.canonical;
    for (const auto& [to, p] : aggregated_row(mu, rep)) k[{from, to}] = p;
  }
  return k;
}

}  // namespace clevy
