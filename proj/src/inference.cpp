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

#include "clevy/inference.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <boost/math/special_functions/gamma.hpp>

#include "clevy/error.hpp"
#include "clevy/orbits.hpp"

namespace clevy {

FiniteMeasure empirical_jump_measure(const WalkTrajectory& traj) {
  const std::size_t steps = traj.steps();
  if (steps == 0) fail(ErrorCode::kInvalidArgument, "empirical jump measure needs T >= 1 steps");
  const Structure& x0 = traj.states.front();
  std::map<std::string, std::pair<Structure, std::size_t>> counts;
  for (std::size_t m = 1; m <= steps; ++m) {
    Structure d = traj.increment_at(m);
    auto [it, fresh] = counts.try_emplace(serialize(d), d, 0);
    ++it->second.second;
  }
  FiniteMeasure mu(x0.signature(), x0.size());
  for (const auto& [key, entry] : counts)
    mu.add(entry.first, static_cast<double>(entry.second) / static_cast<double>(steps));
  return mu;
}

double chi2_upper_tail(double x, unsigned df) {
  if (df == 0) fail(ErrorCode::kInvalidArgument, "chi-square needs df >= 1");
  if (std::isnan(x)) fail(ErrorCode::kInvalidArgument, "chi-square statistic is NaN");
  if (x <= 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return boost::math::gamma_q(0.5 * static_cast<double>(df), 0.5 * x);
}

TestReport chi_square_exchangeability(const WalkTrajectory& traj, std::span<const double> alphas) {
  const std::size_t steps = traj.steps();
  if (steps == 0) fail(ErrorCode::kInvalidArgument, "exchangeability test needs T >= 1 steps");
  for (double a : alphas)
    if (!(a > 0.0 && a < 1.0)) fail(ErrorCode::kInvalidArgument, "alpha levels must lie in (0, 1)");

  // Observed increment counts.
  std::map<std::string, std::size_t> observed;
  struct OrbitData {
    Structure representative;
    std::size_t total = 0;
  };
  std::map<std::string, OrbitData> orbits;
  for (std::size_t m = 1; m <= steps; ++m) {
    const Structure d = traj.increment_at(m);
    ++observed[serialize(d)];
    Structure canon = canonical_form(d);
    auto& od = orbits[serialize(canon)];
    if (od.total == 0) od.representative = std::move(canon);
    ++od.total;
  }

  std::vector<const OrbitData*> order;
  std::vector<std::string> names;
  for (const auto& [key, od] : orbits) order.push_back(&od);
  std::sort(order.begin(), order.end(), [](const OrbitData* a, const OrbitData* b) {
    return canonical_compare(a->representative, b->representative) < 0;
  });
  for (const OrbitData* od : order) names.push_back(serialize(od->representative));

  TestReport rep;
  std::vector<PearsonCell> cells;
  std::vector<PearsonCell> orbit_pools;  // small orbits; orbit field = source orbit
  std::vector<std::size_t> pool_target;
  for (std::size_t oi = 0; oi < order.size(); ++oi) {
    const auto members = orbit_members(order[oi]->representative);
    const double expected = static_cast<double>(order[oi]->total) / static_cast<double>(members.size());
    auto observed_of = [&](const std::string& k) {
      auto it = observed.find(k);
      return it == observed.end() ? 0.0 : static_cast<double>(it->second);
    };
    if (static_cast<double>(order[oi]->total) < kMinExpectedCount) {
      PearsonCell pool{{}, names[oi], 0.0, 0.0};
      for (const auto& mem : members) {
        const std::string k = serialize(mem);
        pool.observed += observed_of(k);
        pool.expected += expected;
        pool.members.push_back(k);
      }
      orbit_pools.push_back(std::move(pool));
      pool_target.push_back(oi);
      continue;
    }
    // All members of an orbit share one expected count, so pooling is a
    // sequential merge in canonical order.
    const std::size_t first_cell = cells.size();
    PearsonCell run{{}, names[oi], 0.0, 0.0};
    for (const auto& mem : members) {
      const std::string k = serialize(mem);
      run.members.push_back(k);
      run.observed += observed_of(k);
      run.expected += expected;
      if (run.expected >= kMinExpectedCount) {
        cells.push_back(std::move(run));
        run = PearsonCell{{}, names[oi], 0.0, 0.0};
      }
    }
    if (!run.members.empty()) {
      if (cells.size() > first_cell) {
        auto& last = cells.back();
        last.members.insert(last.members.end(), run.members.begin(), run.members.end());
        last.observed += run.observed;
        last.expected += run.expected;
      } else {
        cells.push_back(std::move(run));
      }
    }
  }
  // Attach each small-orbit pool to the next orbit in canonical order.
  for (std::size_t p = 0; p < orbit_pools.size(); ++p) {
    const std::size_t src = pool_target[p];
    std::string target = names[src];
    if (order.size() > 1) target = src + 1 < names.size() ? names[src + 1] : names[src - 1];
    orbit_pools[p].orbit = target;
    cells.push_back(std::move(orbit_pools[p]));
  }
  std::stable_sort(cells.begin(), cells.end(), [&](const PearsonCell& a, const PearsonCell& b) {
    auto pos = [&](const std::string& o) {
      return std::find(names.begin(), names.end(), o) - names.begin();
    };
    return pos(a.orbit) < pos(b.orbit);
  });

  for (const auto& c : cells) {
    if (c.members.size() > 1) rep.pooled_cells += c.members.size();
    rep.statistic += (c.observed - c.expected) * (c.observed - c.expected) / c.expected;
  }
  rep.cells_used = cells.size();
  const std::size_t orbits_represented = order.size();
  rep.df = rep.cells_used > orbits_represented
               ? static_cast<unsigned>(rep.cells_used - orbits_represented)
               : 0u;
  rep.inconclusive = rep.cells_used < 2 || rep.df == 0;
  if (rep.inconclusive) {
    rep.statistic = 0.0;
    rep.p_value = 1.0;
  } else {
    rep.p_value = chi2_upper_tail(rep.statistic, rep.df);
  }
  for (double a : alphas) rep.decisions.emplace_back(a, !rep.inconclusive && rep.p_value < a);
  rep.cells = std::move(cells);
  return rep;
}

}  // namespace clevy
