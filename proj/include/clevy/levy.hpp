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

// Continuous-time combinatorial Levy processes at a fixed resolution n.
//
// A LevyIntensity is a sum of components, each a sigma-finite jump measure
// with a finite rate on every window [n]. Restricted to [n], the jump measure
// has finite total rate; the process is simulated by a single exponential
// clock at that rate, a component chosen in proportion to its restricted
// rate, and an increment drawn from the component's law conditioned on a
// nonempty restriction to [n].

#ifndef CLEVY_LEVY_HPP
#define CLEVY_LEVY_HPP

#include <array>
#include <memory>
#include <variant>
#include <vector>

#include "clevy/measures.hpp"
#include "clevy/rng.hpp"
#include "clevy/structure.hpp"
#include "clevy/walk.hpp"

namespace clevy {

// Rate-a atom of independent cell flips; flip_prob[j] applies to every cell
// of relation j.
struct MixtureAtom {
  double rate = 0.0;
  std::vector<double> flip_prob;
};

// L = (1): each element i flips alone at the given rate.
struct SetSingleton {
  double rate = 0.0;
};

// L = (2) or (1, 2): for each vertex i at the given rate, every edge (i, j)
// and (j, i), j != i, flips independently with edge_prob. With L = (1, 2)
// the membership of i flips with membership_prob. The loop (i, i) flips with
// edge_prob only when include_loop is set.
struct VertexComponent {
  double rate = 0.0;
  double edge_prob = 1.0;
  double membership_prob = 0.0;
  bool include_loop = false;
};

// L = (2) or (1, 2): for each unordered pair {i, j} at the given rate, a
// uniformly oriented pair (a, b) flips {(a, b)}, {(b, a)} or both, with
// relative weights pattern[0..2].
struct PairComponent {
  double rate = 0.0;
  std::array<double, 3> pattern{1.0, 1.0, 1.0};
};

// L = (2) or (1, 2): for each element i at the given rate, flips one of
// {membership of i}, {(i, i)}, {both} with relative weights pattern[0..2].
// Under L = (2) only the loop pattern is available.
struct LoopComponent {
  double rate = 0.0;
  std::array<double, 3> pattern{0.0, 1.0, 0.0};
};

// A finite jump measure on L_[n0]; at levels m <= n0 it acts through its
// restriction.
struct ExplicitFinite {
  FiniteMeasure measure;
};

using IntensityComponent = std::variant<MixtureAtom, SetSingleton, VertexComponent,
                                        PairComponent, LoopComponent, ExplicitFinite>;

const char* component_type_name(const IntensityComponent& c);

class LevyIntensity {
 public:
  LevyIntensity() = default;
  // Validates every component against the signature.
  LevyIntensity(Signature sig, std::vector<IntensityComponent> components);

  const Signature& signature() const noexcept { return sig_; }
  const std::vector<IntensityComponent>& components() const noexcept { return components_; }

 private:
  Signature sig_;
  std::vector<IntensityComponent> components_;
};

class RestrictedIntensity {
 public:
  RestrictedIntensity(const LevyIntensity& intensity, std::size_t n);

  std::size_t level() const noexcept { return n_; }
  const Signature& signature() const noexcept { return intensity_.signature(); }
  double total_rate() const noexcept { return total_; }
  const std::vector<double>& component_rates() const noexcept { return rates_; }

  // Draws a nonempty increment on L_[n] from the normalized restricted measure.
  // Requires total_rate() > 0.
  Structure sample(Rng& rng) const;
  Structure sample_component(std::size_t index, Rng& rng) const;

 private:
  LevyIntensity intensity_;
  std::size_t n_;
  std::vector<double> rates_;
  std::vector<double> cumulative_;
  double total_ = 0.0;
  // Per ExplicitFinite component, its restriction normalized to probability.
  std::vector<std::unique_ptr<IncrementSampler>> explicit_samplers_;
};

RestrictedIntensity restricted_measure(const LevyIntensity& intensity, std::size_t n);

// mu^(n) as an explicit measure on nonempty structures of L_[n], computed by
// enumeration of each component's increment patterns; for small n only.
FiniteMeasure exact_restricted_measure(const LevyIntensity& intensity, std::size_t n);

struct LevyEvent {
  double time = 0.0;
  Structure state;
};

struct LevyTrajectory {
  std::size_t n = 0;
  double horizon = 0.0;
  std::vector<LevyEvent> events;  // events[0] = (0, X_0)

  // Right-continuous: the last state with event time <= t.
  const Structure& state_at(double t) const;
  std::size_t jump_count() const noexcept { return events.empty() ? 0 : events.size() - 1; }
};

// Throws kInvalidArgument unless times start at 0, increase strictly and
// consecutive states differ.
void validate_trajectory(const LevyTrajectory& traj);

LevyTrajectory simulate_levy(const LevyIntensity& intensity, std::size_t n, double horizon,
                             Rng& rng);
LevyTrajectory simulate_levy(const RestrictedIntensity& restricted, double horizon, Rng& rng);

LevyTrajectory restrict_trajectory(const LevyTrajectory& traj, std::size_t m);

// The embedded jump chain: one step per jump, no time weighting.
WalkTrajectory jump_chain(const LevyTrajectory& traj);

// Relabels every state by sigma.
LevyTrajectory relabel_trajectory(const LevyTrajectory& traj, const Permutation& sigma);

}  // namespace clevy

#endif  // CLEVY_LEVY_HPP
