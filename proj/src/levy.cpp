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

#include "clevy/levy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "clevy/cells.hpp"
#include "clevy/error.hpp"
#include "clevy/orbits.hpp"

namespace clevy {

namespace {

constexpr std::size_t kMaxRejectionTries = 10000;
// Above this probability of an empty draw, sample the first flip directly.
constexpr double kRejectionEmptyThreshold = 0.99;

const Signature& graph_signature() {
  static const Signature s({2});
  return s;
}
const Signature& community_signature() {
  static const Signature s({1, 2});
  return s;
}

bool is_graph_like(const Signature& sig) {
  return sig == graph_signature() || sig == community_signature();
}

// Index of the edge relation for graph-like signatures.
std::size_t edge_relation(const Signature& sig) { return sig == community_signature() ? 1 : 0; }

void check_prob(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) fail(ErrorCode::kInvalidArgument, std::string(what) + " must lie in [0, 1]");
}

void check_rate(double r) {
  if (!(r >= 0.0) || !std::isfinite(r))
    fail(ErrorCode::kInvalidArgument, "component rates must be finite and nonnegative");
}

template <std::size_t N>
double check_weights(const std::array<double, N>& w) {
  double s = 0.0;
  for (double x : w) {
    if (!(x >= 0.0) || !std::isfinite(x))
      fail(ErrorCode::kInvalidArgument, "pattern weights must be finite and nonnegative");
    s += x;
  }
  if (!(s > 0.0)) fail(ErrorCode::kInvalidArgument, "pattern weights must not all be zero");
  return s;
}

std::size_t pick_weighted(const std::array<double, 3>& w, Rng& rng) {
  const double u = rng.uniform() * (w[0] + w[1] + w[2]);
  if (u < w[0]) return 0;
  if (u < w[0] + w[1] || w[2] == 0.0) return w[1] > 0.0 ? 1 : 0;
  return 2;
}

// Toggles cell `cell` of relation j, where cells are numbered in mixed radix.
void flip_relation_cell(Structure& s, std::size_t j, std::uint64_t cell) {
  const Relation& rel = s.relation(j);
  if (rel.dense()) {
    s.flip_cell(j, static_cast<std::size_t>(cell));
    return;
  }
  Tuple t(rel.arity());
  for (std::size_t k = t.size(); k > 0; --k) {
    t[k - 1] = static_cast<Label>(cell % s.size() + 1);
    cell /= s.size();
  }
  s.toggle(j, t);
}

// A block of `count` independent cells, each flipping with probability `prob`.
struct FlipGroup {
  std::uint64_t count;
  double prob;
};

double log_empty_probability(const std::vector<FlipGroup>& groups) {
  double l = 0.0;
  for (const auto& g : groups) {
    if (g.count == 0 || g.prob == 0.0) continue;
    if (g.prob >= 1.0) return -INFINITY;
    l += static_cast<double>(g.count) * std::log1p(-g.prob);
  }
  return l;
}

// Independent flips of cells [from, count) of one group via geometric skips.
template <class Flip>
void sample_group_tail(const FlipGroup& g, std::size_t gi, std::uint64_t from, Rng& rng, Flip& flip) {
  if (g.prob <= 0.0) return;
  std::uint64_t k = from;
  while (k < g.count) {
    const std::uint64_t skip = rng.geometric(g.prob);
    if (skip >= g.count - k) break;
    k += skip;
    flip(gi, k);
    ++k;
  }
}

// Independent Bernoulli flips over all groups conditioned on at least one
// flip; flip(group, index) applies a flip and reset() clears a rejected draw.
template <class Flip, class Reset>
void sample_conditioned_flips(const std::vector<FlipGroup>& groups, Rng& rng, Flip&& flip,
                              Reset&& reset) {
  std::size_t flips = 0;
  auto counted = [&](std::size_t g, std::uint64_t k) {
    ++flips;
    flip(g, k);
  };
  const double p_empty = std::exp(log_empty_probability(groups));
  if (p_empty >= 1.0) fail(ErrorCode::kNumeric, "component cannot produce a nonempty increment");
  if (p_empty <= kRejectionEmptyThreshold) {
    for (std::size_t attempt = 0; attempt < kMaxRejectionTries; ++attempt) {
      for (std::size_t gi = 0; gi < groups.size(); ++gi)
        sample_group_tail(groups[gi], gi, 0, rng, counted);
      if (flips > 0) return;
      reset();
    }
    fail(ErrorCode::kNumeric, "rejection sampling of a nonempty increment did not terminate");
  }
  // First flipped group J: P(J = j) proportional to (prod_{l<j} e_l)(1 - e_j).
  std::vector<double> weight(groups.size());
  double before = 1.0;
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const double e = std::exp(log_empty_probability({groups[gi]}));
    weight[gi] = before * (1.0 - e);
    before *= e;
  }
  const double total = std::accumulate(weight.begin(), weight.end(), 0.0);
  const double u = rng.uniform() * total;
  std::size_t first = 0;
  double acc = 0.0;
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    if (weight[gi] == 0.0) continue;
    first = gi;
    acc += weight[gi];
    if (u < acc) break;
  }
  const FlipGroup& g = groups[first];
  // Offset of the first flip within the group: truncated geometric.
  const double e = std::exp(log_empty_probability({g}));
  std::uint64_t k = 0;
  if (g.prob < 1.0) {
    const double x = std::floor(std::log1p(-rng.uniform() * (1.0 - e)) / std::log1p(-g.prob));
    k = x < static_cast<double>(g.count) ? static_cast<std::uint64_t>(std::max(0.0, x))
                                         : g.count - 1;
  }
  counted(first, k);
  sample_group_tail(g, first, k + 1, rng, counted);
  for (std::size_t gi = first + 1; gi < groups.size(); ++gi)
    sample_group_tail(groups[gi], gi, 0, rng, counted);
}

std::vector<FlipGroup> mixture_groups(const MixtureAtom& atom, const Signature& sig, std::size_t n) {
  std::vector<FlipGroup> groups;
  for (std::size_t j = 0; j < sig.size(); ++j) {
    double c = std::pow(static_cast<double>(n), sig.arity(j));
    groups.push_back({static_cast<std::uint64_t>(c), atom.flip_prob[j]});
  }
  return groups;
}

// Vertex groups: membership, out-edges, in-edges, loop.
std::vector<FlipGroup> vertex_groups(const VertexComponent& v, const Signature& sig, std::size_t n) {
  const bool community = sig == community_signature();
  return {{community ? 1u : 0u, v.membership_prob},
          {n - 1, v.edge_prob},
          {n - 1, v.edge_prob},
          {v.include_loop ? 1u : 0u, v.edge_prob}};
}

double conditioned_fraction(const std::vector<FlipGroup>& groups) {
  return -std::expm1(log_empty_probability(groups));
}

FiniteMeasure restrict_measure(const FiniteMeasure& mu, std::size_t m) {
  FiniteMeasure out(mu.signature(), m);
  for (const auto& [key, atom] : mu.atoms()) {
    Structure r = restrict(atom.structure, m);
    if (!r.empty()) out.add(r, atom.mass);
  }
  return out;
}

// Applies an edge flip (a, b) in the edge relation.
void flip_edge(Structure& s, Label a, Label b) {
  const Label t[2] = {a, b};
  s.toggle(edge_relation(s.signature()), t);
}

void flip_member(Structure& s, Label a) { s.toggle(0, std::span<const Label>(&a, 1)); }

}  // namespace

const char* component_type_name(const IntensityComponent& c) {
  struct Visitor {
    const char* operator()(const MixtureAtom&) const { return "mixture_atom"; }
    const char* operator()(const SetSingleton&) const { return "set_singleton"; }
    const char* operator()(const VertexComponent&) const { return "vertex"; }
    const char* operator()(const PairComponent&) const { return "pair"; }
    const char* operator()(const LoopComponent&) const { return "loop"; }
    const char* operator()(const ExplicitFinite&) const { return "explicit"; }
  };
  return std::visit(Visitor{}, c);
}

LevyIntensity::LevyIntensity(Signature sig, std::vector<IntensityComponent> components)
    : sig_(std::move(sig)), components_(std::move(components)) {
  require_process_signature(sig_);
  for (const auto& comp : components_) {
    std::visit(
        [&](const auto& c) {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, MixtureAtom>) {
            check_rate(c.rate);
            if (c.flip_prob.size() != sig_.size())
              fail(ErrorCode::kInvalidArgument, "mixture_atom needs one flip probability per relation");
            for (double p : c.flip_prob) check_prob(p, "mixture_atom flip probability");
          } else if constexpr (std::is_same_v<T, SetSingleton>) {
            check_rate(c.rate);
            if (sig_ != Signature({1}))
              fail(ErrorCode::kInvalidArgument, "set_singleton requires signature (1)");
          } else if constexpr (std::is_same_v<T, VertexComponent>) {
            check_rate(c.rate);
            if (!is_graph_like(sig_))
              fail(ErrorCode::kInvalidArgument, "vertex component requires signature (2) or (1,2)");
            if (!(c.edge_prob > 0.0 && c.edge_prob <= 1.0))
              fail(ErrorCode::kInvalidArgument, "vertex edge probability must lie in (0, 1]");
            check_prob(c.membership_prob, "vertex membership probability");
            if (sig_ == graph_signature() && c.membership_prob != 0.0)
              fail(ErrorCode::kInvalidArgument, "membership flips need signature (1,2)");
          } else if constexpr (std::is_same_v<T, PairComponent>) {
            check_rate(c.rate);
            if (!is_graph_like(sig_))
              fail(ErrorCode::kInvalidArgument, "pair component requires signature (2) or (1,2)");
            check_weights(c.pattern);
          } else if constexpr (std::is_same_v<T, LoopComponent>) {
            check_rate(c.rate);
            if (!is_graph_like(sig_))
              fail(ErrorCode::kInvalidArgument, "loop component requires signature (2) or (1,2)");
            check_weights(c.pattern);
            if (sig_ == graph_signature() && (c.pattern[0] != 0.0 || c.pattern[2] != 0.0))
              fail(ErrorCode::kInvalidArgument, "membership patterns need signature (1,2)");
          } else {
            if (c.measure.signature() != sig_)
              fail(ErrorCode::kShapeMismatch, "explicit measure signature differs from intensity");
            if (c.measure.mass(empty_structure(sig_, c.measure.size())) != 0.0)
              fail(ErrorCode::kInvalidArgument, "explicit jump measure must not charge the empty structure");
          }
        },
        comp);
  }
}

RestrictedIntensity::RestrictedIntensity(const LevyIntensity& intensity, std::size_t n)
    : intensity_(intensity), n_(n) {
  if (n == 0) fail(ErrorCode::kInvalidArgument, "restriction level must be >= 1");
  const Signature& sig = intensity_.signature();
  const double dn = static_cast<double>(n);
  for (const auto& comp : intensity_.components()) {
    double rate = 0.0;
    std::unique_ptr<IncrementSampler> sampler;
    std::visit(
        [&](const auto& c) {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, MixtureAtom>) {
            rate = c.rate * conditioned_fraction(mixture_groups(c, sig, n));
          } else if constexpr (std::is_same_v<T, SetSingleton>) {
            rate = c.rate * dn;
          } else if constexpr (std::is_same_v<T, VertexComponent>) {
            rate = c.rate * dn * conditioned_fraction(vertex_groups(c, sig, n));
          } else if constexpr (std::is_same_v<T, PairComponent>) {
            rate = c.rate * dn * (dn - 1.0) / 2.0;
          } else if constexpr (std::is_same_v<T, LoopComponent>) {
            rate = c.rate * dn;
          } else {
            if (n > c.measure.size())
              fail(ErrorCode::kInvalidArgument,
                   "explicit intensity on [" + std::to_string(c.measure.size()) +
                       "] cannot be evaluated at level " + std::to_string(n));
            FiniteMeasure r = restrict_measure(c.measure, n);
            rate = r.total_mass();
            if (rate > 0.0) sampler = std::make_unique<IncrementSampler>(r.scaled(1.0 / rate));
          }
        },
        comp);
    rates_.push_back(rate);
    total_ += rate;
    cumulative_.push_back(total_);
    explicit_samplers_.push_back(std::move(sampler));
  }
}

Structure RestrictedIntensity::sample(Rng& rng) const {
  if (!(total_ > 0.0)) fail(ErrorCode::kInvalidArgument, "zero intensity has no jumps to sample");
  const double u = rng.uniform() * total_;
  std::size_t idx = static_cast<std::size_t>(
      std::upper_bound(cumulative_.begin(), cumulative_.end(), u) - cumulative_.begin());
  idx = std::min(idx, rates_.size() - 1);
  while (rates_[idx] == 0.0 && idx > 0) --idx;
  return sample_component(idx, rng);
}

Structure RestrictedIntensity::sample_component(std::size_t index, Rng& rng) const {
  if (rates_.at(index) == 0.0)
    fail(ErrorCode::kInvalidArgument, "component has zero restricted rate");
  const Signature& sig = intensity_.signature();
  const std::size_t n = n_;
  Structure inc(sig, n);
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, MixtureAtom>) {
          sample_conditioned_flips(
              mixture_groups(c, sig, n), rng,
              [&](std::size_t j, std::uint64_t cell) { flip_relation_cell(inc, j, cell); },
              [&] { inc = Structure(sig, n); });
        } else if constexpr (std::is_same_v<T, SetSingleton>) {
          flip_member(inc, static_cast<Label>(rng.below(n) + 1));
        } else if constexpr (std::is_same_v<T, VertexComponent>) {
          const auto i = static_cast<Label>(rng.below(n) + 1);
          auto other = [&](std::uint64_t k) { return static_cast<Label>(k + 1 < i ? k + 1 : k + 2); };
          auto flip = [&](std::size_t g, std::uint64_t k) {
            switch (g) {
              case 0: flip_member(inc, i); break;
              case 1: flip_edge(inc, i, other(k)); break;
              case 2: flip_edge(inc, other(k), i); break;
              default: flip_edge(inc, i, i); break;
            }
          };
          sample_conditioned_flips(vertex_groups(c, sig, n), rng, flip,
                                   [&] { inc = Structure(sig, n); });
        } else if constexpr (std::is_same_v<T, PairComponent>) {
          const auto a = static_cast<Label>(rng.below(n) + 1);
          auto b = static_cast<Label>(rng.below(n - 1) + 1);
          if (b >= a) ++b;
          const std::size_t pat = pick_weighted(c.pattern, rng);
          if (pat != 1) flip_edge(inc, a, b);
          if (pat != 0) flip_edge(inc, b, a);
        } else if constexpr (std::is_same_v<T, LoopComponent>) {
          const auto i = static_cast<Label>(rng.below(n) + 1);
          const std::size_t pat = pick_weighted(c.pattern, rng);
          if (pat != 1) flip_member(inc, i);
          if (pat != 0) flip_edge(inc, i, i);
        } else {
          inc = (*explicit_samplers_[index])(rng);
        }
      },
      intensity_.components()[index]);
  return inc;
}

RestrictedIntensity restricted_measure(const LevyIntensity& intensity, std::size_t n) {
  return RestrictedIntensity(intensity, n);
}

FiniteMeasure exact_restricted_measure(const LevyIntensity& intensity, std::size_t n) {
  if (n == 0) fail(ErrorCode::kInvalidArgument, "restriction level must be >= 1");
  const Signature& sig = intensity.signature();
  const CellLayout layout(sig, n);
  if (layout.cell_count() > kMaxEnumerationCells)
    fail(ErrorCode::kCapExceeded, "exact restricted measure needs an enumerable L_[n]");
  FiniteMeasure out(sig, n);
  // Enumerates nonempty subsets of `cells` with independent flip probabilities.
  auto add_product = [&](const std::vector<std::pair<CellMask, double>>& cells, double rate) {
    const std::size_t k = cells.size();
    for (std::uint64_t sub = 1; sub < (std::uint64_t{1} << k); ++sub) {
      double w = rate;
      CellMask m = 0;
      for (std::size_t b = 0; b < k; ++b) {
        if ((sub >> b) & 1u) {
          w *= cells[b].second;
          m |= cells[b].first;
        } else {
          w *= 1.0 - cells[b].second;
        }
      }
      if (w > 0.0) out.add(layout.decode(m), w);
    }
  };
  auto cell_bit = [&](std::size_t rel, std::initializer_list<Label> t) {
    return CellMask{1} << layout.cell_of(rel, std::vector<Label>(t));
  };
  const std::size_t er = is_graph_like(sig) ? edge_relation(sig) : 0;
  for (const auto& comp : intensity.components()) {
    std::visit(
        [&](const auto& c) {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, MixtureAtom>) {
            std::vector<std::pair<CellMask, double>> cells;
            for (std::size_t cell = 0; cell < layout.cell_count(); ++cell)
              cells.emplace_back(CellMask{1} << cell, c.flip_prob[layout.relation_of(cell)]);
            add_product(cells, c.rate);
          } else if constexpr (std::is_same_v<T, SetSingleton>) {
            for (Label i = 1; i <= n; ++i) out.add(layout.decode(cell_bit(0, {i})), c.rate);
          } else if constexpr (std::is_same_v<T, VertexComponent>) {
            for (Label i = 1; i <= n; ++i) {
              std::vector<std::pair<CellMask, double>> cells;
              if (sig == community_signature()) cells.emplace_back(cell_bit(0, {i}), c.membership_prob);
              for (Label j = 1; j <= n; ++j) {
                if (j == i) continue;
                cells.emplace_back(cell_bit(er, {i, j}), c.edge_prob);
                cells.emplace_back(cell_bit(er, {j, i}), c.edge_prob);
              }
              if (c.include_loop) cells.emplace_back(cell_bit(er, {i, i}), c.edge_prob);
              add_product(cells, c.rate);
            }
          } else if constexpr (std::is_same_v<T, PairComponent>) {
            const double w = c.pattern[0] + c.pattern[1] + c.pattern[2];
            const double single = c.rate * 0.5 * (c.pattern[0] + c.pattern[1]) / w;
            for (Label i = 1; i <= n; ++i)
              for (Label j = i + 1; j <= n; ++j) {
                out.add(layout.decode(cell_bit(er, {i, j})), single);
                out.add(layout.decode(cell_bit(er, {j, i})), single);
                out.add(layout.decode(cell_bit(er, {i, j}) | cell_bit(er, {j, i})),
                        c.rate * c.pattern[2] / w);
              }
          } else if constexpr (std::is_same_v<T, LoopComponent>) {
            const double w = c.pattern[0] + c.pattern[1] + c.pattern[2];
            for (Label i = 1; i <= n; ++i) {
              const CellMask loop = cell_bit(er, {i, i});
              if (sig == community_signature()) {
                const CellMask mem = cell_bit(0, {i});
                out.add(layout.decode(mem), c.rate * c.pattern[0] / w);
                out.add(layout.decode(mem | loop), c.rate * c.pattern[2] / w);
              }
              out.add(layout.decode(loop), c.rate * c.pattern[1] / w);
            }
          } else {
            if (n > c.measure.size())
              fail(ErrorCode::kInvalidArgument, "explicit intensity level is below the requested level");
            for (const auto& [key, atom] : restrict_measure(c.measure, n).atoms())
              out.add(atom.structure, atom.mass);
          }
        },
        comp);
  }
  return out;
}

const Structure& LevyTrajectory::state_at(double t) const {
  if (events.empty()) fail(ErrorCode::kInvalidArgument, "empty trajectory");
  auto it = std::upper_bound(events.begin(), events.end(), t,
                             [](double x, const LevyEvent& e) { return x < e.time; });
  if (it == events.begin()) fail(ErrorCode::kInvalidArgument, "time precedes the trajectory start");
  return std::prev(it)->state;
}

void validate_trajectory(const LevyTrajectory& traj) {
  if (traj.events.empty() || traj.events.front().time != 0.0)
    fail(ErrorCode::kInvalidArgument, "trajectory must start with an event at time 0");
  for (std::size_t i = 0; i < traj.events.size(); ++i) {
    const auto& e = traj.events[i];
    if (e.state.size() != traj.n)
      fail(ErrorCode::kShapeMismatch, "trajectory state has the wrong base size");
    if (i == 0) continue;
    const auto& prev = traj.events[i - 1];
    if (!(e.time > prev.time)) fail(ErrorCode::kInvalidArgument, "event times must increase strictly");
    if (!e.state.same_shape(prev.state))
      fail(ErrorCode::kShapeMismatch, "trajectory states differ in shape");
    if (e.state == prev.state)
      fail(ErrorCode::kInvalidArgument, "consecutive trajectory states must differ");
  }
}

LevyTrajectory simulate_levy(const RestrictedIntensity& restricted, double horizon, Rng& rng) {
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    fail(ErrorCode::kInvalidArgument, "horizon must be positive and finite");
  LevyTrajectory traj;
  traj.n = restricted.level();
  traj.horizon = horizon;
  Structure state(restricted.signature(), restricted.level());
  traj.events.push_back({0.0, state});
  const double rate = restricted.total_rate();
  if (!(rate > 0.0)) return traj;
  double t = 0.0;
  while (true) {
    t += rng.exponential(rate);
    if (t > horizon) break;
    state ^= restricted.sample(rng);
    traj.events.push_back({t, state});
  }
  return traj;
}

LevyTrajectory simulate_levy(const LevyIntensity& intensity, std::size_t n, double horizon,
                             Rng& rng) {
  return simulate_levy(RestrictedIntensity(intensity, n), horizon, rng);
}

LevyTrajectory restrict_trajectory(const LevyTrajectory& traj, std::size_t m) {
  if (m > traj.n) fail(ErrorCode::kInvalidArgument, "restriction level exceeds trajectory level");
  LevyTrajectory out;
  out.n = m;
  out.horizon = traj.horizon;
  for (const auto& e : traj.events) {
    Structure r = restrict(e.state, m);
    if (!out.events.empty() && out.events.back().state == r) continue;
    out.events.push_back({e.time, std::move(r)});
  }
  return out;
}

WalkTrajectory jump_chain(const LevyTrajectory& traj) {
  WalkTrajectory w;
  for (const auto& e : traj.events) w.states.push_back(e.state);
  return w;
}

LevyTrajectory relabel_trajectory(const LevyTrajectory& traj, const Permutation& sigma) {
  LevyTrajectory out;
  out.n = traj.n;
  out.horizon = traj.horizon;
  for (const auto& e : traj.events) out.events.push_back({e.time, relabel(e.state, sigma)});
  return out;
}

}  // namespace clevy
