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

#include "clevy/limits.hpp"

#include <cmath>
#include <numeric>

#include "clevy/error.hpp"

namespace clevy {

namespace {

// Pattern cells of L_[m] in layout order, grouped by their largest entry so
// that a cell can be decided as soon as phi is fixed on that prefix.
struct PatternCells {
  std::vector<std::vector<std::size_t>> by_depth;  // depth 0..m

  explicit PatternCells(const CellLayout& layout) : by_depth(layout.base_size() + 1) {
    for (std::size_t c = 0; c < layout.cell_count(); ++c) {
      Label mx = 0;
      for (Label a : layout.tuple_of(c)) mx = std::max(mx, a);
      by_depth[mx].push_back(c);
    }
  }
};

bool holds_under(const Structure& m, const CellLayout& layout, std::size_t cell,
                 const std::vector<Label>& phi, Tuple& buf) {
  const Tuple& t = layout.tuple_of(cell);
  buf.resize(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) buf[i] = phi[t[i] - 1];
  return m.contains(layout.relation_of(cell), buf);
}

void check_injections(std::size_t n, std::size_t level, std::uint64_t cap) {
  if (level > n) fail(ErrorCode::kInvalidArgument, "pattern level exceeds base size");
  const std::uint64_t count = injection_count(n, level);
  if (count > cap)
    fail(ErrorCode::kCapExceeded, std::to_string(count) + " injections exceed the cap of " +
                                      std::to_string(cap) + "; use the Monte Carlo estimator");
}

}  // namespace

DensityVector::DensityVector(Signature sig, std::size_t m) : layout_(std::move(sig), m) {
  if (layout_.cell_count() > kMaxPatternCells)
    fail(ErrorCode::kCapExceeded, "pattern space L_[m] is too large to enumerate");
  values_.assign(std::size_t{1} << layout_.cell_count(), 0.0);
}

std::vector<std::pair<std::string, double>> DensityVector::entries() const {
  std::vector<std::pair<std::string, double>> out;
  out.reserve(values_.size());
  for (CellMask x = 0; x < values_.size(); ++x) out.emplace_back(serialize(layout_.decode(x)), values_[x]);
  return out;
}

std::uint64_t injection_count(std::size_t n, std::size_t m) {
  if (m > n) return 0;
  std::uint64_t c = 1;
  for (std::size_t i = 0; i < m; ++i) {
    const std::uint64_t f = n - i;
    if (c > UINT64_MAX / f) return UINT64_MAX;
    c *= f;
  }
  return c;
}

double hom_density_exact(const Structure& pattern, const Structure& m, std::uint64_t cap) {
  if (pattern.signature() != m.signature())
    fail(ErrorCode::kShapeMismatch, "pattern and structure signatures differ");
  const std::size_t level = pattern.size(), n = m.size();
  check_injections(n, level, cap);
  const CellLayout layout(pattern.signature(), level);
  const PatternCells cells(layout);
  std::vector<bool> want(layout.cell_count());
  for (std::size_t c = 0; c < layout.cell_count(); ++c)
    want[c] = pattern.contains(layout.relation_of(c), layout.tuple_of(c));

  std::vector<Label> phi(level);
  std::vector<bool> used(n + 1, false);
  Tuple buf;
  auto consistent = [&](std::size_t depth) {
    for (std::size_t c : cells.by_depth[depth])
      if (holds_under(m, layout, c, phi, buf) != want[c]) return false;
    return true;
  };
  std::uint64_t hits = 0;
  // Depth-first over partial injections, pruning on decided cells.
  auto recurse = [&](auto& self, std::size_t depth) -> void {
    if (depth == level) {
      ++hits;
      return;
    }
    for (Label x = 1; x <= n; ++x) {
      if (used[x]) continue;
      used[x] = true;
      phi[depth] = x;
      if (consistent(depth + 1)) self(self, depth + 1);
      used[x] = false;
    }
  };
  if (consistent(0)) recurse(recurse, 0);
  return static_cast<double>(hits) / static_cast<double>(injection_count(n, level));
}

DensityVector density_vector(const Structure& m, std::size_t level, std::uint64_t cap) {
  const std::size_t n = m.size();
  check_injections(n, level, cap);
  DensityVector dv(m.signature(), level);
  const CellLayout& layout = dv.layout();
  const PatternCells cells(layout);
  std::vector<std::uint64_t> counts(dv.values().size(), 0);
  std::vector<Label> phi(level);
  std::vector<bool> used(n + 1, false);
  Tuple buf;
  auto extend = [&](std::size_t depth, CellMask mask) {
    for (std::size_t c : cells.by_depth[depth])
      if (holds_under(m, layout, c, phi, buf)) mask |= CellMask{1} << c;
    return mask;
  };
  auto recurse = [&](auto& self, std::size_t depth, CellMask mask) -> void {
    if (depth == level) {
      ++counts[mask];
      return;
    }
    for (Label x = 1; x <= n; ++x) {
      if (used[x]) continue;
      used[x] = true;
      phi[depth] = x;
      self(self, depth + 1, extend(depth + 1, mask));
      used[x] = false;
    }
  };
  recurse(recurse, 0, extend(0, 0));
  const double total = static_cast<double>(injection_count(n, level));
  for (std::size_t i = 0; i < counts.size(); ++i)
    dv.values()[i] = static_cast<double>(counts[i]) / total;
  return dv;
}

McEstimate hom_density_mc(const Structure& pattern, const Structure& m, std::size_t samples,
                          Rng& rng) {
  if (pattern.signature() != m.signature())
    fail(ErrorCode::kShapeMismatch, "pattern and structure signatures differ");
  if (samples == 0) fail(ErrorCode::kInvalidArgument, "need at least one Monte Carlo sample");
  const std::size_t level = pattern.size(), n = m.size();
  if (level > n) fail(ErrorCode::kInvalidArgument, "pattern level exceeds base size");
  const CellLayout layout(pattern.signature(), level);
  std::vector<bool> want(layout.cell_count());
  for (std::size_t c = 0; c < layout.cell_count(); ++c)
    want[c] = pattern.contains(layout.relation_of(c), layout.tuple_of(c));

  // Partial Fisher-Yates from any arrangement yields a uniform injection.
  std::vector<Label> pool(n);
  std::iota(pool.begin(), pool.end(), Label{1});
  std::vector<Label> phi(level);
  Tuple buf;
  std::uint64_t hits = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    for (std::size_t i = 0; i < level; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
      std::swap(pool[i], pool[j]);
      phi[i] = pool[i];
    }
    bool match = true;
    for (std::size_t c = 0; c < layout.cell_count() && match; ++c)
      match = holds_under(m, layout, c, phi, buf) == want[c];
    if (match) ++hits;
  }
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(samples))};
}

double set_frequency(const Structure& m) {
  if (m.signature() != Signature({1}))
    fail(ErrorCode::kInvalidArgument, "set_frequency requires signature (1)");
  if (m.size() == 0) return 0.0;
  return static_cast<double>(m.relation(0).count()) / static_cast<double>(m.size());
}

std::vector<DensityVector> limit_path(const LevyTrajectory& traj, std::size_t level,
                                      std::span<const double> grid, std::uint64_t cap) {
  std::vector<DensityVector> out;
  out.reserve(grid.size());
  for (double t : grid) {
    if (!(t >= 0.0 && t <= traj.horizon))
      fail(ErrorCode::kInvalidArgument, "grid time outside [0, horizon]");
    out.push_back(density_vector(traj.state_at(t), level, cap));
  }
  return out;
}

double l1_distance(const DensityVector& a, const DensityVector& b) {
  if (a.signature() != b.signature() || a.level() != b.level())
    fail(ErrorCode::kShapeMismatch, "density vectors differ in shape");
  double d = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) d += std::abs(a.values()[i] - b.values()[i]);
  return d;
}

}  // namespace clevy
