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

#include "clevy/measures.hpp"

#include <cmath>
#include <set>

#include "clevy/error.hpp"

namespace clevy {

namespace {

double neumaier_sum(const std::map<std::string, FiniteMeasure::Atom>& atoms) {
  double sum = 0.0, comp = 0.0;
  for (const auto& [key, atom] : atoms) {
    const double t = sum + atom.mass;
    comp += std::abs(sum) >= std::abs(atom.mass) ? (sum - t) + atom.mass : (atom.mass - t) + sum;
    sum = t;
  }
  return sum + comp;
}

struct OrbitGroup {
  Structure representative;
  double total = 0.0;
};

// Orbit totals of mu keyed by canonical orbit text.
std::map<std::string, OrbitGroup> orbit_totals(const FiniteMeasure& mu) {
  std::map<std::string, OrbitGroup> groups;
  for (const auto& [key, atom] : mu.atoms()) {
    Structure canon = canonical_form(atom.structure);
    auto& g = groups[serialize(canon)];
    if (g.total == 0.0) g.representative = std::move(canon);
    g.total += atom.mass;
  }
  return groups;
}

constexpr std::size_t kMaxBernoulliN = 20;

}  // namespace

FiniteMeasure::FiniteMeasure(Signature sig, std::size_t n) : sig_(std::move(sig)), n_(n) {}

void FiniteMeasure::add(const Structure& m, double mass) {
  if (m.signature() != sig_ || m.size() != n_)
    fail(ErrorCode::kShapeMismatch, "structure shape differs from measure shape");
  if (!(mass >= 0.0) || !std::isfinite(mass))
    fail(ErrorCode::kInvalidArgument, "measure masses must be finite and nonnegative");
  if (mass == 0.0) return;
  auto key = serialize(m);
  auto it = atoms_.find(key);
  if (it == atoms_.end())
    atoms_.emplace(std::move(key), Atom{m, mass});
  else
    it->second.mass += mass;
}

double FiniteMeasure::mass(const Structure& m) const { return mass(serialize(m)); }

double FiniteMeasure::mass(const std::string& key) const {
  auto it = atoms_.find(key);
  return it == atoms_.end() ? 0.0 : it->second.mass;
}

double FiniteMeasure::total_mass() const { return neumaier_sum(atoms_); }

bool FiniteMeasure::is_probability(double tol) const { return std::abs(total_mass() - 1.0) <= tol; }

FiniteMeasure FiniteMeasure::scaled(double factor) const {
  FiniteMeasure out(sig_, n_);
  for (const auto& [key, atom] : atoms_) out.add(atom.structure, atom.mass * factor);
  return out;
}

double OrbitWeights::total() const {
  double s = 0.0;
  for (const auto& [k, v] : p) s += v;
  return s;
}

FiniteMeasure uniform_on_orbit(const OrbitId& orbit) {
  if (!is_canonical_orbit_id(orbit))
    fail(ErrorCode::kInvalidArgument, "'" + orbit.canonical + "' is not a canonical orbit id");
  const Structure rep = orbit.representative();
  const auto members = orbit_members(rep);
  FiniteMeasure mu(rep.signature(), rep.size());
  const double w = 1.0 / static_cast<double>(members.size());
  for (const auto& m : members) mu.add(m, w);
  return mu;
}

FiniteMeasure urn_measure(std::size_t k, std::size_t n) {
  if (k > n) fail(ErrorCode::kInvalidArgument, "urn size k must satisfy 0 <= k <= n");
  const Signature sig({1});
  FiniteMeasure mu(sig, n);
  // Enumerate k-subsets as increasing index vectors.
  std::vector<Label> pick(k);
  for (std::size_t i = 0; i < k; ++i) pick[i] = static_cast<Label>(i + 1);
  std::vector<Structure> subsets;
  while (true) {
    Structure s(sig, n);
    for (Label a : pick) s.insert(0, std::span<const Label>(&a, 1));
    subsets.push_back(std::move(s));
    std::size_t i = k;
    while (i > 0 && pick[i - 1] == n - k + i) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
  const double w = 1.0 / static_cast<double>(subsets.size());
  for (const auto& s : subsets) mu.add(s, w);
  return mu;
}

FiniteMeasure bernoulli_set_measure(double prob, std::size_t n) {
  if (!(prob >= 0.0 && prob <= 1.0))
    fail(ErrorCode::kInvalidArgument, "Bernoulli probability must lie in [0, 1]");
  if (n > kMaxBernoulliN)
    fail(ErrorCode::kCapExceeded, "bernoulli_set_measure enumerates 2^n subsets; n <= 20");
  const Signature sig({1});
  FiniteMeasure mu(sig, n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    Structure s(sig, n);
    const int k = __builtin_popcountll(mask);
    for (std::size_t i = 0; i < n; ++i) {
      if ((mask >> i) & 1u) {
        const Label a = static_cast<Label>(i + 1);
        s.insert(0, std::span<const Label>(&a, 1));
      }
    }
    mu.add(s, std::pow(prob, k) * std::pow(1.0 - prob, static_cast<double>(n) - k));
  }
  return mu;
}

double exchangeability_defect(const FiniteMeasure& mu) {
  double defect = 0.0;
  for (const auto& [key, g] : orbit_totals(mu)) {
    const auto members = orbit_members(g.representative);
    const double mean = g.total / static_cast<double>(members.size());
    for (const auto& m : members) defect = std::max(defect, std::abs(mu.mass(m) - mean));
  }
  return defect;
}

bool is_exchangeable(const FiniteMeasure& mu, double tol) {
  return exchangeability_defect(mu) <= tol;
}

FiniteMeasure symmetrize(const FiniteMeasure& mu) {
  FiniteMeasure out(mu.signature(), mu.size());
  for (const auto& [key, g] : orbit_totals(mu)) {
    const auto members = orbit_members(g.representative);
    const double w = g.total / static_cast<double>(members.size());
    for (const auto& m : members) out.add(m, w);
  }
  return out;
}

OrbitWeights decompose_exchangeable(const FiniteMeasure& mu) {
  if (!mu.is_probability())
    fail(ErrorCode::kNotNormalized, "decomposition requires a probability measure");
  if (!is_exchangeable(mu, kDefaultExchangeabilityTolerance))
    fail(ErrorCode::kNotExchangeable, "decomposition requires an exchangeable measure");
  OrbitWeights w{mu.signature(), mu.size(), {}};
  for (auto& [key, g] : orbit_totals(mu)) w.p[key] = g.total;
  return w;
}

FiniteMeasure recompose(const OrbitWeights& p) {
  FiniteMeasure out(p.signature, p.n);
  for (const auto& [key, weight] : p.p) {
    if (!(weight >= 0.0)) fail(ErrorCode::kInvalidArgument, "orbit weights must be nonnegative");
    if (weight == 0.0) continue;
    const OrbitId id{key};
    const Structure rep = id.representative();
    if (rep.signature() != p.signature || rep.size() != p.n)
      fail(ErrorCode::kShapeMismatch, "orbit id does not match the weights' shape");
    if (!is_canonical_orbit_id(id))
      fail(ErrorCode::kInvalidArgument, "'" + key + "' is not a canonical orbit id");
    const auto members = orbit_members(rep);
    const double w = weight / static_cast<double>(members.size());
    for (const auto& m : members) out.add(m, w);
  }
  return out;
}

double l1_distance(const FiniteMeasure& a, const FiniteMeasure& b) {
  if (a.signature() != b.signature() || a.size() != b.size())
    fail(ErrorCode::kShapeMismatch, "measure shapes differ");
  std::set<std::string> keys;
  for (const auto& [k, v] : a.atoms()) keys.insert(k);
  for (const auto& [k, v] : b.atoms()) keys.insert(k);
  double d = 0.0;
  for (const auto& k : keys) d += std::abs(a.mass(k) - b.mass(k));
  return d;
}

}  // namespace clevy
