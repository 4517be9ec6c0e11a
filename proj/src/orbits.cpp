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

#include "clevy/orbits.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <set>

#include "clevy/error.hpp"

namespace clevy {

namespace {

void check_cap(const Structure& m, std::size_t max_n) {
  if (m.size() > max_n)
    fail(ErrorCode::kCapExceeded,
         "orbit computations are capped at n <= " + std::to_string(max_n) + " (got n = " +
             std::to_string(m.size()) + ")");
}

template <class F>
void for_each_permutation(std::size_t n, F&& f) {
  std::vector<Label> img(n);
  std::iota(img.begin(), img.end(), Label{1});
  do {
    f(Permutation(img));
  } while (std::next_permutation(img.begin(), img.end()));
}

// All n! relabel tables for a maskable layout.
struct PermutationTables {
  CellLayout layout;
  std::vector<std::vector<std::uint8_t>> tables;

  PermutationTables(const Signature& sig, std::size_t n) : layout(sig, n) {
    for_each_permutation(n, [&](const Permutation& p) { tables.push_back(layout.relabel_table(p)); });
  }
};

const PermutationTables& permutation_tables(const Signature& sig, std::size_t n) {
  static std::mutex mu;
  static std::map<std::pair<std::string, std::size_t>, std::unique_ptr<PermutationTables>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{sig.to_string(), n}];
  if (!slot) slot = std::make_unique<PermutationTables>(sig, n);
  return *slot;
}

bool maskable(const Structure& m) { return total_cells(m.signature(), m.size()) <= 64; }

std::vector<CellMask> mask_orbit(const PermutationTables& pt, CellMask mask) {
  std::vector<CellMask> out;
  out.reserve(pt.tables.size());
  for (const auto& t : pt.tables) out.push_back(CellLayout::apply(t, mask));
  std::sort(out.begin(), out.end(), CellLayout::canonical_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Generic path for layouts with more than 64 cells.
std::vector<Structure> generic_orbit(const Structure& m) {
  std::vector<Structure> out;
  for_each_permutation(m.size(), [&](const Permutation& p) { out.push_back(relabel(m, p)); });
  const auto less = [](const Structure& a, const Structure& b) {
    return canonical_compare(a, b) < 0;
  };
  std::sort(out.begin(), out.end(), less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

std::uint64_t OrbitTable::total_size() const {
  std::uint64_t s = 0;
  for (const auto& e : entries) s += e.size;
  return s;
}

Structure canonical_form(const Structure& m, std::size_t max_n) {
  check_cap(m, max_n);
  if (maskable(m)) {
    const auto& pt = permutation_tables(m.signature(), m.size());
    const CellMask x = pt.layout.encode(m);
    CellMask best = x;
    for (const auto& t : pt.tables) {
      const CellMask y = CellLayout::apply(t, x);
      if (CellLayout::canonical_less(y, best)) best = y;
    }
    return pt.layout.decode(best);
  }
  Structure best = m;
  for_each_permutation(m.size(), [&](const Permutation& p) {
    Structure y = relabel(m, p);
    if (canonical_compare(y, best) < 0) best = std::move(y);
  });
  return best;
}

OrbitId orbit_of(const Structure& m, std::size_t max_n) {
  return OrbitId{serialize(canonical_form(m, max_n))};
}

std::vector<Structure> orbit_members(const Structure& m, std::size_t max_n) {
  check_cap(m, max_n);
  if (!maskable(m)) return generic_orbit(m);
  const auto& pt = permutation_tables(m.signature(), m.size());
  std::vector<Structure> out;
  for (CellMask x : mask_orbit(pt, pt.layout.encode(m))) out.push_back(pt.layout.decode(x));
  return out;
}

std::uint64_t orbit_size(const Structure& m, std::size_t max_n) {
  check_cap(m, max_n);
  if (!maskable(m)) return generic_orbit(m).size();
  const auto& pt = permutation_tables(m.signature(), m.size());
  return mask_orbit(pt, pt.layout.encode(m)).size();
}

std::uint64_t stabilizer_size(const Structure& m, std::size_t max_n) {
  check_cap(m, max_n);
  std::uint64_t count = 0;
  for_each_permutation(m.size(), [&](const Permutation& p) {
    if (relabel(m, p) == m) ++count;
  });
  return count;
}

bool is_canonical_orbit_id(const OrbitId& id) {
  try {
    const Structure s = parse_structure(id.canonical);
    return serialize(canonical_form(s)) == id.canonical;
  } catch (const Error&) {
    return false;
  }
}

EnumeratedSpace::EnumeratedSpace(const Signature& sig, std::size_t n) : layout_(sig, n) {
  if (layout_.cell_count() > kMaxEnumerationCells)
    fail(ErrorCode::kCapExceeded, "L_[n] has 2^" + std::to_string(layout_.cell_count()) +
                                      " structures; enumeration is capped at 2^" +
                                      std::to_string(kMaxEnumerationCells));
  if (n > kDefaultOrbitCap)
    fail(ErrorCode::kCapExceeded, "orbit enumeration is capped at n <= " +
                                      std::to_string(kDefaultOrbitCap));
  const auto& pt = permutation_tables(sig, n);
  const std::size_t count = std::size_t{1} << layout_.cell_count();
  constexpr auto kUnset = static_cast<std::uint32_t>(-1);
  orbit_of_mask_.assign(count, kUnset);

  std::vector<std::vector<CellMask>> orbits;
  for (CellMask x = 0; x < count; ++x) {
    if (orbit_of_mask_[x] != kUnset) continue;
    auto orb = mask_orbit(pt, x);
    for (CellMask y : orb) orbit_of_mask_[y] = static_cast<std::uint32_t>(orbits.size());
    orbits.push_back(std::move(orb));
  }
  // Renumber orbits in ascending canonical order of representatives.
  std::vector<std::uint32_t> order(orbits.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return CellLayout::canonical_less(orbits[a].front(), orbits[b].front());
  });
  std::vector<std::uint32_t> rank(orbits.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) rank[order[i]] = i;
  for (auto& o : orbit_of_mask_) o = rank[o];

  table_.signature = sig;
  table_.n = n;
  for (std::uint32_t i : order) {
    reps_.push_back(orbits[i].front());
    table_.entries.push_back(
        OrbitEntry{OrbitId{serialize(layout_.decode(orbits[i].front()))}, orbits[i].size()});
    members_.push_back(std::move(orbits[i]));
  }
}

const EnumeratedSpace& enumerated_space(const Signature& sig, std::size_t n) {
  static std::mutex mu;
  static std::map<std::pair<std::string, std::size_t>, std::unique_ptr<EnumeratedSpace>> cache;
  {
    std::lock_guard lock(mu);
    auto it = cache.find({sig.to_string(), n});
    if (it != cache.end()) return *it->second;
  }
  auto built = std::make_unique<EnumeratedSpace>(sig, n);
  std::lock_guard lock(mu);
  auto& slot = cache[{sig.to_string(), n}];
  if (!slot) slot = std::move(built);
  return *slot;
}

const OrbitTable& enumerate_orbits(const Signature& sig, std::size_t n) {
  return enumerated_space(sig, n).table();
}

}  // namespace clevy
