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

// Isomorphism classes of L_[n] under relabeling.
//
// The canonical representative of an orbit is the member with the smallest
// canonical serialization, found by exhaustive minimization over all n!
// relabelings. This is practical for n <= 8, which is the default cap.

#ifndef CLEVY_ORBITS_HPP
#define CLEVY_ORBITS_HPP

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "clevy/cells.hpp"
#include "clevy/structure.hpp"

namespace clevy {

inline constexpr std::size_t kDefaultOrbitCap = 8;
// Full enumeration of L_[n] is allowed up to 2^20 structures.
inline constexpr std::size_t kMaxEnumerationCells = 20;

struct OrbitId {
  std::string canonical;  // serialize(canonical_form(M))

  Structure representative() const { return parse_structure(canonical); }
  auto operator<=>(const OrbitId&) const = default;
};

struct OrbitEntry {
  OrbitId id;
  std::uint64_t size = 0;
};

struct OrbitTable {
  Signature signature;
  std::size_t n = 0;
  std::vector<OrbitEntry> entries;  // ascending canonical order

  std::uint64_t total_size() const;
};

Structure canonical_form(const Structure& m, std::size_t max_n = kDefaultOrbitCap);
OrbitId orbit_of(const Structure& m, std::size_t max_n = kDefaultOrbitCap);
std::uint64_t orbit_size(const Structure& m, std::size_t max_n = kDefaultOrbitCap);
std::uint64_t stabilizer_size(const Structure& m, std::size_t max_n = kDefaultOrbitCap);
// Distinct relabelings of m in ascending canonical order.
std::vector<Structure> orbit_members(const Structure& m, std::size_t max_n = kDefaultOrbitCap);

// True when id names a valid orbit (its text is already canonical).
bool is_canonical_orbit_id(const OrbitId& id);

// Every structure of L_[n] indexed by cell mask, with its orbit. Cached per
// (signature, n) for the lifetime of the process; the returned reference
// stays valid.
class EnumeratedSpace {
 public:
  EnumeratedSpace(const Signature& sig, std::size_t n);

  const CellLayout& layout() const noexcept { return layout_; }
  std::size_t structure_count() const noexcept { return orbit_of_mask_.size(); }
  std::size_t orbit_count() const noexcept { return reps_.size(); }

  std::uint32_t orbit_index(CellMask mask) const { return orbit_of_mask_.at(mask); }
  CellMask representative(std::uint32_t orbit) const { return reps_.at(orbit); }
  const std::vector<CellMask>& members(std::uint32_t orbit) const { return members_.at(orbit); }
  const OrbitTable& table() const noexcept { return table_; }

 private:
  CellLayout layout_;
  std::vector<std::uint32_t> orbit_of_mask_;
  std::vector<CellMask> reps_;
  std::vector<std::vector<CellMask>> members_;
  OrbitTable table_;
};

const EnumeratedSpace& enumerated_space(const Signature& sig, std::size_t n);

const OrbitTable& enumerate_orbits(const Signature& sig, std::size_t n);

}  // namespace clevy

#endif  // CLEVY_ORBITS_HPP
