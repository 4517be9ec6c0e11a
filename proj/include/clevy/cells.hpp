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

// Dense cell indexing of L_[n] for small (signature, n).
//
// Cells run over relation 1 in lexicographic tuple order, then relation 2,
// and so on. A structure with at most 64 cells is encoded as a bit mask with
// cell c at bit c. In canonical serialization order a mask is smaller than
// another exactly when the lowest differing cell belongs to it.

#ifndef CLEVY_CELLS_HPP
#define CLEVY_CELLS_HPP

#include <cstdint>
#include <vector>

#include "clevy/structure.hpp"

namespace clevy {

using CellMask = std::uint64_t;

class CellLayout {
 public:
  CellLayout(Signature sig, std::size_t n);

  const Signature& signature() const noexcept { return sig_; }
  std::size_t base_size() const noexcept { return n_; }
  std::size_t cell_count() const noexcept { return total_; }
  bool maskable() const noexcept { return total_ <= 64; }

  std::size_t relation_of(std::size_t cell) const { return rel_[cell]; }
  const Tuple& tuple_of(std::size_t cell) const { return tuples_[cell]; }
  std::size_t cell_of(std::size_t relation, std::span<const Label> tuple) const;

  CellMask encode(const Structure& m) const;
  Structure decode(CellMask mask) const;

  // image[c] = cell of sigma^{-1}(tuple c): relabel(M, sigma) maps bit c to image[c].
  std::vector<std::uint8_t> relabel_table(const Permutation& sigma) const;
  static CellMask apply(const std::vector<std::uint8_t>& table, CellMask mask);

  // Strict canonical-order comparison of two masks.
  static bool canonical_less(CellMask a, CellMask b) {
    const CellMask d = a ^ b;
    return d != 0 && (a & (d & (~d + 1))) != 0;
  }

 private:
  Signature sig_;
  std::size_t n_;
  std::size_t total_ = 0;
  std::vector<std::size_t> offset_;
  std::vector<std::size_t> rel_;
  std::vector<Tuple> tuples_;
};

}  // namespace clevy

#endif  // CLEVY_CELLS_HPP
