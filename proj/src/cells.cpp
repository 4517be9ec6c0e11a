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

#include "clevy/cells.hpp"

#include "clevy/error.hpp"

namespace clevy {

namespace {
constexpr std::size_t kMaxLayoutCells = 1u << 20;
}

CellLayout::CellLayout(Signature sig, std::size_t n) : sig_(std::move(sig)), n_(n) {
  total_ = total_cells(sig_, n_);
  if (total_ > kMaxLayoutCells) fail(ErrorCode::kCapExceeded, "too many cells for a dense layout");
  rel_.reserve(total_);
  tuples_.reserve(total_);
  for (std::size_t j = 0; j < sig_.size(); ++j) {
    offset_.push_back(rel_.size());
    const unsigned ar = sig_.arity(j);
    Tuple t(ar, 1);
    if (ar > 0 && n_ == 0) continue;
    while (true) {
      rel_.push_back(j);
      tuples_.push_back(t);
      // Odometer increment, last coordinate fastest.
      std::size_t pos = ar;
      while (pos > 0) {
        if (t[pos - 1] < n_) {
          ++t[pos - 1];
          break;
        }
        t[pos - 1] = 1;
        --pos;
      }
      if (pos == 0) break;
    }
  }
}

std::size_t CellLayout::cell_of(std::size_t relation, std::span<const Label> tuple) const {
  std::size_t c = 0;
  for (Label a : tuple) c = c * n_ + (a - 1);
  return offset_.at(relation) + c;
}

CellMask CellLayout::encode(const Structure& m) const {
  if (!maskable()) fail(ErrorCode::kCapExceeded, "structure has more than 64 cells");
  if (m.signature() != sig_ || m.size() != n_)
    fail(ErrorCode::kShapeMismatch, "structure does not match cell layout");
  CellMask mask = 0;
  for (std::size_t j = 0; j < m.relation_count(); ++j) {
    m.relation(j).for_each(
        [&](std::span<const Label> t) { mask |= CellMask{1} << cell_of(j, t); });
  }
  return mask;
}

Structure CellLayout::decode(CellMask mask) const {
  if (!maskable()) fail(ErrorCode::kCapExceeded, "structure has more than 64 cells");
  Structure out(sig_, n_);
  while (mask) {
    const auto c = static_cast<std::size_t>(__builtin_ctzll(mask));
    mask &= mask - 1;
    out.toggle(rel_[c], tuples_[c]);
  }
  return out;
}

std::vector<std::uint8_t> CellLayout::relabel_table(const Permutation& sigma) const {
  if (!maskable()) fail(ErrorCode::kCapExceeded, "structure has more than 64 cells");
  const Permutation inv = sigma.inverse();
  std::vector<std::uint8_t> table(total_);
  Tuple buf;
  for (std::size_t c = 0; c < total_; ++c) {
    buf = tuples_[c];
    for (auto& a : buf) a = inv(a);
    table[c] = static_cast<std::uint8_t>(cell_of(rel_[c], buf));
  }
  return table;
}

CellMask CellLayout::apply(const std::vector<std::uint8_t>& table, CellMask mask) {
  CellMask out = 0;
  while (mask) {
    const auto c = static_cast<unsigned>(__builtin_ctzll(mask));
    mask &= mask - 1;
    out |= CellMask{1} << table[c];
  }
  return out;
}

}  // namespace clevy
