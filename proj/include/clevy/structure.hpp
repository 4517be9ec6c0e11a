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

// Finite labeled L-structures over the base set [n] = {1, ..., n}.
//
// A Signature lists the relation arities (i_1 <= ... <= i_k). A Structure
// holds one tuple-set per relation. Relations of arity <= 2 are backed by a
// dense bit vector whose cells are indexed in mixed radix, so cell order is
// lexicographic tuple order; higher arities use a sorted tuple list.
//
// Structures compose under the componentwise symmetric difference
// (increment), which makes every L_[n] an abelian group in which each element
// is its own inverse and the empty structure is the identity.

#ifndef CLEVY_STRUCTURE_HPP
#define CLEVY_STRUCTURE_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace clevy {

using Label = std::uint32_t;  // 1-based
using Tuple = std::vector<Label>;

class Signature {
 public:
  Signature() = default;
  // Throws kInvalidArgument unless arities are nondecreasing.
  explicit Signature(std::vector<unsigned> arities);

  // Accepts "(1,2)", "1,2", "()" ; whitespace is ignored.
  static Signature parse(std::string_view text);

  const std::vector<unsigned>& arities() const noexcept { return arities_; }
  std::size_t size() const noexcept { return arities_.size(); }
  unsigned arity(std::size_t j) const { return arities_.at(j); }
  unsigned max_arity() const noexcept { return arities_.empty() ? 0 : arities_.back(); }

  std::string to_string() const;

  bool operator==(const Signature&) const = default;

 private:
  std::vector<unsigned> arities_;
};

// Processes require at least one relation of positive arity.
void require_process_signature(const Signature& sig);

// A bijection of [n]; image()[i - 1] = sigma(i).
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<Label> image);

  static Permutation identity(std::size_t n);

  std::size_t size() const noexcept { return image_.size(); }
  Label operator()(Label i) const { return image_[i - 1]; }
  const std::vector<Label>& image() const noexcept { return image_; }

  Permutation inverse() const;

  bool operator==(const Permutation&) const = default;

 private:
  std::vector<Label> image_;
};

// (compose(s, t))(i) = s(t(i)).  relabel(relabel(M, s), t) == relabel(M, compose(s, t)).
Permutation compose(const Permutation& s, const Permutation& t);

class Relation {
 public:
  Relation(unsigned arity, std::size_t n);

  unsigned arity() const noexcept { return arity_; }
  std::size_t base_size() const noexcept { return n_; }
  bool dense() const noexcept { return arity_ <= 2; }

  bool contains(std::span<const Label> tuple) const;
  void insert(std::span<const Label> tuple);
  void erase(std::span<const Label> tuple);
  void toggle(std::span<const Label> tuple);

  std::size_t count() const;
  bool empty() const;

  // Visits tuples in lexicographic order.
  template <class F>
  void for_each(F&& f) const;

  Relation& operator^=(const Relation& other);
  bool operator==(const Relation& other) const;

  // Dense backing only: number of cells n^arity, and raw word access.
  std::size_t cell_count() const noexcept { return cells_; }
  const std::vector<std::uint64_t>& words() const noexcept { return bits_; }
  bool test_cell(std::size_t cell) const { return (bits_[cell >> 6] >> (cell & 63)) & 1u; }
  void flip_cell(std::size_t cell) { bits_[cell >> 6] ^= std::uint64_t{1} << (cell & 63); }

 private:
  void check_tuple(std::span<const Label> tuple) const;
  std::size_t cell_of(std::span<const Label> tuple) const;

  unsigned arity_;
  std::size_t n_;
  std::size_t cells_ = 0;
  std::vector<std::uint64_t> bits_;
  std::vector<Tuple> tuples_;  // sorted, sparse backing (arity >= 3)
};

class Structure {
 public:
  Structure() = default;
  // The empty structure on [n].
  Structure(Signature sig, std::size_t n);

  const Signature& signature() const noexcept { return sig_; }
  std::size_t size() const noexcept { return n_; }
  std::size_t relation_count() const noexcept { return relations_.size(); }
  const Relation& relation(std::size_t j) const { return relations_.at(j); }

  bool contains(std::size_t j, std::span<const Label> tuple) const {
    return relation(j).contains(tuple);
  }
  void insert(std::size_t j, std::span<const Label> tuple) { relations_.at(j).insert(tuple); }
  void erase(std::size_t j, std::span<const Label> tuple) { relations_.at(j).erase(tuple); }
  void toggle(std::size_t j, std::span<const Label> tuple) { relations_.at(j).toggle(tuple); }
  void flip_cell(std::size_t j, std::size_t cell) { relations_.at(j).flip_cell(cell); }

  bool empty() const;
  std::size_t tuple_count() const;

  bool same_shape(const Structure& other) const noexcept {
    return n_ == other.n_ && sig_ == other.sig_;
  }

  // In-place increment; throws kShapeMismatch.
  Structure& operator^=(const Structure& other);

  bool operator==(const Structure& other) const;

 private:
  Signature sig_;
  std::size_t n_ = 0;
  std::vector<Relation> relations_;
};

Structure empty_structure(const Signature& sig, std::size_t n);
Structure increment(const Structure& a, const Structure& b);
Structure restrict(const Structure& m, std::size_t level);
Structure relabel(const Structure& m, const Permutation& sigma);
// M^phi for an injection phi : [m] -> [n]; injection[i - 1] = phi(i).
Structure pullback(const Structure& m, std::span<const Label> injection);
std::size_t agreement_level(const Structure& a, const Structure& b);

// Canonical text: L=(i1,...,ik)|n=N|R1={(a,b);...}|...  Bit-exact.
std::string serialize(const Structure& m);
Structure parse_structure(std::string_view text);

// Three-way comparison in canonical serialization order: returns <0, 0, >0.
// For labels below 10 this coincides with comparing serialize() strings.
int canonical_compare(const Structure& a, const Structure& b);

// Total number of structures |L_[n]| as log2 (sum of n^{i_j} cells).
std::size_t total_cells(const Signature& sig, std::size_t n);

// ---------------------------------------------------------------------------

template <class F>
void Relation::for_each(F&& f) const {
  if (!dense()) {
    for (const auto& t : tuples_) f(std::span<const Label>(t));
    return;
  }
  Label buf[2];
  for (std::size_t w = 0; w < bits_.size(); ++w) {
    std::uint64_t word = bits_[w];
    while (word) {
      const std::size_t cell = (w << 6) + static_cast<std::size_t>(__builtin_ctzll(word));
      word &= word - 1;
      if (arity_ == 0) {
        f(std::span<const Label>());
      } else if (arity_ == 1) {
        buf[0] = static_cast<Label>(cell + 1);
        f(std::span<const Label>(buf, 1));
      } else {
        buf[0] = static_cast<Label>(cell / n_ + 1);
        buf[1] = static_cast<Label>(cell % n_ + 1);
        f(std::span<const Label>(buf, 2));
      }
    }
  }
}

}  // namespace clevy

#endif  // CLEVY_STRUCTURE_HPP
