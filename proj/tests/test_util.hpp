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


#ifndef CLEVY_TESTS_TEST_UTIL_HPP
#define CLEVY_TESTS_TEST_UTIL_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "clevy/structure.hpp"

namespace clevy::testing {

// Test-side generator, independent of the library RNG.
using TestRng = std::mt19937_64;

inline std::vector<Tuple> all_tuples(unsigned arity, std::size_t n) {
  std::vector<Tuple> out;
  if (arity > 0 && n == 0) return out;
  Tuple t(arity, 1);
  while (true) {
    out.push_back(t);
    std::size_t k = arity;
    while (k > 0 && t[k - 1] == n) t[--k] = 1;
    if (k == 0) break;
    ++t[k - 1];
  }
  return out;
}

inline Structure random_structure(const Signature& sig, std::size_t n, TestRng& rng,
                                  double density = 0.5) {
  Structure m(sig, n);
  std::bernoulli_distribution coin(density);
  for (std::size_t j = 0; j < sig.size(); ++j) {
    for (const auto& t : all_tuples(sig.arity(j), n)) {
      if (coin(rng)) m.insert(j, t);
    }
  }
  return m;
}

inline Permutation random_permutation(std::size_t n, TestRng& rng) {
  std::vector<Label> img(n);
  std::iota(img.begin(), img.end(), Label{1});
  std::shuffle(img.begin(), img.end(), rng);
  return Permutation(img);
}

inline std::vector<Permutation> all_permutations(std::size_t n) {
  std::vector<Label> img(n);
  std::iota(img.begin(), img.end(), Label{1});
  std::vector<Permutation> out;
  do {
    out.emplace_back(img);
  } while (std::next_permutation(img.begin(), img.end()));
  return out;
}

// Naive model: one std::set of tuples per relation.
using NaiveStructure = std::vector<std::set<Tuple>>;

inline NaiveStructure to_naive(const Structure& m) {
  NaiveStructure out(m.relation_count());
  for (std::size_t j = 0; j < m.relation_count(); ++j) {
    m.relation(j).for_each([&](std::span<const Label> t) { out[j].emplace(t.begin(), t.end()); });
  }
  return out;
}

inline std::vector<Structure> all_structures(const Signature& sig, std::size_t n) {
  std::vector<std::pair<std::size_t, Tuple>> cells;
  for (std::size_t j = 0; j < sig.size(); ++j)
    for (const auto& t : all_tuples(sig.arity(j), n)) cells.emplace_back(j, t);
  std::vector<Structure> out;
  const std::uint64_t count = std::uint64_t{1} << cells.size();
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    Structure m(sig, n);
    for (std::size_t c = 0; c < cells.size(); ++c)
      if ((mask >> c) & 1u) m.insert(cells[c].first, cells[c].second);
    out.push_back(std::move(m));
  }
  return out;
}

// Canonical form by brute force over the text serialization.
inline std::string brute_canonical(const Structure& m) {
  std::string best;
  bool first = true;
  for (const auto& s : all_permutations(m.size())) {
    std::string t = serialize(relabel(m, s));
    if (first || t < best) best = t;
    first = false;
  }
  return best;
}

inline double binomial_sigma(double p, double trials) { return std::sqrt(p * (1.0 - p) / trials); }

}  // namespace clevy::testing

#endif  // CLEVY_TESTS_TEST_UTIL_HPP
