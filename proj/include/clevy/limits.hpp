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

// Homomorphism densities and their finite-level limit surrogates.
//
// delta(A; M) is the fraction of injections phi : [m] -> [n] with M^phi = A.
// All outputs are finite-n values.

#ifndef CLEVY_LIMITS_HPP
#define CLEVY_LIMITS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "clevy/cells.hpp"
#include "clevy/levy.hpp"
#include "clevy/rng.hpp"
#include "clevy/structure.hpp"

namespace clevy {

inline constexpr std::uint64_t kDefaultInjectionCap = 10'000'000;
// Density vectors enumerate L_[m]; at most 2^20 patterns.
inline constexpr std::size_t kMaxPatternCells = 20;

// Densities of every pattern A in L_[m], indexed by cell mask.
class DensityVector {
 public:
  DensityVector(Signature sig, std::size_t m);

  const Signature& signature() const noexcept { return layout_.signature(); }
  std::size_t level() const noexcept { return layout_.base_size(); }
  const CellLayout& layout() const noexcept { return layout_; }

  const std::vector<double>& values() const noexcept { return values_; }
  std::vector<double>& values() noexcept { return values_; }
  double operator[](CellMask pattern) const { return values_.at(pattern); }
  double density(const Structure& pattern) const { return values_.at(layout_.encode(pattern)); }

  // (canonical pattern text, density) in ascending mask order.
  std::vector<std::pair<std::string, double>> entries() const;

 private:
  CellLayout layout_;
  std::vector<double> values_;
};

// Injections [m] -> [n] in lexicographic order; injection_count = n^{(m)}.
std::uint64_t injection_count(std::size_t n, std::size_t m);

double hom_density_exact(const Structure& pattern, const Structure& m,
                         std::uint64_t cap = kDefaultInjectionCap);

DensityVector density_vector(const Structure& m, std::size_t level,
                             std::uint64_t cap = kDefaultInjectionCap);

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

McEstimate hom_density_mc(const Structure& pattern, const Structure& m, std::size_t samples,
                          Rng& rng);

// |relation 1| / n for signature (1); 0 when n = 0.
double set_frequency(const Structure& m);

std::vector<DensityVector> limit_path(const LevyTrajectory& traj, std::size_t level,
                                      std::span<const double> grid,
                                      std::uint64_t cap = kDefaultInjectionCap);

// Finite-level truncation of the limit-space metric: sum_A |a(A) - b(A)|.
double l1_distance(const DensityVector& a, const DensityVector& b);

}  // namespace clevy

#endif  // CLEVY_LIMITS_HPP
