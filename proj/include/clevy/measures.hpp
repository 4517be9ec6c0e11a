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

// Finitely supported measures on L_[n] and the finite exchangeable
// decomposition into orbit-uniform measures.

#ifndef CLEVY_MEASURES_HPP
#define CLEVY_MEASURES_HPP

#include <map>
#include <string>

#include "clevy/orbits.hpp"
#include "clevy/structure.hpp"

namespace clevy {

inline constexpr double kProbabilityTolerance = 1e-12;
inline constexpr double kDefaultExchangeabilityTolerance = 1e-9;

// Sparse measure keyed by canonical serialization. Zero masses are not stored.
class FiniteMeasure {
 public:
  struct Atom {
    Structure structure;
    double mass = 0.0;
  };

  FiniteMeasure() = default;
  FiniteMeasure(Signature sig, std::size_t n);

  const Signature& signature() const noexcept { return sig_; }
  std::size_t size() const noexcept { return n_; }

  // Accumulates mass onto m. Throws on shape mismatch or negative mass.
  void add(const Structure& m, double mass);
  double mass(const Structure& m) const;
  double mass(const std::string& key) const;

  double total_mass() const;
  bool is_probability(double tol = kProbabilityTolerance) const;

  // Iteration is in ascending key order, which fixes sampling order.
  const std::map<std::string, Atom>& atoms() const noexcept { return atoms_; }
  std::size_t support_size() const noexcept { return atoms_.size(); }

  FiniteMeasure scaled(double factor) const;

 private:
  Signature sig_;
  std::size_t n_ = 0;
  std::map<std::string, Atom> atoms_;
};

// Orbit weights p_Y keyed by OrbitId::canonical.
struct OrbitWeights {
  Signature signature;
  std::size_t n = 0;
  std::map<std::string, double> p;

  double total() const;
};

FiniteMeasure uniform_on_orbit(const OrbitId& orbit);
FiniteMeasure urn_measure(std::size_t k, std::size_t n);
FiniteMeasure bernoulli_set_measure(double prob, std::size_t n);

// max_M |mu(M) - mean of mu over the orbit of M|.
double exchangeability_defect(const FiniteMeasure& mu);
bool is_exchangeable(const FiniteMeasure& mu, double tol = kDefaultExchangeabilityTolerance);

FiniteMeasure symmetrize(const FiniteMeasure& mu);

// Throws kNotExchangeable / kNotNormalized when the preconditions fail.
OrbitWeights decompose_exchangeable(const FiniteMeasure& mu);
FiniteMeasure recompose(const OrbitWeights& p);

// Exact sums over all of L_[n]; zero-mass structures contribute nothing.
double l1_distance(const FiniteMeasure& a, const FiniteMeasure& b);

}  // namespace clevy

#endif  // CLEVY_MEASURES_HPP
