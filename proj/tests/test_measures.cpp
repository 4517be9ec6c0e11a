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


#include <doctest.h>

#include <cmath>

#include "clevy/error.hpp"
#include "clevy/measures.hpp"
#include "test_util.hpp"

using namespace clevy;
using clevy::testing::TestRng;

namespace {

Structure set_of(std::size_t n, std::initializer_list<Label> xs) {
  Structure m(Signature({1}), n);
  for (Label x : xs) m.insert(0, Tuple{x});
  return m;
}

FiniteMeasure random_measure(const Signature& sig, std::size_t n, TestRng& rng) {
  FiniteMeasure mu(sig, n);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::pair<Structure, double>> raw;
  double total = 0.0;
  for (const auto& m : testing::all_structures(sig, n)) {
    if (u(rng) < 0.4) continue;
    const double w = u(rng);
    raw.emplace_back(m, w);
    total += w;
  }
  for (auto& [m, w] : raw) mu.add(m, w / total);
  return mu;
}

// Group average over S_n: (1/n!) sum_sigma mu(M^sigma). Equals the orbit mean.
FiniteMeasure group_average(const FiniteMeasure& mu) {
  const auto perms = testing::all_permutations(mu.size());
  FiniteMeasure out(mu.signature(), mu.size());
  for (const auto& m : testing::all_structures(mu.signature(), mu.size())) {
    double s = 0.0;
    for (const auto& p : perms) s += mu.mass(relabel(m, p));
    out.add(m, s / static_cast<double>(perms.size()));
  }
  return out;
}

double binom(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

}  // namespace

TEST_CASE("finite measure bookkeeping") {
  FiniteMeasure mu(Signature({1}), 2);
  mu.add(set_of(2, {1}), 0.25);
  mu.add(set_of(2, {1}), 0.25);
  mu.add(set_of(2, {2}), 0.0);
  CHECK(mu.support_size() == 1);
  CHECK(mu.mass(set_of(2, {1})) == 0.5);
  CHECK(mu.mass(set_of(2, {2})) == 0.0);
  CHECK_FALSE(mu.is_probability());
  mu.add(set_of(2, {}), 0.5);
  CHECK(mu.is_probability());
  CHECK_THROWS_AS(mu.add(set_of(3, {}), 0.1), Error);
  CHECK_THROWS_AS(mu.add(set_of(2, {}), -0.1), Error);
  CHECK_THROWS_AS(mu.add(set_of(2, {}), std::nan("")), Error);
  CHECK(mu.scaled(2.0).total_mass() == 2.0);
}

TEST_CASE("uniform on orbit") {
  const FiniteMeasure a = uniform_on_orbit(orbit_of(set_of(2, {1})));
  CHECK(a.mass(set_of(2, {1})) == 0.5);
  CHECK(a.mass(set_of(2, {2})) == 0.5);
  const FiniteMeasure e = uniform_on_orbit(orbit_of(set_of(3, {})));
  CHECK(e.support_size() == 1);
  CHECK(e.mass(set_of(3, {})) == 1.0);
  const FiniteMeasure u = uniform_on_orbit(orbit_of(set_of(3, {2})));
  CHECK(l1_distance(u, urn_measure(1, 3)) == 0.0);
  CHECK_THROWS_AS(uniform_on_orbit(OrbitId{"L=(1)|n=2|R1={(2)}"}), Error);
}

TEST_CASE("urn measures") {
  const FiniteMeasure u12 = urn_measure(1, 2);
  CHECK(u12.mass(set_of(2, {1})) == 0.5);
  CHECK(u12.mass(set_of(2, {2})) == 0.5);
  const FiniteMeasure u03 = urn_measure(0, 3);
  CHECK(u03.support_size() == 1);
  CHECK(u03.mass(set_of(3, {})) == 1.0);
  const FiniteMeasure u24 = urn_measure(2, 4);
  CHECK(u24.support_size() == 6);
  for (const auto& [key, atom] : u24.atoms()) CHECK(atom.mass == 1.0 / 6.0);
  for (std::size_t n = 0; n <= 6; ++n) {
    for (std::size_t k = 0; k <= n; ++k) {
      const FiniteMeasure u = urn_measure(k, n);
      CHECK(u.support_size() == static_cast<std::size_t>(std::llround(binom(n, k))));
      for (const auto& [key, atom] : u.atoms()) {
        CHECK(atom.structure.tuple_count() == k);
        CHECK(atom.mass == 1.0 / binom(n, k));
      }
    }
  }
  CHECK_THROWS_AS(urn_measure(4, 3), Error);
}

TEST_CASE("exchangeability checks") {
  CHECK(is_exchangeable(uniform_on_orbit(orbit_of(set_of(3, {1, 2})))));
  FiniteMeasure pm(Signature({1}), 2);
  pm.add(set_of(2, {1}), 1.0);
  CHECK_FALSE(is_exchangeable(pm));
  FiniteMeasure mix(Signature({1}), 3);
  const FiniteMeasure u1 = urn_measure(1, 3), u3 = urn_measure(3, 3);
  for (const auto& [k, a] : u1.atoms()) mix.add(a.structure, 0.3 * a.mass);
  for (const auto& [k, a] : u3.atoms()) mix.add(a.structure, 0.7 * a.mass);
  CHECK(is_exchangeable(mix));
}

TEST_CASE("symmetrize examples") {
  FiniteMeasure pm(Signature({1}), 2);
  pm.add(set_of(2, {1}), 1.0);
  const FiniteMeasure s = symmetrize(pm);
  CHECK(s.mass(set_of(2, {1})) == 0.5);
  CHECK(s.mass(set_of(2, {2})) == 0.5);
  FiniteMeasure mu(Signature({1}), 2);
  mu.add(set_of(2, {1}), 0.4);
  mu.add(set_of(2, {1, 2}), 0.6);
  const FiniteMeasure t = symmetrize(mu);
  CHECK(t.mass(set_of(2, {1})) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(t.mass(set_of(2, {2})) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(t.mass(set_of(2, {1, 2})) == 0.6);
  const FiniteMeasure u = urn_measure(2, 4);
  CHECK(l1_distance(symmetrize(u), u) < 1e-15);
}

TEST_CASE("symmetrize matches the group-average oracle") {
  TestRng rng(21);
  for (const auto& [sig, n] : std::vector<std::pair<Signature, std::size_t>>{
           {Signature({1}), 4}, {Signature({2}), 2}, {Signature({2}), 3}, {Signature({1, 2}), 2}}) {
    for (int rep = 0; rep < 3; ++rep) {
      const FiniteMeasure mu = random_measure(sig, n, rng);
      const FiniteMeasure s = symmetrize(mu);
      CHECK(l1_distance(s, group_average(mu)) < 1e-12);
      CHECK(is_exchangeable(s));
      CHECK(std::abs(s.total_mass() - mu.total_mass()) < 1e-12);
      CHECK(l1_distance(symmetrize(s), s) < 1e-12);
      CHECK(exchangeability_defect(s) < 1e-12);
      // Orbit totals preserved.
      for (const auto& e : enumerate_orbits(sig, n).entries) {
        double a = 0.0, b = 0.0;
        for (const auto& m : orbit_members(e.id.representative())) {
          a += mu.mass(m);
          b += s.mass(m);
        }
        CHECK(std::abs(a - b) < 1e-12);
      }
    }
  }
}

TEST_CASE("decomposition examples") {
  FiniteMeasure uni(Signature({1}), 2);
  for (const auto& m : testing::all_structures(Signature({1}), 2)) uni.add(m, 0.25);
  const OrbitWeights w = decompose_exchangeable(uni);
  REQUIRE(w.p.size() == 3);
  CHECK(w.p.at(orbit_of(set_of(2, {})).canonical) == 0.25);
  CHECK(w.p.at(orbit_of(set_of(2, {1})).canonical) == 0.5);
  CHECK(w.p.at(orbit_of(set_of(2, {1, 2})).canonical) == 0.25);
  const OrbitWeights u = decompose_exchangeable(urn_measure(2, 4));
  REQUIRE(u.p.size() == 1);
  CHECK(u.p.begin()->first == "L=(1)|n=4|R1={(1);(2)}");
  CHECK(u.p.begin()->second == doctest::Approx(1.0).epsilon(1e-15));
  FiniteMeasure pe(Signature({2}), 2);
  pe.add(empty_structure(Signature({2}), 2), 1.0);
  const OrbitWeights e = decompose_exchangeable(pe);
  CHECK(e.p.size() == 1);
  CHECK(e.p.begin()->second == 1.0);

  FiniteMeasure bad(Signature({1}), 2);
  bad.add(set_of(2, {1}), 1.0);
  try {
    decompose_exchangeable(bad);
    FAIL("expected error");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::kNotExchangeable);
  }
  CHECK_THROWS_AS(decompose_exchangeable(uni.scaled(0.5)), Error);
}

TEST_CASE("recompose examples") {
  OrbitWeights p{Signature({1}), 3, {{orbit_of(set_of(3, {1})).canonical, 1.0}}};
  CHECK(l1_distance(recompose(p), urn_measure(1, 3)) == 0.0);
  OrbitWeights q{Signature({1}), 2,
                 {{orbit_of(set_of(2, {})).canonical, 0.5}, {orbit_of(set_of(2, {1, 2})).canonical, 0.5}}};
  const FiniteMeasure r = recompose(q);
  CHECK(r.mass(set_of(2, {})) == 0.5);
  CHECK(r.mass(set_of(2, {1})) == 0.0);
  CHECK(r.mass(set_of(2, {2})) == 0.0);
  CHECK(r.mass(set_of(2, {1, 2})) == 0.5);
  OrbitWeights bad{Signature({1}), 2, {{"L=(1)|n=2|R1={(2)}", 1.0}}};
  CHECK_THROWS_AS(recompose(bad), Error);
}

TEST_CASE("decompose and recompose are mutually inverse") {
  TestRng rng(22);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& [sig, n] : std::vector<std::pair<Signature, std::size_t>>{
           {Signature({1}), 4}, {Signature({2}), 3}, {Signature({1, 2}), 2}, {Signature({2}), 2}}) {
    const OrbitTable& table = enumerate_orbits(sig, n);
    for (int rep = 0; rep < 5; ++rep) {
      OrbitWeights w{sig, n, {}};
      double tot = 0.0;
      for (const auto& e : table.entries) {
        const double x = u(rng);
        w.p[e.id.canonical] = x;
        tot += x;
      }
      for (auto& [k, v] : w.p) v /= tot;
      const FiniteMeasure mu = recompose(w);
      CHECK(is_exchangeable(mu));
      const OrbitWeights back = decompose_exchangeable(mu);
      for (const auto& [k, v] : w.p) CHECK(std::abs(back.p.at(k) - v) < 1e-12);
      CHECK(l1_distance(recompose(back), mu) < 1e-12);
    }
  }
}

TEST_CASE("bernoulli set measure") {
  const FiniteMeasure h = bernoulli_set_measure(0.5, 2);
  CHECK(h.support_size() == 4);
  for (const auto& [k, a] : h.atoms()) CHECK(a.mass == 0.25);
  const FiniteMeasure z = bernoulli_set_measure(0.0, 3);
  CHECK(z.support_size() == 1);
  CHECK(z.mass(set_of(3, {})) == 1.0);
  const FiniteMeasure b = bernoulli_set_measure(0.3, 3);
  CHECK(b.mass(set_of(3, {1, 3})) == doctest::Approx(0.063).epsilon(1e-14));
  for (double p : {0.1, 0.37, 0.9}) {
    for (std::size_t n = 0; n <= 8; ++n) CHECK(std::abs(bernoulli_set_measure(p, n).total_mass() - 1.0) < 1e-12);
  }
  CHECK(is_exchangeable(bernoulli_set_measure(0.37, 4)));
  CHECK_THROWS_AS(bernoulli_set_measure(1.5, 2), Error);
}
