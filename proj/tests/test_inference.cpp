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
#include "clevy/inference.hpp"
#include "clevy/levy.hpp"
#include "clevy/rng.hpp"
#include "test_util.hpp"

using namespace clevy;
using clevy::testing::TestRng;

namespace {

Structure set_of(std::size_t n, std::initializer_list<Label> xs) {
  Structure m(Signature({1}), n);
  for (Label x : xs) m.insert(0, Tuple{x});
  return m;
}

WalkTrajectory from_increments(const Structure& x0, const std::vector<Structure>& incs) {
  WalkTrajectory w;
  w.states.push_back(x0);
  for (const auto& d : incs) w.states.push_back(increment(w.states.back(), d));
  return w;
}

std::vector<Structure> repeat(const Structure& m, int k) { return std::vector<Structure>(k, m); }

std::vector<Structure> concat(std::vector<Structure> a, const std::vector<Structure>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

double chi2_density(double x, unsigned df) {
  const double k = 0.5 * df;
  return std::exp((k - 1.0) * std::log(x) - 0.5 * x - k * std::log(2.0) - std::lgamma(k));
}

// Composite Simpson rule on [x, x + 400].
double simpson_upper_tail(double x, unsigned df) {
  const int n = 400000;
  const double a = x, b = x + 400.0, h = (b - a) / n;
  double s = chi2_density(a, df) + chi2_density(b, df);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * chi2_density(a + i * h, df);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("empirical jump measure") {
  const Structure e = set_of(3, {});
  const FiniteMeasure c = empirical_jump_measure(from_increments(e, repeat(e, 10)));
  CHECK(c.support_size() == 1);
  CHECK(c.mass(e) == 1.0);

  WalkTrajectory w;
  w.states = {set_of(2, {}), set_of(2, {1}), set_of(2, {})};
  const FiniteMeasure a = empirical_jump_measure(w);
  CHECK(a.support_size() == 1);
  CHECK(a.mass(set_of(2, {1})) == 1.0);

  w.states = {set_of(2, {}), set_of(2, {1}), set_of(2, {1, 2})};
  const FiniteMeasure b = empirical_jump_measure(w);
  CHECK(b.mass(set_of(2, {1})) == 0.5);
  CHECK(b.mass(set_of(2, {2})) == 0.5);

  WalkTrajectory one;
  one.states = {e};
  CHECK_THROWS_AS(empirical_jump_measure(one), Error);

  Rng rng(1);
  const WalkTrajectory r = simulate_walk(urn_measure(1, 3), 997, rng);
  CHECK(empirical_jump_measure(r).total_mass() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("pearson statistic by hand") {
  const auto incs = concat(repeat(set_of(2, {1}), 30), repeat(set_of(2, {2}), 10));
  const std::vector<double> alphas{0.05, 0.001};
  const TestReport r = chi_square_exchangeability(from_increments(set_of(2, {}), incs), alphas);
  CHECK(r.statistic == doctest::Approx(10.0).epsilon(1e-14));
  CHECK(r.df == 1);
  CHECK(r.cells_used == 2);
  CHECK(r.pooled_cells == 0);
  CHECK_FALSE(r.inconclusive);
  CHECK(r.p_value == doctest::Approx(std::erfc(std::sqrt(5.0))).epsilon(1e-12));
  REQUIRE(r.decisions.size() == 2);
  CHECK(r.decisions[0].second);
  CHECK_FALSE(r.decisions[1].second);
}

TEST_CASE("balanced observations give a zero statistic") {
  const auto incs = concat(repeat(set_of(2, {1}), 20), repeat(set_of(2, {2}), 20));
  const std::vector<double> alphas{0.05};
  const TestReport r = chi_square_exchangeability(from_increments(set_of(2, {}), incs), alphas);
  CHECK(r.statistic == 0.0);
  CHECK(r.p_value == 1.0);
  CHECK(r.df == 1);
  CHECK_FALSE(r.decisions[0].second);
}

TEST_CASE("constant trajectory is inconclusive") {
  const Structure e = set_of(3, {});
  const std::vector<double> alphas{0.05};
  const TestReport r = chi_square_exchangeability(from_increments(e, repeat(e, 10)), alphas);
  CHECK(r.inconclusive);
  CHECK(r.statistic == 0.0);
  CHECK(r.p_value == 1.0);
  CHECK_FALSE(r.decisions[0].second);
}

TEST_CASE("orbit totals of observed and expected counts agree") {
  Rng rng(2);
  FiniteMeasure mu(Signature({1}), 4);
  mu.add(set_of(4, {1}), 0.4);
  mu.add(set_of(4, {2, 3}), 0.3);
  mu.add(set_of(4, {}), 0.2);
  mu.add(set_of(4, {1, 2, 3, 4}), 0.1);
  const WalkTrajectory w = simulate_walk(mu, 300, rng);
  const std::vector<double> alphas{0.05};
  const TestReport r = chi_square_exchangeability(w, alphas);
  std::map<std::string, std::pair<double, double>> by_orbit;
  std::size_t members = 0;
  for (const auto& c : r.cells) {
    members += c.members.size();
    by_orbit[orbit_of(parse_structure(c.members.front())).canonical].first += c.observed;
    by_orbit[orbit_of(parse_structure(c.members.front())).canonical].second += c.expected;
  }
  for (const auto& [o, oe] : by_orbit) CHECK(std::abs(oe.first - oe.second) < 1e-9);
  // Cells partition the union of the observed orbits.
  std::size_t expected_members = 0;
  for (const auto& [o, oe] : by_orbit) expected_members += orbit_size(parse_structure(o));
  CHECK(members == expected_members);
  for (const auto& c : r.cells) {
    for (const auto& k : c.members) CHECK(orbit_of(parse_structure(k)) == orbit_of(parse_structure(c.members.front())));
    if (c.members.size() > 1) CHECK(c.expected - c.expected / c.members.size() < kMinExpectedCount + 1e-9);
  }
  CHECK(r.df == r.cells_used - by_orbit.size());
}

TEST_CASE("small orbits and small members are pooled") {
  // {1} x 6, {2} x 2, {3} x 1 on [3]: orbit total 9, E = 3 per member.
  // Pooling in canonical order: ({1},{2}) reaches 6, {3} joins it. One cell.
  auto incs = concat(repeat(set_of(3, {1}), 6), repeat(set_of(3, {2}), 2));
  incs = concat(incs, repeat(set_of(3, {3}), 1));
  const std::vector<double> alphas{0.05};
  const TestReport r = chi_square_exchangeability(from_increments(set_of(3, {}), incs), alphas);
  CHECK(r.cells_used == 1);
  CHECK(r.pooled_cells == 3);
  CHECK(r.inconclusive);

  // Size-2 orbit seen twice (E < 5) is a pool attached to the next orbit.
  auto more = concat(repeat(set_of(3, {1}), 20), repeat(set_of(3, {2}), 10));
  more = concat(more, repeat(set_of(3, {3}), 15));
  more = concat(more, repeat(set_of(3, {1, 2}), 2));
  const TestReport s = chi_square_exchangeability(from_increments(set_of(3, {}), more), alphas);
  CHECK(s.cells_used == 4);
  CHECK(s.df == 2);
  CHECK(s.pooled_cells == 3);
  // Singletons: E = 15 each; statistic (25 + 25 + 0) / 15.
  CHECK(s.statistic == doctest::Approx(50.0 / 15.0).epsilon(1e-14));
  CHECK(s.p_value == doctest::Approx(std::exp(-25.0 / 15.0)).epsilon(1e-12));
}

TEST_CASE("statistic is invariant under relabeling when no pooling occurs") {
  TestRng trng(3);
  const Permutation sigma({2, 3, 1});
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(10, seed);
    FiniteMeasure mu(Signature({2}), 3);
    mu.add(testing::random_structure(Signature({2}), 3, trng, 0.2), 0.5);
    mu.add(testing::random_structure(Signature({2}), 3, trng, 0.2), 0.5);
    const WalkTrajectory w = simulate_walk(mu, 4000, rng);
    WalkTrajectory v;
    for (const auto& s : w.states) v.states.push_back(relabel(s, sigma));
    const std::vector<double> alphas{0.05};
    const TestReport a = chi_square_exchangeability(w, alphas);
    const TestReport b = chi_square_exchangeability(v, alphas);
    REQUIRE(a.pooled_cells == 0);
    CHECK(b.pooled_cells == 0);
    CHECK(a.statistic == doctest::Approx(b.statistic).epsilon(1e-12));
    CHECK(a.df == b.df);
  }
}

TEST_CASE("test input validation") {
  WalkTrajectory one;
  one.states = {set_of(2, {})};
  const std::vector<double> ok{0.05}, bad{1.5};
  CHECK_THROWS_AS(chi_square_exchangeability(one, ok), Error);
  WalkTrajectory two;
  two.states = {set_of(2, {}), set_of(2, {1})};
  CHECK_THROWS_AS(chi_square_exchangeability(two, bad), Error);
}

TEST_CASE("chi-square upper tail") {
  CHECK(chi2_upper_tail(0.0, 3) == 1.0);
  CHECK(chi2_upper_tail(INFINITY, 3) == 0.0);
  CHECK(chi2_upper_tail(1e4, 1) < 1e-300);
  CHECK(std::abs(chi2_upper_tail(3.8415, 1) - 0.05) < 1e-5);
  CHECK(std::abs(chi2_upper_tail(3.8415, 1) - simpson_upper_tail(3.8415, 1)) < 1e-6);
  for (double x : {0.3, 1.0, 2.5, 7.0, 19.0}) {
    CHECK(std::abs(chi2_upper_tail(x, 1) - std::erfc(std::sqrt(0.5 * x))) < 1e-12);
    CHECK(std::abs(chi2_upper_tail(x, 2) - std::exp(-0.5 * x)) < 1e-12);
    for (unsigned df : {3u, 5u, 10u, 40u}) CHECK(std::abs(chi2_upper_tail(x, df) - simpson_upper_tail(x, df)) < 1e-8);
  }
  CHECK_THROWS_AS(chi2_upper_tail(1.0, 0), Error);
}

TEST_CASE("continuous-time trajectories are tested on their jump chain") {
  const LevyIntensity in(Signature({1}), {SetSingleton{1.0}});
  Rng rng(4);
  const LevyTrajectory x = simulate_levy(in, 3, 200.0, rng);
  const WalkTrajectory w = jump_chain(x);
  CHECK(w.steps() == x.jump_count());
  const std::vector<double> alphas{0.05};
  const TestReport r = chi_square_exchangeability(w, alphas);
  CHECK(r.df == 2);
  CHECK_FALSE(r.inconclusive);
  CHECK(std::isfinite(r.statistic));
}
