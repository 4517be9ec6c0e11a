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
#include <map>

#include "clevy/error.hpp"
#include "clevy/expm.hpp"
#include "clevy/levy.hpp"
#include "clevy/rng.hpp"
#include "test_util.hpp"

using namespace clevy;
using clevy::testing::TestRng;

namespace {

LevyIntensity singleton(double c) { return LevyIntensity(Signature({1}), {SetSingleton{c}}); }

// Restricted measure of a product-Bernoulli atom by summing over L_[n].
std::map<std::string, double> mixture_oracle(const Signature& sig, std::size_t n, double rate,
                                             const std::vector<double>& p) {
  std::map<std::string, double> out;
  for (const auto& m : testing::all_structures(sig, n)) {
    if (m.empty()) continue;
    double w = rate;
    for (std::size_t j = 0; j < sig.size(); ++j) {
      const auto cells = testing::all_tuples(sig.arity(j), n).size();
      const auto on = m.relation(j).count();
      w *= std::pow(p[j], double(on)) * std::pow(1.0 - p[j], double(cells - on));
    }
    if (w > 0.0) out[serialize(m)] = w;
  }
  return out;
}

// Vertex component: vertex i uniform, each non-loop edge touching i flips
// with prob rho, membership of i with prob kappa; conditioned nonempty.
std::map<std::string, double> vertex_oracle(const Signature& sig, std::size_t n, double rate,
                                            double rho, double kappa) {
  std::map<std::string, double> out;
  const std::size_t er = sig.size() - 1;
  for (const auto& m : testing::all_structures(sig, n)) {
    if (m.empty()) continue;
    for (Label i = 1; i <= n; ++i) {
      double w = rate;
      bool ok = true;
      if (sig.size() == 2) {
        for (Label a = 1; a <= n; ++a) {
          const bool on = m.contains(0, Tuple{a});
          if (a != i && on) ok = false;
          if (a == i) w *= on ? kappa : 1.0 - kappa;
        }
      }
      for (Label a = 1; a <= n && ok; ++a)
        for (Label b = 1; b <= n; ++b) {
          const bool on = m.contains(er, Tuple{a, b});
          const bool touches = (a == i || b == i) && a != b;
          if (!touches && on) ok = false;
          if (touches) w *= on ? rho : 1.0 - rho;
        }
      if (ok && w > 0.0) out[serialize(m)] += w;
    }
  }
  return out;
}

double total(const std::map<std::string, double>& m) {
  double s = 0.0;
  for (const auto& [k, v] : m) s += v;
  return s;
}

// Empirical law of the sampler vs a target, per cell within 4 sigma.
void check_sampler(const RestrictedIntensity& r, const std::map<std::string, double>& target,
                   int draws, std::uint64_t seed) {
  const double z = total(target);
  REQUIRE(std::abs(r.total_rate() - z) < 1e-12 * std::max(1.0, z));
  Rng rng(seed);
  std::map<std::string, int> counts;
  for (int i = 0; i < draws; ++i) ++counts[serialize(r.sample(rng))];
  for (const auto& [k, c] : counts) CHECK_MESSAGE(target.count(k) == 1, k);
  for (const auto& [k, w] : target) {
    const double p = w / z;
    const double f = counts.count(k) ? counts.at(k) / double(draws) : 0.0;
    CHECK_MESSAGE(std::abs(f - p) <= 4.0 * testing::binomial_sigma(p, draws) + 1e-12, k);
  }
}

// e^{tQ} by uniformization: sum_k Pois(k; lambda t) P^k with P = I + Q/lambda.
SquareMatrix uniformization(const SquareMatrix& q, double t) {
  const std::size_t d = q.dim();
  double lambda = 0.0;
  for (std::size_t i = 0; i < d; ++i) lambda = std::max(lambda, -q(i, i));
  if (lambda == 0.0) return SquareMatrix::identity(d);
  SquareMatrix p = SquareMatrix::identity(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) p(i, j) += q(i, j) / lambda;
  SquareMatrix term = SquareMatrix::identity(d), out(d);
  double w = std::exp(-lambda * t);
  for (int k = 0; k < 2000; ++k) {
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) out(i, j) += w * term(i, j);
    term = term * p;
    w *= lambda * t / (k + 1);
    if (k > lambda * t && w < 1e-300) break;
  }
  return out;
}

SquareMatrix random_generator(std::size_t d, TestRng& rng) {
  std::uniform_real_distribution<double> u(0.0, 2.0);
  SquareMatrix q(d);
  for (std::size_t i = 0; i < d; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      if (i == j) continue;
      q(i, j) = u(rng);
      s += q(i, j);
    }
    q(i, i) = -s;
  }
  return q;
}

}  // namespace

TEST_CASE("restricted rates of the worked families") {
  const RestrictedIntensity s = restricted_measure(singleton(2.0), 3);
  CHECK(s.total_rate() == 6.0);
  const FiniteMeasure es = exact_restricted_measure(singleton(2.0), 3);
  CHECK(es.support_size() == 3);
  for (const auto& [k, a] : es.atoms()) CHECK(a.mass == 2.0);

  CHECK(restricted_measure(LevyIntensity(Signature({1}), {}), 5).total_rate() == 0.0);
  CHECK(restricted_measure(singleton(0.0), 5).total_rate() == 0.0);

  const LevyIntensity mix(Signature({1}), {MixtureAtom{1.0, {0.5}}});
  CHECK(restricted_measure(mix, 2).total_rate() == doctest::Approx(0.75).epsilon(1e-15));
  const FiniteMeasure em = exact_restricted_measure(mix, 2);
  CHECK(em.support_size() == 3);
  for (const auto& [k, a] : em.atoms()) CHECK(a.mass / 0.75 == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  for (std::size_t n : {2u, 3u, 7u, 40u}) {
    const double dn = double(n);
    const LevyIntensity v(Signature({2}), {VertexComponent{1.5, 0.2}});
    CHECK(restricted_measure(v, n).total_rate() ==
          doctest::Approx(1.5 * dn * (1.0 - std::pow(0.8, 2.0 * (dn - 1.0)))).epsilon(1e-13));
    const LevyIntensity p(Signature({2}), {PairComponent{0.7}});
    CHECK(restricted_measure(p, n).total_rate() == doctest::Approx(0.7 * dn * (dn - 1) / 2).epsilon(1e-15));
    const LevyIntensity l(Signature({2}), {LoopComponent{0.3}});
    CHECK(restricted_measure(l, n).total_rate() == doctest::Approx(0.3 * dn).epsilon(1e-15));
    const LevyIntensity a(Signature({1, 2}), {MixtureAtom{2.0, {0.1, 0.05}}});
    CHECK(restricted_measure(a, n).total_rate() ==
          doctest::Approx(2.0 * (1.0 - std::pow(0.9, dn) * std::pow(0.95, dn * dn))).epsilon(1e-13));
  }
}

TEST_CASE("restricted rates match brute-force oracles") {
  const std::vector<std::pair<Signature, std::size_t>> shapes = {
      {Signature({1}), 4}, {Signature({2}), 3}, {Signature({1, 2}), 2}, {Signature({1, 2}), 3}};
  for (const auto& [sig, n] : shapes) {
    std::vector<double> p(sig.size());
    for (std::size_t j = 0; j < p.size(); ++j) p[j] = 0.15 + 0.2 * j;
    const LevyIntensity mix(sig, {MixtureAtom{1.3, p}});
    const auto want = mixture_oracle(sig, n, 1.3, p);
    CHECK(restricted_measure(mix, n).total_rate() == doctest::Approx(total(want)).epsilon(1e-13));
    const FiniteMeasure ex = exact_restricted_measure(mix, n);
    for (const auto& [k, w] : want) CHECK(ex.mass(k) == doctest::Approx(w).epsilon(1e-12));
    if (sig.size() == 1 && sig.arity(0) == 1) continue;
    const double kappa = sig.size() == 2 ? 0.4 : 0.0;
    const LevyIntensity v(sig, {VertexComponent{0.9, 0.3, kappa}});
    const auto vw = vertex_oracle(sig, n, 0.9, 0.3, kappa);
    CHECK(restricted_measure(v, n).total_rate() == doctest::Approx(total(vw)).epsilon(1e-13));
    const FiniteMeasure ev = exact_restricted_measure(v, n);
    for (const auto& [k, w] : vw) CHECK(ev.mass(k) == doctest::Approx(w).epsilon(1e-12));
  }
}

TEST_CASE("component samplers follow their conditional laws") {
  // Rejection branch.
  check_sampler(restricted_measure(LevyIntensity(Signature({1}), {MixtureAtom{1.0, {0.5}}}), 2),
                mixture_oracle(Signature({1}), 2, 1.0, {0.5}), 60000, 1);
  check_sampler(restricted_measure(LevyIntensity(Signature({1, 2}), {MixtureAtom{1.0, {0.3, 0.2}}}), 2),
                mixture_oracle(Signature({1, 2}), 2, 1.0, {0.3, 0.2}), 100000, 2);
  // First-flip branch: P(empty) > 0.99.
  check_sampler(restricted_measure(LevyIntensity(Signature({1, 2}), {MixtureAtom{1.0, {0.001, 0.0005}}}), 2),
                mixture_oracle(Signature({1, 2}), 2, 1.0, {0.001, 0.0005}), 100000, 3);
  check_sampler(restricted_measure(LevyIntensity(Signature({1}), {MixtureAtom{1.0, {0.002}}}), 3),
                mixture_oracle(Signature({1}), 3, 1.0, {0.002}), 60000, 4);
  // Vertex components, with and without community membership.
  check_sampler(restricted_measure(LevyIntensity(Signature({2}), {VertexComponent{1.0, 0.4}}), 3),
                vertex_oracle(Signature({2}), 3, 1.0, 0.4, 0.0), 100000, 5);
  check_sampler(restricted_measure(LevyIntensity(Signature({1, 2}), {VertexComponent{1.0, 0.3, 0.5}}), 2),
                vertex_oracle(Signature({1, 2}), 2, 1.0, 0.3, 0.5), 60000, 6);
  check_sampler(restricted_measure(LevyIntensity(Signature({2}), {VertexComponent{1.0, 0.003}}), 3),
                vertex_oracle(Signature({2}), 3, 1.0, 0.003, 0.0), 60000, 7);
}

TEST_CASE("pair, loop and composite samplers match exact restricted measures") {
  const LevyIntensity pair(Signature({2}), {PairComponent{1.0, {1.0, 2.0, 3.0}}});
  const LevyIntensity loop(Signature({1, 2}), {LoopComponent{1.0, {1.0, 1.0, 2.0}}});
  const LevyIntensity combo(Signature({1, 2}),
                            {MixtureAtom{0.5, {0.2, 0.1}}, VertexComponent{0.7, 0.5, 0.2},
                             PairComponent{0.4}, LoopComponent{0.3}});
  std::uint64_t seed = 10;
  for (const auto* in : {&pair, &loop, &combo}) {
    const std::size_t n = in == &pair ? 3 : 2;
    const FiniteMeasure ex = exact_restricted_measure(*in, n);
    std::map<std::string, double> target;
    for (const auto& [k, a] : ex.atoms()) target[k] = a.mass;
    check_sampler(restricted_measure(*in, n), target, 100000, seed++);
  }
  // One pair at n=2; single-edge patterns split weight (1+2)/6 over both orientations.
  const FiniteMeasure ep = exact_restricted_measure(pair, 2);
  CHECK(ep.mass("L=(2)|n=2|R1={(1,2)}") == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(ep.mass("L=(2)|n=2|R1={(2,1)}") == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(ep.mass("L=(2)|n=2|R1={(1,2);(2,1)}") == doctest::Approx(0.5).epsilon(1e-15));
  // Under (2) the loop component only flips loops.
  const FiniteMeasure el = exact_restricted_measure(LevyIntensity(Signature({2}), {LoopComponent{2.0}}), 2);
  CHECK(el.support_size() == 2);
  CHECK(el.mass("L=(2)|n=2|R1={(1,1)}") == 2.0);
}

TEST_CASE("explicit finite intensities act through restriction") {
  FiniteMeasure mu(Signature({1}), 3);
  Structure a(Signature({1}), 3), b(Signature({1}), 3);
  a.insert(0, Tuple{1});
  b.insert(0, Tuple{3});
  mu.add(a, 0.5);
  mu.add(b, 2.0);
  const LevyIntensity in(Signature({1}), {ExplicitFinite{mu}});
  CHECK(restricted_measure(in, 3).total_rate() == 2.5);
  CHECK(restricted_measure(in, 2).total_rate() == 0.5);
  CHECK_THROWS_AS(restricted_measure(in, 4), Error);
  FiniteMeasure bad(Signature({1}), 2);
  bad.add(empty_structure(Signature({1}), 2), 1.0);
  CHECK_THROWS_AS(LevyIntensity(Signature({1}), {ExplicitFinite{bad}}), Error);
}

TEST_CASE("intensity validation") {
  CHECK_THROWS_AS(LevyIntensity(Signature({2}), {SetSingleton{1.0}}), Error);
  CHECK_THROWS_AS(LevyIntensity(Signature({1}), {SetSingleton{-1.0}}), Error);
  CHECK_THROWS_AS(LevyIntensity(Signature({2}), {VertexComponent{1.0, 0.0}}), Error);
  CHECK_THROWS_AS(LevyIntensity(Signature({2}), {VertexComponent{1.0, 0.5, 0.3}}), Error);
  CHECK_THROWS_AS(LevyIntensity(Signature({1}), {PairComponent{1.0}}), Error);
  CHECK_THROWS_AS(LevyIntensity(Signature({2}), {PairComponent{1.0, {0.0, 0.0, 0.0}}}), Error);
  CHECK_THROWS_AS(LevyIntensity(Signature({1}), {MixtureAtom{1.0, {0.5, 0.5}}}), Error);
  CHECK_THROWS_AS(LevyIntensity(Signature({1}), {MixtureAtom{1.0, {1.5}}}), Error);
  CHECK_THROWS_AS(LevyIntensity(Signature({0}), {}), Error);
  CHECK_THROWS_AS(restricted_measure(singleton(1.0), 0), Error);
  CHECK(std::string(component_type_name(IntensityComponent{LoopComponent{}})) == "loop");
}

TEST_CASE("simulation basics") {
  Rng rng(1);
  const LevyTrajectory z = simulate_levy(LevyIntensity(Signature({2}), {}), 4, 10.0, rng);
  CHECK(z.events.size() == 1);
  CHECK(z.jump_count() == 0);
  CHECK(z.state_at(7.0).empty());
  CHECK_THROWS_AS(simulate_levy(singleton(1.0), 4, 0.0, rng), Error);

  const LevyTrajectory x = simulate_levy(singleton(1.0), 6, 3.0, rng);
  CHECK_NOTHROW(validate_trajectory(x));
  CHECK(x.events.back().time <= 3.0);
  for (std::size_t i = 1; i < x.events.size(); ++i) {
    CHECK(increment(x.events[i].state, x.events[i - 1].state).tuple_count() == 1);
    CHECK(x.state_at(x.events[i].time) == x.events[i].state);
    const double mid = 0.5 * (x.events[i - 1].time + x.events[i].time);
    CHECK(x.state_at(mid) == x.events[i - 1].state);
  }
  Rng a(5, 2), b(5, 2);
  const LevyTrajectory u = simulate_levy(singleton(1.0), 6, 3.0, a);
  const LevyTrajectory v = simulate_levy(singleton(1.0), 6, 3.0, b);
  REQUIRE(u.events.size() == v.events.size());
  for (std::size_t i = 0; i < u.events.size(); ++i) {
    CHECK(u.events[i].time == v.events[i].time);
    CHECK(u.events[i].state == v.events[i].state);
  }
}

TEST_CASE("jump counts are Poisson with the restricted rate") {
  const int runs = 400;
  double s = 0.0;
  for (int r = 0; r < runs; ++r) {
    Rng rng(2024, static_cast<std::uint64_t>(r));
    s += double(simulate_levy(singleton(1.0), 10, 5.0, rng).jump_count());
  }
  CHECK(std::abs(s / runs - 50.0) < 3.0 * std::sqrt(50.0) / 20.0);
}

TEST_CASE("composite trajectories are legal") {
  const LevyIntensity combo(Signature({1, 2}),
                            {MixtureAtom{0.5, {0.05, 0.01}}, VertexComponent{0.7, 0.3, 0.2},
                             PairComponent{0.1}, LoopComponent{0.3, {1.0, 1.0, 1.0}}});
  for (std::uint64_t r = 0; r < 5; ++r) {
    Rng rng(3, r);
    const LevyTrajectory x = simulate_levy(combo, 12, 2.0, rng);
    CHECK_NOTHROW(validate_trajectory(x));
    CHECK(x.jump_count() > 0);
  }
}

TEST_CASE("restrict trajectory") {
  Rng rng(4);
  const LevyTrajectory x = simulate_levy(singleton(1.0), 5, 2.0, rng);
  const LevyTrajectory same = restrict_trajectory(x, 5);
  REQUIRE(same.events.size() == x.events.size());
  for (std::size_t i = 0; i < x.events.size(); ++i) CHECK(same.events[i].state == x.events[i].state);

  LevyTrajectory one;
  one.n = 3;
  one.horizon = 1.0;
  Structure s(Signature({1}), 3);
  one.events.push_back({0.0, s});
  s.insert(0, Tuple{3});
  one.events.push_back({0.5, s});
  const LevyTrajectory r = restrict_trajectory(one, 2);
  CHECK(r.events.size() == 1);
  CHECK(r.jump_count() == 0);
  CHECK_THROWS_AS(restrict_trajectory(one, 4), Error);

  for (std::size_t m = 1; m <= 5; ++m) {
    const LevyTrajectory rm = restrict_trajectory(x, m);
    CHECK_NOTHROW(validate_trajectory(rm));
    for (double t : {0.0, 0.3, 1.1, 1.9}) CHECK(rm.state_at(t) == restrict(x.state_at(t), m));
  }
}

TEST_CASE("relabeled runs of an exchangeable intensity have matching statistics") {
  // Jumps per orbit of the increment (sizes 1 and 2 sets), original vs relabeled by a fixed sigma.
  const LevyIntensity in(Signature({1}), {SetSingleton{1.0}, MixtureAtom{2.0, {0.3}}});
  const Permutation sigma({3, 1, 4, 2});
  const int runs = 300;
  double count_elem1 = 0.0, count_elem1_relabeled = 0.0;
  for (int r = 0; r < runs; ++r) {
    Rng rng(11, static_cast<std::uint64_t>(r));
    const LevyTrajectory x = simulate_levy(in, 4, 3.0, rng);
    const LevyTrajectory y = relabel_trajectory(x, sigma);
    for (std::size_t i = 1; i < x.events.size(); ++i) {
      count_elem1 += increment(x.events[i].state, x.events[i - 1].state).contains(0, Tuple{1});
      count_elem1_relabeled += increment(y.events[i].state, y.events[i - 1].state).contains(0, Tuple{1});
    }
  }
  // Flips of element 1 form a Poisson process of rate 1 + 2*0.3 = 1.6 per unit time.
  const double mean = 1.6 * 3.0 * runs;
  CHECK(std::abs(count_elem1 - mean) < 3.0 * std::sqrt(mean));
  CHECK(std::abs(count_elem1_relabeled - mean) < 3.0 * std::sqrt(mean));
}

TEST_CASE("marginal flip probability") {
  CHECK(marginal_flip_probability(1.0, 0.0) == 0.0);
  CHECK(marginal_flip_probability(1.0, 1e6) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(marginal_flip_probability(1.0, std::log(2.0) / 2.0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(marginal_flip_probability(2.0, 0.5) == doctest::Approx(marginal_flip_probability(1.0, 1.0)).epsilon(1e-15));
  CHECK_THROWS_AS(marginal_flip_probability(-1.0, 1.0), Error);
}

TEST_CASE("matrix exponential") {
  const SquareMatrix zero(3);
  const SquareMatrix id = expm_small(zero, 2.0);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(id(i, j) == (i == j ? 1.0 : 0.0));

  const SquareMatrix flip{{-1.0, 1.0}, {1.0, -1.0}};
  for (double t : {0.1, 1.0, 10.0}) {
    const SquareMatrix e = expm_small(flip, t);
    const double off = 0.5 * (1.0 - std::exp(-2.0 * t));
    CHECK(std::abs(e(0, 1) - off) < 1e-10);
    CHECK(std::abs(e(1, 0) - off) < 1e-10);
    CHECK(std::abs(e(0, 0) - (1.0 - off)) < 1e-10);
    CHECK(std::abs(marginal_flip_probability(1.0, t) - e(0, 1)) < 1e-10);
  }

  TestRng rng(9);
  for (std::size_t d : {2u, 4u, 6u}) {
    for (int rep = 0; rep < 5; ++rep) {
      const SquareMatrix q = random_generator(d, rng);
      for (double t : {0.05, 0.7, 3.0}) {
        const SquareMatrix e = expm_small(q, t);
        const SquareMatrix o = uniformization(q, t);
        for (std::size_t i = 0; i < d; ++i) {
          double s = 0.0;
          for (std::size_t j = 0; j < d; ++j) {
            s += e(i, j);
            CHECK(e(i, j) >= 0.0);
            CHECK(std::abs(e(i, j) - o(i, j)) < 1e-10);
          }
          CHECK(std::abs(s - 1.0) < 1e-10);
        }
      }
    }
  }
  // Semigroup property.
  const SquareMatrix q = random_generator(4, rng);
  const SquareMatrix ab = expm_small(q, 0.3) * expm_small(q, 0.9);
  const SquareMatrix c = expm_small(q, 1.2);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK(std::abs(ab(i, j) - c(i, j)) < 1e-12);

  CHECK_THROWS_AS(expm_small(SquareMatrix{{-1.0, 0.5}, {1.0, -1.0}}, 1.0), Error);
  CHECK_THROWS_AS(expm_small(SquareMatrix{{1.0, -1.0}, {1.0, -1.0}}, 1.0), Error);
  CHECK_THROWS_AS(expm_small(flip, -1.0), Error);
  CHECK_THROWS_AS(expm_small(SquareMatrix(kMaxExpmDim + 1), 1.0), Error);
}
