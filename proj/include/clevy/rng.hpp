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

// Reproducible random streams.
//
// Algorithm: xoshiro256** (Blackman & Vigna) whose 256-bit state is filled
// by SplitMix64 from a key mixing (seed, stream). Each (seed, stream) pair is
// an independent stream; replicate r of a run uses stream r. The raw
// 64-bit output is platform independent; continuous variates additionally
// depend on libm's log1p.

#ifndef CLEVY_RNG_HPP
#define CLEVY_RNG_HPP

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

namespace clevy {

class Rng {
 public:
  using result_type = std::uint64_t;
  static constexpr std::string_view kAlgorithm = "xoshiro256**/splitmix64";

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  std::uint64_t next_u64() noexcept;
  result_type operator()() noexcept { return next_u64(); }
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  // Uniform on {0, ..., bound - 1}; bound > 0.
  std::uint64_t below(std::uint64_t bound) noexcept;
  bool bernoulli(double p) noexcept { return uniform() < p; }
  // Exponential with the given rate (> 0).
  double exponential(double rate) noexcept;
  // Number of failures before the first success, success probability p in (0, 1].
  std::uint64_t geometric(double p) noexcept;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::array<std::uint64_t, 4> s_{};
};

}  // namespace clevy

#endif  // CLEVY_RNG_HPP
