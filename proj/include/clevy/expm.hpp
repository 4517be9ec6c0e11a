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

// Small dense generator matrices and their exponentials.

#ifndef CLEVY_EXPM_HPP
#define CLEVY_EXPM_HPP

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace clevy {

class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t dim) : dim_(dim), a_(dim * dim, 0.0) {}
  SquareMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static SquareMatrix identity(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * dim_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }

  SquareMatrix operator*(const SquareMatrix& rhs) const;
  SquareMatrix& operator+=(const SquareMatrix& rhs);
  SquareMatrix& operator*=(double s);

  // Max absolute row sum.
  double norm_inf() const;

 private:
  std::size_t dim_ = 0;
  std::vector<double> a_;
};

inline constexpr std::size_t kMaxExpmDim = 256;

// Throws kInvalidArgument unless q has nonnegative off-diagonal entries and
// rows summing to zero within tol.
void validate_generator(const SquareMatrix& q, double tol = 1e-9);

// e^{tQ} by scaling and squaring of the truncated Taylor series. Entries in
// [-1e-12, 0) are clamped to 0.
SquareMatrix expm_small(const SquareMatrix& q, double t);

// P{i in X_t | X_0 = empty} for the pure singleton intensity at rate c:
// 1/2 (1 - e^{-2ct}).
double marginal_flip_probability(double c, double t);

}  // namespace clevy

#endif  // CLEVY_EXPM_HPP
