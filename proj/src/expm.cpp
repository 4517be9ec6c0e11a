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

#include "clevy/expm.hpp"

#include <cmath>

#include "clevy/error.hpp"

namespace clevy {

SquareMatrix::SquareMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : dim_(rows.size()), a_() {
  a_.reserve(dim_ * dim_);
  for (const auto& r : rows) {
    if (r.size() != dim_) fail(ErrorCode::kInvalidArgument, "matrix rows must be square");
    a_.insert(a_.end(), r.begin(), r.end());
  }
}

SquareMatrix SquareMatrix::identity(std::size_t dim) {
  SquareMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

SquareMatrix SquareMatrix::operator*(const SquareMatrix& rhs) const {
  if (dim_ != rhs.dim_) fail(ErrorCode::kShapeMismatch, "matrix dimensions differ");
  SquareMatrix out(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t k = 0; k < dim_; ++k) {
      const double aik = (*this)(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < dim_; ++j) out(i, j) += aik * rhs(k, j);
    }
  return out;
}

SquareMatrix& SquareMatrix::operator+=(const SquareMatrix& rhs) {
  if (dim_ != rhs.dim_) fail(ErrorCode::kShapeMismatch, "matrix dimensions differ");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += rhs.a_[i];
  return *this;
}

SquareMatrix& SquareMatrix::operator*=(double s) {
  for (auto& x : a_) x *= s;
  return *this;
}

double SquareMatrix::norm_inf() const {
  double best = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) row += std::abs((*this)(i, j));
    best = std::max(best, row);
  }
  return best;
}

void validate_generator(const SquareMatrix& q, double tol) {
  if (q.dim() == 0 || q.dim() > kMaxExpmDim)
    fail(ErrorCode::kInvalidArgument, "generator dimension must be in [1, 256]");
  for (std::size_t i = 0; i < q.dim(); ++i) {
    double row = 0.0, scale = 0.0;
    for (std::size_t j = 0; j < q.dim(); ++j) {
      const double x = q(i, j);
      if (!std::isfinite(x)) fail(ErrorCode::kInvalidArgument, "generator entries must be finite");
      if (i != j && x < 0.0)
        fail(ErrorCode::kInvalidArgument, "generator off-diagonal entries must be nonnegative");
      row += x;
      scale += std::abs(x);
    }
    if (std::abs(row) > tol * std::max(1.0, scale))
      fail(ErrorCode::kInvalidArgument, "generator rows must sum to zero");
  }
}

SquareMatrix expm_small(const SquareMatrix& q, double t) {
  validate_generator(q);
  if (!(t >= 0.0) || !std::isfinite(t)) fail(ErrorCode::kInvalidArgument, "time must be >= 0");
  const std::size_t d = q.dim();
  SquareMatrix a = q;
  a *= t;

  // Scale so that ||A / 2^s|| <= 1/2, where 18 Taylor terms reach double precision.
  const double norm = a.norm_inf();
  int s = 0;
  if (norm > 0.5) s = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  a *= std::ldexp(1.0, -s);

  SquareMatrix result = SquareMatrix::identity(d);
  SquareMatrix term = SquareMatrix::identity(d);
  for (int k = 1; k <= 30; ++k) {
    term = term * a;
    term *= 1.0 / k;
    result += term;
    if (term.norm_inf() < 1e-18) break;
  }
  for (int i = 0; i < s; ++i) result = result * result;

  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      double& x = result(i, j);
      if (x < 0.0 && x >= -1e-12) x = 0.0;
      if (x < -1e-12) fail(ErrorCode::kNumeric, "matrix exponential lost positivity");
    }
  return result;
}

double marginal_flip_probability(double c, double t) {
  if (!(c >= 0.0) || !(t >= 0.0))
    fail(ErrorCode::kInvalidArgument, "rate and time must be nonnegative");
  return 0.5 * (-std::expm1(-2.0 * c * t));
}

}  // namespace clevy
