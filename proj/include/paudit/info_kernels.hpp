// Copyright 2026 The paudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Scalar-generic information kernels over Eigen expressions. All kernels work
// in nats; callers rescale with log_scale().

#ifndef PAUDIT_INFO_KERNELS_HPP_
#define PAUDIT_INFO_KERNELS_HPP_

#include <cmath>
#include <numbers>

#include <Eigen/Core>

namespace paudit {

enum class LogBase { kBits, kNats };

// Multiplier converting nats into the requested unit.
inline double log_scale(LogBase base) {
  return base == LogBase::kBits ? 1.0 / std::numbers::ln2 : 1.0;
}

inline const char* unit_name(LogBase base) {
  return base == LogBase::kBits ? "bits" : "nats";
}

// x log x with the 0 log 0 = 0 convention.
template <typename Scalar>
Scalar xlogx(Scalar x) {
  using std::log;
  return x > Scalar(0) ? x * log(x) : Scalar(0);
}

// Sum of xlogx over every coefficient.
template <typename Derived>
typename Derived::Scalar sum_xlogx(const Eigen::DenseBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  Scalar s(0);
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) s += xlogx(x(i, j));
  }
  return s;
}

template <typename Derived>
typename Derived::Scalar entropy_nats(const Eigen::DenseBase<Derived>& p) {
  return -sum_xlogx(p);
}

// I(row variable; column variable) of a joint probability table.
template <typename Derived>
typename Derived::Scalar mutual_information_nats(
    const Eigen::MatrixBase<Derived>& joint) {
  return sum_xlogx(joint) - sum_xlogx(joint.rowwise().sum()) -
         sum_xlogx(joint.colwise().sum());
}

// H(row variable | column variable).
template <typename Derived>
typename Derived::Scalar conditional_entropy_nats(
    const Eigen::MatrixBase<Derived>& joint) {
  return sum_xlogx(joint.colwise().sum()) - sum_xlogx(joint);
}

}  // namespace paudit

#endif  // PAUDIT_INFO_KERNELS_HPP_
