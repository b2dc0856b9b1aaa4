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

#ifndef PAUDIT_DISTRIBUTION_HPP_
#define PAUDIT_DISTRIBUTION_HPP_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace paudit {

using Index = Eigen::Index;

// Normalization tolerance for probability vectors and matrices.
inline constexpr double kNormTolerance = 1e-12;

enum class Role { kPrivate, kNonprivate };

std::string_view to_string(Role role);
Role parse_role(std::string_view text);

// A discrete owner attribute. The order of `values` fixes the value indices.
struct CharacteristicSpec {
  std::string name;
  std::vector<std::string> values;
  Role role = Role::kPrivate;

  Index cardinality() const { return static_cast<Index>(values.size()); }
  bool operator==(const CharacteristicSpec&) const = default;
};

// Mixed-radix flattening of per-characteristic value indices. The first
// characteristic is the most significant digit (row-major order), so in the
// binary x binary case the flat order is a=(0,0), b=(0,1), c=(1,0), d=(1,1).
class CombinationIndex {
 public:
  CombinationIndex() = default;
  explicit CombinationIndex(std::vector<Index> radices);

  Index size() const { return size_; }
  Index rank() const { return static_cast<Index>(radices_.size()); }
  Index radix(Index characteristic) const { return radices_.at(characteristic); }

  Index flatten(std::span<const Index> digits) const;
  std::vector<Index> unflatten(Index flat) const;
  Index digit(Index flat, Index characteristic) const;

  // All flat indices whose digit for `characteristic` equals `value`.
  std::vector<Index> fiber(Index characteristic, Index value) const;

 private:
  std::vector<Index> radices_;
  std::vector<Index> strides_;
  Index size_ = 0;
};

struct ValidationResult {
  bool ok = true;
  std::string message;

  explicit operator bool() const { return ok; }
};

// N x |P| probability matrix over data intervals (rows) and characteristic
// value combinations (columns). Immutable once built; "modifications" produce
// a new value via with_probs().
//
// The constructor only checks structure (names, value lists, matrix shape).
// Probability-level invariants are reported by validate().
class JointDistribution {
 public:
  JointDistribution(std::vector<CharacteristicSpec> characteristics,
                    Eigen::MatrixXd probs);

  const std::vector<CharacteristicSpec>& characteristics() const {
    return characteristics_;
  }
  const CharacteristicSpec& characteristic(Index m) const;
  Index characteristic_count() const {
    return static_cast<Index>(characteristics_.size());
  }
  Index interval_count() const { return probs_.rows(); }
  Index combination_count() const { return probs_.cols(); }

  const Eigen::MatrixXd& probs() const { return probs_; }
  double operator()(Index i, Index r) const { return probs_(i, r); }

  const CombinationIndex& combinations() const { return combinations_; }

  // Throws std::out_of_range when no characteristic has that name.
  Index find_characteristic(std::string_view name) const;
  std::vector<Index> characteristics_with_role(Role role) const;

  // Exactly two binary characteristics, one private and one nonprivate.
  bool is_binary_pair() const;

  JointDistribution with_probs(Eigen::MatrixXd probs) const;

  bool operator==(const JointDistribution& other) const;

 private:
  std::vector<CharacteristicSpec> characteristics_;
  CombinationIndex combinations_;
  Eigen::MatrixXd probs_;
};

ValidationResult validate(const JointDistribution& d);

// Row sums P(Y = Y_i).
Eigen::VectorXd interval_marginal(const JointDistribution& d);

// Column sums: the joint distribution of all characteristics.
Eigen::VectorXd combination_marginal(const JointDistribution& d);

// Sum of row i over the combinations in `group`. Throws on an empty group.
double group_sum(const JointDistribution& d, Index i,
                 std::span<const Index> group);

// P(X^(m) = v) for every value v of characteristic m.
Eigen::VectorXd characteristic_marginal(const JointDistribution& d, Index m);

// N x |values(m)| matrix of fiber sums: entry (i, v) is the mass of interval i
// carried by combinations whose characteristic-m value is v.
Eigen::MatrixXd fiber_sums(const JointDistribution& d, Index m);

// Marginal over a subset of characteristics, flattened in the subset's own
// row-major order.
Eigen::VectorXd characteristic_joint_marginal(const JointDistribution& d,
                                              std::span<const Index> subset);

}  // namespace paudit

#endif  // PAUDIT_DISTRIBUTION_HPP_
