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

#include "paudit/distribution.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace paudit {

std::string_view to_string(Role role) {
  return role == Role::kPrivate ? "private" : "nonprivate";
}

Role parse_role(std::string_view text) {
  if (text == "private") return Role::kPrivate;
  if (text == "nonprivate") return Role::kNonprivate;
  throw std::invalid_argument("unknown role '" + std::string(text) +
                              "' (expected private or nonprivate)");
}

CombinationIndex::CombinationIndex(std::vector<Index> radices)
    : radices_(std::move(radices)), strides_(radices_.size()) {
  size_ = 1;
  for (Index m = rank() - 1; m >= 0; --m) {
    if (radices_[m] < 1) throw std::invalid_argument("radix must be >= 1");
    strides_[m] = size_;
    size_ *= radices_[m];
  }
}

Index CombinationIndex::flatten(std::span<const Index> digits) const {
  if (static_cast<Index>(digits.size()) != rank()) {
    throw std::invalid_argument("digit count does not match rank");
  }
  Index flat = 0;
  for (Index m = 0; m < rank(); ++m) {
    if (digits[m] < 0 || digits[m] >= radices_[m]) {
      throw std::out_of_range("digit out of range");
    }
    flat += digits[m] * strides_[m];
  }
  return flat;
}

std::vector<Index> CombinationIndex::unflatten(Index flat) const {
  if (flat < 0 || flat >= size_) throw std::out_of_range("flat index");
  std::vector<Index> digits(radices_.size());
  for (Index m = 0; m < rank(); ++m) digits[m] = (flat / strides_[m]) % radices_[m];
  return digits;
}

Index CombinationIndex::digit(Index flat, Index characteristic) const {
  return (flat / strides_.at(characteristic)) % radices_.at(characteristic);
}

std::vector<Index> CombinationIndex::fiber(Index characteristic,
                                           Index value) const {
  if (value < 0 || value >= radix(characteristic)) {
    throw std::out_of_range("fiber value out of range");
  }
  std::vector<Index> out;
  for (Index r = 0; r < size_; ++r) {
    if (digit(r, characteristic) == value) out.push_back(r);
  }
  return out;
}

namespace {

CombinationIndex index_for(const std::vector<CharacteristicSpec>& chars) {
  std::vector<Index> radices;
  radices.reserve(chars.size());
  for (const auto& c : chars) radices.push_back(c.cardinality());
  return CombinationIndex(std::move(radices));
}

void check_structure(const std::vector<CharacteristicSpec>& chars) {
  if (chars.empty()) throw std::invalid_argument("no characteristics declared");
  std::set<std::string> names;
  for (const auto& c : chars) {
    if (c.name.empty()) throw std::invalid_argument("characteristic without a name");
    if (!names.insert(c.name).second) {
      throw std::invalid_argument("duplicate characteristic '" + c.name + "'");
    }
    if (c.values.size() < 2) {
      throw std::invalid_argument("characteristic '" + c.name +
                                  "' needs at least two values");
    }
    std::set<std::string> labels(c.values.begin(), c.values.end());
    if (labels.size() != c.values.size()) {
      throw std::invalid_argument("characteristic '" + c.name +
                                  "' has duplicate value labels");
    }
  }
}

}  // namespace

JointDistribution::JointDistribution(
    std::vector<CharacteristicSpec> characteristics, Eigen::MatrixXd probs)
    : characteristics_(std::move(characteristics)), probs_(std::move(probs)) {
  check_structure(characteristics_);
  combinations_ = index_for(characteristics_);
  if (probs_.cols() != combinations_.size()) {
    throw std::invalid_argument(
        "probability matrix has " + std::to_string(probs_.cols()) +
        " columns but the characteristics define " +
        std::to_string(combinations_.size()) + " combinations");
  }
}

const CharacteristicSpec& JointDistribution::characteristic(Index m) const {
  if (m < 0 || m >= characteristic_count()) {
    throw std::out_of_range("characteristic index " + std::to_string(m) +
                            " out of range");
  }
  return characteristics_[m];
}

Index JointDistribution::find_characteristic(std::string_view name) const {
  for (Index m = 0; m < characteristic_count(); ++m) {
    if (characteristics_[m].name == name) return m;
  }
  throw std::out_of_range("unknown characteristic '" + std::string(name) + "'");
}

std::vector<Index> JointDistribution::characteristics_with_role(Role role) const {
  std::vector<Index> out;
  for (Index m = 0; m < characteristic_count(); ++m) {
    if (characteristics_[m].role == role) out.push_back(m);
  }
  return out;
}

bool JointDistribution::is_binary_pair() const {
  return characteristic_count() == 2 && characteristics_[0].cardinality() == 2 &&
         characteristics_[1].cardinality() == 2 &&
         characteristics_[0].role != characteristics_[1].role;
}

JointDistribution JointDistribution::with_probs(Eigen::MatrixXd probs) const {
  return JointDistribution(characteristics_, std::move(probs));
}

bool JointDistribution::operator==(const JointDistribution& other) const {
  return characteristics_ == other.characteristics_ &&
         probs_.rows() == other.probs_.rows() && probs_ == other.probs_;
}

ValidationResult validate(const JointDistribution& d) {
  const auto& p = d.probs();
  if (d.interval_count() < 2) {
    return {false, "at least two data intervals are required"};
  }
  if (d.combination_count() < 4) {
    return {false, "at least four value combinations are required"};
  }
  for (Index i = 0; i < p.rows(); ++i) {
    for (Index r = 0; r < p.cols(); ++r) {
      if (!std::isfinite(p(i, r))) {
        return {false, "non-finite probability at (" + std::to_string(i) + ", " +
                           std::to_string(r) + ")"};
      }
      if (p(i, r) < 0.0) {
        return {false, "negative probability at (" + std::to_string(i) + ", " +
                           std::to_string(r) + ")"};
      }
    }
  }
  if (std::abs(p.sum() - 1.0) > kNormTolerance) {
    return {false, "not normalized: total mass is " + std::to_string(p.sum())};
  }
  return {true, {}};
}

Eigen::VectorXd interval_marginal(const JointDistribution& d) {
  return d.probs().rowwise().sum();
}

Eigen::VectorXd combination_marginal(const JointDistribution& d) {
  return d.probs().colwise().sum().transpose();
}

double group_sum(const JointDistribution& d, Index i,
                 std::span<const Index> group) {
  if (group.empty()) throw std::invalid_argument("empty combination group");
  if (i < 0 || i >= d.interval_count()) throw std::out_of_range("interval index");
  double s = 0.0;
  for (Index r : group) {
    if (r < 0 || r >= d.combination_count()) {
      throw std::out_of_range("combination index");
    }
    s += d(i, r);
  }
  return s;
}

Eigen::MatrixXd fiber_sums(const JointDistribution& d, Index m) {
  const Index k = d.characteristic(m).cardinality();
  const auto& idx = d.combinations();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d.interval_count(), k);
  for (Index r = 0; r < d.combination_count(); ++r) {
    out.col(idx.digit(r, m)) += d.probs().col(r);
  }
  return out;
}

Eigen::VectorXd characteristic_marginal(const JointDistribution& d, Index m) {
  return fiber_sums(d, m).colwise().sum().transpose();
}

Eigen::VectorXd characteristic_joint_marginal(const JointDistribution& d,
                                              std::span<const Index> subset) {
  std::vector<Index> radices;
  for (Index m : subset) radices.push_back(d.characteristic(m).cardinality());
  const CombinationIndex sub(radices);
  const Eigen::VectorXd col = combination_marginal(d);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(sub.size());
  std::vector<Index> digits(subset.size());
  for (Index r = 0; r < d.combination_count(); ++r) {
    for (std::size_t q = 0; q < subset.size(); ++q) {
      digits[q] = d.combinations().digit(r, subset[q]);
    }
    out(sub.flatten(digits)) += col(r);
  }
  return out;
}

}  // namespace paudit
