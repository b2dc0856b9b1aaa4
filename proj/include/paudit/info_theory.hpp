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

#ifndef PAUDIT_INFO_THEORY_HPP_
#define PAUDIT_INFO_THEORY_HPP_

#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "paudit/distribution.hpp"
#include "paudit/info_kernels.hpp"

namespace paudit {

// Negative MI values down to this magnitude are rounding noise and clip to 0.
inline constexpr double kMiClip = 1e-12;

// Entropy of a probability vector. Throws std::invalid_argument when the input
// has negative entries or does not sum to 1 within kNormTolerance.
double entropy(const Eigen::VectorXd& p, LogBase base = LogBase::kBits);

// H(Y | X^(m)).
double conditional_entropy(const JointDistribution& d, Index m,
                           LogBase base = LogBase::kBits);

// I(X^(m); Y) = H(Y) - H(Y | X^(m)), clipped at 0.
double mutual_information(const JointDistribution& d, Index m,
                          LogBase base = LogBase::kBits);

// I(X^(m); Y | X^(c)). Throws when m == c.
double conditional_mutual_information(const JointDistribution& d, Index m,
                                      Index c, LogBase base = LogBase::kBits);

// Entropy of one characteristic, from the combination marginal.
double characteristic_entropy(const JointDistribution& d, Index m,
                              LogBase base = LogBase::kBits);

// H(X^(target) | X^(given...)), from the combination marginal only. An empty
// `given` yields H(X^(target)).
double characteristic_conditional_entropy(const JointDistribution& d,
                                          Index target,
                                          std::span<const Index> given,
                                          LogBase base = LogBase::kBits);

// Feasible region of the MI pair for one (private, nonprivate) pair:
// the box [0, H(X^p)] x [0, H(X^n)] and the band
// -H(X^p | X^n) <= I(X^n; Y) - I(X^p; Y) <= H(X^n | X^p).
struct MiRegion {
  Index private_index = 0;
  Index nonprivate_index = 0;
  double private_max = 0.0;
  double nonprivate_max = 0.0;
  double difference_lower = 0.0;
  double difference_upper = 0.0;

  bool contains(double mi_private, double mi_nonprivate, double tol) const;
};

MiRegion mi_region(const JointDistribution& d, Index m_priv, Index m_nonpriv,
                   LogBase base = LogBase::kBits);

struct CharacteristicInfo {
  std::string name;
  Role role = Role::kPrivate;
  double entropy = 0.0;
  double data_given_characteristic = 0.0;
  double mi = 0.0;
};

struct MiReport {
  LogBase base = LogBase::kBits;
  double data_entropy = 0.0;
  std::vector<CharacteristicInfo> characteristics;
  std::vector<MiRegion> regions;  // one per (private, nonprivate) pair

  std::vector<double> mi_values() const;
};

MiReport full_report(const JointDistribution& d, LogBase base = LogBase::kBits);

// MI of every characteristic, in characteristic order.
Eigen::VectorXd mi_vector(const JointDistribution& d,
                          LogBase base = LogBase::kBits);

// Shared clip rule: tiny negatives become 0, larger negatives throw.
double clip_mi(double value, LogBase base);

}  // namespace paudit

#endif  // PAUDIT_INFO_THEORY_HPP_
