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

#include "paudit/info_theory.hpp"

#include <cmath>
#include <stdexcept>

namespace paudit {

double clip_mi(double value, LogBase /*base*/) {
  if (value >= 0.0) return value;
  if (value >= -kMiClip) return 0.0;
  throw std::runtime_error("mutual information evaluated to " +
                           std::to_string(value) + "; input is inconsistent");
}

double entropy(const Eigen::VectorXd& p, LogBase base) {
  if ((p.array() < 0.0).any()) {
    throw std::invalid_argument("entropy: negative probability");
  }
  if (std::abs(p.sum() - 1.0) > kNormTolerance) {
    throw std::invalid_argument("entropy: not normalized");
  }
  return entropy_nats(p) * log_scale(base);
}

double conditional_entropy(const JointDistribution& d, Index m, LogBase base) {
  return conditional_entropy_nats(fiber_sums(d, m)) * log_scale(base);
}

double mutual_information(const JointDistribution& d, Index m, LogBase base) {
  const double h = entropy_nats(interval_marginal(d));
  const double hc = conditional_entropy_nats(fiber_sums(d, m));
  return clip_mi((h - hc) * log_scale(base), base);
}

double conditional_mutual_information(const JointDistribution& d, Index m,
                                      Index c, LogBase base) {
  if (m == c) {
    throw std::invalid_argument(
        "conditional MI needs distinct target and conditioning characteristics");
  }
  const Index km = d.characteristic(m).cardinality();
  const Index kc = d.characteristic(c).cardinality();
  const auto& idx = d.combinations();
  // Slice w of the conditioning characteristic: N x km table of masses.
  std::vector<Eigen::MatrixXd> slices(kc, Eigen::MatrixXd::Zero(d.interval_count(), km));
  for (Index r = 0; r < d.combination_count(); ++r) {
    slices[idx.digit(r, c)].col(idx.digit(r, m)) += d.probs().col(r);
  }
  double total = 0.0;
  for (const auto& s : slices) {
    // P(w) * I(Y; X^m | X^c = w), written without dividing by P(w).
    total += mutual_information_nats(s) + xlogx(s.sum());
  }
  return clip_mi(total * log_scale(base), base);
}

double characteristic_entropy(const JointDistribution& d, Index m,
                              LogBase base) {
  return entropy_nats(characteristic_marginal(d, m)) * log_scale(base);
}

double characteristic_conditional_entropy(const JointDistribution& d,
                                          Index target,
                                          std::span<const Index> given,
                                          LogBase base) {
  std::vector<Index> all(given.begin(), given.end());
  for (Index g : all) {
    if (g == target) {
      throw std::invalid_argument(
          "target characteristic also appears in the conditioning set");
    }
  }
  all.push_back(target);
  const double joint = entropy_nats(characteristic_joint_marginal(d, all));
  const double cond =
      given.empty() ? 0.0 : entropy_nats(characteristic_joint_marginal(d, given));
  return std::max(0.0, joint - cond) * log_scale(base);
}

bool MiRegion::contains(double mi_private, double mi_nonprivate,
                        double tol) const {
  const double diff = mi_nonprivate - mi_private;
  return mi_private >= -tol && mi_private <= private_max + tol &&
         mi_nonprivate >= -tol && mi_nonprivate <= nonprivate_max + tol &&
         diff >= difference_lower - tol && diff <= difference_upper + tol;
}

MiRegion mi_region(const JointDistribution& d, Index m_priv, Index m_nonpriv,
                   LogBase base) {
  if (m_priv == m_nonpriv) {
    throw std::invalid_argument("region needs two distinct characteristics");
  }
  MiRegion region;
  region.private_index = m_priv;
  region.nonprivate_index = m_nonpriv;
  region.private_max = characteristic_entropy(d, m_priv, base);
  region.nonprivate_max = characteristic_entropy(d, m_nonpriv, base);
  const Index np[] = {m_nonpriv};
  const Index pv[] = {m_priv};
  region.difference_lower =
      -characteristic_conditional_entropy(d, m_priv, np, base);
  region.difference_upper =
      characteristic_conditional_entropy(d, m_nonpriv, pv, base);
  return region;
}

std::vector<double> MiReport::mi_values() const {
  std::vector<double> out;
  for (const auto& c : characteristics) out.push_back(c.mi);
  return out;
}

MiReport full_report(const JointDistribution& d, LogBase base) {
  MiReport report;
  report.base = base;
  report.data_entropy = entropy_nats(interval_marginal(d)) * log_scale(base);
  for (Index m = 0; m < d.characteristic_count(); ++m) {
    CharacteristicInfo info;
    info.name = d.characteristic(m).name;
    info.role = d.characteristic(m).role;
    info.entropy = characteristic_entropy(d, m, base);
    info.data_given_characteristic = conditional_entropy(d, m, base);
    info.mi = mutual_information(d, m, base);
    report.characteristics.push_back(std::move(info));
  }
  for (Index u : d.characteristics_with_role(Role::kPrivate)) {
    for (Index v : d.characteristics_with_role(Role::kNonprivate)) {
      report.regions.push_back(mi_region(d, u, v, base));
    }
  }
  return report;
}

Eigen::VectorXd mi_vector(const JointDistribution& d, LogBase base) {
  Eigen::VectorXd out(d.characteristic_count());
  for (Index m = 0; m < d.characteristic_count(); ++m) {
    out(m) = mutual_information(d, m, base);
  }
  return out;
}

}  // namespace paudit
