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

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "paudit/ingest.hpp"

namespace paudit {
namespace {

Eigen::MatrixXd northwest_corner(const Eigen::VectorXd& before,
                                 const Eigen::VectorXd& after) {
  const Index n = before.size();
  Eigen::MatrixXd plan = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd supply = before;
  Eigen::VectorXd demand = after;
  Index i = 0;
  Index j = 0;
  while (i < n) {
    if (j >= n) {
      // Rounding leftovers go to the last column.
      plan(i, n - 1) += supply(i);
      ++i;
      continue;
    }
    if (supply(i) <= demand(j)) {
      plan(i, j) += supply(i);
      demand(j) -= supply(i);
      ++i;
    } else {
      plan(i, j) += demand(j);
      supply(i) -= demand(j);
      ++j;
    }
  }
  return plan;
}

}  // namespace

ReleasePlan build_release_plan(const JointDistribution& before,
                               const JointDistribution& after) {
  if (before.characteristics() != after.characteristics() ||
      before.interval_count() != after.interval_count()) {
    throw std::invalid_argument("release plan needs distributions with the same layout");
  }
  const Eigen::VectorXd cb = combination_marginal(before);
  const Eigen::VectorXd ca = combination_marginal(after);
  for (Index r = 0; r < cb.size(); ++r) {
    if (std::abs(cb(r) - ca(r)) > 1e-12) {
      throw std::invalid_argument("combination marginals differ at combination " +
                                  std::to_string(r) + "; the audit did not preserve them");
    }
  }
  const Index n = before.interval_count();
  ReleasePlan plan;
  for (Index r = 0; r < cb.size(); ++r) {
    const Eigen::VectorXd b = before.probs().col(r);
    const Eigen::VectorXd a = after.probs().col(r);
    const Eigen::MatrixXd t = northwest_corner(b, a);
    Eigen::MatrixXd k = Eigen::MatrixXd::Identity(n, n);
    for (Index i = 0; i < n; ++i) {
      if (b(i) > 0.0) k.row(i) = t.row(i) / b(i);
    }
    plan.couplings.push_back(std::move(k));
  }
  return plan;
}

std::vector<Index> sample_release(const ReleasePlan& plan,
                                  const std::vector<Index>& intervals,
                                  const std::vector<Index>& combinations,
                                  std::uint64_t seed) {
  if (intervals.size() != combinations.size()) {
    throw std::invalid_argument("interval and combination lists differ in length");
  }
  std::mt19937_64 rng(seed);
  std::vector<Index> out;
  out.reserve(intervals.size());
  for (std::size_t q = 0; q < intervals.size(); ++q) {
    const Index r = combinations[q];
    if (r < 0 || r >= static_cast<Index>(plan.couplings.size())) {
      throw std::out_of_range("combination index out of range");
    }
    const Eigen::MatrixXd& k = plan.couplings[static_cast<std::size_t>(r)];
    const Index i = intervals[q];
    if (i < 0 || i >= k.rows()) throw std::out_of_range("interval index out of range");
    const double u = unit_uniform(rng);
    double acc = 0.0;
    Index pick = -1;
    for (Index c = 0; c < k.cols(); ++c) {
      if (k(i, c) <= 0.0) continue;
      pick = c;
      acc += k(i, c);
      if (u < acc) break;
    }
    out.push_back(pick < 0 ? i : pick);
  }
  return out;
}

}  // namespace paudit
