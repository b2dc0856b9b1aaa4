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

// Incremental evaluation of MI changes for candidate exchange moves. Keeps
// row sums and per-characteristic fiber sums of the current matrix so a
// candidate (move, delta) costs O(characteristics x values) instead of a full
// recomputation.

#ifndef PAUDIT_SRC_MOVE_EVALUATOR_HPP_
#define PAUDIT_SRC_MOVE_EVALUATOR_HPP_

#include <vector>

#include <Eigen/Core>

#include "paudit/distribution.hpp"
#include "paudit/exchange.hpp"

namespace paudit::internal {

// Linear effect of one sign of delta: row j changes by delta * u, row k by
// -delta * u. Stored already projected onto fibers and row totals.
struct Direction {
  Index j = 0;
  Index k = 1;
  double row_coef = 0.0;  // sum of u; zero for constant moves
  // fiber_terms[m] holds (value, coefficient) pairs with nonzero coefficient.
  std::vector<std::vector<std::pair<Index, double>>> fiber_terms;
};

class MoveEvaluator {
 public:
  explicit MoveEvaluator(const JointDistribution& d);

  const Eigen::MatrixXd& probs() const { return probs_; }
  Index characteristic_count() const { return static_cast<Index>(radix_.size()); }

  // Current MI per characteristic, in nats.
  const Eigen::VectorXd& mi_nats() const { return mi_; }

  // Direction of `shape` (delta ignored) for delta of the given sign.
  Direction direction(const ExchangeMove& shape, bool positive) const;

  // MI change per characteristic (nats) for moving `delta` along `dir`.
  void delta_mi(const Direction& dir, double delta, Eigen::VectorXd& out) const;

  // Applies the move to the matrix and refreshes all cached sums.
  void apply(const ExchangeMove& mv);

  bool row_is_empty(Index i) const { return row_sum_(i) <= 0.0; }
  double row_sum(Index i) const { return row_sum_(i); }
  double fiber(Index m, Index i, Index v) const { return fibers_[m](i, v); }
  const CombinationIndex& index() const { return index_; }

  // Nonnegativity domain of `shape` on the current matrix.
  DeltaInterval domain(const ExchangeMove& shape) const;

 private:
  void refresh();

  CombinationIndex index_;
  Eigen::MatrixXd probs_;
  std::vector<Index> radix_;
  std::vector<Eigen::MatrixXd> fibers_;  // N x k_m per characteristic
  Eigen::VectorXd row_sum_;
  Eigen::VectorXd mi_;
  double sum_phi_rows_ = 0.0;
  std::vector<double> const_terms_;  // sum of xlogx over characteristic marginals
};

// x log x change when x moves to x + e, in a cancellation-friendly form.
double phi_step(double x, double e);

}  // namespace paudit::internal

#endif  // PAUDIT_SRC_MOVE_EVALUATOR_HPP_
