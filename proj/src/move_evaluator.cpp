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

#include "move_evaluator.hpp"

#include <algorithm>
#include <cmath>

#include "paudit/info_kernels.hpp"

namespace paudit::internal {

double phi_step(double x, double e) {
  if (e == 0.0) return 0.0;
  const double y = x + e;
  if (x > 0.0 && std::abs(e) <= 0.5 * x) return x * std::log1p(e / x) + e * std::log(y);
  return xlogx(y) - xlogx(x);
}

MoveEvaluator::MoveEvaluator(const JointDistribution& d)
    : index_(d.combinations()), probs_(d.probs()) {
  for (Index m = 0; m < d.characteristic_count(); ++m) {
    radix_.push_back(d.characteristic(m).cardinality());
  }
  const Eigen::VectorXd col = probs_.colwise().sum().transpose();
  for (Index m = 0; m < characteristic_count(); ++m) {
    Eigen::VectorXd marg = Eigen::VectorXd::Zero(radix_[m]);
    for (Index r = 0; r < probs_.cols(); ++r) marg(index_.digit(r, m)) += col(r);
    const_terms_.push_back(sum_xlogx(marg));
  }
  refresh();
}

void MoveEvaluator::refresh() {
  row_sum_ = probs_.rowwise().sum();
  sum_phi_rows_ = sum_xlogx(row_sum_);
  fibers_.assign(characteristic_count(), Eigen::MatrixXd());
  mi_.resize(characteristic_count());
  for (Index m = 0; m < characteristic_count(); ++m) {
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(probs_.rows(), radix_[m]);
    for (Index r = 0; r < probs_.cols(); ++r) f.col(index_.digit(r, m)) += probs_.col(r);
    mi_(m) = sum_xlogx(f) - sum_phi_rows_ - const_terms_[m];
    fibers_[m] = std::move(f);
  }
}

Direction MoveEvaluator::direction(const ExchangeMove& shape,
                                   bool positive) const {
  Direction dir;
  dir.j = shape.j;
  dir.k = shape.k;
  std::vector<std::pair<Index, double>> cells;
  auto add_group = [&](const std::vector<Index>& group, Index donor, double sign) {
    if (group.size() == 1) {
      cells.emplace_back(group.front(), sign);
      return;
    }
    double total = 0.0;
    for (Index r : group) total += probs_(donor, r);
    for (Index r : group) {
      const double w = total > 0.0 ? probs_(donor, r) / total
                                   : 1.0 / static_cast<double>(group.size());
      cells.emplace_back(r, sign * w);
    }
  };
  if (shape.mode == ExchangeMode::kVariable) {
    cells.emplace_back(shape.gain.front(), 1.0);
    dir.row_coef = 1.0;
  } else {
    add_group(shape.gain, positive ? shape.k : shape.j, 1.0);
    add_group(shape.give, positive ? shape.j : shape.k, -1.0);
  }
  dir.fiber_terms.resize(characteristic_count());
  for (Index m = 0; m < characteristic_count(); ++m) {
    std::vector<double> coef(radix_[m], 0.0);
    for (const auto& [r, u] : cells) coef[index_.digit(r, m)] += u;
    for (Index v = 0; v < radix_[m]; ++v) {
      if (coef[v] != 0.0) dir.fiber_terms[m].emplace_back(v, coef[v]);
    }
  }
  return dir;
}

void MoveEvaluator::delta_mi(const Direction& dir, double delta,
                             Eigen::VectorXd& out) const {
  out.resize(characteristic_count());
  double rows = 0.0;
  if (dir.row_coef != 0.0) {
    const double e = delta * dir.row_coef;
    rows = phi_step(row_sum_(dir.j), e) + phi_step(row_sum_(dir.k), -e);
  }
  for (Index m = 0; m < characteristic_count(); ++m) {
    const Eigen::MatrixXd& f = fibers_[m];
    double s = 0.0;
    for (const auto& [v, g] : dir.fiber_terms[m]) {
      const double e = delta * g;
      s += phi_step(f(dir.j, v), e) + phi_step(f(dir.k, v), -e);
    }
    out(m) = s - rows;
  }
}

DeltaInterval MoveEvaluator::domain(const ExchangeMove& shape) const {
  if (shape.mode == ExchangeMode::kVariable) {
    const Index r = shape.gain.front();
    return {-probs_(shape.j, r), probs_(shape.k, r)};
  }
  auto sum = [&](Index i, const std::vector<Index>& g) {
    double s = 0.0;
    for (Index r : g) s += probs_(i, r);
    return s;
  };
  return {-std::min(sum(shape.j, shape.gain), sum(shape.k, shape.give)),
          std::min(sum(shape.k, shape.gain), sum(shape.j, shape.give))};
}

void MoveEvaluator::apply(const ExchangeMove& mv) {
  apply_move_inplace(probs_, mv);
  refresh();
}

}  // namespace paudit::internal
