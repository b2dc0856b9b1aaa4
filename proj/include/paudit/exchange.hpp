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

// Probability exchange moves between two data intervals, their feasible
// domains, and closed forms for the entropy and MI changes they cause.

#ifndef PAUDIT_EXCHANGE_HPP_
#define PAUDIT_EXCHANGE_HPP_

#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "paudit/distribution.hpp"
#include "paudit/info_kernels.hpp"

namespace paudit {

// Constant mode preserves both marginals. Variable mode moves mass of one
// combination between intervals and so preserves only the combination
// marginal.
enum class ExchangeMode { kConstant, kVariable };

std::string_view to_string(ExchangeMode mode);
ExchangeMode parse_mode(std::string_view text);

// For delta > 0 interval j gains delta on the `gain` combinations and loses
// delta on the `give` combinations; interval k does the opposite. Variable
// moves have one `gain` combination and no `give`.
//
// When a group has several combinations the transferred amount is split in
// proportion to the donor interval's cells, so no cell outside the donor's
// support is drained.
struct ExchangeMove {
  ExchangeMode mode = ExchangeMode::kConstant;
  Index j = 0;
  Index k = 1;
  std::vector<Index> gain;
  std::vector<Index> give;
  double delta = 0.0;

  bool operator==(const ExchangeMove&) const = default;
};

ExchangeMove cell_move(Index j, Index k, Index r, Index s, double delta);
ExchangeMove variable_move(Index j, Index k, Index r, double delta);
// Grouped constant move between the fibers X^(m) = v (gain) and X^(m) = w.
ExchangeMove fiber_move(const JointDistribution& d, Index j, Index k, Index m,
                        Index v, Index w, double delta);

struct DeltaInterval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double delta, double tol = 0.0) const {
    return delta >= lo - tol && delta <= hi + tol;
  }
  double clamp(double delta) const;
  bool degenerate() const { return hi - lo <= 0.0; }
  double width() const { return hi - lo; }
};

// Throws std::invalid_argument for malformed moves (j == k, empty or
// overlapping groups, indices out of range).
void check_move_shape(const JointDistribution& d, const ExchangeMove& mv);

// Nonnegativity domain of mv.delta (mv.delta itself is ignored).
DeltaInterval delta_domain(const JointDistribution& d, const ExchangeMove& mv);

// Throws std::domain_error naming the violated bound when mv.delta lies
// outside delta_domain.
JointDistribution apply_move(const JointDistribution& d, const ExchangeMove& mv);

// In-place variant on a bare probability matrix; same contract.
void apply_move_inplace(Eigen::MatrixXd& probs, const ExchangeMove& mv);

// Solver-chosen deltas live on a grid of this spacing. Distributions whose
// cells lie on the same grid (for example counts over a power-of-two total)
// then keep both marginals bit-exact under any sequence of moves.
inline constexpr double kDeltaQuantum = 0x1p-53;

// Rounds toward zero onto the kDeltaQuantum grid; domain endpoints are kept.
double snap_delta(double delta, const DeltaInterval& domain);

// Fiber sums for a two-fiber exchange: interval j gains on fiber v and gives
// on fiber w, interval k the reverse.
struct FiberPair {
  double gain_j = 0.0;
  double give_j = 0.0;
  double gain_k = 0.0;
  double give_k = 0.0;

  double total() const { return gain_j + give_j + gain_k + give_k; }
  DeltaInterval domain() const;
};

FiberPair fiber_pair(const JointDistribution& d, Index j, Index k, Index m,
                     Index v = 0, Index w = 1);

// Change in x log x + y log y when x gains delta and y loses delta, in nats.
double pair_phi_change(double x, double y, double delta);

// Change of H(Y | X^(m)) under the exchange; depends only on the fiber sums.
double delta_h(const FiberPair& s, double delta, LogBase base = LogBase::kBits);
double delta_h_derivative(const FiberPair& s, double delta,
                          LogBase base = LogBase::kBits);
double delta_h_second_derivative(const FiberPair& s, double delta,
                                 LogBase base = LogBase::kBits);
// Stationary point of delta_h, clamped to the domain.
double optimal_delta(const FiberPair& s);
double unclamped_optimal_delta(const FiberPair& s);
bool concavity_check(const FiberPair& s, LogBase base = LogBase::kBits);

// Convenience overloads on a binary characteristic m (fibers 0 and 1).
double delta_h(const JointDistribution& d, Index j, Index k, Index m,
               double delta, LogBase base = LogBase::kBits);
double delta_h_derivative(const JointDistribution& d, Index j, Index k, Index m,
                          double delta, LogBase base = LogBase::kBits);
double optimal_delta(const JointDistribution& d, Index j, Index k, Index m);
bool concavity_check(const JointDistribution& d, Index j, Index k, Index m,
                     LogBase base = LogBase::kBits);

// The unique characteristic holding `role`; throws if there is not exactly
// one.
Index characteristic_for_role(const JointDistribution& d, Role role);

double delta_h_private(const JointDistribution& d, Index j, Index k,
                       double delta, LogBase base = LogBase::kBits);
double delta_h_nonprivate(const JointDistribution& d, Index j, Index k,
                          double delta, LogBase base = LogBase::kBits);

// Change of I(X^(m); .) under the variable move (j, k, r, delta).
double delta_i_variable(const JointDistribution& d, Index j, Index k, Index r,
                        double delta, Index m, LogBase base = LogBase::kBits);

}  // namespace paudit

#endif  // PAUDIT_EXCHANGE_HPP_
