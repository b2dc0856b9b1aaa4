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

// Optimality conditions for the binary private x binary nonprivate setting:
// zero leakage of the private characteristic, maximal utility of the
// nonprivate one, and the Pareto condition on the MI pair. Each checker is
// paired with a numerical falsifier (a move scan) so the conditions can be
// tested rather than trusted.

#ifndef PAUDIT_PROPOSITIONS_HPP_
#define PAUDIT_PROPOSITIONS_HPP_

#include <optional>
#include <string_view>
#include <vector>

#include "paudit/distribution.hpp"
#include "paudit/exchange.hpp"

namespace paudit {

inline constexpr double kZeroThreshold = 1e-12;
inline constexpr double kRatioTolerance = 1e-9;
inline constexpr double kWitnessThreshold = 1e-9;

// Interval tags by which nonprivate fibers carry mass. The nonprivate
// fibers are X^(n) = value 0 (cells a, c) and X^(n) = value 1 (cells b, d).
enum class IntervalClass {
  kEmpty,         // every cell zero
  kNonprivate0,   // mass only on nonprivate value 0
  kNonprivate1,   // mass only on nonprivate value 1
  kMixed,         // mass on both nonprivate values
};

std::string_view to_string(IntervalClass c);

struct IntervalClassification {
  std::vector<IntervalClass> classes;
  // balanced(i, j): both cross products of nonprivate fiber sums are nonzero
  // and the private fiber ratios of i and j agree.
  std::vector<std::vector<bool>> balanced;
  // Mixed intervals that are balanced with every mixed interval, i.e. the
  // mixed part of the partition.
  std::vector<bool> balanced_member;
  // (1 - p1) * mass on private value 0 == p1 * mass on private value 1.
  std::vector<bool> private_ratio_member;
  // Every interval is empty, single-valued on the nonprivate
  // characteristic, or a balanced member.
  bool partition_holds = false;
};

// Per-interval fiber sums in the binary setting.
struct BinaryFibers {
  Index private_index = 0;
  Index nonprivate_index = 1;
  double p1 = 0.0;  // P(private = value 0)
  double p2 = 0.0;  // P(nonprivate = value 0)
  Eigen::VectorXd private0;     // cells a, b
  Eigen::VectorXd private1;     // cells c, d
  Eigen::VectorXd nonprivate0;  // cells a, c
  Eigen::VectorXd nonprivate1;  // cells b, d
};

// Throws std::invalid_argument unless d has exactly one binary private and
// one binary nonprivate characteristic with nondegenerate marginals.
BinaryFibers binary_fibers(const JointDistribution& d);

IntervalClassification classify_intervals(const JointDistribution& d);

// Every interval is empty or has private fiber ratio p1 / (1 - p1). When this
// holds, I(X^(p); .) is zero.
bool check_zero_leakage(const JointDistribution& d);

// Every interval carries mass on only one nonprivate value. When this holds,
// I(X^(n); .) equals H(X^(n)).
bool check_max_utility(const JointDistribution& d);

// Partition condition plus the endpoint inequalities for every pair of a
// single-valued interval y and a balanced-member interval w:
//   y on nonprivate value 1: |B_y - A_w| >= B_w
//   y on nonprivate value 0: |A_y - B_w| >= A_w
// with A = nonprivate value-0 mass, B = value-1 mass.
bool check_pareto_condition(const JointDistribution& d);

// Same decision reached through the endpoint lemma: for each (y, w) pair the
// grouped nonprivate exchange is evaluated at its domain endpoints and must
// not lower H(. | X^(n)). Used to cross-check check_pareto_condition.
bool check_pareto_condition_by_endpoints(const JointDistribution& d);

// x log x + y log y < (x + y) log(x + y), evaluated numerically.
bool merge_inequality_holds(double x, double y);
// x log x + y log y >= (x + z) log(x + z) + (y - z) log(y - z), evaluated
// numerically; for z > 0 this holds exactly when x + z <= y.
bool shift_inequality_holds(double x, double y, double z);
inline bool shift_inequality_predicted(double x, double y, double z) {
  return x + z <= y;
}

// What counts as an improving move in the witness scan.
enum class ImprovementCriterion {
  // Private MI decreases and nonprivate MI increases, both by more than the
  // witness threshold.
  kSimultaneous,
  // One index improves by more than the threshold while the other does not
  // worsen by more than it.
  kDominance,
  kPrivateDecrease,
  kNonprivateIncrease,
};

struct Witness {
  ExchangeMove move;
  double delta_private = 0.0;     // bits
  double delta_nonprivate = 0.0;  // bits
};

// Scans all interval pairs, the six single-cell constant moves and the two
// grouped fiber moves, over a delta grid of 1e-3 refined to 1e-6 near zero,
// the domain endpoints and the best grid point. Returns the first witness in
// (j, k, template, delta) order.
std::optional<Witness> pareto_witness_scan(
    const JointDistribution& d,
    ImprovementCriterion criterion = ImprovementCriterion::kSimultaneous);

struct PropositionReport {
  bool zero_leakage = false;
  bool max_utility = false;
  bool pareto = false;
  // Cross-validation of the first two conditions against direct MI values.
  double private_mi = 0.0;
  double nonprivate_mi = 0.0;
  double nonprivate_entropy = 0.0;
  IntervalClassification classification;
  std::optional<Witness> witness;
};

PropositionReport check_propositions(const JointDistribution& d);

}  // namespace paudit

#endif  // PAUDIT_PROPOSITIONS_HPP_
