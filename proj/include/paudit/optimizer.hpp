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

// Audit model: minimize sum_m weights(m) * I(X^(m); U) over distributions
// reachable by exchange moves, subject to per-characteristic MI bounds.
// Constant mode keeps the interval marginal fixed; both modes keep the
// combination marginal fixed.

#ifndef PAUDIT_OPTIMIZER_HPP_
#define PAUDIT_OPTIMIZER_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "paudit/distribution.hpp"
#include "paudit/exchange.hpp"

namespace paudit {

enum class Relation { kAtMost, kAtLeast };

std::string_view to_string(Relation r);

struct MiBound {
  Index characteristic = 0;
  Relation relation = Relation::kAtMost;
  double bits = 0.0;

  bool operator==(const MiBound&) const = default;
};

struct AuditConfig {
  ExchangeMode mode = ExchangeMode::kConstant;
  // Minimized objective weights, one per characteristic. Empty means zero.
  // Under this convention privacy terms carry positive weights and utility
  // terms negative ones.
  Eigen::VectorXd weights;
  std::vector<MiBound> bounds;
  // Optional margins relative to the input: every private u gets
  // I(X^u; U) <= I(X^u; Y) - epsilon, every nonprivate v gets
  // I(X^v; U) >= I(X^v; Y) + eta.
  std::optional<double> epsilon;
  std::optional<double> eta;
  double stop_tol = 1e-9;
  std::int64_t max_iters = 1'000'000;
  // A bound counts as met within this slack (bits).
  double feasibility_tol = 1e-10;
};

ValidationResult validate(const AuditConfig& cfg, const JointDistribution& d);

// Explicit bounds plus those implied by the margins, evaluated on d.
std::vector<MiBound> effective_bounds(const AuditConfig& cfg,
                                      const JointDistribution& d);

// Weighted objective of d under cfg (bits).
double audit_objective(const AuditConfig& cfg, const JointDistribution& d);

enum class AuditStatus { kConverged, kIterationLimit, kInfeasibleBounds };

std::string_view to_string(AuditStatus s);

struct AuditResult {
  JointDistribution audited;
  std::vector<ExchangeMove> moves;
  // MI of every characteristic (bits): entry 0 for the input, entry t after
  // move t.
  std::vector<Eigen::VectorXd> trajectory;
  double objective = 0.0;
  AuditStatus status = AuditStatus::kConverged;
  std::string message;
};

// Two-phase coordinate-exchange descent. Phase 1 repairs violated bounds
// (private characteristics first) without breaking bounds that already hold;
// phase 2 applies the best strictly improving single move until the gain
// drops below stop_tol.
AuditResult solve_audit(const JointDistribution& d, const AuditConfig& cfg);

JointDistribution replay_moves(const JointDistribution& d,
                               std::span<const ExchangeMove> moves);

// Three-step procedure on a binary pair, each step run to its fixed point:
//   1. diagonal cell pairs (a, d), (b, c): lower private MI and raise
//      nonprivate MI together;
//   2. pairs (a, c), (b, d): lower private MI at the closed-form optimum;
//   3. pairs (a, b), (c, d): raise nonprivate MI at a domain endpoint.
struct StepRecord {
  std::vector<ExchangeMove> moves;
  Eigen::VectorXd mi_after;  // bits, per characteristic
};

struct StepwiseResult {
  JointDistribution audited;
  Eigen::VectorXd initial_mi;
  std::array<StepRecord, 3> steps;
};

StepwiseResult run_stepwise(const JointDistribution& d, double stop_tol = 1e-9);

struct SweepAxis {
  Index characteristic = 0;
  Relation relation = Relation::kAtMost;
  std::vector<double> values;  // ascending
};

struct SweepPoint {
  std::vector<double> bound_values;  // one per axis
  AuditResult result;
};

// Grid points are the cartesian product of the axes, first axis outermost.
// Each point is solved from the input, then again from the results of its
// tighter neighbours, and keeps the best feasible result, so the frontier
// never worsens as bounds relax. A sweep bound replaces any configured bound
// with the same characteristic and relation. Results do not depend on `jobs`.
std::vector<SweepPoint> sweep_frontier(const JointDistribution& d,
                                       const AuditConfig& cfg,
                                       std::span<const SweepAxis> axes,
                                       int jobs = 1);

struct OracleResult {
  bool feasible = false;
  double objective = 0.0;
  JointDistribution best;
  Eigen::VectorXd mi;  // bits
};

// Exhaustive grid search for two intervals and four combinations, refined by
// a factor of ten around the best points down to `final_step`.
OracleResult brute_force_oracle(const JointDistribution& d,
                                const AuditConfig& cfg, double grid = 1e-3,
                                double final_step = 1e-5);

// H(X^(v) | X^(u) for u in zeroed_privates), the ceiling on I(X^(v); U) once
// the listed private MI values are driven to zero.
double conditional_utility_ceiling(const JointDistribution& d,
                                   std::span<const Index> zeroed_privates,
                                   Index v);

}  // namespace paudit

#endif  // PAUDIT_OPTIMIZER_HPP_
