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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "paudit/info_theory.hpp"
#include "paudit/optimizer.hpp"
#include "test_support.hpp"

namespace paudit {
namespace {

using testing::binary_pair;
using testing::d1;

AuditConfig weighted(ExchangeMode mode, double w1, double w2) {
  AuditConfig cfg;
  cfg.mode = mode;
  cfg.weights = Eigen::Vector2d(w1, w2);
  return cfg;
}

double last_obj(const AuditConfig& cfg, const AuditResult& r) {
  return cfg.weights.dot(r.trajectory.back());
}

// Two private characteristics and one nonprivate, twelve combinations.
JointDistribution three_characteristics(std::mt19937_64& rng, Index n) {
  std::vector<CharacteristicSpec> chars{{"x1", {"0", "1"}, Role::kPrivate},
                                        {"x2", {"0", "1", "2"}, Role::kPrivate},
                                        {"x3", {"0", "1"}, Role::kNonprivate}};
  return JointDistribution(chars, testing::random_probs(rng, n, 12, 0.0));
}

TEST(AuditConfig, ValidationErrors) {
  const auto d = d1();
  AuditConfig cfg;
  cfg.weights = Eigen::Vector3d(1, 0, 0);
  EXPECT_FALSE(validate(cfg, d).ok);
  EXPECT_THROW(solve_audit(d, cfg), std::invalid_argument);
  cfg.weights = Eigen::Vector2d(1, 0);
  EXPECT_TRUE(validate(cfg, d).ok);
  cfg.bounds = {{0, Relation::kAtMost, -0.1}};
  EXPECT_FALSE(validate(cfg, d).ok);
  cfg.bounds = {{4, Relation::kAtMost, 0.1}};
  EXPECT_FALSE(validate(cfg, d).ok);
  cfg.bounds.clear();
  cfg.stop_tol = 0.0;
  EXPECT_FALSE(validate(cfg, d).ok);
  cfg.stop_tol = 1e-9;
  cfg.epsilon = -1.0;
  EXPECT_FALSE(validate(cfg, d).ok);
}

TEST(EffectiveBounds, MarginsRelativeToInput) {
  const auto d = d1();
  AuditConfig cfg;
  cfg.epsilon = 0.1;
  cfg.eta = 0.2;
  const auto b = effective_bounds(cfg, d);
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(b[0].characteristic, 0);
  EXPECT_EQ(b[0].relation, Relation::kAtMost);
  EXPECT_NEAR(b[0].bits, testing::ref_mi(d, 0) - 0.1, 1e-12);
  EXPECT_EQ(b[1].relation, Relation::kAtLeast);
  EXPECT_NEAR(b[1].bits, testing::ref_mi(d, 1) + 0.2, 1e-12);
}

TEST(SolveAudit, PrivacyOnlyReachesZeroLeakage) {
  const auto cfg = weighted(ExchangeMode::kConstant, 1, 0);
  const auto r = solve_audit(d1(), cfg);
  EXPECT_EQ(r.status, AuditStatus::kConverged);
  EXPECT_LE(testing::ref_mi(r.audited, 0), 1e-9);
}

TEST(SolveAudit, PrivacyFloorWithUtilityReward) {
  for (ExchangeMode mode : {ExchangeMode::kConstant, ExchangeMode::kVariable}) {
    auto cfg = weighted(mode, 1, -1);
    cfg.bounds = {{0, Relation::kAtLeast, 0.002}};
    const auto r = solve_audit(d1(), cfg);
    ASSERT_EQ(r.status, AuditStatus::kConverged) << to_string(mode);
    const double i1 = testing::ref_mi(r.audited, 0);
    const double i2 = testing::ref_mi(r.audited, 1);
    EXPECT_GE(i1, 0.002 - 1e-6);
    EXPECT_NEAR(r.objective, i1 - i2, 1e-9);
    const auto o = brute_force_oracle(d1(), cfg);
    ASSERT_TRUE(o.feasible);
    EXPECT_LE(r.objective, o.objective + 1e-3) << to_string(mode);
    if (mode == ExchangeMode::kConstant) EXPECT_LE(i1, 0.002 + 1e-3);
    // Difference bound on I2 - I1.
    EXPECT_LE(i2 - i1, mi_region(d1(), 0, 1).difference_upper + 1e-9);
  }
}

TEST(SolveAudit, VariableModeAttainsDifferenceBound) {
  const auto r = solve_audit(d1(), weighted(ExchangeMode::kVariable, 1, -1));
  EXPECT_NEAR(-r.objective, mi_region(d1(), 0, 1).difference_upper, 1e-6);
  EXPECT_NEAR(r.objective, -0.94064545, 1e-6);
}

TEST(SolveAudit, UnattainableUtilityBound) {
  auto cfg = weighted(ExchangeMode::kConstant, 1, 0);
  cfg.bounds = {{1, Relation::kAtLeast, characteristic_entropy(d1(), 1) + 0.1}};
  const auto r = solve_audit(d1(), cfg);
  EXPECT_EQ(r.status, AuditStatus::kInfeasibleBounds);
  EXPECT_FALSE(r.message.empty());
  EXPECT_TRUE(r.moves.empty());
}

TEST(SolveAudit, ZeroWeightsMoveNothing) {
  const auto r = solve_audit(d1(), AuditConfig{});
  EXPECT_EQ(r.status, AuditStatus::kConverged);
  EXPECT_TRUE(r.moves.empty());
  EXPECT_EQ(r.audited.probs(), d1().probs());
  ASSERT_EQ(r.trajectory.size(), 1u);
}

TEST(SolveAudit, RepairsViolatedBoundFirst) {
  auto cfg = weighted(ExchangeMode::kConstant, 0, -1);
  cfg.bounds = {{0, Relation::kAtMost, 0.05}};
  const auto r = solve_audit(d1(), cfg);
  ASSERT_EQ(r.status, AuditStatus::kConverged);
  EXPECT_LE(testing::ref_mi(r.audited, 0), 0.05 + 1e-9);
}

TEST(SolveAudit, MarginsAreHonoured) {
  auto cfg = weighted(ExchangeMode::kConstant, 0, -1);
  cfg.epsilon = 0.2;
  const auto r = solve_audit(d1(), cfg);
  ASSERT_EQ(r.status, AuditStatus::kConverged);
  EXPECT_LE(testing::ref_mi(r.audited, 0), testing::ref_mi(d1(), 0) - 0.2 + 1e-9);
}

TEST(SolveAudit, DyadicMarginalsStayExact) {
  std::mt19937_64 rng(31);
  for (ExchangeMode mode : {ExchangeMode::kConstant, ExchangeMode::kVariable}) {
    Eigen::MatrixXd counts(3, 4);
    for (Index i = 0; i < 3; ++i) {
      for (Index r = 0; r < 4; ++r) counts(i, r) = 1 + static_cast<double>(rng() % 600);
    }
    counts(2, 3) += 4096 - counts.sum();
    ASSERT_GT(counts(2, 3), 0);
    const auto d = binary_pair(counts / 4096.0);
    auto cfg = weighted(mode, 1, -1);
    const auto r = solve_audit(d, cfg);
    ASSERT_FALSE(r.moves.empty());
    EXPECT_EQ(combination_marginal(r.audited), combination_marginal(d)) << to_string(mode);
    if (mode == ExchangeMode::kConstant) {
      EXPECT_EQ(interval_marginal(r.audited), interval_marginal(d));
    }
    EXPECT_GE(r.audited.probs().minCoeff(), 0.0);
  }
}

TEST(SolveAudit, ReplayReproducesResult) {
  std::mt19937_64 rng(32);
  for (int t = 0; t < 20; ++t) {
    const auto d = testing::random_pair(rng, 2 + t % 4, 0.1);
    const auto cfg = weighted(t % 2 ? ExchangeMode::kVariable : ExchangeMode::kConstant, 1, -0.5);
    const auto r = solve_audit(d, cfg);
    ASSERT_EQ(r.trajectory.size(), r.moves.size() + 1);
    const auto replayed = replay_moves(d, r.moves);
    EXPECT_LE((replayed.probs() - r.audited.probs()).cwiseAbs().maxCoeff(), 1e-12);
    for (Index m = 0; m < 2; ++m) {
      EXPECT_NEAR(r.trajectory.back()(m), testing::ref_mi(replayed, m), 1e-9);
    }
  }
}

TEST(SolveAudit, DescentMovesStrictlyImprove) {
  // Five intervals in constant mode have too many templates for the escape
  // kicks, so every logged move comes from the descent.
  std::mt19937_64 rng(33);
  for (int t = 0; t < 10; ++t) {
    const auto d = testing::random_pair(rng, 5, 0.0);
    const auto cfg = weighted(ExchangeMode::kConstant, 1, -1);
    const auto r = solve_audit(d, cfg);
    ASSERT_FALSE(r.moves.empty());
    for (std::size_t s = 1; s < r.trajectory.size(); ++s) {
      EXPECT_LT(cfg.weights.dot(r.trajectory[s]), cfg.weights.dot(r.trajectory[s - 1]))
          << "move " << s;
    }
  }
}

TEST(SolveAudit, NeverWorseThanInput) {
  std::mt19937_64 rng(34);
  for (int t = 0; t < 30; ++t) {
    const auto d = testing::random_pair(rng, 2 + t % 5, 0.2);
    const auto cfg = weighted(t % 2 ? ExchangeMode::kVariable : ExchangeMode::kConstant,
                              testing::uniform_in(rng, 0, 1), -testing::uniform_in(rng, 0, 1));
    const auto r = solve_audit(d, cfg);
    EXPECT_LE(r.objective, audit_objective(cfg, d) + 1e-12);
    EXPECT_NEAR(r.objective, audit_objective(cfg, r.audited), 1e-9);
  }
}

TEST(SolveAudit, MatchesOracleOnTwoIntervals) {
  std::mt19937_64 rng(35);
  for (int t = 0; t < 8; ++t) {
    const auto d = testing::random_pair(rng, 2, 0.0);
    const auto cfg = weighted(t % 2 ? ExchangeMode::kVariable : ExchangeMode::kConstant, 1, -1);
    const auto r = solve_audit(d, cfg);
    const auto o = brute_force_oracle(d, cfg, 1e-2, 1e-5);
    EXPECT_LE(r.objective, o.objective + 1e-3) << "instance " << t;
  }
}

TEST(Stepwise, FixtureStepsMoveTheRightWay) {
  const auto s = run_stepwise(d1());
  const double tol = 1e-12;
  EXPECT_NEAR(s.initial_mi(0), 0.2781, 1e-4);
  const auto& a = s.steps[0].mi_after;
  const auto& b = s.steps[1].mi_after;
  const auto& c = s.steps[2].mi_after;
  EXPECT_LE(a(0), s.initial_mi(0) + tol);
  EXPECT_GE(a(1), s.initial_mi(1) - tol);
  EXPECT_LE(b(0), a(0) + tol);
  EXPECT_GE(c(1), b(1) - tol);
  EXPECT_NEAR(c(0), b(0), 1e-9);
  EXPECT_NEAR(c(0), testing::ref_mi(s.audited, 0), 1e-9);
  EXPECT_NEAR(c(1), testing::ref_mi(s.audited, 1), 1e-9);
  EXPECT_EQ(combination_marginal(s.audited), combination_marginal(d1()));
}

TEST(Stepwise, StepKindsUseTheirCellPairs) {
  std::mt19937_64 rng(36);
  for (int t = 0; t < 20; ++t) {
    const auto s = run_stepwise(testing::random_pair(rng, 2 + t % 4, 0.1));
    const Index allowed[3][2][2] = {{{0, 3}, {1, 2}}, {{0, 2}, {1, 3}}, {{0, 1}, {2, 3}}};
    for (int step = 0; step < 3; ++step) {
      for (const ExchangeMove& mv : s.steps[step].moves) {
        ASSERT_EQ(mv.gain.size(), 1u);
        const Index lo = std::min(mv.gain[0], mv.give[0]);
        const Index hi = std::max(mv.gain[0], mv.give[0]);
        const bool ok = (lo == allowed[step][0][0] && hi == allowed[step][0][1]) ||
                        (lo == allowed[step][1][0] && hi == allowed[step][1][1]);
        EXPECT_TRUE(ok) << "step " << step + 1;
      }
    }
  }
}

TEST(Stepwise, FixedPointMovesNothing) {
  Eigen::MatrixXd p(2, 4);
  p << 0.2, 0.0, 0.2, 0.0,
       0.0, 0.3, 0.0, 0.3;
  const auto s = run_stepwise(binary_pair(p));
  for (const auto& st : s.steps) EXPECT_TRUE(st.moves.empty());
  EXPECT_EQ(s.audited.probs(), p);
}

TEST(Stepwise, RejectsNonBinary) {
  std::mt19937_64 rng(37);
  EXPECT_THROW(run_stepwise(three_characteristics(rng, 3)), std::invalid_argument);
}

TEST(Sweep, GridOrderAndJobsInvariance) {
  const auto d = d1();
  const auto cfg = weighted(ExchangeMode::kConstant, 0, -1);
  const std::vector<SweepAxis> axes{{0, Relation::kAtMost, {0.0, 0.05, 0.1}},
                                    {1, Relation::kAtLeast, {0.0, 0.01}}};
  const auto one = sweep_frontier(d, cfg, axes, 1);
  const auto four = sweep_frontier(d, cfg, axes, 4);
  ASSERT_EQ(one.size(), 6u);
  EXPECT_EQ(one[1].bound_values, (std::vector<double>{0.0, 0.01}));
  EXPECT_EQ(one[4].bound_values, (std::vector<double>{0.1, 0.0}));
  for (std::size_t p = 0; p < one.size(); ++p) {
    EXPECT_EQ(one[p].result.objective, four[p].result.objective);
    EXPECT_EQ(one[p].result.moves.size(), four[p].result.moves.size());
    EXPECT_EQ(one[p].result.audited.probs(), four[p].result.audited.probs());
  }
}

TEST(Sweep, RejectsBadAxes) {
  const auto cfg = weighted(ExchangeMode::kConstant, 0, -1);
  const std::vector<SweepAxis> none;
  EXPECT_THROW(sweep_frontier(d1(), cfg, none), std::invalid_argument);
  const std::vector<SweepAxis> descending{{0, Relation::kAtMost, {0.1, 0.0}}};
  EXPECT_THROW(sweep_frontier(d1(), cfg, descending), std::invalid_argument);
  const std::vector<SweepAxis> twice{{0, Relation::kAtMost, {0.1}}, {0, Relation::kAtMost, {0.2}}};
  EXPECT_THROW(sweep_frontier(d1(), cfg, twice), std::invalid_argument);
}

TEST(Sweep, FrontierMonotoneAndWithinDifferenceBound) {
  for (ExchangeMode mode : {ExchangeMode::kConstant, ExchangeMode::kVariable}) {
    std::vector<double> vals;
    for (int i = 1; i <= 25; ++i) vals.push_back(0.002 * i);
    const std::vector<SweepAxis> axes{{0, Relation::kAtMost, vals}};
    const auto pts = sweep_frontier(d1(), weighted(mode, 0, -1), axes, 4);
    const double upper = mi_region(d1(), 0, 1).difference_upper;
    for (std::size_t p = 0; p < pts.size(); ++p) {
      const auto& r = pts[p].result;
      ASSERT_EQ(r.status, AuditStatus::kConverged);
      const double i1 = testing::ref_mi(r.audited, 0);
      const double i2 = testing::ref_mi(r.audited, 1);
      EXPECT_LE(i1, vals[p] + 1e-9);
      EXPECT_LE(i2 - i1, upper + 1e-9);
      if (p > 0) EXPECT_LE(r.objective, pts[p - 1].result.objective + 1e-12);
      const auto replayed = replay_moves(d1(), r.moves);
      EXPECT_LE((replayed.probs() - r.audited.probs()).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(Sweep, TwoAxisFrontierMonotone) {
  std::mt19937_64 rng(38);
  const auto d = three_characteristics(rng, 3);
  AuditConfig cfg;
  cfg.weights = Eigen::Vector3d(0, 0, -1);
  const std::vector<SweepAxis> axes{{0, Relation::kAtMost, {0.0, 0.01, 0.02}},
                                    {1, Relation::kAtMost, {0.0, 0.01, 0.02}}};
  const auto pts = sweep_frontier(d, cfg, axes, 4);
  const std::vector<Index> zeroed{0, 1};
  const double ceiling = conditional_utility_ceiling(d, zeroed, 2);
  for (std::size_t p = 0; p < pts.size(); ++p) {
    const auto& mi = pts[p].result.trajectory.back();
    EXPECT_LE(mi(0), pts[p].bound_values[0] + 1e-9);
    EXPECT_LE(mi(1), pts[p].bound_values[1] + 1e-9);
    if (p % 3 > 0) EXPECT_LE(pts[p].result.objective, pts[p - 1].result.objective + 1e-12);
    if (p >= 3) EXPECT_LE(pts[p].result.objective, pts[p - 3].result.objective + 1e-12);
  }
  EXPECT_LE(pts[0].result.trajectory.back()(2), ceiling + 1e-9);
}

TEST(Oracle, FixtureMinimumPrivateLeakage) {
  const auto o = brute_force_oracle(d1(), weighted(ExchangeMode::kConstant, 1, 0));
  ASSERT_TRUE(o.feasible);
  EXPECT_NEAR(o.objective, 0.0, 1e-9);
  EXPECT_EQ(interval_marginal(o.best), interval_marginal(d1()));
}

TEST(Oracle, EmptyRowLeavesNothingToMove) {
  Eigen::MatrixXd p(2, 4);
  p << 0.4, 0.1, 0.2, 0.3,
       0.0, 0.0, 0.0, 0.0;
  const auto d = binary_pair(p);
  const auto o = brute_force_oracle(d, weighted(ExchangeMode::kConstant, 1, -1));
  ASSERT_TRUE(o.feasible);
  EXPECT_LE((o.best.probs() - p).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(o.objective, 0.0, 1e-12);
}

TEST(Oracle, RejectsLargerProblems) {
  EXPECT_THROW(brute_force_oracle(testing::uniform_pair(4), weighted(ExchangeMode::kConstant, 1, 0)),
               std::invalid_argument);
}

TEST(Oracle, ReportsInfeasibleBounds) {
  auto cfg = weighted(ExchangeMode::kConstant, 1, 0);
  cfg.bounds = {{1, Relation::kAtLeast, 1.5}};
  EXPECT_FALSE(brute_force_oracle(d1(), cfg, 1e-2).feasible);
}

TEST(ConditionalUtilityCeiling, Cases) {
  std::vector<CharacteristicSpec> chars{{"u", {"0", "1"}, Role::kPrivate},
                                        {"v", {"0", "1"}, Role::kNonprivate}};
  const std::vector<Index> zeroed{0};
  // Independent characteristics: the ceiling is H(v).
  Eigen::MatrixXd ind(2, 4);
  ind << 0.06, 0.14, 0.09, 0.21,
         0.06, 0.14, 0.09, 0.21;
  const JointDistribution di(chars, ind);
  EXPECT_NEAR(conditional_utility_ceiling(di, zeroed, 1), characteristic_entropy(di, 1), 1e-12);
  // v determined by u.
  Eigen::MatrixXd det(2, 4);
  det << 0.3, 0.0, 0.0, 0.2,
         0.1, 0.0, 0.0, 0.4;
  EXPECT_NEAR(conditional_utility_ceiling(JointDistribution(chars, det), zeroed, 1), 0.0, 1e-12);
  EXPECT_NEAR(conditional_utility_ceiling(d1(), zeroed, 1),
              characteristic_conditional_entropy(d1(), 1, zeroed), 1e-12);
  const std::vector<Index> overlap{1};
  EXPECT_THROW(conditional_utility_ceiling(d1(), overlap, 1), std::invalid_argument);
}

}  // namespace
}  // namespace paudit
