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

#include "paudit/exchange.hpp"
#include "paudit/info_theory.hpp"
#include "paudit/propositions.hpp"
#include "test_support.hpp"
#include "constructions.hpp"

namespace paudit {
namespace {

using testing::binary_pair;
using testing::d1;

JointDistribution y2_y3_fixture() {
  Eigen::MatrixXd p(2, 4);
  p << 0.3, 0.0, 0.2, 0.0,
       0.0, 0.25, 0.0, 0.25;
  return binary_pair(p);
}

TEST(ClassifyIntervals, SingleValuedRows) {
  const auto c = classify_intervals(y2_y3_fixture());
  EXPECT_EQ(c.classes[0], IntervalClass::kNonprivate0);
  EXPECT_EQ(c.classes[1], IntervalClass::kNonprivate1);
  EXPECT_TRUE(c.partition_holds);
}

TEST(ClassifyIntervals, UniformRowsAreBalanced) {
  const auto c = classify_intervals(testing::uniform_pair(2));
  EXPECT_EQ(c.classes[0], IntervalClass::kMixed);
  EXPECT_EQ(c.classes[1], IntervalClass::kMixed);
  EXPECT_TRUE(c.balanced[0][1]);
  EXPECT_TRUE(c.balanced_member[0] && c.balanced_member[1]);
}

TEST(ClassifyIntervals, EmptyRow) {
  Eigen::MatrixXd p(3, 4);
  p << 0.2, 0.1, 0.1, 0.1,
       0.0, 0.0, 0.0, 0.0,
       0.1, 0.1, 0.2, 0.1;
  EXPECT_EQ(classify_intervals(binary_pair(p)).classes[1], IntervalClass::kEmpty);
}

TEST(ClassifyIntervals, RejectsNonBinary) {
  std::vector<CharacteristicSpec> chars{{"a", {"0", "1", "2"}, Role::kPrivate},
                                        {"b", {"0", "1"}, Role::kNonprivate}};
  const JointDistribution d(chars, Eigen::MatrixXd::Constant(2, 6, 1.0 / 12));
  EXPECT_THROW(classify_intervals(d), std::invalid_argument);
  EXPECT_THROW(check_zero_leakage(d), std::invalid_argument);
}

TEST(ClassifyIntervals, RejectsDegeneratePrivateMarginal) {
  Eigen::MatrixXd p(2, 4);
  p << 0.5, 0.1, 0.0, 0.0,
       0.2, 0.2, 0.0, 0.0;
  EXPECT_THROW(check_zero_leakage(binary_pair(p)), std::invalid_argument);
}

TEST(ZeroLeakage, FixtureBeforeAndAfterOptimalMove) {
  EXPECT_FALSE(check_zero_leakage(d1()));
  const auto moved = apply_move(d1(), cell_move(0, 1, 0, 2, -0.15));
  EXPECT_TRUE(check_zero_leakage(moved));
  EXPECT_LE(mutual_information(moved, 0), 1e-12);
}

TEST(ZeroLeakage, ProductDistribution) {
  Eigen::MatrixXd p(3, 4);
  const double py[] = {0.5, 0.3, 0.2};
  const double px[] = {0.1, 0.2, 0.3, 0.4};
  for (Index i = 0; i < 3; ++i) {
    for (Index r = 0; r < 4; ++r) p(i, r) = py[i] * px[r];
  }
  EXPECT_TRUE(check_zero_leakage(binary_pair(p)));
}

TEST(ZeroLeakage, SoundOnConstructedDistributions) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 500; ++t) {
    const auto d = testing::zero_leakage_instance(rng, 2 + t % 5);
    ASSERT_TRUE(check_zero_leakage(d));
    EXPECT_LE(mutual_information(d, 0), 1e-9);
    EXPECT_LE(testing::ref_mi(d, 0), 1e-9);
  }
}

TEST(MaxUtility, FixtureAndConstruction) {
  const auto d = y2_y3_fixture();
  EXPECT_TRUE(check_max_utility(d));
  EXPECT_NEAR(mutual_information(d, 1), 1.0, 1e-12);
  EXPECT_NEAR(characteristic_entropy(d, 1), 1.0, 1e-12);
  EXPECT_FALSE(check_max_utility(d1()));
}

TEST(MaxUtility, OneMixedRowBreaksCondition) {
  Eigen::MatrixXd p(3, 4);
  p << 0.2, 0.0, 0.1, 0.0,
       0.0, 0.2, 0.0, 0.1,
       0.1, 0.1, 0.1, 0.1;
  EXPECT_FALSE(check_max_utility(binary_pair(p)));
}

TEST(MaxUtility, SoundOnConstructedDistributions) {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 500; ++t) {
    const auto d = testing::max_utility_instance(rng, 2 + t % 5);
    ASSERT_TRUE(check_max_utility(d));
    EXPECT_NEAR(testing::ref_mi(d, 1), testing::ref_char_entropy(d, 1), 1e-9);
  }
}

TEST(ParetoCondition, TrivialInstances) {
  EXPECT_TRUE(check_pareto_condition(testing::uniform_pair(2)));
  EXPECT_TRUE(check_pareto_condition(y2_y3_fixture()));
  EXPECT_FALSE(check_pareto_condition(d1()));
}

TEST(ParetoCondition, EndpointRouteAgrees) {
  std::mt19937_64 rng(23);
  int positives = 0;
  for (int t = 0; t < 400; ++t) {
    const auto d = t % 2 ? testing::pareto_candidate(rng, 2 + t % 4)
                         : testing::random_pair(rng, 2 + t % 4, 0.3);
    const bool a = check_pareto_condition(d);
    EXPECT_EQ(a, check_pareto_condition_by_endpoints(d)) << "instance " << t;
    positives += a;
  }
  EXPECT_GT(positives, 20);
}

TEST(WitnessScan, FixtureHasWitness) {
  const auto w = pareto_witness_scan(d1());
  ASSERT_TRUE(w.has_value());
  EXPECT_LT(w->delta_private, -1e-9);
  EXPECT_GT(w->delta_nonprivate, 1e-9);
  // The reported changes match direct recomputation.
  const auto moved = apply_move(d1(), w->move);
  EXPECT_NEAR(w->delta_private, testing::ref_mi(moved, 0) - testing::ref_mi(d1(), 0), 1e-10);
  EXPECT_NEAR(w->delta_nonprivate, testing::ref_mi(moved, 1) - testing::ref_mi(d1(), 1), 1e-10);
}

TEST(WitnessScan, NoneWhenUtilityIsMaximal) {
  EXPECT_FALSE(pareto_witness_scan(y2_y3_fixture()).has_value());
}

TEST(WitnessScan, NoneOnParetoInstances) {
  std::mt19937_64 rng(24);
  int checked = 0;
  while (checked < 40) {
    const auto d = testing::pareto_candidate(rng, 2 + checked % 3);
    if (!check_pareto_condition(d)) continue;
    ++checked;
    EXPECT_FALSE(pareto_witness_scan(d).has_value()) << "instance " << checked;
  }
}

TEST(WitnessScan, PrivateImprovementWheneverLeakageRemains) {
  std::mt19937_64 rng(25);
  for (int t = 0; t < 40; ++t) {
    const auto d = testing::random_pair(rng, 2 + t % 3, 0.1);
    if (check_zero_leakage(d)) continue;
    const auto w = pareto_witness_scan(d, ImprovementCriterion::kPrivateDecrease);
    ASSERT_TRUE(w.has_value());
    EXPECT_LT(w->delta_private, -1e-9);
  }
}

TEST(Inequalities, MergeAndShift) {
  std::mt19937_64 rng(26);
  for (int t = 0; t < 1000; ++t) {
    const double x = testing::uniform_in(rng, 1e-3, 1.0);
    const double y = testing::uniform_in(rng, 1e-3, 1.0);
    EXPECT_TRUE(merge_inequality_holds(x, y));
    const double z = testing::uniform_in(rng, 1e-3, y);
    if (std::abs(x + z - y) > 1e-9) {
      EXPECT_EQ(shift_inequality_holds(x, y, z), shift_inequality_predicted(x, y, z))
          << x << " " << y << " " << z;
    }
  }
}

TEST(CheckPropositions, FixtureReport) {
  const auto rep = check_propositions(d1());
  EXPECT_FALSE(rep.zero_leakage);
  EXPECT_FALSE(rep.max_utility);
  EXPECT_FALSE(rep.pareto);
  EXPECT_TRUE(rep.witness.has_value());
  EXPECT_NEAR(rep.private_mi, 0.2781, 1e-4);
}

}  // namespace
}  // namespace paudit
