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
#include "test_support.hpp"

namespace paudit {
namespace {

using testing::d1;

// Random binary pair plus a random interval pair and an in-domain delta.
struct Draw {
  JointDistribution d;
  Index j;
  Index k;
  Index m;
  double delta;
};

Draw random_draw(std::mt19937_64& rng, bool interior) {
  for (;;) {
    const Index n = 2 + static_cast<Index>(rng() % 4);
    auto d = testing::random_pair(rng, n, interior ? 0.0 : 0.15);
    const Index j = static_cast<Index>(rng() % n);
    Index k = static_cast<Index>(rng() % (n - 1));
    if (k >= j) ++k;
    const Index m = static_cast<Index>(rng() % 2);
    const DeltaInterval dom = fiber_pair(d, j, k, m).domain();
    if (dom.width() < 1e-3) continue;
    // Interior draws keep every fiber sum at least 1e-3 away from zero.
    const double margin = interior ? 1e-3 : 0.0;
    if (dom.width() <= 2 * margin) continue;
    const double delta = testing::uniform_in(rng, dom.lo + margin, dom.hi - margin);
    return {std::move(d), j, k, m, delta};
  }
}

TEST(ApplyMove, ConstantCellExchange) {
  const auto out = apply_move(d1(), cell_move(0, 1, 0, 2, -0.15));
  Eigen::MatrixXd expect(2, 4);
  expect << 0.15, 0.10, 0.20, 0.05,
            0.20, 0.05, 0.05, 0.20;
  EXPECT_TRUE(out.probs().isApprox(expect, 1e-15));
}

TEST(ApplyMove, VariableExchange) {
  const auto out = apply_move(d1(), variable_move(0, 1, 0, 0.05));
  EXPECT_NEAR(out(0, 0), 0.35, 1e-15);
  EXPECT_EQ(out(1, 0), 0.0);
  const Eigen::VectorXd rows = interval_marginal(out);
  EXPECT_NEAR(rows(0), 0.55, 1e-15);
  EXPECT_NEAR(rows(1), 0.45, 1e-15);
}

TEST(ApplyMove, ZeroDeltaIsIdentity) {
  EXPECT_EQ(apply_move(d1(), cell_move(0, 1, 1, 3, 0.0)), d1());
  EXPECT_EQ(apply_move(d1(), variable_move(1, 0, 2, 0.0)), d1());
}

TEST(ApplyMove, RejectsOutOfDomainDelta) {
  try {
    apply_move(d1(), variable_move(0, 1, 0, 0.06));
    FAIL() << "expected rejection";
  } catch (const std::domain_error& e) {
    EXPECT_NE(std::string(e.what()).find("upper bound"), std::string::npos);
  }
  EXPECT_THROW(apply_move(d1(), cell_move(0, 1, 0, 2, -0.31)), std::domain_error);
}

TEST(ApplyMove, RejectsMalformedMoves) {
  EXPECT_THROW(apply_move(d1(), cell_move(0, 0, 0, 2, 0.0)), std::invalid_argument);
  EXPECT_THROW(apply_move(d1(), cell_move(0, 1, 2, 2, 0.0)), std::invalid_argument);
  EXPECT_THROW(apply_move(d1(), variable_move(0, 1, 4, 0.0)), std::invalid_argument);
  EXPECT_THROW(apply_move(d1(), cell_move(0, 3, 0, 1, 0.0)), std::invalid_argument);
}

TEST(ApplyMove, GroupedMoveSplitsByDonorCells) {
  const auto d = d1();
  const auto mv = fiber_move(d, 0, 1, 0, 0, 1, -0.2);
  const auto out = apply_move(d, mv);
  // Interval 0 gives 0.2 of its {a, b} mass (0.30 : 0.10) to interval 1.
  EXPECT_NEAR(out(0, 0), 0.15, 1e-15);
  EXPECT_NEAR(out(0, 1), 0.05, 1e-15);
  EXPECT_NEAR(out(1, 0), 0.20, 1e-15);
  EXPECT_NEAR(out(1, 1), 0.10, 1e-15);
  // And receives 0.2 of interval 1's {c, d} mass (0.20 : 0.20).
  EXPECT_NEAR(out(0, 2), 0.15, 1e-15);
  EXPECT_NEAR(out(1, 3), 0.10, 1e-15);
  EXPECT_TRUE((out.probs().array() >= 0.0).all());
}

TEST(DeltaDomain, FixtureDomains) {
  const auto d = d1();
  const auto grouped = delta_domain(d, fiber_move(d, 0, 1, 0, 0, 1, 0.0));
  EXPECT_NEAR(grouped.lo, -0.40, 1e-15);
  EXPECT_NEAR(grouped.hi, 0.10, 1e-15);
  const auto var = delta_domain(d, variable_move(0, 1, 0, 0.0));
  EXPECT_NEAR(var.lo, -0.30, 1e-15);
  EXPECT_NEAR(var.hi, 0.05, 1e-15);
  const auto cell = delta_domain(d, cell_move(0, 1, 0, 2, 0.0));
  EXPECT_NEAR(cell.lo, -0.20, 1e-15);  // -min(P(0,a), P(1,c))
  EXPECT_NEAR(cell.hi, 0.05, 1e-15);   //  min(P(1,a), P(0,c))
}

TEST(DeltaDomain, ZeroCellClosesVariableDomain) {
  Eigen::MatrixXd p = d1().probs();
  p(0, 0) += p(1, 0);
  p(1, 0) = 0.0;
  const auto dom = delta_domain(testing::binary_pair(p), variable_move(0, 1, 0, 0.0));
  EXPECT_EQ(dom.hi, 0.0);
}

TEST(DeltaH, ZeroAtZero) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 50; ++t) {
    const auto dr = random_draw(rng, false);
    EXPECT_EQ(delta_h(dr.d, dr.j, dr.k, dr.m, 0.0), 0.0);
  }
}

TEST(DeltaH, FixturePrivateOptimum) {
  const auto d = d1();
  const double dh = delta_h_private(d, 0, 1, -0.15);
  EXPECT_NEAR(dh, 0.2781, 1e-4);
  const auto moved = apply_move(d, cell_move(0, 1, 0, 2, -0.15));
  EXPECT_NEAR(dh, testing::ref_conditional_entropy(moved, 0) -
                      testing::ref_conditional_entropy(d, 0),
              1e-12);
  EXPECT_NEAR(mutual_information(moved, 0), 0.0, 1e-12);
}

TEST(DeltaH, MatchesRecomputation) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 1000; ++t) {
    const auto dr = random_draw(rng, false);
    const auto moved = apply_move(dr.d, fiber_move(dr.d, dr.j, dr.k, dr.m, 0, 1, dr.delta));
    const double expect = testing::ref_conditional_entropy(moved, dr.m) -
                          testing::ref_conditional_entropy(dr.d, dr.m);
    ASSERT_NEAR(delta_h(dr.d, dr.j, dr.k, dr.m, dr.delta), expect, 1e-10) << "draw " << t;
  }
}

TEST(DeltaH, RejectsOutOfDomain) {
  EXPECT_THROW(delta_h_private(d1(), 0, 1, 0.2), std::domain_error);
}

TEST(DeltaHDerivative, FixtureValueAtZero) {
  EXPECT_NEAR(delta_h_derivative(d1(), 0, 1, 0, 0.0), -4.0, 1e-9);
  EXPECT_NEAR(delta_h_derivative(d1(), 0, 1, 0, 0.0),
              std::log2((0.10 * 0.10) / (0.40 * 0.40)), 1e-12);
}

TEST(DeltaHDerivative, MatchesCentralDifferences) {
  std::mt19937_64 rng(3);
  const double h = 1e-6;
  for (int t = 0; t < 1000; ++t) {
    const auto dr = random_draw(rng, true);
    const double fd = (delta_h(dr.d, dr.j, dr.k, dr.m, dr.delta + h) -
                       delta_h(dr.d, dr.j, dr.k, dr.m, dr.delta - h)) /
                      (2 * h);
    ASSERT_NEAR(delta_h_derivative(dr.d, dr.j, dr.k, dr.m, dr.delta), fd, 1e-6) << "draw " << t;
  }
}

TEST(DeltaHDerivative, UndefinedAtZeroingEndpoint) {
  const auto dom = fiber_pair(d1(), 0, 1, 0).domain();
  EXPECT_THROW(delta_h_derivative(d1(), 0, 1, 0, dom.hi), std::domain_error);
}

TEST(OptimalDelta, FixtureClosedForm) {
  const auto s = fiber_pair(d1(), 0, 1, 0);
  EXPECT_DOUBLE_EQ(optimal_delta(d1(), 0, 1, 0), -0.15);
  EXPECT_NEAR(delta_h_derivative(s, -0.15), 0.0, 1e-10);
  // Grid search, independent of the closed form.
  double best = 0.0, best_val = -1.0;
  for (int q = 0; q <= 5000; ++q) {
    const double x = -0.40 + 1e-4 * q;
    const double v = delta_h(s, x);
    if (v > best_val) {
      best_val = v;
      best = x;
    }
  }
  EXPECT_NEAR(best, -0.15, 1e-4);
}

TEST(OptimalDelta, BalancedRowsGiveZero) {
  FiberPair s{0.2, 0.3, 0.2, 0.3};
  EXPECT_EQ(unclamped_optimal_delta(s), 0.0);
}

TEST(OptimalDelta, AlwaysInDomainAndStationary) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 500; ++t) {
    const auto dr = random_draw(rng, false);
    const auto s = fiber_pair(dr.d, dr.j, dr.k, dr.m);
    const double x = optimal_delta(s);
    EXPECT_TRUE(s.domain().contains(x));
    const double u = unclamped_optimal_delta(s);
    if (s.domain().contains(u) && u > s.domain().lo + 1e-9 && u < s.domain().hi - 1e-9) {
      EXPECT_NEAR(delta_h_derivative(s, u), 0.0, 1e-8);
    }
  }
}

TEST(OptimalDelta, RejectsEmptyRows) {
  FiberPair s{0, 0, 0, 0};
  EXPECT_THROW(unclamped_optimal_delta(s), std::invalid_argument);
}

TEST(Concavity, FixtureAndRandomDraws) {
  EXPECT_TRUE(concavity_check(d1(), 0, 1, 0));
  EXPECT_TRUE(concavity_check(d1(), 0, 1, 1));
  std::mt19937_64 rng(5);
  for (int t = 0; t < 1000; ++t) {
    const auto dr = random_draw(rng, true);
    const auto s = fiber_pair(dr.d, dr.j, dr.k, dr.m);
    ASSERT_TRUE(concavity_check(s));
    ASSERT_LT(delta_h_second_derivative(s, dr.delta), 0.0);
    const double a = dr.delta, b = testing::uniform_in(rng, s.domain().lo, s.domain().hi);
    EXPECT_GE(delta_h(s, 0.5 * (a + b)), 0.5 * (delta_h(s, a) + delta_h(s, b)) - 1e-12);
  }
}

TEST(Concavity, DegenerateDomainIsVacuous) {
  FiberPair s{0.5, 0.0, 0.5, 0.0};
  EXPECT_TRUE(s.domain().degenerate());
  EXPECT_TRUE(concavity_check(s));
}

TEST(DeltaIVariable, ZeroAndRecomputation) {
  const auto d = d1();
  EXPECT_EQ(delta_i_variable(d, 0, 1, 0, 0.0, 0), 0.0);
  const auto moved = apply_move(d, variable_move(0, 1, 0, 0.05));
  for (Index m = 0; m < 2; ++m) {
    EXPECT_NEAR(delta_i_variable(d, 0, 1, 0, 0.05, m),
                testing::ref_mi(moved, m) - testing::ref_mi(d, m), 1e-10);
  }
}

TEST(DeltaIVariable, MatchesRecomputationOnRandomDraws) {
  std::mt19937_64 rng(6);
  std::vector<CharacteristicSpec> chars{{"a", {"0", "1"}, Role::kPrivate},
                                        {"b", {"0", "1", "2"}, Role::kNonprivate}};
  for (int t = 0; t < 500; ++t) {
    const Index n = 2 + t % 4;
    const JointDistribution d(chars, testing::random_probs(rng, n, 6, 0.2));
    const Index j = t % n, k = (j + 1 + t % (n - 1)) % n;
    const Index r = static_cast<Index>(rng() % 6);
    const auto dom = delta_domain(d, variable_move(j, k, r, 0.0));
    const double delta = testing::uniform_in(rng, dom.lo, dom.hi);
    const auto moved = apply_move(d, variable_move(j, k, r, delta));
    for (Index m = 0; m < 2; ++m) {
      ASSERT_NEAR(delta_i_variable(d, j, k, r, delta, m),
                  testing::ref_mi(moved, m) - testing::ref_mi(d, m), 1e-10);
    }
  }
}

TEST(DeltaIVariable, InverselyChangedPairExists) {
  // Interval 0 is rich in private value 0, interval 1 in nonprivate value 1.
  Eigen::MatrixXd p(2, 4);
  p << 0.25, 0.20, 0.05, 0.05,
       0.05, 0.15, 0.05, 0.20;
  const auto d = testing::binary_pair(p);
  bool found = false;
  for (Index r = 0; r < 4 && !found; ++r) {
    for (Index j = 0; j < 2 && !found; ++j) {
      const auto dom = delta_domain(d, variable_move(j, 1 - j, r, 0.0));
      for (int q = 0; q <= 200 && !found; ++q) {
        const double delta = dom.lo + dom.width() * q / 200.0;
        found = delta_i_variable(d, j, 1 - j, r, delta, 0) < -1e-6 &&
                delta_i_variable(d, j, 1 - j, r, delta, 1) > 1e-6;
      }
    }
  }
  EXPECT_TRUE(found);
}

TEST(MoveProperties, MarginalsAndReversibility) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 500; ++t) {
    const auto dr = random_draw(rng, false);
    const auto mv = fiber_move(dr.d, dr.j, dr.k, dr.m, 0, 1, dr.delta);
    const auto out = apply_move(dr.d, mv);
    const Eigen::VectorXd rows0 = interval_marginal(dr.d), rows1 = interval_marginal(out);
    const Eigen::VectorXd cols0 = combination_marginal(dr.d), cols1 = combination_marginal(out);
    EXPECT_LE((rows0 - rows1).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LE((cols0 - cols1).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_NEAR(entropy(rows1), entropy(rows0), 1e-12);

    // Single-cell moves reverse exactly up to rounding.
    const Index r = static_cast<Index>(rng() % 4);
    const Index s = (r + 1 + static_cast<Index>(rng() % 3)) % 4;
    const auto cdom = delta_domain(dr.d, cell_move(dr.j, dr.k, r, s, 0.0));
    const double cd = testing::uniform_in(rng, cdom.lo, cdom.hi);
    const auto there = apply_move(dr.d, cell_move(dr.j, dr.k, r, s, cd));
    const auto back = apply_move(there, cell_move(dr.j, dr.k, r, s, -cd));
    EXPECT_LE((back.probs() - dr.d.probs()).cwiseAbs().maxCoeff(), 1e-15);

    const auto vdom = delta_domain(dr.d, variable_move(dr.j, dr.k, r, 0.0));
    const double vd = testing::uniform_in(rng, vdom.lo, vdom.hi);
    const auto vout = apply_move(dr.d, variable_move(dr.j, dr.k, r, vd));
    EXPECT_LE((combination_marginal(vout) - cols0).cwiseAbs().maxCoeff(), 1e-15);
    const Eigen::VectorXd vrows = interval_marginal(vout);
    for (Index i = 0; i < vrows.size(); ++i) {
      const double shift = i == dr.j ? vd : (i == dr.k ? -vd : 0.0);
      EXPECT_NEAR(vrows(i), rows0(i) + shift, 1e-15);
    }
  }
}

TEST(SnapDelta, RoundsTowardZeroAndKeepsEndpoints) {
  const DeltaInterval dom{-0.3, 0.1};
  EXPECT_EQ(snap_delta(0.1, dom), 0.1);
  EXPECT_EQ(snap_delta(-0.3, dom), -0.3);
  for (double x : {0.0834567890123, -0.21234567890123}) {
    const double s = snap_delta(x, dom);
    EXPECT_LE(std::abs(s), std::abs(x));
    EXPECT_LT(std::abs(s - x), kDeltaQuantum);
    EXPECT_EQ(std::trunc(s / kDeltaQuantum), s / kDeltaQuantum);
  }
}

TEST(ParseMode, KnownNames) {
  EXPECT_EQ(parse_mode("constant"), ExchangeMode::kConstant);
  EXPECT_EQ(parse_mode("variable"), ExchangeMode::kVariable);
  EXPECT_THROW(parse_mode("other"), std::invalid_argument);
}

}  // namespace
}  // namespace paudit
