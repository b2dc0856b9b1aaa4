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

#include "paudit/propositions.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "move_evaluator.hpp"
#include "parallel.hpp"
#include "paudit/info_theory.hpp"

namespace paudit {
namespace {

bool is_zero(double x) { return x <= kZeroThreshold; }

// x1 / y1 == x2 / y2, compared as cross products.
bool same_ratio(double x1, double y1, double x2, double y2) {
  const double lhs = x1 * y2;
  const double rhs = x2 * y1;
  const double scale = std::max({std::abs(lhs), std::abs(rhs)});
  if (scale <= kZeroThreshold * kZeroThreshold) return true;
  return std::abs(lhs - rhs) <= kRatioTolerance * scale;
}

}  // namespace

std::string_view to_string(IntervalClass c) {
  switch (c) {
    case IntervalClass::kEmpty: return "empty";
    case IntervalClass::kNonprivate0: return "nonprivate0";
    case IntervalClass::kNonprivate1: return "nonprivate1";
    case IntervalClass::kMixed: return "mixed";
  }
  return "unknown";
}

BinaryFibers binary_fibers(const JointDistribution& d) {
  if (!d.is_binary_pair()) {
    throw std::invalid_argument(
        "condition checks need exactly one binary private and one binary "
        "nonprivate characteristic; binarize the characteristics first");
  }
  BinaryFibers f;
  f.private_index = characteristic_for_role(d, Role::kPrivate);
  f.nonprivate_index = characteristic_for_role(d, Role::kNonprivate);
  const Eigen::MatrixXd fp = fiber_sums(d, f.private_index);
  const Eigen::MatrixXd fn = fiber_sums(d, f.nonprivate_index);
  f.private0 = fp.col(0);
  f.private1 = fp.col(1);
  f.nonprivate0 = fn.col(0);
  f.nonprivate1 = fn.col(1);
  f.p1 = f.private0.sum();
  f.p2 = f.nonprivate0.sum();
  const double total = d.probs().sum();
  auto degenerate = [&](double p) { return is_zero(p) || is_zero(total - p); };
  if (degenerate(f.p1)) {
    throw std::invalid_argument(
        "private characteristic has a zero-probability value; the conditions "
        "assume both values occur");
  }
  if (degenerate(f.p2)) {
    throw std::invalid_argument(
        "nonprivate characteristic has a zero-probability value; the "
        "conditions assume both values occur");
  }
  return f;
}

IntervalClassification classify_intervals(const JointDistribution& d) {
  const BinaryFibers f = binary_fibers(d);
  const Index n = d.interval_count();
  IntervalClassification out;
  out.classes.resize(n);
  for (Index i = 0; i < n; ++i) {
    const bool a0 = is_zero(f.nonprivate0(i));
    const bool b0 = is_zero(f.nonprivate1(i));
    out.classes[i] = a0 && b0 ? IntervalClass::kEmpty
                     : b0     ? IntervalClass::kNonprivate0
                     : a0     ? IntervalClass::kNonprivate1
                              : IntervalClass::kMixed;
  }
  out.balanced.assign(n, std::vector<bool>(n, false));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const bool cross_nonzero =
          !is_zero(f.nonprivate0(i)) && !is_zero(f.nonprivate1(j)) &&
          !is_zero(f.nonprivate0(j)) && !is_zero(f.nonprivate1(i));
      out.balanced[i][j] =
          cross_nonzero && same_ratio(f.private1(i), f.private0(i),
                                      f.private1(j), f.private0(j));
    }
  }
  out.balanced_member.assign(n, false);
  for (Index i = 0; i < n; ++i) {
    if (out.classes[i] != IntervalClass::kMixed) continue;
    bool all = true;
    for (Index w = 0; w < n; ++w) {
      if (out.classes[w] == IntervalClass::kMixed && !out.balanced[i][w]) {
        all = false;
        break;
      }
    }
    out.balanced_member[i] = all;
  }
  out.private_ratio_member.assign(n, false);
  for (Index i = 0; i < n; ++i) {
    out.private_ratio_member[i] =
        same_ratio((1.0 - f.p1) * f.private0(i), 1.0, f.p1 * f.private1(i), 1.0);
  }
  out.partition_holds = true;
  for (Index i = 0; i < n; ++i) {
    if (out.classes[i] == IntervalClass::kMixed && !out.balanced_member[i]) {
      out.partition_holds = false;
    }
  }
  return out;
}

bool check_zero_leakage(const JointDistribution& d) {
  const BinaryFibers f = binary_fibers(d);
  const double total = d.probs().sum();
  const double p1 = f.p1 / total;
  for (Index i = 0; i < d.interval_count(); ++i) {
    const bool empty = is_zero(f.private0(i)) && is_zero(f.private1(i));
    if (empty) continue;
    if (!same_ratio(f.private0(i), f.private1(i), p1, 1.0 - p1)) return false;
  }
  return true;
}

bool check_max_utility(const JointDistribution& d) {
  const BinaryFibers f = binary_fibers(d);
  for (Index i = 0; i < d.interval_count(); ++i) {
    if (!is_zero(f.nonprivate0(i)) && !is_zero(f.nonprivate1(i))) return false;
  }
  return true;
}

bool check_pareto_condition(const JointDistribution& d) {
  const BinaryFibers f = binary_fibers(d);
  const IntervalClassification c = classify_intervals(d);
  if (!c.partition_holds) return false;
  const Index n = d.interval_count();
  for (Index y = 0; y < n; ++y) {
    const IntervalClass cy = c.classes[y];
    if (cy != IntervalClass::kNonprivate0 && cy != IntervalClass::kNonprivate1) {
      continue;
    }
    for (Index w = 0; w < n; ++w) {
      if (!c.balanced_member[w]) continue;
      const double aw = f.nonprivate0(w);
      const double bw = f.nonprivate1(w);
      const bool ok =
          cy == IntervalClass::kNonprivate1
              ? std::abs(f.nonprivate1(y) - aw) >= bw - kZeroThreshold
              : std::abs(f.nonprivate0(y) - bw) >= aw - kZeroThreshold;
      if (!ok) return false;
    }
  }
  return true;
}

bool check_pareto_condition_by_endpoints(const JointDistribution& d) {
  const BinaryFibers f = binary_fibers(d);
  const IntervalClassification c = classify_intervals(d);
  if (!c.partition_holds) return false;
  const Index n = d.interval_count();
  for (Index y = 0; y < n; ++y) {
    const IntervalClass cy = c.classes[y];
    if (cy != IntervalClass::kNonprivate0 && cy != IntervalClass::kNonprivate1) {
      continue;
    }
    for (Index w = 0; w < n; ++w) {
      if (!c.balanced_member[w]) continue;
      // Interval w gains on nonprivate value 0, interval y gives it.
      const FiberPair s{f.nonprivate0(w), f.nonprivate1(w), f.nonprivate0(y),
                        f.nonprivate1(y)};
      const DeltaInterval dom = s.domain();
      const double worst = std::min(delta_h(s, dom.lo, LogBase::kNats),
                                    delta_h(s, dom.hi, LogBase::kNats));
      if (worst < -kZeroThreshold) return false;
    }
  }
  return true;
}

bool merge_inequality_holds(double x, double y) {
  return xlogx(x) + xlogx(y) < xlogx(x + y);
}

bool shift_inequality_holds(double x, double y, double z) {
  return xlogx(x) + xlogx(y) >= xlogx(x + z) + xlogx(y - z);
}

namespace {

constexpr double kCoarseStep = 1e-3;
constexpr double kFineStep = 1e-6;

double margin(ImprovementCriterion criterion, double dp, double dn) {
  constexpr double kNone = -std::numeric_limits<double>::infinity();
  switch (criterion) {
    case ImprovementCriterion::kSimultaneous:
      return std::min(-dp, dn);
    case ImprovementCriterion::kDominance:
      return std::max(dn >= -kWitnessThreshold ? -dp : kNone,
                      dp <= kWitnessThreshold ? dn : kNone);
    case ImprovementCriterion::kPrivateDecrease:
      return -dp;
    case ImprovementCriterion::kNonprivateIncrease:
      return dn;
  }
  return kNone;
}

std::vector<ExchangeMove> scan_templates(const JointDistribution& d, Index j,
                                         Index k, Index up, Index un) {
  std::vector<ExchangeMove> out;
  for (Index r = 0; r < 4; ++r) {
    for (Index s = r + 1; s < 4; ++s) out.push_back(cell_move(j, k, r, s, 0.0));
  }
  out.push_back(fiber_move(d, j, k, up, 0, 1, 0.0));
  out.push_back(fiber_move(d, j, k, un, 0, 1, 0.0));
  return out;
}

std::optional<Witness> scan_pair(const JointDistribution& d,
                                 const internal::MoveEvaluator& eval, Index j,
                                 Index k, Index up, Index un,
                                 ImprovementCriterion criterion) {
  const double scale = log_scale(LogBase::kBits);
  Eigen::VectorXd dmi;
  for (const ExchangeMove& shape : scan_templates(d, j, k, up, un)) {
    const DeltaInterval dom = delta_domain(d, shape);
    if (dom.degenerate()) continue;
    const internal::Direction pos = eval.direction(shape, true);
    const internal::Direction neg = eval.direction(shape, false);
    auto score = [&](double delta, double& dp, double& dn) {
      eval.delta_mi(delta > 0.0 ? pos : neg, delta, dmi);
      dp = dmi(up) * scale;
      dn = dmi(un) * scale;
      return margin(criterion, dp, dn);
    };
    auto found = [&](double delta) -> std::optional<Witness> {
      if (delta == 0.0 || !dom.contains(delta)) return std::nullopt;
      double dp = 0.0;
      double dn = 0.0;
      if (score(delta, dp, dn) > kWitnessThreshold) {
        ExchangeMove mv = shape;
        mv.delta = delta;
        return Witness{mv, dp, dn};
      }
      return std::nullopt;
    };
    double best_delta = 0.0;
    double best_score = -std::numeric_limits<double>::infinity();
    const auto coarse = static_cast<long>(std::floor(dom.width() / kCoarseStep));
    for (long q = 0; q <= coarse + 1; ++q) {
      const double delta = q <= coarse ? dom.lo + q * kCoarseStep : dom.hi;
      if (auto w = found(delta)) return w;
      if (delta == 0.0) continue;
      double dp = 0.0;
      double dn = 0.0;
      const double s = score(delta, dp, dn);
      if (s > best_score) {
        best_score = s;
        best_delta = delta;
      }
    }
    const double centers[] = {0.0, dom.lo, dom.hi, best_delta};
    for (double center : centers) {
      const double lo = std::max(dom.lo, center - kCoarseStep);
      const double hi = std::min(dom.hi, center + kCoarseStep);
      const auto steps = static_cast<long>(std::floor((hi - lo) / kFineStep));
      for (long q = 0; q <= steps; ++q) {
        if (auto w = found(lo + q * kFineStep)) return w;
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<Witness> pareto_witness_scan(const JointDistribution& d,
                                           ImprovementCriterion criterion) {
  const BinaryFibers f = binary_fibers(d);
  const internal::MoveEvaluator eval(d);
  const Index n = d.interval_count();
  std::vector<std::pair<Index, Index>> pairs;
  for (Index j = 0; j < n; ++j) {
    for (Index k = j + 1; k < n; ++k) {
      if (eval.row_is_empty(j) && eval.row_is_empty(k)) continue;
      pairs.emplace_back(j, k);
    }
  }
  // Pairs are scanned concurrently; the lexicographically first hit wins.
  std::vector<std::optional<Witness>> hits(pairs.size());
  std::atomic<std::size_t> first_hit{pairs.size()};
  internal::parallel_for(pairs.size(), internal::default_jobs(), [&](std::size_t p) {
    if (p > first_hit.load()) return;
    const auto [j, k] = pairs[p];
    hits[p] = scan_pair(d, eval, j, k, f.private_index, f.nonprivate_index,
                        criterion);
    if (hits[p]) {
      std::size_t cur = first_hit.load();
      while (p < cur && !first_hit.compare_exchange_weak(cur, p)) {
      }
    }
  });
  std::optional<Witness> first;
  for (auto& w : hits) {
    if (w) {
      first = std::move(w);
      break;
    }
  }
  return first;
}

PropositionReport check_propositions(const JointDistribution& d) {
  const BinaryFibers f = binary_fibers(d);
  PropositionReport report;
  report.zero_leakage = check_zero_leakage(d);
  report.max_utility = check_max_utility(d);
  report.pareto = check_pareto_condition(d);
  report.private_mi = mutual_information(d, f.private_index);
  report.nonprivate_mi = mutual_information(d, f.nonprivate_index);
  report.nonprivate_entropy = characteristic_entropy(d, f.nonprivate_index);
  report.classification = classify_intervals(d);
  report.witness = pareto_witness_scan(d);
  return report;
}

}  // namespace paudit
