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

#include <array>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "line_search.hpp"
#include "move_evaluator.hpp"
#include "paudit/info_theory.hpp"
#include "paudit/optimizer.hpp"
#include "paudit/propositions.hpp"

namespace paudit {
namespace {

using internal::MoveEvaluator;

constexpr int kStepMoveLimit = 100000;

enum class StepKind { kJoint, kPrivate, kNonprivate };

Eigen::VectorXd bits_of(const MoveEvaluator& ev) {
  Eigen::VectorXd out = ev.mi_nats() * log_scale(LogBase::kBits);
  for (Index m = 0; m < out.size(); ++m) out(m) = clip_mi(out(m), LogBase::kBits);
  return out;
}

struct StepMove {
  double gain = 0.0;
  ExchangeMove move;
};

std::optional<StepMove> best_in_step(const MoveEvaluator& ev, StepKind kind,
                                     const std::vector<std::pair<Index, Index>>& cells,
                                     Index mp, Index mn, double threshold) {
  const double scale = log_scale(LogBase::kBits);
  const Index n = ev.probs().rows();
  std::optional<StepMove> best;
  Eigen::VectorXd tmp;
  for (Index j = 0; j < n; ++j) {
    for (Index k = j + 1; k < n; ++k) {
      if (ev.row_is_empty(j) || ev.row_is_empty(k)) continue;
      for (const auto& [r, s] : cells) {
        ExchangeMove shape = cell_move(j, k, r, s, 0.0);
        const DeltaInterval dom = ev.domain(shape);
        if (dom.degenerate()) continue;
        const internal::Direction pos = ev.direction(shape, true);
        const internal::Direction neg = ev.direction(shape, false);
        auto value = [&](double x) -> std::optional<double> {
          if (x == 0.0) return 0.0;
          ev.delta_mi(x > 0.0 ? pos : neg, x, tmp);
          const double dp = tmp(mp) * scale;
          const double dn = tmp(mn) * scale;
          switch (kind) {
            case StepKind::kJoint:
              if (dp > 0.0 || dn < 0.0) return std::nullopt;
              return dp - dn;
            case StepKind::kPrivate:
              return dp;
            case StepKind::kNonprivate:
              return -dn;
          }
          return std::nullopt;
        };
        internal::LineOptions opt;
        std::vector<double> extras;
        if (kind == StepKind::kPrivate) {
          opt.endpoints_and_extras_only = true;
          FiberPair fp{ev.fiber(mp, j, 0), ev.fiber(mp, j, 1),
                       ev.fiber(mp, k, 0), ev.fiber(mp, k, 1)};
          // Cells (a, c) and (b, d) move mass from private value 0 to 1.
          if (fp.total() > 0.0) extras.push_back(unclamped_optimal_delta(fp));
        } else if (kind == StepKind::kNonprivate) {
          opt.endpoints_and_extras_only = true;
        }
        const auto lr = internal::search_line(dom, value, extras, opt);
        if (!(lr.value < -threshold)) continue;
        const double snapped = snap_delta(lr.delta, dom);
        if (snapped == 0.0) continue;
        const auto v = value(snapped);
        if (!v || !(*v < -threshold)) continue;
        if (!best || -*v > best->gain) {
          shape.delta = snapped;
          best = StepMove{-*v, shape};
        }
      }
    }
  }
  return best;
}

}  // namespace

StepwiseResult run_stepwise(const JointDistribution& d, double stop_tol) {
  if (auto v = validate(d); !v.ok) throw std::invalid_argument(v.message);
  if (!(stop_tol > 0.0)) throw std::invalid_argument("stop_tol must be positive");
  const BinaryFibers bf = binary_fibers(d);
  const Index mp = bf.private_index;
  const Index mn = bf.nonprivate_index;
  auto cell = [&](Index pv, Index nv) {
    std::array<Index, 2> digits{};
    digits[static_cast<std::size_t>(mp)] = pv;
    digits[static_cast<std::size_t>(mn)] = nv;
    return d.combinations().flatten(digits);
  };
  const Index a = cell(0, 0);
  const Index b = cell(0, 1);
  const Index c = cell(1, 0);
  const Index dd = cell(1, 1);

  MoveEvaluator ev(d);
  StepwiseResult out{d, bits_of(ev), {}};
  const std::array<std::pair<StepKind, std::vector<std::pair<Index, Index>>>, 3> plan{{
      {StepKind::kJoint, {{a, dd}, {b, c}}},
      {StepKind::kPrivate, {{a, c}, {b, dd}}},
      {StepKind::kNonprivate, {{a, b}, {c, dd}}},
  }};
  for (std::size_t step = 0; step < plan.size(); ++step) {
    const auto& [kind, cells] = plan[step];
    for (int it = 0; it < kStepMoveLimit; ++it) {
      auto mv = best_in_step(ev, kind, cells, mp, mn, stop_tol);
      if (!mv) break;
      ev.apply(mv->move);
      out.steps[step].moves.push_back(mv->move);
    }
    out.steps[step].mi_after = bits_of(ev);
  }
  out.audited = d.with_probs(ev.probs());
  return out;
}

}  // namespace paudit
