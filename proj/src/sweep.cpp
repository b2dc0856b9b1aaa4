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

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "audit_internal.hpp"
#include "parallel.hpp"
#include "paudit/optimizer.hpp"

namespace paudit {
namespace {

bool meets_bounds(const std::vector<MiBound>& bounds, const Eigen::VectorXd& mi, double tol) {
  for (const MiBound& b : bounds) {
    const double v = mi(b.characteristic);
    if (b.relation == Relation::kAtMost ? v > b.bits + tol : v < b.bits - tol) return false;
  }
  return true;
}

bool better(const AuditResult& a, const AuditResult& b, const std::vector<MiBound>& bounds,
            double tol) {
  const bool fa = meets_bounds(bounds, a.trajectory.back(), tol);
  const bool fb = meets_bounds(bounds, b.trajectory.back(), tol);
  if (fa != fb) return fa;
  return a.objective < b.objective;
}

}  // namespace

std::vector<SweepPoint> sweep_frontier(const JointDistribution& d,
                                       const AuditConfig& cfg,
                                       std::span<const SweepAxis> axes,
                                       int jobs) {
  if (axes.empty()) throw std::invalid_argument("sweep needs at least one axis");
  std::size_t total = 1;
  for (const SweepAxis& ax : axes) {
    if (ax.characteristic < 0 || ax.characteristic >= d.characteristic_count()) {
      throw std::invalid_argument("sweep axis characteristic out of range");
    }
    if (ax.values.empty()) throw std::invalid_argument("sweep axis has no values");
    if (!std::is_sorted(ax.values.begin(), ax.values.end())) {
      throw std::invalid_argument("sweep axis values must be ascending");
    }
    total *= ax.values.size();
  }
  for (std::size_t a = 0; a < axes.size(); ++a) {
    for (std::size_t b = a + 1; b < axes.size(); ++b) {
      if (axes[a].characteristic == axes[b].characteristic &&
          axes[a].relation == axes[b].relation) {
        throw std::invalid_argument("two sweep axes bound the same quantity");
      }
    }
  }

  // Row-major grid position of every point, first axis outermost.
  std::vector<std::vector<std::size_t>> pos(total, std::vector<std::size_t>(axes.size()));
  std::vector<SweepPoint> out;
  out.reserve(total);
  for (std::size_t p = 0; p < total; ++p) {
    std::size_t rem = p;
    std::vector<double> vals(axes.size());
    for (std::size_t a = axes.size(); a-- > 0;) {
      pos[p][a] = rem % axes[a].values.size();
      vals[a] = axes[a].values[pos[p][a]];
      rem /= axes[a].values.size();
    }
    out.push_back(SweepPoint{std::move(vals), AuditResult{d, {}, {}, 0.0, AuditStatus::kConverged, {}}});
  }
  std::vector<AuditConfig> configs(total, cfg);
  for (std::size_t p = 0; p < total; ++p) {
    for (std::size_t a = 0; a < axes.size(); ++a) {
      std::erase_if(configs[p].bounds, [&](const MiBound& b) {
        return b.characteristic == axes[a].characteristic &&
               b.relation == axes[a].relation;
      });
      configs[p].bounds.push_back(
          {axes[a].characteristic, axes[a].relation, out[p].bound_values[a]});
    }
  }
  internal::parallel_for(total, jobs, [&](std::size_t p) {
    out[p].result = solve_audit(d, configs[p]);
  });

  // Looseness along an axis: larger values relax an upper bound and tighten
  // a lower one.
  auto loose = [&](std::size_t p, std::size_t a) {
    const std::size_t n = axes[a].values.size();
    return axes[a].relation == Relation::kAtMost ? pos[p][a] : n - 1 - pos[p][a];
  };
  std::size_t stride_total = 1;
  std::vector<std::size_t> stride(axes.size());
  for (std::size_t a = axes.size(); a-- > 0;) {
    stride[a] = stride_total;
    stride_total *= axes[a].values.size();
  }
  std::vector<std::vector<std::size_t>> levels;
  for (std::size_t p = 0; p < total; ++p) {
    std::size_t level = 0;
    for (std::size_t a = 0; a < axes.size(); ++a) level += loose(p, a);
    if (levels.size() <= level) levels.resize(level + 1);
    levels[level].push_back(p);
  }

  // A tighter neighbour's optimum is feasible here, so descending from it
  // can only match or beat its objective.
  const double tol = cfg.feasibility_tol;
  for (std::size_t lv = 1; lv < levels.size(); ++lv) {
    const auto& members = levels[lv];
    internal::parallel_for(members.size(), jobs, [&](std::size_t i) {
      const std::size_t p = members[i];
      const std::vector<MiBound> bounds = effective_bounds(configs[p], d);
      for (std::size_t a = 0; a < axes.size(); ++a) {
        if (loose(p, a) == 0) continue;
        const bool up = axes[a].relation == Relation::kAtMost;
        const std::size_t q = up ? p - stride[a] : p + stride[a];
        const AuditResult& prev = out[q].result;
        if (!meets_bounds(bounds, prev.trajectory.back(), tol)) continue;
        AuditResult warm = internal::resume_audit(d, configs[p], prev);
        if (better(warm, out[p].result, bounds, tol)) {
          out[p].result = std::move(warm);
        }
      }
    });
  }
  return out;
}

}  // namespace paudit
