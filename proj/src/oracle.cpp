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

// Exhaustive search for two intervals over two binary characteristics.
// Writing row 0 as (x_a, x_b, x_c, x_d) with fixed column sums c, every MI
// depends only on s = x_a + x_b, t = x_a + x_c and the row total u, so the
// search runs over (s, t) (and u in variable mode) with x_a chosen inside its
// feasible range afterwards.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "paudit/info_kernels.hpp"
#include "paudit/info_theory.hpp"
#include "paudit/optimizer.hpp"

namespace paudit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kKeep = 8;

struct Cols {
  double a, b, c, d;
};

// I(X; .) in bits for a binary characteristic whose value-0 fiber holds
// mass `f` of a row with total u, with column total `col` for value 0.
double pair_mi(double f, double u, double col) {
  const double g = u - f;
  const double f1 = col - f;
  const double g1 = (1.0 - u) - f1;
  const double nats = xlogx(std::max(f, 0.0)) + xlogx(std::max(g, 0.0)) +
                      xlogx(std::max(f1, 0.0)) + xlogx(std::max(g1, 0.0)) -
                      xlogx(u) - xlogx(1.0 - u) - xlogx(col) - xlogx(1.0 - col);
  return std::max(0.0, nats * log_scale(LogBase::kBits));
}

struct Line {
  double c0;
  double slope;  // in s
};

class Problem {
 public:
  Problem(const JointDistribution& d, const AuditConfig& cfg)
      : cfg_(cfg), bounds_(effective_bounds(cfg, d)) {
    const auto& p = d.probs();
    const Eigen::RowVectorXd col = p.colwise().sum();
    c_ = {col(0), col(1), col(2), col(3)};
    w_ = cfg.weights.size() == 0 ? Eigen::Vector2d::Zero() : Eigen::Vector2d(cfg.weights);
    u0_ = p.row(0).sum();
  }

  const Cols& cols() const { return c_; }
  double u0() const { return u0_; }

  double s_lo(double u) const { return std::max(0.0, u - c_.c - c_.d); }
  double s_hi(double u) const { return std::min(c_.a + c_.b, u); }

  std::vector<Line> t_lower(double u) const {
    return {{0.0, 0.0}, {u - c_.d, -1.0}, {-c_.b, 1.0}, {u - c_.b - c_.d, 0.0}};
  }
  std::vector<Line> t_upper(double u) const {
    return {{c_.a + c_.c, 0.0}, {c_.c, 1.0}, {c_.a + u, -1.0}, {u, 0.0}};
  }
  double t_lo(double s, double u) const {
    double v = -kInf;
    for (const Line& l : t_lower(u)) v = std::max(v, l.c0 + l.slope * s);
    return v;
  }
  double t_hi(double s, double u) const {
    double v = kInf;
    for (const Line& l : t_upper(u)) v = std::min(v, l.c0 + l.slope * s);
    return v;
  }

  double mi0(double s, double u) const { return pair_mi(s, u, c_.a + c_.b); }
  double mi1(double t, double u) const { return pair_mi(t, u, c_.a + c_.c); }

  bool ok(Index m, double mi) const {
    for (const MiBound& b : bounds_) {
      if (b.characteristic != m) continue;
      if (b.relation == Relation::kAtMost ? mi > b.bits + cfg_.feasibility_tol
                                          : mi < b.bits - cfg_.feasibility_tol) {
        return false;
      }
    }
    return true;
  }

  // Weighted term for one characteristic, +inf when its bounds fail.
  double term0(double s, double u) const {
    const double mi = mi0(s, u);
    return ok(0, mi) ? w_(0) * mi : kInf;
  }
  double term1(double t, double u) const {
    const double mi = mi1(t, u);
    return ok(1, mi) ? w_(1) * mi : kInf;
  }

  // Special points of a fiber variable on [lo, hi]: ends, the independence
  // point and the roots of every bound on that characteristic.
  std::vector<double> specials(Index m, double u, double lo, double hi) const {
    std::vector<double> out{lo, hi};
    if (hi < lo) return out;
    const double col = m == 0 ? c_.a + c_.b : c_.a + c_.c;
    auto f = [&](double x) { return pair_mi(x, u, col); };
    const double mid = std::clamp(col * u, lo, hi);
    out.push_back(mid);
    for (const MiBound& b : bounds_) {
      if (b.characteristic != m) continue;
      for (double end : {lo, hi}) {
        if (f(end) < b.bits) continue;
        double in = mid;
        double outp = end;
        for (int it = 0; it < 80; ++it) {
          const double x = 0.5 * (in + outp);
          (f(x) < b.bits ? in : outp) = x;
        }
        out.push_back(in);
        out.push_back(outp);
      }
    }
    return out;
  }

  std::vector<double> s_specials(double u) const {
    const double lo = s_lo(u);
    const double hi = s_hi(u);
    std::vector<double> out = specials(0, u, lo, hi);
    std::vector<Line> lines = t_lower(u);
    for (const Line& l : t_upper(u)) lines.push_back(l);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      for (std::size_t j = i + 1; j < lines.size(); ++j) {
        if (lines[i].slope == lines[j].slope) continue;
        const double s = (lines[j].c0 - lines[i].c0) / (lines[i].slope - lines[j].slope);
        if (s >= lo && s <= hi) out.push_back(s);
      }
    }
    return out;
  }

  double x_a(double s, double t, double u) const {
    return std::max({0.0, s - c_.b, t - c_.c, s + t - u});
  }
  bool consistent(double s, double t, double u) const {
    const double lo = x_a(s, t, u);
    const double hi = std::min({c_.a, s, t, c_.d + s + t - u});
    return lo <= hi + 1e-15;
  }

 private:
  const AuditConfig& cfg_;
  std::vector<MiBound> bounds_;
  Cols c_{};
  Eigen::Vector2d w_;
  double u0_ = 0.0;
};

struct Point {
  double s = 0.0;
  double t = 0.0;
  double u = 0.0;
  double f = kInf;
};

void keep(std::vector<Point>& top, const Point& p) {
  if (!std::isfinite(p.f)) return;
  if (top.size() < kKeep) {
    top.push_back(p);
  } else if (p.f < top.back().f) {
    top.back() = p;
  } else {
    return;
  }
  std::sort(top.begin(), top.end(), [](const Point& a, const Point& b) { return a.f < b.f; });
}

std::vector<double> grid_in(double lo, double hi, double step) {
  std::vector<double> out;
  if (hi < lo) return out;
  const double first = std::ceil(lo / step);
  for (double q = first; q * step <= hi; q += 1.0) out.push_back(q * step);
  out.push_back(lo);
  out.push_back(hi);
  return out;
}

// Best t for a fixed (s, u) among grid values plus specials.
Point best_t(const Problem& pr, double s, double u, const std::vector<double>& t_grid,
             const std::vector<double>& t_vals, const std::vector<double>& t_special,
             const std::vector<double>& t_special_vals) {
  Point best{s, 0.0, u, kInf};
  const double f0 = pr.term0(s, u);
  if (!std::isfinite(f0)) return best;
  const double lo = pr.t_lo(s, u);
  const double hi = pr.t_hi(s, u);
  if (hi < lo) return best;
  auto consider = [&](double t, double f1) {
    if (t < lo || t > hi || !std::isfinite(f1)) return;
    if (f0 + f1 < best.f) {
      best.t = t;
      best.f = f0 + f1;
    }
  };
  const auto first = std::lower_bound(t_grid.begin(), t_grid.end(), lo);
  for (auto it = first; it != t_grid.end() && *it <= hi; ++it) {
    consider(*it, t_vals[static_cast<std::size_t>(it - t_grid.begin())]);
  }
  for (std::size_t q = 0; q < t_special.size(); ++q) consider(t_special[q], t_special_vals[q]);
  consider(lo, pr.term1(lo, u));
  consider(hi, pr.term1(hi, u));
  return best;
}

// Scans one u on the given s and t candidate sets.
void scan_u(const Problem& pr, double u, std::vector<double> s_cands,
            std::vector<double> t_grid, std::vector<Point>& top) {
  std::sort(t_grid.begin(), t_grid.end());
  std::vector<double> t_vals(t_grid.size());
  for (std::size_t q = 0; q < t_grid.size(); ++q) t_vals[q] = pr.term1(t_grid[q], u);
  const double t_min = std::max(0.0, u - pr.cols().b - pr.cols().d);
  const double t_max = std::min(pr.cols().a + pr.cols().c, u);
  const std::vector<double> t_special = pr.specials(1, u, t_min, t_max);
  std::vector<double> t_special_vals(t_special.size());
  for (std::size_t q = 0; q < t_special.size(); ++q) {
    t_special_vals[q] = pr.term1(t_special[q], u);
  }
  for (double s : s_cands) {
    keep(top, best_t(pr, s, u, t_grid, t_vals, t_special, t_special_vals));
  }
}

}  // namespace

OracleResult brute_force_oracle(const JointDistribution& d,
                                const AuditConfig& cfg, double grid,
                                double final_step) {
  if (auto v = validate(cfg, d); !v.ok) throw std::invalid_argument(v.message);
  if (d.interval_count() != 2 || d.characteristic_count() != 2 ||
      d.characteristic(0).cardinality() != 2 ||
      d.characteristic(1).cardinality() != 2) {
    throw std::invalid_argument(
        "oracle supports two intervals over two binary characteristics only");
  }
  if (!(grid > 0.0) || !(final_step > 0.0) || final_step > grid) {
    throw std::invalid_argument("oracle needs 0 < final_step <= grid");
  }
  const Problem pr(d, cfg);
  const bool variable = cfg.mode == ExchangeMode::kVariable;

  std::vector<Point> top;
  const std::vector<double> u_cands =
      variable ? grid_in(0.0, 1.0, grid) : std::vector<double>{pr.u0()};
  for (double u : u_cands) {
    std::vector<double> s_cands = grid_in(pr.s_lo(u), pr.s_hi(u), grid);
    for (double s : pr.s_specials(u)) s_cands.push_back(s);
    scan_u(pr, u, std::move(s_cands), grid_in(0.0, 1.0, grid), top);
  }

  for (double h = grid; h > final_step * (1.0 + 1e-9);) {
    const double step = h / 10.0;
    std::vector<Point> next = top;
    for (const Point& p : top) {
      std::vector<double> us =
          variable ? grid_in(std::max(0.0, p.u - h), std::min(1.0, p.u + h), step)
                   : std::vector<double>{p.u};
      for (double u : us) {
        const double lo = std::max(pr.s_lo(u), p.s - h);
        const double hi = std::min(pr.s_hi(u), p.s + h);
        std::vector<double> s_cands = grid_in(lo, hi, step);
        for (double s : pr.s_specials(u)) {
          if (s >= lo && s <= hi) s_cands.push_back(s);
        }
        scan_u(pr, u, std::move(s_cands),
               grid_in(std::max(0.0, p.t - h), std::min(1.0, p.t + h), step), next);
      }
    }
    top = std::move(next);
    h = step;
  }

  OracleResult out{false, 0.0, d, mi_vector(d)};
  for (const Point& p : top) {
    if (!pr.consistent(p.s, p.t, p.u)) continue;
    const Cols& c = pr.cols();
    const double xa = pr.x_a(p.s, p.t, p.u);
    Eigen::MatrixXd probs(2, 4);
    probs(0, 0) = xa;
    probs(0, 1) = std::max(0.0, p.s - xa);
    probs(0, 2) = std::max(0.0, p.t - xa);
    probs(0, 3) = std::max(0.0, p.u - p.s - p.t + xa);
    probs(1, 0) = std::max(0.0, c.a - probs(0, 0));
    probs(1, 1) = std::max(0.0, c.b - probs(0, 1));
    probs(1, 2) = std::max(0.0, c.c - probs(0, 2));
    probs(1, 3) = std::max(0.0, c.d - probs(0, 3));
    out.feasible = true;
    out.best = d.with_probs(probs / probs.sum());
    out.mi = mi_vector(out.best);
    out.objective = audit_objective(cfg, out.best);
    break;
  }
  return out;
}

double conditional_utility_ceiling(const JointDistribution& d,
                                   std::span<const Index> zeroed_privates,
                                   Index v) {
  if (zeroed_privates.empty()) {
    throw std::invalid_argument("at least one zeroed private characteristic required");
  }
  for (Index u : zeroed_privates) {
    if (u == v) throw std::invalid_argument("target overlaps the zeroed set");
    if (u < 0 || u >= d.characteristic_count()) {
      throw std::out_of_range("characteristic index out of range");
    }
  }
  return characteristic_conditional_entropy(d, v, zeroed_privates);
}

}  // namespace paudit
