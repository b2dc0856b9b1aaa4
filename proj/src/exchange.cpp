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

#include "paudit/exchange.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

namespace paudit {
namespace {

// Slack for deltas that sit on a domain endpoint up to rounding.
constexpr double kDomainSlack = 1e-15;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

double row_sum(const Eigen::MatrixXd& p, Index i, const std::vector<Index>& g) {
  double s = 0.0;
  for (Index r : g) s += p(i, r);
  return s;
}

// Moves `amount` from row `from` to row `to` over the cells of `group`, split
// in proportion to the donor cells. Split amounts are floored onto the
// kDeltaQuantum grid and the remainder is handed out in cell order, so the
// pieces add up to `amount` exactly whenever the inputs are on that grid.
void transfer(Eigen::MatrixXd& p, Index from, Index to,
              const std::vector<Index>& group, double amount) {
  if (amount <= 0.0) return;
  if (group.size() == 1) {
    const Index r = group.front();
    const double moved = std::min(amount, p(from, r));
    p(from, r) = amount >= p(from, r) ? 0.0 : p(from, r) - moved;
    p(to, r) += moved;
    return;
  }
  const double total = row_sum(p, from, group);
  if (amount >= total) {
    for (Index r : group) {
      p(to, r) += p(from, r);
      p(from, r) = 0.0;
    }
    return;
  }
  std::vector<double> pieces(group.size());
  double assigned = 0.0;
  for (std::size_t q = 0; q < group.size(); ++q) {
    const double cap = p(from, group[q]);
    const double share = amount * (cap / total);
    pieces[q] = std::min(cap, std::floor(share / kDeltaQuantum) * kDeltaQuantum);
    assigned += pieces[q];
  }
  double rest = amount - assigned;
  for (std::size_t q = 0; q < group.size() && rest > 0.0; ++q) {
    const double room = p(from, group[q]) - pieces[q];
    const double extra = std::min(rest, room);
    pieces[q] += extra;
    rest -= extra;
  }
  for (std::size_t q = 0; q < group.size(); ++q) {
    const Index r = group[q];
    p(from, r) = std::max(0.0, p(from, r) - pieces[q]);
    p(to, r) += pieces[q];
  }
}

void check_delta(const Eigen::MatrixXd& p, const ExchangeMove& mv) {
  const double d = mv.delta;
  if (!std::isfinite(d)) throw std::domain_error("delta is not finite");
  if (mv.mode == ExchangeMode::kVariable) {
    const Index r = mv.gain.front();
    if (d < -p(mv.j, r) - kDomainSlack) {
      throw std::domain_error("delta " + fmt(d) + " below lower bound " +
                              fmt(-p(mv.j, r)) + ": cell (j, r) would go negative");
    }
    if (d > p(mv.k, r) + kDomainSlack) {
      throw std::domain_error("delta " + fmt(d) + " above upper bound " +
                              fmt(p(mv.k, r)) + ": cell (k, r) would go negative");
    }
    return;
  }
  const double gj = row_sum(p, mv.j, mv.gain);
  const double gk = row_sum(p, mv.k, mv.gain);
  const double sj = row_sum(p, mv.j, mv.give);
  const double sk = row_sum(p, mv.k, mv.give);
  if (d < -gj - kDomainSlack) {
    throw std::domain_error("delta " + fmt(d) + " below lower bound " + fmt(-gj) +
                            ": interval j mass on the gain cells would go negative");
  }
  if (d < -sk - kDomainSlack) {
    throw std::domain_error("delta " + fmt(d) + " below lower bound " + fmt(-sk) +
                            ": interval k mass on the give cells would go negative");
  }
  if (d > gk + kDomainSlack) {
    throw std::domain_error("delta " + fmt(d) + " above upper bound " + fmt(gk) +
                            ": interval k mass on the gain cells would go negative");
  }
  if (d > sj + kDomainSlack) {
    throw std::domain_error("delta " + fmt(d) + " above upper bound " + fmt(sj) +
                            ": interval j mass on the give cells would go negative");
  }
}

void check_shape(Index rows, Index cols, const ExchangeMove& mv) {
  auto in_range = [&](Index r) { return r >= 0 && r < cols; };
  if (mv.j < 0 || mv.j >= rows || mv.k < 0 || mv.k >= rows) {
    throw std::invalid_argument("move interval index out of range");
  }
  if (mv.j == mv.k) throw std::invalid_argument("move needs two distinct intervals");
  if (mv.gain.empty()) throw std::invalid_argument("move has no gain combinations");
  if (!std::all_of(mv.gain.begin(), mv.gain.end(), in_range) ||
      !std::all_of(mv.give.begin(), mv.give.end(), in_range)) {
    throw std::invalid_argument("move combination index out of range");
  }
  if (mv.mode == ExchangeMode::kVariable) {
    if (mv.gain.size() != 1 || !mv.give.empty()) {
      throw std::invalid_argument("variable move takes exactly one combination");
    }
    return;
  }
  if (mv.give.empty()) throw std::invalid_argument("constant move has no give combinations");
  std::set<Index> seen(mv.gain.begin(), mv.gain.end());
  if (seen.size() != mv.gain.size()) throw std::invalid_argument("repeated gain combination");
  for (Index s : mv.give) {
    if (!seen.insert(s).second) {
      throw std::invalid_argument("gain and give combinations overlap");
    }
  }
}

Index binary_characteristic(const JointDistribution& d, Index m) {
  if (d.characteristic(m).cardinality() != 2) {
    throw std::invalid_argument("characteristic '" + d.characteristic(m).name +
                                "' is not binary; use explicit fibers");
  }
  return m;
}

}  // namespace

std::string_view to_string(ExchangeMode mode) {
  return mode == ExchangeMode::kConstant ? "constant" : "variable";
}

ExchangeMode parse_mode(std::string_view text) {
  if (text == "constant") return ExchangeMode::kConstant;
  if (text == "variable") return ExchangeMode::kVariable;
  throw std::invalid_argument("unknown mode '" + std::string(text) +
                              "' (expected constant or variable)");
}

ExchangeMove cell_move(Index j, Index k, Index r, Index s, double delta) {
  return {ExchangeMode::kConstant, j, k, {r}, {s}, delta};
}

ExchangeMove variable_move(Index j, Index k, Index r, double delta) {
  return {ExchangeMode::kVariable, j, k, {r}, {}, delta};
}

ExchangeMove fiber_move(const JointDistribution& d, Index j, Index k, Index m,
                        Index v, Index w, double delta) {
  if (v == w) throw std::invalid_argument("fiber move needs two distinct values");
  const auto& idx = d.combinations();
  return {ExchangeMode::kConstant, j, k, idx.fiber(m, v), idx.fiber(m, w), delta};
}

double DeltaInterval::clamp(double delta) const {
  return std::clamp(delta, lo, std::max(lo, hi));
}

void check_move_shape(const JointDistribution& d, const ExchangeMove& mv) {
  check_shape(d.interval_count(), d.combination_count(), mv);
}

DeltaInterval delta_domain(const JointDistribution& d, const ExchangeMove& mv) {
  check_move_shape(d, mv);
  const auto& p = d.probs();
  if (mv.mode == ExchangeMode::kVariable) {
    const Index r = mv.gain.front();
    return {-p(mv.j, r), p(mv.k, r)};
  }
  const double gj = row_sum(p, mv.j, mv.gain);
  const double gk = row_sum(p, mv.k, mv.gain);
  const double sj = row_sum(p, mv.j, mv.give);
  const double sk = row_sum(p, mv.k, mv.give);
  return {-std::min(gj, sk), std::min(gk, sj)};
}

void apply_move_inplace(Eigen::MatrixXd& p, const ExchangeMove& mv) {
  check_shape(p.rows(), p.cols(), mv);
  check_delta(p, mv);
  const double d = mv.delta;
  if (d == 0.0) return;
  const double amount = std::abs(d);
  const Index gain_from = d > 0.0 ? mv.k : mv.j;
  const Index gain_to = d > 0.0 ? mv.j : mv.k;
  transfer(p, gain_from, gain_to, mv.gain, amount);
  if (mv.mode == ExchangeMode::kConstant) {
    transfer(p, gain_to, gain_from, mv.give, amount);
  }
}

JointDistribution apply_move(const JointDistribution& d, const ExchangeMove& mv) {
  Eigen::MatrixXd p = d.probs();
  apply_move_inplace(p, mv);
  return d.with_probs(std::move(p));
}

double snap_delta(double delta, const DeltaInterval& domain) {
  if (delta == domain.lo || delta == domain.hi) return delta;
  const double snapped = std::trunc(delta / kDeltaQuantum) * kDeltaQuantum;
  return domain.clamp(snapped);
}

DeltaInterval FiberPair::domain() const {
  return {-std::min(gain_j, give_k), std::min(gain_k, give_j)};
}

FiberPair fiber_pair(const JointDistribution& d, Index j, Index k, Index m,
                     Index v, Index w) {
  const auto& idx = d.combinations();
  const auto fv = idx.fiber(m, v);
  const auto fw = idx.fiber(m, w);
  return {group_sum(d, j, fv), group_sum(d, j, fw), group_sum(d, k, fv),
          group_sum(d, k, fw)};
}

double pair_phi_change(double x, double y, double delta) {
  if (delta == 0.0) return 0.0;
  const double xn = x + delta;
  const double yn = y - delta;
  // The log1p form is accurate for small steps; near a zeroing endpoint it
  // cancels badly and the direct differences are better.
  if (x > 0.0 && y > 0.0 && std::abs(delta) <= 0.5 * std::min(x, y)) {
    return x * std::log1p(delta / x) + y * std::log1p(-delta / y) +
           delta * std::log(xn / yn);
  }
  return xlogx(xn) - xlogx(x) + xlogx(yn) - xlogx(y);
}

namespace {

void require_in_domain(const FiberPair& s, double delta) {
  const DeltaInterval dom = s.domain();
  if (!dom.contains(delta, kDomainSlack)) {
    throw std::domain_error("delta " + fmt(delta) + " outside [" + fmt(dom.lo) +
                            ", " + fmt(dom.hi) + "]");
  }
}

}  // namespace

double delta_h(const FiberPair& s, double delta, LogBase base) {
  require_in_domain(s, delta);
  const double nats = pair_phi_change(s.gain_j, s.give_j, delta) +
                      pair_phi_change(s.give_k, s.gain_k, delta);
  return -nats * log_scale(base);
}

double delta_h_derivative(const FiberPair& s, double delta, LogBase base) {
  require_in_domain(s, delta);
  const double a = s.give_j - delta;
  const double b = s.gain_k - delta;
  const double c = s.gain_j + delta;
  const double e = s.give_k + delta;
  if (a <= 0.0 || b <= 0.0 || c <= 0.0 || e <= 0.0) {
    throw std::domain_error("derivative undefined: a fiber sum reaches zero at delta " +
                            fmt(delta));
  }
  return std::log((a * b) / (c * e)) * log_scale(base);
}

double delta_h_second_derivative(const FiberPair& s, double delta,
                                 LogBase base) {
  require_in_domain(s, delta);
  const double a = s.give_j - delta;
  const double b = s.gain_k - delta;
  const double c = s.gain_j + delta;
  const double e = s.give_k + delta;
  if (a <= 0.0 || b <= 0.0 || c <= 0.0 || e <= 0.0) {
    throw std::domain_error("second derivative undefined at delta " + fmt(delta));
  }
  return -(1.0 / a + 1.0 / b + 1.0 / c + 1.0 / e) * log_scale(base);
}

double unclamped_optimal_delta(const FiberPair& s) {
  const double total = s.total();
  if (total <= 0.0) {
    throw std::invalid_argument("optimal delta undefined: both intervals are empty");
  }
  return (s.give_j * s.gain_k - s.gain_j * s.give_k) / total;
}

double optimal_delta(const FiberPair& s) {
  return s.domain().clamp(unclamped_optimal_delta(s));
}

bool concavity_check(const FiberPair& s, LogBase base) {
  const DeltaInterval dom = s.domain();
  if (dom.degenerate()) return true;
  constexpr int kSamples = 21;
  std::vector<double> xs;
  for (int q = 0; q <= kSamples; ++q) {
    xs.push_back(dom.lo + dom.width() * q / kSamples);
  }
  for (int q = 1; q < kSamples; ++q) {
    if (!(delta_h_second_derivative(s, xs[q], base) < 0.0)) return false;
  }
  for (int q = 0; q + 2 <= kSamples; ++q) {
    const double left = delta_h(s, xs[q], base);
    const double right = delta_h(s, xs[q + 2], base);
    const double mid = delta_h(s, xs[q + 1], base);
    if (mid < 0.5 * (left + right) - 1e-12) return false;
  }
  return true;
}

double delta_h(const JointDistribution& d, Index j, Index k, Index m,
               double delta, LogBase base) {
  return delta_h(fiber_pair(d, j, k, binary_characteristic(d, m)), delta, base);
}

double delta_h_derivative(const JointDistribution& d, Index j, Index k, Index m,
                          double delta, LogBase base) {
  return delta_h_derivative(fiber_pair(d, j, k, binary_characteristic(d, m)),
                            delta, base);
}

double optimal_delta(const JointDistribution& d, Index j, Index k, Index m) {
  return optimal_delta(fiber_pair(d, j, k, binary_characteristic(d, m)));
}

bool concavity_check(const JointDistribution& d, Index j, Index k, Index m,
                     LogBase base) {
  return concavity_check(fiber_pair(d, j, k, binary_characteristic(d, m)), base);
}

Index characteristic_for_role(const JointDistribution& d, Role role) {
  const auto found = d.characteristics_with_role(role);
  if (found.size() != 1) {
    throw std::invalid_argument("expected exactly one " +
                                std::string(to_string(role)) +
                                " characteristic, found " +
                                std::to_string(found.size()));
  }
  return found.front();
}

double delta_h_private(const JointDistribution& d, Index j, Index k,
                       double delta, LogBase base) {
  return delta_h(d, j, k, characteristic_for_role(d, Role::kPrivate), delta, base);
}

double delta_h_nonprivate(const JointDistribution& d, Index j, Index k,
                          double delta, LogBase base) {
  return delta_h(d, j, k, characteristic_for_role(d, Role::kNonprivate), delta,
                 base);
}

double delta_i_variable(const JointDistribution& d, Index j, Index k, Index r,
                        double delta, Index m, LogBase base) {
  const ExchangeMove mv = variable_move(j, k, r, delta);
  const DeltaInterval dom = delta_domain(d, mv);
  if (!dom.contains(delta, kDomainSlack)) {
    throw std::domain_error("delta " + fmt(delta) + " outside [" + fmt(dom.lo) +
                            ", " + fmt(dom.hi) + "]");
  }
  const auto fiber = d.combinations().fiber(m, d.combinations().digit(r, m));
  const double fj = group_sum(d, j, fiber);
  const double fk = group_sum(d, k, fiber);
  const double tj = d.probs().row(j).sum();
  const double tk = d.probs().row(k).sum();
  const double nats = pair_phi_change(fj, fk, delta) - pair_phi_change(tj, tk, delta);
  return nats * log_scale(base);
}

}  // namespace paudit
