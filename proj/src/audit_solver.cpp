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
#include <array>
#include <limits>
#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "line_search.hpp"
#include "audit_internal.hpp"
#include "move_evaluator.hpp"
#include "paudit/info_theory.hpp"
#include "paudit/optimizer.hpp"

namespace paudit {
namespace {

using internal::MoveEvaluator;

struct Pattern {
  ExchangeMode mode = ExchangeMode::kConstant;
  std::vector<Index> gain;
  std::vector<Index> give;
  // Single cell pair differing in one coordinate: the only characteristic
  // whose fibers change, and the fiber values of the gain and give cells.
  Index single_char = -1;
  Index v = 0;
  Index w = 0;
};

std::vector<Pattern> build_patterns(const JointDistribution& d,
                                    ExchangeMode mode) {
  const CombinationIndex& idx = d.combinations();
  const Index n_comb = idx.size();
  std::vector<Pattern> out;
  if (mode == ExchangeMode::kVariable) {
    for (Index r = 0; r < n_comb; ++r) {
      Pattern p;
      p.mode = mode;
      p.gain = {r};
      out.push_back(std::move(p));
    }
  }
  for (Index r = 0; r < n_comb; ++r) {
    for (Index s = r + 1; s < n_comb; ++s) {
      Pattern p;
      p.gain = {r};
      p.give = {s};
      Index differing = 0;
      for (Index m = 0; m < idx.rank(); ++m) {
        if (idx.digit(r, m) != idx.digit(s, m)) {
          ++differing;
          p.single_char = m;
        }
      }
      if (differing == 1) {
        p.v = idx.digit(r, p.single_char);
        p.w = idx.digit(s, p.single_char);
      } else {
        p.single_char = -1;
      }
      out.push_back(std::move(p));
    }
  }
  if (mode == ExchangeMode::kVariable) return out;
  for (Index m = 0; m < idx.rank(); ++m) {
    if (n_comb / idx.radix(m) < 2) continue;
    for (Index v = 0; v < idx.radix(m); ++v) {
      for (Index w = v + 1; w < idx.radix(m); ++w) {
        Pattern p;
        p.gain = idx.fiber(m, v);
        p.give = idx.fiber(m, w);
        out.push_back(std::move(p));
      }
    }
  }
  return out;
}

struct Candidate {
  double improvement = 0.0;
  ExchangeMove move;
};

class Searcher {
 public:
  Searcher(const MoveEvaluator& ev, const Eigen::VectorXd& weights,
           std::vector<MiBound> guards, double tol, double scale)
      : ev_(ev), weights_(weights), guards_(std::move(guards)), guard_tol_(0.5 * tol),
        scale_(scale), cur_(ev.mi_nats() * scale) {}

  // Best snapped move for one template; nullopt when nothing improves by
  // more than `threshold`.
  std::optional<Candidate> best(const Pattern& pat, Index j, Index k,
                                double threshold) {
    ExchangeMove shape;
    shape.mode = pat.mode;
    shape.j = j;
    shape.k = k;
    shape.gain = pat.gain;
    shape.give = pat.give;
    const DeltaInterval dom = ev_.domain(shape);
    if (dom.degenerate()) return std::nullopt;

    internal::LineOptions opt;
    std::vector<double> extras;
    if (pat.single_char >= 0) {
      const double wm = weights_(pat.single_char);
      if (wm == 0.0) return std::nullopt;
      opt.endpoints_and_extras_only = true;
      if (wm > 0.0) {
        const Index m = pat.single_char;
        FiberPair fp{ev_.fiber(m, j, pat.v), ev_.fiber(m, j, pat.w),
                     ev_.fiber(m, k, pat.v), ev_.fiber(m, k, pat.w)};
        if (fp.total() > 0.0) extras.push_back(unclamped_optimal_delta(fp));
      }
    }

    const internal::Direction pos = ev_.direction(shape, true);
    const internal::Direction neg = ev_.direction(shape, false);
    auto value = [&](double x) -> std::optional<double> {
      if (x == 0.0) return 0.0;
      ev_.delta_mi(x > 0.0 ? pos : neg, x, tmp_);
      double f = 0.0;
      for (Index m = 0; m < tmp_.size(); ++m) {
        const double dm = tmp_(m) * scale_;
        if (!std::isfinite(dm)) return std::nullopt;
        f += weights_(m) * dm;
      }
      for (const MiBound& b : guards_) {
        const double after = cur_(b.characteristic) + tmp_(b.characteristic) * scale_;
        if (b.relation == Relation::kAtMost ? after > b.bits + guard_tol_
                                            : after < b.bits - guard_tol_) {
          return std::nullopt;
        }
      }
      return f;
    };
    const internal::LineResult lr = internal::search_line(dom, value, extras, opt);
    if (!(lr.value < -threshold)) return std::nullopt;
    const double snapped = snap_delta(lr.delta, dom);
    if (snapped == 0.0) return std::nullopt;
    const auto v = value(snapped);
    if (!v || !(*v < -threshold)) return std::nullopt;
    shape.delta = snapped;
    return Candidate{-*v, std::move(shape)};
  }

 private:
  const MoveEvaluator& ev_;
  Eigen::VectorXd weights_;
  std::vector<MiBound> guards_;
  // Half the feasibility slack, so rounding in the recomputed MI cannot
  // push an accepted move past the bound.
  double guard_tol_;
  double scale_;
  Eigen::VectorXd cur_;
  Eigen::VectorXd tmp_;
};

std::optional<Candidate> best_move(const MoveEvaluator& ev,
                                   const std::vector<Pattern>& patterns,
                                   const Eigen::VectorXd& weights,
                                   const std::vector<MiBound>& guards,
                                   double tol, double threshold) {
  if (weights.cwiseAbs().maxCoeff() == 0.0) return std::nullopt;
  Searcher search(ev, weights, guards, tol, log_scale(LogBase::kBits));
  const Index n = ev.probs().rows();
  std::optional<Candidate> best;
  for (Index j = 0; j < n; ++j) {
    for (Index k = j + 1; k < n; ++k) {
      if (ev.row_is_empty(j) && ev.row_is_empty(k)) continue;
      for (const Pattern& pat : patterns) {
        if (pat.mode == ExchangeMode::kConstant &&
            (ev.row_is_empty(j) || ev.row_is_empty(k))) {
          continue;
        }
        auto c = search.best(pat, j, k, threshold);
        if (c && (!best || c->improvement > best->improvement)) best = std::move(c);
      }
    }
  }
  return best;
}

bool violates(const MiBound& b, const Eigen::VectorXd& mi, double tol) {
  const double x = mi(b.characteristic);
  return b.relation == Relation::kAtMost ? x > b.bits + tol : x < b.bits - tol;
}

double violation(const MiBound& b, const Eigen::VectorXd& mi) {
  const double x = mi(b.characteristic);
  return b.relation == Relation::kAtMost ? x - b.bits : b.bits - x;
}

Eigen::VectorXd current_bits(const MoveEvaluator& ev) {
  Eigen::VectorXd out = ev.mi_nats() * log_scale(LogBase::kBits);
  for (Index m = 0; m < out.size(); ++m) out(m) = clip_mi(out(m), LogBase::kBits);
  return out;
}

std::string describe(const MiBound& b, const JointDistribution& d) {
  std::ostringstream os;
  os << "I(" << d.characteristic(b.characteristic).name << ") "
     << (b.relation == Relation::kAtMost ? "<= " : ">= ") << b.bits;
  return os.str();
}

}  // namespace

std::string_view to_string(Relation r) {
  return r == Relation::kAtMost ? "<=" : ">=";
}

std::string_view to_string(AuditStatus s) {
  switch (s) {
    case AuditStatus::kConverged:
      return "converged";
    case AuditStatus::kIterationLimit:
      return "iteration-limit";
    case AuditStatus::kInfeasibleBounds:
      return "infeasible-bounds";
  }
  return "unknown";
}

ValidationResult validate(const AuditConfig& cfg, const JointDistribution& d) {
  auto fail = [](std::string msg) { return ValidationResult{false, std::move(msg)}; };
  if (auto v = validate(d); !v.ok) return v;
  const Index n = d.characteristic_count();
  if (cfg.weights.size() != 0 && cfg.weights.size() != n) {
    return fail("weights have " + std::to_string(cfg.weights.size()) +
                " entries, expected " + std::to_string(n));
  }
  if (!cfg.weights.allFinite()) return fail("weights must be finite");
  for (const MiBound& b : cfg.bounds) {
    if (b.characteristic < 0 || b.characteristic >= n) {
      return fail("bound refers to characteristic " +
                  std::to_string(b.characteristic) + " out of range");
    }
    if (!std::isfinite(b.bits) || b.bits < 0.0) {
      return fail("bound on " + d.characteristic(b.characteristic).name +
                  " must be a finite nonnegative number of bits");
    }
  }
  for (const auto& margin : {cfg.epsilon, cfg.eta}) {
    if (margin && (!std::isfinite(*margin) || *margin < 0.0)) {
      return fail("margins must be finite and nonnegative");
    }
  }
  if (!(cfg.stop_tol > 0.0) || !std::isfinite(cfg.stop_tol)) {
    return fail("stop_tol must be positive");
  }
  if (cfg.max_iters <= 0) return fail("max_iters must be positive");
  if (!(cfg.feasibility_tol >= 0.0)) return fail("feasibility_tol must be nonnegative");
  return {};
}

std::vector<MiBound> effective_bounds(const AuditConfig& cfg,
                                      const JointDistribution& d) {
  std::vector<MiBound> out = cfg.bounds;
  if (!cfg.epsilon && !cfg.eta) return out;
  const Eigen::VectorXd mi = mi_vector(d);
  for (Index m = 0; m < d.characteristic_count(); ++m) {
    if (d.characteristic(m).role == Role::kPrivate && cfg.epsilon) {
      out.push_back({m, Relation::kAtMost, mi(m) - *cfg.epsilon});
    }
    if (d.characteristic(m).role == Role::kNonprivate && cfg.eta) {
      out.push_back({m, Relation::kAtLeast, mi(m) + *cfg.eta});
    }
  }
  return out;
}

double audit_objective(const AuditConfig& cfg, const JointDistribution& d) {
  if (cfg.weights.size() == 0) return 0.0;
  return cfg.weights.dot(mi_vector(d));
}

namespace {

// Template counts above which the escape steps are skipped.
constexpr std::size_t kEscapeTemplateLimit = 64;
constexpr std::size_t kPairKickTemplateLimit = 16;
constexpr int kEscapeRounds = 50;
constexpr std::int64_t kTrialIterLimit = 20000;
constexpr std::array<double, 6> kKickFractions{1.0, -1.0, 0.5, -0.5, 0.25, -0.25};

struct Run {
  MoveEvaluator ev;
  std::vector<ExchangeMove> moves;
  std::vector<Eigen::VectorXd> trajectory;
  std::int64_t iters = 0;
  AuditStatus status = AuditStatus::kConverged;
  std::string message;

  // Constant shapes chosen in variable mode are logged as two variable moves.
  void apply(const ExchangeMove& mv, ExchangeMode mode) {
    if (mode == ExchangeMode::kVariable && mv.mode == ExchangeMode::kConstant) {
      for (const ExchangeMove& part : {variable_move(mv.j, mv.k, mv.gain.front(), mv.delta),
                                       variable_move(mv.j, mv.k, mv.give.front(), -mv.delta)}) {
        ev.apply(part);
        moves.push_back(part);
        trajectory.push_back(current_bits(ev));
      }
      return;
    }
    ev.apply(mv);
    moves.push_back(mv);
    trajectory.push_back(current_bits(ev));
  }
};

class Descent {
 public:
  Descent(const JointDistribution& d, const AuditConfig& cfg, Eigen::VectorXd weights,
          std::vector<MiBound> bounds)
      : d_(d), cfg_(cfg), weights_(std::move(weights)), bounds_(std::move(bounds)),
        patterns_(build_patterns(d, cfg.mode)) {}

  const std::vector<Pattern>& patterns() const { return patterns_; }

  // Phase 1 then phase 2 from the current state of `run`.
  void descend(Run& run) const { descend(run, cfg_.max_iters); }

  void descend(Run& run, std::int64_t max_iters) const {
    const Index n_char = d_.characteristic_count();
    const double tol = cfg_.feasibility_tol;
    for (;;) {
      const Eigen::VectorXd mi = run.trajectory.back();
      const MiBound* target = nullptr;
      for (const MiBound& b : bounds_) {
        if (violates(b, mi, tol)) {
          target = &b;
          break;
        }
      }
      if (target == nullptr) break;
      if (run.iters++ >= max_iters) {
        set(run, AuditStatus::kIterationLimit, "iteration limit while repairing bounds");
        return;
      }
      std::vector<MiBound> guards;
      for (const MiBound& b : bounds_) {
        if (!violates(b, mi, tol)) guards.push_back(b);
      }
      Eigen::VectorXd w = Eigen::VectorXd::Zero(n_char);
      w(target->characteristic) = target->relation == Relation::kAtMost ? 1.0 : -1.0;
      const double threshold =
          std::max(1e-15, std::min(cfg_.stop_tol, 0.1 * violation(*target, mi)));
      auto c = best_move(run.ev, patterns_, w, guards, tol, threshold);
      if (!c) {
        set(run, AuditStatus::kInfeasibleBounds, "no move repairs " + describe(*target, d_));
        return;
      }
      run.apply(c->move, cfg_.mode);
    }
    if (weights_.cwiseAbs().maxCoeff() > 0.0) {
      for (;;) {
        if (run.iters++ >= max_iters) {
          set(run, AuditStatus::kIterationLimit, "iteration limit reached");
          return;
        }
        auto c = best_move(run.ev, patterns_, weights_, bounds_, tol, cfg_.stop_tol);
        if (!c) break;
        run.apply(c->move, cfg_.mode);
      }
    }
    set(run, AuditStatus::kConverged, {});
  }

  double score(const Run& run) const {
    if (run.status != AuditStatus::kConverged) return std::numeric_limits<double>::infinity();
    return weights_.dot(run.trajectory.back());
  }

  // Kicks: every template at a few fixed fractions of its domain, then (on
  // tiny instances) every ordered pair of full-domain kicks, each followed
  // by a fresh descent. Adopts the first kicked run that ends strictly
  // better.
  bool escape(Run& run, bool pairs) const {
    const double current = score(run);
    auto improves = [&](Run& trial) {
      descend(trial, std::min(cfg_.max_iters, kTrialIterLimit));
      if (score(trial) < current - cfg_.stop_tol) {
        run = std::move(trial);
        return true;
      }
      return false;
    };
    const std::vector<ExchangeMove> shapes = shapes_for(run.ev);
    for (const ExchangeMove& shape : shapes) {
      for (double frac : kKickFractions) {
        Run trial = run;
        trial.iters = 0;
        if (kick(trial, shape, frac) && improves(trial)) return true;
      }
    }
    if (!pairs) return false;
    for (const ExchangeMove& first : shapes) {
      for (double f1 : {1.0, -1.0}) {
        Run base = run;
        base.iters = 0;
        if (!kick(base, first, f1)) continue;
        for (const ExchangeMove& second : shapes_for(base.ev)) {
          if (second.j == first.j && second.k == first.k && second.gain == first.gain &&
              second.give == first.give) {
            continue;
          }
          for (double f2 : {1.0, -1.0}) {
            Run trial = base;
            if (kick(trial, second, f2) && improves(trial)) return true;
          }
        }
      }
    }
    return false;
  }

 private:
  std::vector<ExchangeMove> shapes_for(const MoveEvaluator& ev) const {
    std::vector<ExchangeMove> out;
    const Index n = ev.probs().rows();
    for (Index j = 0; j < n; ++j) {
      for (Index k = j + 1; k < n; ++k) {
        for (const Pattern& pat : patterns_) {
          if (pat.mode == ExchangeMode::kConstant &&
              (ev.row_is_empty(j) || ev.row_is_empty(k))) {
            continue;
          }
          ExchangeMove shape;
          shape.mode = pat.mode;
          shape.j = j;
          shape.k = k;
          shape.gain = pat.gain;
          shape.give = pat.give;
          out.push_back(std::move(shape));
        }
      }
    }
    return out;
  }

  bool kick(Run& run, ExchangeMove shape, double frac) const {
    const DeltaInterval dom = run.ev.domain(shape);
    if (dom.degenerate()) return false;
    const double raw = frac > 0.0 ? frac * dom.hi : -frac * dom.lo;
    const double delta = snap_delta(raw, dom);
    if (delta == 0.0) return false;
    shape.delta = delta;
    run.apply(shape, cfg_.mode);
    return true;
  }

 private:
  static void set(Run& run, AuditStatus s, std::string msg) {
    run.status = s;
    run.message = std::move(msg);
  }

  const JointDistribution& d_;
  const AuditConfig& cfg_;
  Eigen::VectorXd weights_;
  std::vector<MiBound> bounds_;
  std::vector<Pattern> patterns_;
};

}  // namespace

namespace {

AuditResult run_audit(const JointDistribution& d, const AuditConfig& cfg,
                      const AuditResult* start) {
  if (auto v = validate(cfg, d); !v.ok) throw std::invalid_argument(v.message);
  const Index n_char = d.characteristic_count();
  Eigen::VectorXd weights =
      cfg.weights.size() == 0 ? Eigen::VectorXd::Zero(n_char) : cfg.weights;

  std::vector<MiBound> bounds = effective_bounds(cfg, d);
  std::stable_sort(bounds.begin(), bounds.end(),
                   [&](const MiBound& a, const MiBound& b) {
                     const bool pa = d.characteristic(a.characteristic).role == Role::kPrivate;
                     const bool pb = d.characteristic(b.characteristic).role == Role::kPrivate;
                     return pa && !pb;
                   });

  Run run{MoveEvaluator(start ? start->audited : d), {}, {}, 0, AuditStatus::kConverged, {}};
  if (start) {
    run.moves = start->moves;
    run.trajectory = start->trajectory;
  } else {
    run.trajectory.push_back(current_bits(run.ev));
  }
  auto finish = [&](Run& r) {
    const double objective = weights.dot(r.trajectory.back());
    return AuditResult{d.with_probs(r.ev.probs()), std::move(r.moves), std::move(r.trajectory),
                       objective, r.status, std::move(r.message)};
  };

  const double tol = cfg.feasibility_tol;
  for (const MiBound& b : bounds) {
    const double ceiling = characteristic_entropy(d, b.characteristic);
    if ((b.relation == Relation::kAtLeast && b.bits > ceiling + tol) ||
        (b.relation == Relation::kAtMost && b.bits < -tol)) {
      run.status = AuditStatus::kInfeasibleBounds;
      run.message = describe(b, d) + " lies outside the attainable range";
      return finish(run);
    }
  }

  const Descent descent(d, cfg, weights, bounds);
  descent.descend(run);
  const std::size_t templates =
      descent.patterns().size() * static_cast<std::size_t>(d.interval_count() * (d.interval_count() - 1) / 2);
  if (templates <= kEscapeTemplateLimit && run.status != AuditStatus::kIterationLimit) {
    const bool pairs = templates <= kPairKickTemplateLimit;
    for (int round = 0; round < kEscapeRounds && descent.escape(run, pairs); ++round) {
    }
  }
  return finish(run);
}

}  // namespace

AuditResult solve_audit(const JointDistribution& d, const AuditConfig& cfg) {
  return run_audit(d, cfg, nullptr);
}

namespace internal {

AuditResult resume_audit(const JointDistribution& d, const AuditConfig& cfg,
                         const AuditResult& start) {
  return run_audit(d, cfg, &start);
}

}  // namespace internal

JointDistribution replay_moves(const JointDistribution& d,
                               std::span<const ExchangeMove> moves) {
  Eigen::MatrixXd p = d.probs();
  for (const ExchangeMove& mv : moves) apply_move_inplace(p, mv);
  return d.with_probs(std::move(p));
}

}  // namespace paudit
