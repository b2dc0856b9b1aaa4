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

// One-dimensional search over delta for a single move template. The value
// callback returns the quantity to minimize, or nullopt where the move would
// break a constraint. The feasible range is truncated at the first crossing
// on each side of zero.

#ifndef PAUDIT_SRC_LINE_SEARCH_HPP_
#define PAUDIT_SRC_LINE_SEARCH_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "paudit/exchange.hpp"

namespace paudit::internal {

struct LineOptions {
  int grid_per_side = 32;
  int bisect_iters = 48;
  int golden_iters = 64;
  // Only the truncated endpoints and the extra candidates are tried.
  bool endpoints_and_extras_only = false;
};

struct LineResult {
  double delta = 0.0;
  double value = std::numeric_limits<double>::infinity();
  DeltaInterval feasible;  // truncated range containing zero
};

template <typename ValueFn>
LineResult search_line(const DeltaInterval& dom, ValueFn&& value,
                       std::span<const double> extras,
                       const LineOptions& opt = {}) {
  LineResult out;
  const std::optional<double> at_zero = value(0.0);
  out.value = at_zero.value_or(std::numeric_limits<double>::infinity());
  out.delta = 0.0;
  out.feasible = {0.0, 0.0};

  // Sorted feasible sample points, used for bracketing.
  std::vector<std::pair<double, double>> samples;
  samples.emplace_back(0.0, out.value);

  auto scan_side = [&](double end) -> double {
    if (end == 0.0) return 0.0;
    double last_ok = 0.0;
    for (int q = 1; q <= opt.grid_per_side; ++q) {
      const double x = q == opt.grid_per_side ? end : end * q / opt.grid_per_side;
      const auto v = value(x);
      if (!v) {
        double good = last_ok;
        double bad = x;
        for (int it = 0; it < opt.bisect_iters; ++it) {
          const double mid = 0.5 * (good + bad);
          if (mid == good || mid == bad) break;
          const auto vm = value(mid);
          if (vm) {
            good = mid;
          } else {
            bad = mid;
          }
        }
        if (good != last_ok) {
          if (const auto vg = value(good)) samples.emplace_back(good, *vg);
        }
        return good;
      }
      samples.emplace_back(x, *v);
      last_ok = x;
    }
    return last_ok;
  };
  out.feasible.hi = scan_side(dom.hi);
  out.feasible.lo = scan_side(dom.lo);
  std::sort(samples.begin(), samples.end());

  auto consider = [&](double x, double v) {
    if (v < out.value) {
      out.value = v;
      out.delta = x;
    }
  };

  if (opt.endpoints_and_extras_only) {
    for (double x : {out.feasible.lo, out.feasible.hi}) {
      if (const auto v = value(x)) consider(x, *v);
    }
    for (double x : extras) {
      const double c = out.feasible.clamp(x);
      if (const auto v = value(c)) consider(c, *v);
    }
    return out;
  }

  std::size_t best = 0;
  for (std::size_t q = 0; q < samples.size(); ++q) {
    if (samples[q].second < samples[best].second) best = q;
  }
  consider(samples[best].first, samples[best].second);
  for (double x : extras) {
    const double c = out.feasible.clamp(x);
    if (const auto v = value(c)) consider(c, *v);
  }

  // Golden-section refinement between the neighbours of the best sample.
  if (samples.size() >= 2) {
    double a = samples[best > 0 ? best - 1 : 0].first;
    double b = samples[std::min(best + 1, samples.size() - 1)].first;
    auto f = [&](double x) {
      const auto v = value(x);
      return v ? *v : std::numeric_limits<double>::infinity();
    };
    constexpr double kInvPhi = 0.6180339887498949;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int it = 0; it < opt.golden_iters && b - a > 1e-17; ++it) {
      if (fc <= fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - kInvPhi * (b - a);
        fc = f(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + kInvPhi * (b - a);
        fd = f(d);
      }
    }
    consider(c, fc);
    consider(d, fd);
  }
  return out;
}

}  // namespace paudit::internal

#endif  // PAUDIT_SRC_LINE_SEARCH_HPP_
