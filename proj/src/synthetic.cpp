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

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "paudit/ingest.hpp"

namespace paudit {
namespace {

// Box-Muller on two unit uniforms.
template <typename Engine>
double standard_normal(Engine& rng) {
  double u1 = unit_uniform(rng);
  while (u1 <= 0.0) u1 = unit_uniform(rng);
  const double u2 = unit_uniform(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

SyntheticSpec default_synthetic_spec() {
  SyntheticSpec spec;
  spec.characteristics = {
      {"income", {"low", "high"}, Role::kPrivate},
      {"household", {"small", "large"}, Role::kNonprivate},
  };
  spec.effects = {{0.0, 1.5}, {0.0, 0.8}};
  return spec;
}

RecordSet generate_records(const SyntheticSpec& spec, std::uint64_t seed) {
  if (spec.effects.size() != spec.characteristics.size()) {
    throw std::invalid_argument("one effect list per characteristic required");
  }
  for (std::size_t m = 0; m < spec.characteristics.size(); ++m) {
    if (spec.effects[m].size() != spec.characteristics[m].values.size()) {
      throw std::invalid_argument("effects of '" + spec.characteristics[m].name +
                                  "' must match its values");
    }
  }
  std::mt19937_64 rng(seed);
  RecordSet rs;
  rs.characteristics = spec.characteristics;
  rs.records.reserve(spec.record_count);
  for (std::size_t q = 0; q < spec.record_count; ++q) {
    Record rec;
    rec.id = "r" + std::to_string(q);
    double v = spec.base;
    for (std::size_t m = 0; m < spec.characteristics.size(); ++m) {
      const auto k = static_cast<double>(spec.characteristics[m].values.size());
      const auto c = std::min(static_cast<Index>(unit_uniform(rng) * k),
                              static_cast<Index>(k) - 1);
      rec.categories.push_back(c);
      v += spec.effects[m][static_cast<std::size_t>(c)];
    }
    rec.value = v + spec.noise * standard_normal(rng);
    rs.records.push_back(std::move(rec));
  }
  return rs;
}

}  // namespace paudit
