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

// Record-level input: quantization of the data column, MI-maximizing
// bipartition of characteristics, empirical joints, and the per-combination
// transport plan that turns an audited distribution back into records.

#ifndef PAUDIT_INGEST_HPP_
#define PAUDIT_INGEST_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "paudit/distribution.hpp"

namespace paudit {

struct Record {
  std::string id;
  double value = 0.0;
  // Value index of each declared characteristic.
  std::vector<Index> categories;
};

struct RecordSet {
  std::vector<CharacteristicSpec> characteristics;
  std::vector<Record> records;
};

// How repeated rows of one id (a time series) collapse to a single value.
enum class Reducer { kMean, kMax, kSum };

std::string_view to_string(Reducer r);
Reducer parse_reducer(std::string_view text);

// Parses `id,value,<characteristic>...` CSV. Columns are matched to the
// schema by name; missing or undeclared columns and unknown category values
// are errors carrying the line number. Rows sharing an id are reduced and
// must agree on their characteristics. Records keep first-appearance order.
RecordSet read_records(std::istream& csv,
                       const std::vector<CharacteristicSpec>& schema,
                       Reducer reducer = Reducer::kMean);

void write_records(std::ostream& csv, const RecordSet& rs);

enum class QuantizerStrategy { kEqualFrequency, kEqualWidth };

std::string_view to_string(QuantizerStrategy s);
QuantizerStrategy parse_strategy(std::string_view text);

struct Quantizer {
  QuantizerStrategy strategy = QuantizerStrategy::kEqualFrequency;
  Index interval_count = 8;
  std::vector<double> cuts;  // interval_count - 1, strictly increasing

  // Number of cuts strictly below v.
  Index bin(double v) const;
};

// Equal-frequency cuts are the k/N sample quantiles with linear
// interpolation between order statistics; equal-width cuts split
// [min, max] uniformly.
Quantizer fit_quantizer(const RecordSet& rs, QuantizerStrategy strategy,
                        Index interval_count);

// Two-sided grouping of one characteristic's values. Side 0 always holds
// value 0.
struct Bipartition {
  Index characteristic = 0;
  std::vector<Index> side;  // 0 or 1 per original value
  double mi = 0.0;          // bits, on the quantized data

  std::vector<Index> members(Index s) const;
  std::string label(const CharacteristicSpec& c, Index s) const;
};

inline constexpr Index kMaxBinarizeValues = 20;

// Exhaustive search over all nontrivial bipartitions (or only the
// contiguous ones) for the largest MI with the quantized data. Ties within
// 1e-12 go to the lexicographically smallest side-0 member list.
Bipartition binarize_characteristic(const RecordSet& rs, const Quantizer& q,
                                    Index m, bool contiguous = false);

// Normalized counts over (interval, combination). A bipartition replaces its
// characteristic by a binary one; characteristics without one keep all
// values. Cell masses are count / record count.
JointDistribution build_empirical_joint(
    const RecordSet& rs, const Quantizer& q,
    const std::vector<std::optional<Bipartition>>& partitions = {});

// Interval index of every record, in record order.
std::vector<Index> quantize_records(const RecordSet& rs, const Quantizer& q);
// Combination index of every record under the given partitions.
std::vector<Index> combine_records(const RecordSet& rs,
                                   const std::vector<std::optional<Bipartition>>& partitions);

// couplings[r](i, i') = P(released interval i' | interval i, combination r).
struct ReleasePlan {
  std::vector<Eigen::MatrixXd> couplings;
};

// Northwest-corner coupling per combination between the before and after
// columns; rows of zero mass become identity rows. Throws
// std::invalid_argument when the combination marginals differ by more than
// 1e-12 or the layouts differ.
ReleasePlan build_release_plan(const JointDistribution& before,
                               const JointDistribution& after);

// Per-record randomized reassignment of intervals under the plan.
std::vector<Index> sample_release(const ReleasePlan& plan,
                                  const std::vector<Index>& intervals,
                                  const std::vector<Index>& combinations,
                                  std::uint64_t seed);

// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw.
template <typename Engine>
double unit_uniform(Engine& rng) {
  return static_cast<double>(rng() >> 11) * 0x1p-53;
}

// Synthetic records: characteristic values drawn uniformly, value =
// base + sum of per-value effects + gaussian noise.
struct SyntheticSpec {
  std::vector<CharacteristicSpec> characteristics;
  // effects[m][v] shifts the value of records with characteristic m = v.
  std::vector<std::vector<double>> effects;
  std::size_t record_count = 200;
  double base = 10.0;
  double noise = 1.0;
};

// Two binary characteristics (one private, one nonprivate) with moderate
// effects on the value.
SyntheticSpec default_synthetic_spec();

RecordSet generate_records(const SyntheticSpec& spec, std::uint64_t seed);

}  // namespace paudit

#endif  // PAUDIT_INGEST_HPP_
