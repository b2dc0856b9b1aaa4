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

#include "paudit/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "paudit/info_kernels.hpp"

namespace paudit {
namespace {

[[noreturn]] void fail_at(std::size_t line, const std::string& msg) {
  throw std::invalid_argument("line " + std::to_string(line) + ": " + msg);
}

std::vector<std::string> split_csv(const std::string& text, std::size_t line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (quoted) fail_at(line, "unterminated quoted field");
  out.push_back(std::move(cur));
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

std::string shortest(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

// MI (bits) of an N x 2 count table.
double count_mi(const Eigen::MatrixXd& counts) {
  const double total = counts.sum();
  if (total <= 0.0) return 0.0;
  const Eigen::MatrixXd p = counts / total;
  return std::max(0.0, mutual_information_nats(p) * log_scale(LogBase::kBits));
}

}  // namespace

std::string_view to_string(Reducer r) {
  switch (r) {
    case Reducer::kMean:
      return "mean";
    case Reducer::kMax:
      return "max";
    case Reducer::kSum:
      return "sum";
  }
  return "mean";
}

Reducer parse_reducer(std::string_view text) {
  if (text == "mean") return Reducer::kMean;
  if (text == "max") return Reducer::kMax;
  if (text == "sum") return Reducer::kSum;
  throw std::invalid_argument("unknown reducer '" + std::string(text) + "'");
}

RecordSet read_records(std::istream& csv,
                       const std::vector<CharacteristicSpec>& schema,
                       Reducer reducer) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(csv, line)) throw std::invalid_argument("empty CSV input");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split_csv(line, line_no);
  if (header.size() < 2 || header[0] != "id" || header[1] != "value") {
    fail_at(line_no, "header must start with id,value");
  }
  std::map<std::string, std::size_t> column;
  for (std::size_t c = 2; c < header.size(); ++c) {
    if (!column.emplace(header[c], c).second) {
      fail_at(line_no, "duplicate column '" + header[c] + "'");
    }
  }
  std::vector<std::size_t> col_of(schema.size());
  for (std::size_t m = 0; m < schema.size(); ++m) {
    const auto it = column.find(schema[m].name);
    if (it == column.end()) {
      fail_at(line_no, "missing characteristic column '" + schema[m].name + "'");
    }
    col_of[m] = it->second;
  }
  for (const auto& [name, c] : column) {
    const bool declared = std::any_of(schema.begin(), schema.end(),
                                      [&](const CharacteristicSpec& s) { return s.name == name; });
    if (!declared) fail_at(line_no, "column '" + name + "' is not declared in the schema");
  }
  std::vector<std::map<std::string, Index>> lookup(schema.size());
  for (std::size_t m = 0; m < schema.size(); ++m) {
    for (std::size_t v = 0; v < schema[m].values.size(); ++v) {
      lookup[m].emplace(schema[m].values[v], static_cast<Index>(v));
    }
  }

  RecordSet rs;
  rs.characteristics = schema;
  std::unordered_map<std::string, std::size_t> slot;
  std::vector<std::size_t> rows_per_record;
  while (std::getline(csv, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv(line, line_no);
    if (f.size() != header.size()) {
      fail_at(line_no, "expected " + std::to_string(header.size()) + " fields, got " +
                           std::to_string(f.size()));
    }
    double value = 0.0;
    const auto res = std::from_chars(f[1].data(), f[1].data() + f[1].size(), value);
    if (res.ec != std::errc() || res.ptr != f[1].data() + f[1].size() || !std::isfinite(value)) {
      fail_at(line_no, "value '" + f[1] + "' is not a finite number");
    }
    std::vector<Index> cats(schema.size());
    for (std::size_t m = 0; m < schema.size(); ++m) {
      const std::string& text = f[col_of[m]];
      const auto it = lookup[m].find(text);
      if (it == lookup[m].end()) {
        fail_at(line_no, "column '" + schema[m].name + "': undeclared value '" + text + "'");
      }
      cats[m] = it->second;
    }
    const auto [it, fresh] = slot.emplace(f[0], rs.records.size());
    if (fresh) {
      rs.records.push_back({f[0], value, std::move(cats)});
      rows_per_record.push_back(1);
      continue;
    }
    Record& rec = rs.records[it->second];
    if (rec.categories != cats) {
      fail_at(line_no, "id '" + f[0] + "' changes its characteristics");
    }
    ++rows_per_record[it->second];
    switch (reducer) {
      case Reducer::kMean:
      case Reducer::kSum:
        rec.value += value;
        break;
      case Reducer::kMax:
        rec.value = std::max(rec.value, value);
        break;
    }
  }
  if (reducer == Reducer::kMean) {
    for (std::size_t i = 0; i < rs.records.size(); ++i) {
      rs.records[i].value /= static_cast<double>(rows_per_record[i]);
    }
  }
  return rs;
}

void write_records(std::ostream& csv, const RecordSet& rs) {
  csv << "id,value";
  for (const auto& c : rs.characteristics) csv << ',' << csv_field(c.name);
  csv << '\n';
  for (const Record& r : rs.records) {
    csv << csv_field(r.id) << ',' << shortest(r.value);
    for (std::size_t m = 0; m < r.categories.size(); ++m) {
      csv << ',' << csv_field(rs.characteristics[m].values[static_cast<std::size_t>(r.categories[m])]);
    }
    csv << '\n';
  }
}

std::string_view to_string(QuantizerStrategy s) {
  return s == QuantizerStrategy::kEqualFrequency ? "equal-frequency" : "equal-width";
}

QuantizerStrategy parse_strategy(std::string_view text) {
  if (text == "equal-frequency") return QuantizerStrategy::kEqualFrequency;
  if (text == "equal-width") return QuantizerStrategy::kEqualWidth;
  throw std::invalid_argument("unknown quantizer strategy '" + std::string(text) + "'");
}

Index Quantizer::bin(double v) const {
  return static_cast<Index>(std::lower_bound(cuts.begin(), cuts.end(), v) - cuts.begin());
}

Quantizer fit_quantizer(const RecordSet& rs, QuantizerStrategy strategy,
                        Index interval_count) {
  if (interval_count < 2) throw std::invalid_argument("interval count must be at least 2");
  if (rs.records.empty()) throw std::invalid_argument("no records to quantize");
  std::vector<double> v;
  v.reserve(rs.records.size());
  for (const Record& r : rs.records) v.push_back(r.value);
  std::sort(v.begin(), v.end());
  std::set<double> uniq(v.begin(), v.end());
  Quantizer q{strategy, interval_count, {}};
  if (strategy == QuantizerStrategy::kEqualFrequency) {
    if (static_cast<Index>(uniq.size()) < interval_count) {
      throw std::invalid_argument("equal-frequency binning needs at least " +
                                  std::to_string(interval_count) + " distinct values, found " +
                                  std::to_string(uniq.size()));
    }
    const double n = static_cast<double>(v.size());
    for (Index k = 1; k < interval_count; ++k) {
      const double h = (n - 1.0) * static_cast<double>(k) / static_cast<double>(interval_count);
      const auto lo = static_cast<std::size_t>(std::floor(h));
      const std::size_t hi = std::min(lo + 1, v.size() - 1);
      q.cuts.push_back(v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]));
    }
  } else {
    if (uniq.size() < 2) throw std::invalid_argument("equal-width binning of a constant column");
    const double lo = v.front();
    const double hi = v.back();
    for (Index k = 1; k < interval_count; ++k) {
      q.cuts.push_back(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(interval_count));
    }
  }
  for (std::size_t k = 1; k < q.cuts.size(); ++k) {
    if (!(q.cuts[k] > q.cuts[k - 1])) {
      throw std::invalid_argument(
          "cut points are not strictly increasing; too many repeated values for " +
          std::to_string(interval_count) + " intervals");
    }
  }
  return q;
}

std::vector<Index> Bipartition::members(Index s) const {
  std::vector<Index> out;
  for (std::size_t v = 0; v < side.size(); ++v) {
    if (side[v] == s) out.push_back(static_cast<Index>(v));
  }
  return out;
}

std::string Bipartition::label(const CharacteristicSpec& c, Index s) const {
  std::string out;
  for (Index v : members(s)) {
    if (!out.empty()) out += '|';
    out += c.values[static_cast<std::size_t>(v)];
  }
  return out;
}

std::vector<Index> quantize_records(const RecordSet& rs, const Quantizer& q) {
  std::vector<Index> out;
  out.reserve(rs.records.size());
  for (const Record& r : rs.records) out.push_back(q.bin(r.value));
  return out;
}

Bipartition binarize_characteristic(const RecordSet& rs, const Quantizer& q,
                                    Index m, bool contiguous) {
  if (m < 0 || m >= static_cast<Index>(rs.characteristics.size())) {
    throw std::out_of_range("characteristic index out of range");
  }
  const Index k = rs.characteristics[static_cast<std::size_t>(m)].cardinality();
  if (k < 2) throw std::invalid_argument("characteristic needs at least 2 values");
  if (k > kMaxBinarizeValues) {
    throw std::invalid_argument("characteristic '" + rs.characteristics[static_cast<std::size_t>(m)].name +
                                "' has " + std::to_string(k) +
                                " values; group them before binarizing (limit 20)");
  }
  const Index n = q.interval_count;
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(n, k);
  for (const Record& r : rs.records) {
    counts(q.bin(r.value), r.categories[static_cast<std::size_t>(m)]) += 1.0;
  }

  Bipartition best;
  best.characteristic = m;
  bool have = false;
  std::vector<Index> best_members;
  auto consider = [&](const std::vector<Index>& side) {
    Eigen::MatrixXd table = Eigen::MatrixXd::Zero(n, 2);
    for (Index v = 0; v < k; ++v) table.col(side[static_cast<std::size_t>(v)]) += counts.col(v);
    const double mi = count_mi(table);
    Bipartition cand{m, side, mi};
    const std::vector<Index> mem = cand.members(0);
    if (!have || mi > best.mi + 1e-12 ||
        (std::abs(mi - best.mi) <= 1e-12 && mem < best_members)) {
      best = std::move(cand);
      best_members = mem;
      have = true;
    }
  };
  std::vector<Index> side(static_cast<std::size_t>(k), 0);
  if (contiguous) {
    for (Index cut = 1; cut < k; ++cut) {
      for (Index v = 0; v < k; ++v) side[static_cast<std::size_t>(v)] = v < cut ? 0 : 1;
      consider(side);
    }
  } else {
    const std::uint64_t limit = std::uint64_t{1} << (k - 1);
    for (std::uint64_t mask = 1; mask < limit; ++mask) {
      side[0] = 0;
      for (Index v = 1; v < k; ++v) side[static_cast<std::size_t>(v)] = (mask >> (v - 1)) & 1U;
      consider(side);
    }
  }
  return best;
}

std::vector<Index> combine_records(const RecordSet& rs,
                                   const std::vector<std::optional<Bipartition>>& partitions) {
  std::vector<Index> radices;
  for (std::size_t m = 0; m < rs.characteristics.size(); ++m) {
    const bool split = m < partitions.size() && partitions[m].has_value();
    radices.push_back(split ? 2 : rs.characteristics[m].cardinality());
  }
  const CombinationIndex idx(radices);
  std::vector<Index> out;
  out.reserve(rs.records.size());
  std::vector<Index> digits(rs.characteristics.size());
  for (const Record& r : rs.records) {
    for (std::size_t m = 0; m < digits.size(); ++m) {
      const bool split = m < partitions.size() && partitions[m].has_value();
      digits[m] = split ? partitions[m]->side[static_cast<std::size_t>(r.categories[m])]
                        : r.categories[m];
    }
    out.push_back(idx.flatten(digits));
  }
  return out;
}

JointDistribution build_empirical_joint(
    const RecordSet& rs, const Quantizer& q,
    const std::vector<std::optional<Bipartition>>& partitions) {
  if (rs.records.empty()) throw std::invalid_argument("empty record set");
  if (partitions.size() > rs.characteristics.size()) {
    throw std::invalid_argument("more partitions than characteristics");
  }
  std::vector<CharacteristicSpec> chars;
  for (std::size_t m = 0; m < rs.characteristics.size(); ++m) {
    const CharacteristicSpec& c = rs.characteristics[m];
    if (m < partitions.size() && partitions[m]) {
      const Bipartition& bp = *partitions[m];
      if (bp.side.size() != c.values.size()) {
        throw std::invalid_argument("partition of '" + c.name + "' does not cover its values");
      }
      chars.push_back({c.name, {bp.label(c, 0), bp.label(c, 1)}, c.role});
    } else {
      chars.push_back(c);
    }
  }
  const std::vector<Index> interval = quantize_records(rs, q);
  const std::vector<Index> comb = combine_records(rs, partitions);
  Index n_comb = 1;
  for (const auto& c : chars) n_comb *= c.cardinality();
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(q.interval_count, n_comb);
  for (std::size_t i = 0; i < interval.size(); ++i) counts(interval[i], comb[i]) += 1.0;
  return JointDistribution(std::move(chars), counts / static_cast<double>(rs.records.size()));
}

}  // namespace paudit
