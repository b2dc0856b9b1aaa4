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

#include "paudit/json_io.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

namespace paudit {
namespace {

[[noreturn]] void bad(const std::string& msg) { throw std::invalid_argument(msg); }

const Json& need(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) bad(where + ": expected an object");
  const auto it = j.find(key);
  if (it == j.end()) bad(where + ": missing key '" + key + "'");
  return *it;
}

void only_keys(const Json& j, std::initializer_list<const char*> keys,
               const std::string& where) {
  if (!j.is_object()) bad(where + ": expected an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) bad(where + ": unknown key '" + k + "'");
  }
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) bad(where + ": expected a number");
  return j.get<double>();
}

Index integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) bad(where + ": expected an integer");
  return j.get<Index>();
}

Json vec(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json mat(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (Index i = 0; i < m.rows(); ++i) out.push_back(vec(m.row(i).transpose()));
  return out;
}

Index name_index(const JointDistribution& d, const std::string& name,
                 const std::string& where) {
  for (Index m = 0; m < d.characteristic_count(); ++m) {
    if (d.characteristic(m).name == name) return m;
  }
  bad(where + ": unknown characteristic '" + name + "'");
}

}  // namespace

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

Json parse_json(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    bad(std::string(what) + ": " + e.what());
  }
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Json characteristics_to_json(const std::vector<CharacteristicSpec>& chars) {
  Json out = Json::array();
  for (const auto& c : chars) {
    out.push_back({{"name", c.name}, {"values", c.values}, {"role", std::string(to_string(c.role))}});
  }
  return out;
}

std::vector<CharacteristicSpec> characteristics_from_json(const Json& j) {
  if (!j.is_array()) bad("characteristics: expected an array");
  std::vector<CharacteristicSpec> out;
  for (std::size_t m = 0; m < j.size(); ++m) {
    const std::string where = "characteristics[" + std::to_string(m) + "]";
    only_keys(j[m], {"name", "values", "role"}, where);
    CharacteristicSpec c;
    const Json& name = need(j[m], "name", where);
    if (!name.is_string()) bad(where + ".name: expected a string");
    c.name = name.get<std::string>();
    const Json& values = need(j[m], "values", where);
    if (!values.is_array()) bad(where + ".values: expected an array");
    for (const Json& v : values) {
      if (!v.is_string()) bad(where + ".values: expected strings");
      c.values.push_back(v.get<std::string>());
    }
    const Json& role = need(j[m], "role", where);
    if (!role.is_string()) bad(where + ".role: expected a string");
    c.role = parse_role(role.get<std::string>());
    out.push_back(std::move(c));
  }
  return out;
}

Json distribution_to_json(const JointDistribution& d) {
  return {{"characteristics", characteristics_to_json(d.characteristics())},
          {"interval_count", d.interval_count()},
          {"probs", mat(d.probs())}};
}

JointDistribution distribution_from_json(const Json& j) {
  only_keys(j, {"characteristics", "interval_count", "probs"}, "distribution");
  auto chars = characteristics_from_json(need(j, "characteristics", "distribution"));
  const Json& n = need(j, "interval_count", "distribution");
  if (!n.is_number_integer() || n.get<long long>() < 1) {
    bad("distribution.interval_count: expected a positive integer");
  }
  const Json& rows = need(j, "probs", "distribution");
  if (!rows.is_array() || static_cast<long long>(rows.size()) != n.get<long long>()) {
    bad("distribution.probs: expected interval_count rows");
  }
  Index cols = -1;
  for (const Json& r : rows) {
    if (!r.is_array()) bad("distribution.probs: rows must be arrays");
    if (cols >= 0 && static_cast<Index>(r.size()) != cols) {
      bad("distribution.probs: rows have different lengths");
    }
    cols = static_cast<Index>(r.size());
  }
  Eigen::MatrixXd p(static_cast<Index>(rows.size()), std::max<Index>(cols, 0));
  for (Index i = 0; i < p.rows(); ++i) {
    for (Index c = 0; c < p.cols(); ++c) {
      p(i, c) = number(rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)],
                       "distribution.probs");
    }
  }
  try {
    return JointDistribution(std::move(chars), std::move(p));
  } catch (const std::exception& e) {
    bad(std::string("distribution: ") + e.what());
  }
}

std::vector<CharacteristicSpec> record_schema_from_json(const Json& j) {
  only_keys(j, {"schema", "characteristics"}, "record schema");
  const Json& s = need(j, "schema", "record schema");
  if (!s.is_string() || s.get<std::string>() != kRecordSchema) {
    bad("record schema: schema must be \"" + std::string(kRecordSchema) + "\"");
  }
  return characteristics_from_json(need(j, "characteristics", "record schema"));
}

Json record_schema_to_json(const std::vector<CharacteristicSpec>& chars) {
  return {{"schema", std::string(kRecordSchema)}, {"characteristics", characteristics_to_json(chars)}};
}

Json report_to_json(const MiReport& report) {
  Json chars = Json::array();
  for (const auto& c : report.characteristics) {
    chars.push_back({{"name", c.name},
                     {"role", std::string(to_string(c.role))},
                     {"entropy", c.entropy},
                     {"data_given_characteristic", c.data_given_characteristic},
                     {"mi", c.mi}});
  }
  Json regions = Json::array();
  for (const auto& r : report.regions) {
    regions.push_back({{"private", report.characteristics[static_cast<std::size_t>(r.private_index)].name},
                       {"nonprivate", report.characteristics[static_cast<std::size_t>(r.nonprivate_index)].name},
                       {"private_max", r.private_max},
                       {"nonprivate_max", r.nonprivate_max},
                       {"difference_lower", r.difference_lower},
                       {"difference_upper", r.difference_upper}});
  }
  return {{"unit", std::string(unit_name(report.base))},
          {"data_entropy", report.data_entropy},
          {"characteristics", chars},
          {"regions", regions}};
}

Json move_to_json(const ExchangeMove& mv) {
  return {{"mode", std::string(to_string(mv.mode))},
          {"j", mv.j},
          {"k", mv.k},
          {"r", mv.gain},
          {"s", mv.give},
          {"delta", mv.delta}};
}

Json move_to_json(const ExchangeMove& mv, const Eigen::VectorXd& mi_after) {
  Json out = move_to_json(mv);
  out["mi_after"] = vec(mi_after);
  return out;
}

ExchangeMove move_from_json(const Json& j) {
  only_keys(j, {"mode", "j", "k", "r", "s", "delta", "mi_after"}, "move");
  ExchangeMove mv;
  const Json& mode = need(j, "mode", "move");
  if (!mode.is_string()) bad("move.mode: expected a string");
  mv.mode = parse_mode(mode.get<std::string>());
  mv.j = integer(need(j, "j", "move"), "move.j");
  mv.k = integer(need(j, "k", "move"), "move.k");
  for (const char* key : {"r", "s"}) {
    const Json& list = need(j, key, "move");
    const std::string where = std::string("move.") + key;
    if (!list.is_array()) bad(where + ": expected an array of combination indices");
    auto& dst = key[0] == 'r' ? mv.gain : mv.give;
    for (const Json& r : list) dst.push_back(integer(r, where));
  }
  mv.delta = number(need(j, "delta", "move"), "move.delta");
  return mv;
}

AuditConfig config_from_json(const Json& j, const JointDistribution& d) {
  only_keys(j,
            {"schema", "mode", "sense", "weights", "privacy_bounds", "utility_bounds",
             "upper_bounds", "lower_bounds", "epsilon", "eta", "stop_tol", "max_iters",
             "feasibility_tol"},
            "config");
  const Json& schema = need(j, "schema", "config");
  if (!schema.is_string() || schema.get<std::string>() != kConfigSchema) {
    bad("config: schema must be \"" + std::string(kConfigSchema) + "\"");
  }
  AuditConfig cfg;
  if (j.contains("mode")) {
    if (!j["mode"].is_string()) bad("config.mode: expected a string");
    cfg.mode = parse_mode(j["mode"].get<std::string>());
  }
  double sign = 1.0;
  if (j.contains("sense")) {
    const Json& s = j["sense"];
    if (s == "minimize") {
      sign = 1.0;
    } else if (s == "maximize") {
      sign = -1.0;
    } else {
      bad("config.sense: expected \"minimize\" or \"maximize\"");
    }
  }
  cfg.weights = Eigen::VectorXd::Zero(d.characteristic_count());
  if (j.contains("weights")) {
    const Json& w = j["weights"];
    if (!w.is_object()) bad("config.weights: expected an object of name: weight");
    for (const auto& [name, val] : w.items()) {
      cfg.weights(name_index(d, name, "config.weights")) =
          sign * number(val, "config.weights." + name);
    }
  }
  auto read_bounds = [&](const char* key, Relation rel, std::optional<Role> role) {
    if (!j.contains(key)) return;
    const Json& b = j[key];
    const std::string where = std::string("config.") + key;
    if (!b.is_object()) bad(where + ": expected an object of name: bits");
    for (const auto& [name, val] : b.items()) {
      const Index m = name_index(d, name, where);
      if (role && d.characteristic(m).role != *role) {
        bad(where + ": '" + name + "' is not " +
            (*role == Role::kPrivate ? "private" : "nonprivate"));
      }
      cfg.bounds.push_back({m, rel, number(val, where + "." + name)});
    }
  };
  read_bounds("privacy_bounds", Relation::kAtMost, Role::kPrivate);
  read_bounds("utility_bounds", Relation::kAtLeast, Role::kNonprivate);
  read_bounds("upper_bounds", Relation::kAtMost, std::nullopt);
  read_bounds("lower_bounds", Relation::kAtLeast, std::nullopt);
  if (j.contains("epsilon")) cfg.epsilon = number(j["epsilon"], "config.epsilon");
  if (j.contains("eta")) cfg.eta = number(j["eta"], "config.eta");
  if (j.contains("stop_tol")) cfg.stop_tol = number(j["stop_tol"], "config.stop_tol");
  if (j.contains("feasibility_tol")) {
    cfg.feasibility_tol = number(j["feasibility_tol"], "config.feasibility_tol");
  }
  if (j.contains("max_iters")) {
    if (!j["max_iters"].is_number_integer()) bad("config.max_iters: expected an integer");
    cfg.max_iters = j["max_iters"].get<std::int64_t>();
  }
  if (auto v = validate(cfg, d); !v.ok) bad("config: " + v.message);
  return cfg;
}

Json config_to_json(const AuditConfig& cfg, const JointDistribution& d) {
  Json out;
  out["schema"] = std::string(kConfigSchema);
  out["mode"] = std::string(to_string(cfg.mode));
  out["sense"] = "minimize";
  Json w = Json::object();
  for (Index m = 0; m < cfg.weights.size(); ++m) w[d.characteristic(m).name] = cfg.weights(m);
  out["weights"] = w;
  Json upper = Json::object();
  Json lower = Json::object();
  for (const MiBound& b : cfg.bounds) {
    (b.relation == Relation::kAtMost ? upper : lower)[d.characteristic(b.characteristic).name] =
        b.bits;
  }
  out["upper_bounds"] = upper;
  out["lower_bounds"] = lower;
  if (cfg.epsilon) out["epsilon"] = *cfg.epsilon;
  if (cfg.eta) out["eta"] = *cfg.eta;
  out["stop_tol"] = cfg.stop_tol;
  out["max_iters"] = cfg.max_iters;
  out["feasibility_tol"] = cfg.feasibility_tol;
  return out;
}

Json audit_result_to_json(const AuditResult& res) {
  Json moves = Json::array();
  for (std::size_t t = 0; t < res.moves.size(); ++t) {
    moves.push_back(move_to_json(res.moves[t], res.trajectory[t + 1]));
  }
  Json traj = Json::array();
  for (const auto& v : res.trajectory) traj.push_back(vec(v));
  return {{"unit", "bits"},
          {"status", std::string(to_string(res.status))},
          {"message", res.message},
          {"objective", res.objective},
          {"distribution", distribution_to_json(res.audited)},
          {"moves", moves},
          {"trajectory", traj}};
}

Json propositions_to_json(const PropositionReport& rep) {
  Json classes = Json::array();
  for (IntervalClass c : rep.classification.classes) classes.push_back(std::string(to_string(c)));
  Json out = {{"prop1", rep.zero_leakage},
              {"prop2", rep.max_utility},
              {"prop3", rep.pareto},
              {"unit", "bits"},
              {"private_mi", rep.private_mi},
              {"nonprivate_mi", rep.nonprivate_mi},
              {"nonprivate_entropy", rep.nonprivate_entropy},
              {"classification",
               {{"classes", classes},
                {"balanced_member", rep.classification.balanced_member},
                {"private_ratio_member", rep.classification.private_ratio_member},
                {"partition_holds", rep.classification.partition_holds}}}};
  if (rep.witness) {
    out["witness"] = {{"move", move_to_json(rep.witness->move)},
                      {"delta_private", rep.witness->delta_private},
                      {"delta_nonprivate", rep.witness->delta_nonprivate}};
  }
  return out;
}

Json stepwise_to_json(const StepwiseResult& res) {
  Json steps = Json::array();
  for (std::size_t s = 0; s < res.steps.size(); ++s) {
    Json moves = Json::array();
    for (const auto& mv : res.steps[s].moves) moves.push_back(move_to_json(mv));
    steps.push_back({{"step", s + 1}, {"moves", moves}, {"mi_after", vec(res.steps[s].mi_after)}});
  }
  return {{"unit", "bits"},
          {"initial_mi", vec(res.initial_mi)},
          {"steps", steps},
          {"distribution", distribution_to_json(res.audited)}};
}

Json quantizer_to_json(const Quantizer& q) {
  return {{"strategy", std::string(to_string(q.strategy))},
          {"interval_count", q.interval_count},
          {"cuts", q.cuts}};
}

Quantizer quantizer_from_json(const Json& j) {
  only_keys(j, {"strategy", "interval_count", "cuts"}, "quantizer");
  Quantizer q;
  const Json& strategy = need(j, "strategy", "quantizer");
  if (!strategy.is_string()) bad("quantizer.strategy: expected a string");
  q.strategy = parse_strategy(strategy.get<std::string>());
  q.interval_count = integer(need(j, "interval_count", "quantizer"), "quantizer.interval_count");
  const Json& cuts = need(j, "cuts", "quantizer");
  if (!cuts.is_array()) bad("quantizer.cuts: expected an array");
  for (const Json& c : cuts) q.cuts.push_back(number(c, "quantizer.cuts"));
  if (q.interval_count < 2 || static_cast<Index>(q.cuts.size()) != q.interval_count - 1) {
    bad("quantizer: expected interval_count - 1 cuts");
  }
  if (!std::is_sorted(q.cuts.begin(), q.cuts.end(), std::less_equal<>())) {
    bad("quantizer.cuts: expected strictly increasing values");
  }
  return q;
}

Bipartition bipartition_from_json(const Json& j, const CharacteristicSpec& c, Index m) {
  only_keys(j, {"characteristic", "sides", "mi"}, "partition");
  if (need(j, "characteristic", "partition") != c.name) {
    bad("partition: characteristic does not match '" + c.name + "'");
  }
  const Json& sides = need(j, "sides", "partition");
  if (!sides.is_array() || sides.size() != 2) bad("partition.sides: expected two lists");
  Bipartition bp;
  bp.characteristic = m;
  bp.side.assign(c.values.size(), -1);
  for (Index s = 0; s < 2; ++s) {
    const Json& list = sides[static_cast<std::size_t>(s)];
    if (!list.is_array()) bad("partition.sides: expected two lists");
    for (const Json& v : list) {
      if (!v.is_string()) bad("partition.sides: expected value names");
      const auto it = std::find(c.values.begin(), c.values.end(), v.get<std::string>());
      if (it == c.values.end()) bad("partition: unknown value of '" + c.name + "'");
      bp.side[static_cast<std::size_t>(it - c.values.begin())] = s;
    }
  }
  if (std::find(bp.side.begin(), bp.side.end(), -1) != bp.side.end()) {
    bad("partition of '" + c.name + "' does not cover every value");
  }
  bp.mi = number(need(j, "mi", "partition"), "partition.mi");
  return bp;
}

Json bipartition_to_json(const Bipartition& bp, const CharacteristicSpec& c) {
  Json sides = Json::array();
  for (Index s = 0; s < 2; ++s) {
    Json names = Json::array();
    for (Index v : bp.members(s)) names.push_back(c.values[static_cast<std::size_t>(v)]);
    sides.push_back(names);
  }
  return {{"characteristic", c.name}, {"sides", sides}, {"mi", bp.mi}};
}

Json release_plan_to_json(const ReleasePlan& plan, const JointDistribution& d) {
  Json combos = Json::array();
  const CombinationIndex& idx = d.combinations();
  for (std::size_t r = 0; r < plan.couplings.size(); ++r) {
    Json labels = Json::array();
    for (Index m = 0; m < idx.rank(); ++m) {
      labels.push_back(d.characteristic(m).values[static_cast<std::size_t>(
          idx.digit(static_cast<Index>(r), m))]);
    }
    combos.push_back({{"combination", r}, {"labels", labels}, {"coupling", mat(plan.couplings[r])}});
  }
  return {{"interval_count", d.interval_count()}, {"combinations", combos}};
}

ReleasePlan release_plan_from_json(const Json& j) {
  only_keys(j, {"interval_count", "combinations"}, "release plan");
  const Index n = integer(need(j, "interval_count", "release plan"), "release plan.interval_count");
  if (n < 1) bad("release plan.interval_count: expected a positive integer");
  const Json& combos = need(j, "combinations", "release plan");
  if (!combos.is_array()) bad("release plan.combinations: expected an array");
  ReleasePlan plan;
  for (const Json& c : combos) {
    const Json& rows = need(c, "coupling", "release plan combination");
    Eigen::MatrixXd k(n, n);
    if (!rows.is_array() || static_cast<Index>(rows.size()) != n) {
      bad("release plan: coupling must be interval_count x interval_count");
    }
    for (Index i = 0; i < n; ++i) {
      const Json& row = rows[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<Index>(row.size()) != n) {
        bad("release plan: coupling must be interval_count x interval_count");
      }
      for (Index q = 0; q < n; ++q) k(i, q) = number(row[static_cast<std::size_t>(q)], "release plan");
    }
    plan.couplings.push_back(std::move(k));
  }
  return plan;
}

}  // namespace paudit
