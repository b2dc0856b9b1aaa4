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

#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "paudit/distribution.hpp"
#include "paudit/info_theory.hpp"
#include "paudit/ingest.hpp"
#include "paudit/json_io.hpp"
#include "paudit/optimizer.hpp"
#include "paudit/propositions.hpp"

namespace paudit::cli {
namespace {

struct Failure : std::runtime_error {
  Failure(int c, const std::string& msg) : std::runtime_error(msg), code(c) {}
  int code;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure(kInputError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Failure(kInputError, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Failure(kInputError, "write to '" + path + "' failed");
}

Json load_json(const std::string& path) { return parse_json(read_file(path), path); }

JointDistribution load_distribution(const std::string& path) {
  JointDistribution d = distribution_from_json(load_json(path));
  if (auto v = validate(d); !v.ok) throw Failure(kInputError, path + ": " + v.message);
  return d;
}

std::string fmt(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

struct Manifest {
  std::string command;
  std::vector<std::string> inputs;
  std::string config_digest;
  std::uint64_t seed = 0;
  std::vector<std::string> outputs;
};

void write_manifest(const std::string& out_path, const Manifest& m) {
  Json j = {{"command", m.command},
            {"inputs", m.inputs},
            {"config_digest", m.config_digest},
            {"seed", m.seed},
            {"version", kVersion},
            {"outputs", m.outputs}};
  write_file(out_path + ".manifest.json", dump_json(j));
}

// Writes to `path` or, when empty, to the stream.
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    write_file(path, text);
  }
}

double parse_number(const std::string& text, const std::string& what) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Failure(kInputError, what + ": '" + text + "' is not a number");
  }
  return v;
}

// [name<=|name>=]start:step:count or [name<=|name>=]v1,v2,...
SweepAxis parse_axis(const std::string& spec, const JointDistribution& d) {
  SweepAxis ax;
  std::string body = spec;
  const auto le = spec.find("<=");
  const auto ge = spec.find(">=");
  if (le != std::string::npos || ge != std::string::npos) {
    const auto at = le != std::string::npos ? le : ge;
    ax.relation = le != std::string::npos ? Relation::kAtMost : Relation::kAtLeast;
    try {
      ax.characteristic = d.find_characteristic(spec.substr(0, at));
    } catch (const std::out_of_range&) {
      throw Failure(kInputError, "--bounds: unknown characteristic '" + spec.substr(0, at) + "'");
    }
    body = spec.substr(at + 2);
  } else {
    const auto priv = d.characteristics_with_role(Role::kPrivate);
    if (priv.empty()) throw Failure(kInputError, "--bounds: no private characteristic to bound");
    ax.characteristic = priv.front();
    ax.relation = Relation::kAtMost;
  }
  if (std::count(body.begin(), body.end(), ':') == 2) {
    const auto a = body.find(':');
    const auto b = body.find(':', a + 1);
    const double start = parse_number(body.substr(0, a), "--bounds start");
    const double step = parse_number(body.substr(a + 1, b - a - 1), "--bounds step");
    const double count = parse_number(body.substr(b + 1), "--bounds count");
    if (count < 1 || count != static_cast<double>(static_cast<long>(count))) {
      throw Failure(kInputError, "--bounds: count must be a positive integer");
    }
    if (!(step > 0.0)) throw Failure(kInputError, "--bounds: step must be positive");
    for (long q = 0; q < static_cast<long>(count); ++q) {
      ax.values.push_back(start + step * static_cast<double>(q));
    }
  } else {
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) ax.values.push_back(parse_number(item, "--bounds"));
    std::sort(ax.values.begin(), ax.values.end());
  }
  if (ax.values.empty()) throw Failure(kInputError, "--bounds: no values in '" + spec + "'");
  return ax;
}

void apply_weight_overrides(AuditConfig& cfg, const JointDistribution& d,
                            const std::vector<std::string>& items, double sign) {
  for (const std::string& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Failure(kInputError, "--weights expects name=value");
    Index m = 0;
    try {
      m = d.find_characteristic(item.substr(0, eq));
    } catch (const std::out_of_range&) {
      throw Failure(kInputError, "--weights: unknown characteristic '" + item.substr(0, eq) + "'");
    }
    if (cfg.weights.size() == 0) cfg.weights = Eigen::VectorXd::Zero(d.characteristic_count());
    cfg.weights(m) = sign * parse_number(item.substr(eq + 1), "--weights");
  }
}

struct AuditInputs {
  AuditConfig cfg;
  std::string digest;
};

AuditInputs load_config(const std::string& path, const JointDistribution& d,
                        const std::string& mode, const std::vector<std::string>& weights) {
  const Json raw = load_json(path);
  AuditInputs in{config_from_json(raw, d), {}};
  if (!mode.empty()) in.cfg.mode = parse_mode(mode);
  const double sign = raw.contains("sense") && raw["sense"] == "maximize" ? -1.0 : 1.0;
  apply_weight_overrides(in.cfg, d, weights, sign);
  if (auto v = validate(in.cfg, d); !v.ok) throw Failure(kInputError, v.message);
  in.digest = hex64(fnv1a64(dump_json(config_to_json(in.cfg, d))));
  return in;
}

std::vector<std::optional<Bipartition>> partitions_from_meta(const Json& meta,
                                                             const RecordSet& rs) {
  std::vector<std::optional<Bipartition>> parts(rs.characteristics.size());
  for (const Json& p : meta.at("partitions")) {
    const std::string name = p.at("characteristic").get<std::string>();
    const auto it = std::find_if(rs.characteristics.begin(), rs.characteristics.end(),
                                 [&](const CharacteristicSpec& c) { return c.name == name; });
    if (it == rs.characteristics.end()) {
      throw Failure(kInputError, "ingest metadata names unknown characteristic '" + name + "'");
    }
    const auto m = static_cast<std::size_t>(it - rs.characteristics.begin());
    parts[m] = bipartition_from_json(p, *it, static_cast<Index>(m));
  }
  return parts;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"paudit: mutual-information privacy audits of discretized data"};
  app.require_subcommand(1);
  app.fallthrough();
  std::uint64_t seed = 0;
  app.add_option("--seed", seed, "Seed for all randomness")->capture_default_str();
  app.set_version_flag("--version", kVersion);

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Build a distribution from records");
  std::string csv_path, schema_path, out_path, meta_path, strategy = "equal-frequency",
                                                          reducer = "mean";
  Index intervals = 8;
  std::vector<std::string> binarize;
  bool binarize_all = false;
  bool contiguous = false;
  ingest->add_option("--csv", csv_path, "Record CSV (id,value,<characteristics>)")->required();
  ingest->add_option("--schema", schema_path, "Characteristic declarations (JSON)")->required();
  ingest->add_option("--out", out_path, "Distribution JSON output")->required();
  ingest->add_option("--meta", meta_path, "Quantizer and partition metadata output");
  ingest->add_option("--intervals", intervals, "Number of data intervals")->capture_default_str();
  ingest->add_option("--strategy", strategy, "equal-frequency | equal-width")->capture_default_str();
  ingest->add_option("--reducer", reducer, "mean | max | sum for repeated ids")->capture_default_str();
  ingest->add_option("--binarize", binarize, "Characteristics to binarize");
  ingest->add_flag("--binarize-all", binarize_all, "Binarize every non-binary characteristic");
  ingest->add_flag("--contiguous", contiguous, "Only contiguous bipartitions");

  // report
  auto* report = app.add_subcommand("report", "MI report of a distribution");
  std::string dist_path, log_base = "2";
  report->add_option("distribution", dist_path)->required();
  report->add_option("--log-base", log_base, "2 | e")->check(CLI::IsMember({"2", "e"}));
  report->add_option("--out", out_path);

  // audit
  auto* audit = app.add_subcommand("audit", "Run the audit optimizer");
  std::string config_path, mode, moves_path, plan_path;
  std::vector<std::string> weights;
  audit->add_option("distribution", dist_path)->required();
  audit->add_option("--config", config_path)->required();
  audit->add_option("--mode", mode, "constant | variable")->check(CLI::IsMember({"constant", "variable"}));
  audit->add_option("--weights", weights, "name=value overrides");
  audit->add_option("--out", out_path);
  audit->add_option("--moves", moves_path, "Move log (JSON lines)");
  audit->add_option("--release-plan", plan_path, "Transport plan output");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Frontier over a bound grid");
  std::vector<std::string> bounds;
  std::string json_path;
  int jobs = 1;
  sweep->add_option("distribution", dist_path)->required();
  sweep->add_option("--config", config_path)->required();
  sweep->add_option("--bounds", bounds, "[name<=|name>=]start:step:count or list")
      ->required()
      ->expected(1, 2);
  sweep->add_option("--mode", mode)->check(CLI::IsMember({"constant", "variable"}));
  sweep->add_option("--weights", weights);
  sweep->add_option("--out", out_path, "Frontier CSV")->required();
  sweep->add_option("--json", json_path, "Full results JSON");
  sweep->add_option("--jobs", jobs)->check(CLI::PositiveNumber);

  // check
  auto* check = app.add_subcommand("check", "Optimality conditions of a binary pair");
  check->add_option("distribution", dist_path)->required();
  check->add_option("--out", out_path);

  // stepwise
  auto* stepwise = app.add_subcommand("stepwise", "Three-step exchange procedure");
  double stop_tol = 1e-9;
  stepwise->add_option("distribution", dist_path)->required();
  stepwise->add_option("--stop-tol", stop_tol)->capture_default_str();
  stepwise->add_option("--out", out_path);

  // synth
  auto* synth = app.add_subcommand("synth", "Synthetic record set");
  std::size_t records = 200;
  synth->add_option("--csv", csv_path)->required();
  synth->add_option("--schema", schema_path)->required();
  synth->add_option("--records", records)->capture_default_str();

  // release
  auto* release = app.add_subcommand("release", "Randomized record release from a plan");
  release->add_option("--plan", plan_path)->required();
  release->add_option("--csv", csv_path)->required();
  release->add_option("--schema", schema_path)->required();
  release->add_option("--meta", meta_path, "Metadata written by ingest")->required();
  release->add_option("--reducer", reducer)->capture_default_str();
  release->add_option("--out", out_path)->required();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (ingest->parsed()) {
      const auto schema = record_schema_from_json(load_json(schema_path));
      std::ifstream csv(csv_path, std::ios::binary);
      if (!csv) throw Failure(kInputError, "cannot open '" + csv_path + "'");
      RecordSet rs;
      try {
        rs = read_records(csv, schema, parse_reducer(reducer));
      } catch (const std::invalid_argument& e) {
        throw Failure(kInputError, csv_path + ": " + e.what());
      }
      const Quantizer q = fit_quantizer(rs, parse_strategy(strategy), intervals);
      std::vector<std::optional<Bipartition>> parts(schema.size());
      for (std::size_t m = 0; m < schema.size(); ++m) {
        const bool named =
            std::find(binarize.begin(), binarize.end(), schema[m].name) != binarize.end();
        if (named || (binarize_all && schema[m].cardinality() > 2)) {
          parts[m] = binarize_characteristic(rs, q, static_cast<Index>(m), contiguous);
        }
      }
      for (const std::string& name : binarize) {
        if (std::none_of(schema.begin(), schema.end(),
                         [&](const CharacteristicSpec& c) { return c.name == name; })) {
          throw Failure(kInputError, "--binarize: unknown characteristic '" + name + "'");
        }
      }
      const JointDistribution d = build_empirical_joint(rs, q, parts);
      if (auto v = validate(d); !v.ok) throw Failure(kInputError, v.message);
      Json parts_json = Json::array();
      for (std::size_t m = 0; m < parts.size(); ++m) {
        if (parts[m]) parts_json.push_back(bipartition_to_json(*parts[m], schema[m]));
      }
      if (meta_path.empty()) meta_path = out_path + ".ingest.json";
      const Json meta = {{"quantizer", quantizer_to_json(q)},
                         {"partitions", parts_json},
                         {"record_count", rs.records.size()},
                         {"reducer", reducer}};
      write_file(out_path, dump_json(distribution_to_json(d)));
      write_file(meta_path, dump_json(meta));
      const std::string options = strategy + "|" + std::to_string(intervals) + "|" + reducer +
                                  "|" + (contiguous ? "contiguous" : "all");
      write_manifest(out_path, {"ingest", {csv_path, schema_path}, hex64(fnv1a64(options)), seed,
                                {out_path, meta_path}});
      return kOk;
    }

    if (report->parsed()) {
      const JointDistribution d = load_distribution(dist_path);
      const LogBase base = log_base == "e" ? LogBase::kNats : LogBase::kBits;
      emit(out_path, dump_json(report_to_json(full_report(d, base))), out);
      if (!out_path.empty()) {
        write_manifest(out_path, {"report", {dist_path}, hex64(fnv1a64(log_base)), seed, {out_path}});
      }
      return kOk;
    }

    if (audit->parsed()) {
      const JointDistribution d = load_distribution(dist_path);
      const AuditInputs in = load_config(config_path, d, mode, weights);
      const AuditResult res = solve_audit(d, in.cfg);
      emit(out_path, dump_json(audit_result_to_json(res)), out);
      std::vector<std::string> outputs;
      if (!out_path.empty()) outputs.push_back(out_path);
      if (!moves_path.empty()) {
        std::string lines;
        for (std::size_t t = 0; t < res.moves.size(); ++t) {
          lines += move_to_json(res.moves[t], res.trajectory[t + 1]).dump() + "\n";
        }
        write_file(moves_path, lines);
        outputs.push_back(moves_path);
      }
      if (!plan_path.empty() && res.status != AuditStatus::kInfeasibleBounds) {
        write_file(plan_path, dump_json(release_plan_to_json(build_release_plan(d, res.audited), d)));
        outputs.push_back(plan_path);
      }
      if (!out_path.empty()) {
        write_manifest(out_path, {"audit", {dist_path, config_path}, in.digest, seed, outputs});
      }
      if (res.status == AuditStatus::kInfeasibleBounds) {
        err << "infeasible: " << res.message << "\n";
        return kInfeasible;
      }
      return kOk;
    }

    if (sweep->parsed()) {
      const JointDistribution d = load_distribution(dist_path);
      const AuditInputs in = load_config(config_path, d, mode, weights);
      std::vector<SweepAxis> axes;
      for (const std::string& b : bounds) axes.push_back(parse_axis(b, d));
      const std::vector<SweepPoint> pts = sweep_frontier(d, in.cfg, axes, jobs);
      std::string csv;
      for (const SweepAxis& ax : axes) {
        csv += "bound:" + d.characteristic(ax.characteristic).name +
               std::string(to_string(ax.relation)) + ",";
      }
      for (Index m = 0; m < d.characteristic_count(); ++m) {
        csv += "mi:" + d.characteristic(m).name + ",";
      }
      csv += "objective,status\n";
      bool any_ok = false;
      Json all = Json::array();
      for (const SweepPoint& p : pts) {
        for (double b : p.bound_values) csv += fmt(b) + ",";
        const Eigen::VectorXd& mi = p.result.trajectory.back();
        for (Index m = 0; m < mi.size(); ++m) csv += fmt(mi(m)) + ",";
        csv += fmt(p.result.objective) + "," + std::string(to_string(p.result.status)) + "\n";
        any_ok = any_ok || p.result.status != AuditStatus::kInfeasibleBounds;
        if (!json_path.empty()) {
          all.push_back({{"bounds", p.bound_values}, {"result", audit_result_to_json(p.result)}});
        }
      }
      write_file(out_path, csv);
      std::vector<std::string> outputs{out_path};
      if (!json_path.empty()) {
        write_file(json_path, dump_json(all));
        outputs.push_back(json_path);
      }
      std::string spec = in.digest;
      for (const std::string& b : bounds) spec += "|" + b;
      write_manifest(out_path, {"sweep", {dist_path, config_path}, hex64(fnv1a64(spec)), seed, outputs});
      return any_ok ? kOk : kInfeasible;
    }

    if (check->parsed() || stepwise->parsed()) {
      const JointDistribution d = load_distribution(dist_path);
      if (!d.is_binary_pair()) {
        throw Failure(kInputError,
                      "needs exactly two binary characteristics (one private, one nonprivate); "
                      "binarize with `paudit ingest --binarize-all` first");
      }
      if (stepwise->parsed()) {
        emit(out_path, dump_json(stepwise_to_json(run_stepwise(d, stop_tol))), out);
        if (!out_path.empty()) {
          write_manifest(out_path,
                         {"stepwise", {dist_path}, hex64(fnv1a64(fmt(stop_tol))), seed, {out_path}});
        }
        return kOk;
      }
      emit(out_path, dump_json(propositions_to_json(check_propositions(d))), out);
      if (!out_path.empty()) {
        write_manifest(out_path, {"check", {dist_path}, hex64(fnv1a64("")), seed, {out_path}});
      }
      return kOk;
    }

    if (synth->parsed()) {
      SyntheticSpec spec = default_synthetic_spec();
      spec.record_count = records;
      const RecordSet rs = generate_records(spec, seed);
      std::ostringstream csv;
      write_records(csv, rs);
      write_file(csv_path, csv.str());
      write_file(schema_path, dump_json(record_schema_to_json(rs.characteristics)));
      write_manifest(csv_path, {"synth", {}, hex64(fnv1a64(std::to_string(records))), seed,
                                {csv_path, schema_path}});
      return kOk;
    }

    if (release->parsed()) {
      const auto schema = record_schema_from_json(load_json(schema_path));
      std::ifstream csv(csv_path, std::ios::binary);
      if (!csv) throw Failure(kInputError, "cannot open '" + csv_path + "'");
      const RecordSet rs = read_records(csv, schema, parse_reducer(reducer));
      const Json meta = load_json(meta_path);
      const Quantizer q = quantizer_from_json(meta.at("quantizer"));
      const auto parts = partitions_from_meta(meta, rs);
      const ReleasePlan plan = release_plan_from_json(load_json(plan_path));
      const std::vector<Index> iv = quantize_records(rs, q);
      const std::vector<Index> comb = combine_records(rs, parts);
      const std::vector<Index> shared = sample_release(plan, iv, comb, seed);
      std::string text = "id,interval,released_interval\n";
      for (std::size_t i = 0; i < rs.records.size(); ++i) {
        text += rs.records[i].id + "," + std::to_string(iv[i]) + "," + std::to_string(shared[i]) + "\n";
      }
      write_file(out_path, text);
      write_manifest(out_path, {"release", {plan_path, csv_path, schema_path, meta_path},
                                hex64(fnv1a64(reducer)), seed, {out_path}});
      return kOk;
    }
  } catch (const Failure& e) {
    err << "error: " << e.what() << "\n";
    return e.code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace paudit::cli
