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

// JSON forms of the library types. Objects are emitted with sorted keys and
// doubles in shortest round-trip form, so equal values give equal bytes.
// Parse errors throw std::invalid_argument naming the offending key.

#ifndef PAUDIT_JSON_IO_HPP_
#define PAUDIT_JSON_IO_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "paudit/distribution.hpp"
#include "paudit/info_theory.hpp"
#include "paudit/ingest.hpp"
#include "paudit/optimizer.hpp"
#include "paudit/propositions.hpp"

namespace paudit {

using Json = nlohmann::json;

inline constexpr std::string_view kConfigSchema = "paudit.audit-config/1";
inline constexpr std::string_view kRecordSchema = "paudit.record-schema/1";

// Two-space indented text with a trailing newline.
std::string dump_json(const Json& j);
// Throws std::invalid_argument with the parser's position on bad input.
Json parse_json(std::string_view text, std::string_view what);

std::uint64_t fnv1a64(std::string_view bytes);

Json characteristics_to_json(const std::vector<CharacteristicSpec>& chars);
std::vector<CharacteristicSpec> characteristics_from_json(const Json& j);

// {"characteristics": [...], "interval_count": N, "probs": [[...], ...]}.
Json distribution_to_json(const JointDistribution& d);
JointDistribution distribution_from_json(const Json& j);

// Record sidecar: {"schema": kRecordSchema, "characteristics": [...]}.
std::vector<CharacteristicSpec> record_schema_from_json(const Json& j);
Json record_schema_to_json(const std::vector<CharacteristicSpec>& chars);

Json report_to_json(const MiReport& report);

// {"mode", "j", "k", "r": [gain...], "s": [give...], "delta"} plus
// "mi_after" when given.
Json move_to_json(const ExchangeMove& mv);
Json move_to_json(const ExchangeMove& mv, const Eigen::VectorXd& mi_after);
ExchangeMove move_from_json(const Json& j);

// Audit config keyed by characteristic name:
//   schema (required), mode, sense (minimize | maximize), weights,
//   privacy_bounds, utility_bounds, upper_bounds, lower_bounds, epsilon,
//   eta, stop_tol, max_iters, feasibility_tol.
// privacy_bounds are upper bounds on private characteristics and
// utility_bounds lower bounds on nonprivate ones. Under "maximize" the
// weights are negated into the minimized form. Unknown keys are errors.
AuditConfig config_from_json(const Json& j, const JointDistribution& d);
// Canonical minimize-form config, used for digests.
Json config_to_json(const AuditConfig& cfg, const JointDistribution& d);

Json audit_result_to_json(const AuditResult& res);
Json propositions_to_json(const PropositionReport& rep);
Json stepwise_to_json(const StepwiseResult& res);
Json quantizer_to_json(const Quantizer& q);
Quantizer quantizer_from_json(const Json& j);
// {"characteristic", "sides": [[values...], [values...]], "mi"}.
Json bipartition_to_json(const Bipartition& bp, const CharacteristicSpec& c);
Bipartition bipartition_from_json(const Json& j, const CharacteristicSpec& c, Index m);
Json release_plan_to_json(const ReleasePlan& plan, const JointDistribution& d);
ReleasePlan release_plan_from_json(const Json& j);

}  // namespace paudit

#endif  // PAUDIT_JSON_IO_HPP_
