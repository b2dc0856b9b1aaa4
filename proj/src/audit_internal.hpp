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

#ifndef PAUDIT_SRC_AUDIT_INTERNAL_HPP_
#define PAUDIT_SRC_AUDIT_INTERNAL_HPP_

#include "paudit/optimizer.hpp"

namespace paudit::internal {

// Continues the descent from start.audited, a distribution reached from d.
// The returned move log and trajectory extend those of start.
AuditResult resume_audit(const JointDistribution& d, const AuditConfig& cfg,
                         const AuditResult& start);

}  // namespace paudit::internal

#endif  // PAUDIT_SRC_AUDIT_INTERNAL_HPP_
