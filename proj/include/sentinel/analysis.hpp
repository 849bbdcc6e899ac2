// Copyright (C) 2026 The Sentinel Authors. All rights reserved.

// Licensed under the Apache License, Version 2.0 (the "License");
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <mutex>
#include <optional>

#include "sentinel/ids.hpp"
#include "sentinel/model.hpp"
#include "sentinel/store.hpp"

namespace sentinel {

struct AnalysisOutcome {
    std::optional<AttackRecord> attack;
    std::int64_t effective_reputation_after = 0;
};

// Rule-based analysis first, reputation-based second. Attacks are persisted
// to the attacks collection before analyze_event returns.
//
// analyze_event serializes per user. The individual steps (rule_check,
// add_reputation, reputation_attack_check) do not lock and expect the
// caller to hold lock_user() for the key when calling them concurrently.
class AnalysisEngine {
public:
    explicit AnalysisEngine(Store& store);

    // The event must already be stored. Throws ConfigError for an unknown point.
    AnalysisOutcome analyze_event(const SuspiciousEvent& event, Timestamp now);

    std::optional<AttackRecord> rule_check(const UserKey& user, const DetectionPoint& point, Timestamp now);
    std::int64_t add_reputation(const UserKey& user, std::int64_t weight, Timestamp now);
    std::int64_t current_reputation(const UserKey& user, Timestamp now) const;
    std::optional<AttackRecord> reputation_attack_check(const UserKey& user, Timestamp now);

    std::optional<ReputationLedger> ledger(const UserKey& user) const;
    DetectionPoint detection_point(std::string_view id) const;

    [[nodiscard]] std::unique_lock<std::mutex> lock_user(const UserKey& user);

private:
    Store& store_;
    IdSource attack_ids_{"atk"};
    std::array<std::mutex, 64> user_locks_;
};

} // namespace sentinel
