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

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sentinel {

// Integer seconds since the Unix epoch.
using Timestamp = std::int64_t;

inline constexpr Timestamp kDecayPeriod = 600;         // one reputation point per period
inline constexpr Timestamp kEscalationWindow = 1800;   // prior attacks counted for escalation
inline constexpr std::int64_t kReputationThreshold = 9; // attack when score strictly exceeds
inline constexpr std::string_view kReputationPointId = "reputation";

enum class SeverityRating { High, Medium, Low, VeryLow };

constexpr int severity_weight(SeverityRating rating) noexcept {
    switch (rating) {
    case SeverityRating::High: return 8;
    case SeverityRating::Medium: return 4;
    case SeverityRating::Low: return 2;
    case SeverityRating::VeryLow: return 1;
    }
    return 1;
}

std::string_view to_string(SeverityRating rating) noexcept;
std::optional<SeverityRating> parse_severity(std::string_view text) noexcept;

// Identity used to correlate events. Username wins over session id.
struct UserKey {
    enum class Kind { Username, SessionId };

    Kind kind = Kind::SessionId;
    std::string value;

    // "username:<v>" or "session:<v>"; used as the ledger id.
    std::string str() const;

    friend auto operator<=>(const UserKey&, const UserKey&) = default;
};

UserKey resolve_user_key(const std::optional<std::string>& username,
                         const std::optional<std::string>& session_id);

struct ResponseKind {
    enum class Tag { Warn, Logout, Redirect, FakeOutput, Custom };

    Tag tag = Tag::Warn;
    std::string label; // only for Custom

    static ResponseKind warn() { return {Tag::Warn, {}}; }
    static ResponseKind logout() { return {Tag::Logout, {}}; }
    static ResponseKind redirect() { return {Tag::Redirect, {}}; }
    static ResponseKind fake_output() { return {Tag::FakeOutput, {}}; }
    static ResponseKind custom(std::string label);

    // Ladder spelling: "warn", "logout", "redirect", "fake_output", "custom:<label>".
    std::string spelling() const;
    // Directive "kind" field: as spelling() but "custom" without the label.
    std::string_view name() const noexcept;

    friend bool operator==(const ResponseKind&, const ResponseKind&) = default;
};

// Throws ValidationError on unknown or empty-label spellings.
ResponseKind parse_response_kind(std::string_view spelling);

// Payload a directive of this kind carries when nothing else is configured.
std::optional<std::string> default_payload(const ResponseKind& kind);

struct DetectionPoint {
    std::string id;
    std::string label;
    SeverityRating severity = SeverityRating::Low;
    std::int64_t rule_threshold = 2;
    Timestamp rule_window = 1;
    std::vector<ResponseKind> responses;

    friend bool operator==(const DetectionPoint&, const DetectionPoint&) = default;
};

// Throws ValidationError naming the offending field.
void validate_detection_point(const DetectionPoint& point);

std::vector<ResponseKind> default_reputation_ladder();

struct SuspiciousEvent {
    std::string event_id;
    std::optional<std::string> username;
    std::optional<std::string> session_id;
    std::string ip_address;
    std::string detection_point_id;
    Timestamp occurred_at = 0;
    bool consumed_by_rule = false;

    UserKey user_key() const { return resolve_user_key(username, session_id); }

    friend bool operator==(const SuspiciousEvent&, const SuspiciousEvent&) = default;
};

// Lazily decayed reputation. raw_score is exact at `anchor`.
struct ReputationLedger {
    UserKey user_key;
    std::int64_t raw_score = 0;
    Timestamp anchor = 0;

    std::int64_t effective(Timestamp now) const noexcept;
    // Applies whole elapsed decay periods; the anchor advances by those periods only.
    ReputationLedger folded(Timestamp now) const noexcept;

    friend bool operator==(const ReputationLedger&, const ReputationLedger&) = default;
};

enum class Mechanism { Rule, Reputation };

std::string_view to_string(Mechanism mechanism) noexcept;
std::optional<Mechanism> parse_mechanism(std::string_view text) noexcept;

struct AttackRecord {
    std::string attack_id;
    UserKey user_key;
    Mechanism mechanism = Mechanism::Rule;
    std::string detection_point_id;
    std::vector<std::string> contributing_event_ids;
    Timestamp detected_at = 0;
    std::int64_t escalation_level = 0;

    friend bool operator==(const AttackRecord&, const AttackRecord&) = default;
};

struct ResponseDirective {
    std::string response_id;
    UserKey user_key;
    ResponseKind kind;
    std::optional<std::string> payload;
    Timestamp created_at = 0;
    std::string source_attack_id;

    friend bool operator==(const ResponseDirective&, const ResponseDirective&) = default;
};

// Four decimal fields separated by single dots, each in [0, 255].
// Leading zeros are read as decimal.
bool validate_ipv4(std::string_view text) noexcept;

} // namespace sentinel
