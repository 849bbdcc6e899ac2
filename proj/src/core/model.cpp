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

#include "sentinel/model.hpp"

#include <algorithm>
#include <array>
#include <charconv>

#include "sentinel/errors.hpp"

namespace sentinel {

namespace {

bool present(const std::optional<std::string>& value) {
    return value.has_value() && !value->empty();
}

constexpr std::array<std::pair<SeverityRating, std::string_view>, 4> kSeverityNames{{
    {SeverityRating::High, "High"},
    {SeverityRating::Medium, "Medium"},
    {SeverityRating::Low, "Low"},
    {SeverityRating::VeryLow, "VeryLow"},
}};

constexpr std::string_view kCustomPrefix = "custom:";

} // namespace

std::string_view to_string(SeverityRating rating) noexcept {
    for (const auto& [r, name] : kSeverityNames)
        if (r == rating) return name;
    return "VeryLow";
}

std::optional<SeverityRating> parse_severity(std::string_view text) noexcept {
    for (const auto& [r, name] : kSeverityNames)
        if (name == text) return r;
    return std::nullopt;
}

std::string UserKey::str() const {
    return (kind == Kind::Username ? "username:" : "session:") + value;
}

UserKey resolve_user_key(const std::optional<std::string>& username,
                         const std::optional<std::string>& session_id) {
    if (present(username)) return {UserKey::Kind::Username, *username};
    if (present(session_id)) return {UserKey::Kind::SessionId, *session_id};
    throw IdentityMissing();
}

ResponseKind ResponseKind::custom(std::string label) {
    if (label.empty()) throw ValidationError("custom response label must be non-empty");
    return {Tag::Custom, std::move(label)};
}

std::string_view ResponseKind::name() const noexcept {
    switch (tag) {
    case Tag::Warn: return "warn";
    case Tag::Logout: return "logout";
    case Tag::Redirect: return "redirect";
    case Tag::FakeOutput: return "fake_output";
    case Tag::Custom: return "custom";
    }
    return "custom";
}

std::string ResponseKind::spelling() const {
    if (tag == Tag::Custom) return std::string(kCustomPrefix) + label;
    return std::string(name());
}

ResponseKind parse_response_kind(std::string_view spelling) {
    if (spelling == "warn") return ResponseKind::warn();
    if (spelling == "logout") return ResponseKind::logout();
    if (spelling == "redirect") return ResponseKind::redirect();
    if (spelling == "fake_output") return ResponseKind::fake_output();
    if (spelling.starts_with(kCustomPrefix))
        return ResponseKind::custom(std::string(spelling.substr(kCustomPrefix.size())));
    throw ValidationError("unknown response kind '" + std::string(spelling) + "'");
}

std::optional<std::string> default_payload(const ResponseKind& kind) {
    switch (kind.tag) {
    case ResponseKind::Tag::Warn: return "Suspicious activity detected";
    case ResponseKind::Tag::Redirect: return "/";
    case ResponseKind::Tag::FakeOutput: return "";
    default: return std::nullopt;
    }
}

void validate_detection_point(const DetectionPoint& point) {
    if (point.id.empty()) throw ValidationError("id: must be non-empty");
    if (point.id == kReputationPointId)
        throw ValidationError("id: '" + point.id + "' is reserved");
    if (point.rule_threshold < 2) throw ValidationError("rule_threshold: must be >= 2");
    if (point.rule_window < 1) throw ValidationError("rule_window: must be a positive number of seconds");
    if (point.responses.empty()) throw ValidationError("responses: must list at least one response");
    for (const auto& r : point.responses)
        if (r.tag == ResponseKind::Tag::Custom && r.label.empty())
            throw ValidationError("responses: custom label must be non-empty");
}

std::vector<ResponseKind> default_reputation_ladder() {
    return {ResponseKind::warn(), ResponseKind::logout(), ResponseKind::custom("block-session")};
}

std::int64_t ReputationLedger::effective(Timestamp now) const noexcept {
    return folded(now).raw_score;
}

ReputationLedger ReputationLedger::folded(Timestamp now) const noexcept {
    const Timestamp elapsed = std::max<Timestamp>(0, now - anchor);
    const Timestamp periods = elapsed / kDecayPeriod;
    ReputationLedger out = *this;
    out.raw_score = std::max<std::int64_t>(0, raw_score - periods);
    out.anchor = anchor + periods * kDecayPeriod;
    return out;
}

std::string_view to_string(Mechanism mechanism) noexcept {
    return mechanism == Mechanism::Rule ? "rule" : "reputation";
}

std::optional<Mechanism> parse_mechanism(std::string_view text) noexcept {
    if (text == "rule") return Mechanism::Rule;
    if (text == "reputation") return Mechanism::Reputation;
    return std::nullopt;
}

bool validate_ipv4(std::string_view text) noexcept {
    int fields = 0;
    std::size_t pos = 0;
    while (true) {
        const auto dot = text.find('.', pos);
        const auto field = text.substr(pos, dot == std::string_view::npos ? std::string_view::npos : dot - pos);
        if (field.empty() || !std::all_of(field.begin(), field.end(), [](char c) { return c >= '0' && c <= '9'; }))
            return false;
        unsigned value = 0;
        const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
        if (ec != std::errc{} || end != field.data() + field.size() || value > 255) return false;
        ++fields;
        if (dot == std::string_view::npos) break;
        if (fields == 4) return false;
        pos = dot + 1;
    }
    return fields == 4;
}

} // namespace sentinel
