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

#include "sentinel/wire.hpp"

namespace sentinel {

namespace {

const Document& field(const Document& doc, const char* name) {
    if (!doc.is_object()) throw ValidationError("expected an object");
    const auto it = doc.find(name);
    if (it == doc.end() || it->is_null()) throw ValidationError(std::string(name) + ": required");
    return *it;
}

std::string string_field(const Document& doc, const char* name) {
    const auto& v = field(doc, name);
    if (!v.is_string()) throw ValidationError(std::string(name) + ": expected a string");
    return v.get<std::string>();
}

std::optional<std::string> optional_string(const Document& doc, const char* name) {
    if (!doc.is_object()) throw ValidationError("expected an object");
    const auto it = doc.find(name);
    if (it == doc.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) throw ValidationError(std::string(name) + ": expected a string");
    return it->get<std::string>();
}

std::int64_t integer_field(const Document& doc, const char* name) {
    const auto& v = field(doc, name);
    if (!v.is_number_integer()) throw ValidationError(std::string(name) + ": expected an integer");
    return v.get<std::int64_t>();
}

void put_optional(Document& doc, const char* name, const std::optional<std::string>& value) {
    if (value) doc[name] = *value;
    else doc[name] = nullptr;
}

} // namespace

void to_json(Document& doc, const UserKey& key) {
    doc = Document{{"kind", key.kind == UserKey::Kind::Username ? "username" : "session_id"},
                   {"value", key.value}};
}

void from_json(const Document& doc, UserKey& key) {
    const auto kind = string_field(doc, "kind");
    if (kind == "username") key.kind = UserKey::Kind::Username;
    else if (kind == "session_id") key.kind = UserKey::Kind::SessionId;
    else throw ValidationError("kind: expected 'username' or 'session_id'");
    key.value = string_field(doc, "value");
    if (key.value.empty()) throw ValidationError("value: must be non-empty");
}

void to_json(Document& doc, const ResponseKind& kind) { doc = kind.spelling(); }

void from_json(const Document& doc, ResponseKind& kind) {
    if (!doc.is_string()) throw ValidationError("response: expected a string");
    kind = parse_response_kind(doc.get<std::string>());
}

void to_json(Document& doc, const DetectionPoint& point) {
    doc = Document{{"id", point.id},
                   {"label", point.label},
                   {"severity", to_string(point.severity)},
                   {"rule_threshold", point.rule_threshold},
                   {"rule_window", point.rule_window},
                   {"responses", point.responses}};
}

void from_json(const Document& doc, DetectionPoint& point) {
    point.id = string_field(doc, "id");
    point.label = optional_string(doc, "label").value_or(point.id);
    const auto severity = string_field(doc, "severity");
    const auto rating = parse_severity(severity);
    if (!rating) throw ValidationError("severity: expected High, Medium, Low or VeryLow");
    point.severity = *rating;
    point.rule_threshold = integer_field(doc, "rule_threshold");
    point.rule_window = integer_field(doc, "rule_window");
    const auto& responses = field(doc, "responses");
    if (!responses.is_array()) throw ValidationError("responses: expected an array");
    point.responses.clear();
    for (std::size_t i = 0; i < responses.size(); ++i) {
        try {
            point.responses.push_back(responses[i].get<ResponseKind>());
        } catch (const ValidationError& e) {
            throw ValidationError("responses[" + std::to_string(i) + "]: " + e.what());
        }
    }
}

void to_json(Document& doc, const SuspiciousEvent& event) {
    doc = Document::object();
    doc["event_id"] = event.event_id;
    put_optional(doc, "username", event.username);
    put_optional(doc, "session_id", event.session_id);
    doc["ip_address"] = event.ip_address;
    doc["detection_point_id"] = event.detection_point_id;
    doc["occurred_at"] = event.occurred_at;
    doc["consumed_by_rule"] = event.consumed_by_rule;
    doc["user_key"] = event.user_key();
}

void from_json(const Document& doc, SuspiciousEvent& event) {
    event.event_id = string_field(doc, "event_id");
    event.username = optional_string(doc, "username");
    event.session_id = optional_string(doc, "session_id");
    event.ip_address = string_field(doc, "ip_address");
    event.detection_point_id = string_field(doc, "detection_point_id");
    event.occurred_at = integer_field(doc, "occurred_at");
    const auto it = doc.find("consumed_by_rule");
    event.consumed_by_rule = it != doc.end() && it->is_boolean() && it->get<bool>();
}

void to_json(Document& doc, const ReputationLedger& ledger) {
    doc = Document{{"id", ledger.user_key.str()},
                   {"user_key", ledger.user_key},
                   {"raw_score", ledger.raw_score},
                   {"anchor", ledger.anchor}};
}

void from_json(const Document& doc, ReputationLedger& ledger) {
    ledger.user_key = field(doc, "user_key").get<UserKey>();
    ledger.raw_score = integer_field(doc, "raw_score");
    ledger.anchor = integer_field(doc, "anchor");
}

void to_json(Document& doc, const AttackRecord& attack) {
    doc = Document{{"attack_id", attack.attack_id},
                   {"user_key", attack.user_key},
                   {"mechanism", to_string(attack.mechanism)},
                   {"detection_point_id", attack.detection_point_id},
                   {"contributing_event_ids", attack.contributing_event_ids},
                   {"detected_at", attack.detected_at},
                   {"escalation_level", attack.escalation_level}};
}

void from_json(const Document& doc, AttackRecord& attack) {
    attack.attack_id = string_field(doc, "attack_id");
    attack.user_key = field(doc, "user_key").get<UserKey>();
    const auto mechanism = parse_mechanism(string_field(doc, "mechanism"));
    if (!mechanism) throw ValidationError("mechanism: expected 'rule' or 'reputation'");
    attack.mechanism = *mechanism;
    attack.detection_point_id = string_field(doc, "detection_point_id");
    attack.contributing_event_ids = field(doc, "contributing_event_ids").get<std::vector<std::string>>();
    attack.detected_at = integer_field(doc, "detected_at");
    attack.escalation_level = integer_field(doc, "escalation_level");
}

void to_json(Document& doc, const ResponseDirective& directive) {
    doc = Document::object();
    doc["response_id"] = directive.response_id;
    doc["user_key"] = directive.user_key;
    doc["kind"] = directive.kind.name();
    if (directive.kind.tag == ResponseKind::Tag::Custom) doc["label"] = directive.kind.label;
    put_optional(doc, "payload", directive.payload);
    doc["created_at"] = directive.created_at;
    doc["source_attack_id"] = directive.source_attack_id;
}

void from_json(const Document& doc, ResponseDirective& directive) {
    directive.response_id = string_field(doc, "response_id");
    directive.user_key = field(doc, "user_key").get<UserKey>();
    const auto kind = string_field(doc, "kind");
    directive.kind = kind == "custom" ? ResponseKind::custom(string_field(doc, "label"))
                                      : parse_response_kind(kind);
    directive.payload = optional_string(doc, "payload");
    directive.created_at = integer_field(doc, "created_at");
    directive.source_attack_id = string_field(doc, "source_attack_id");
}

} // namespace sentinel
