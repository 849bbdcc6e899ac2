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

#include "sentinel/analysis.hpp"

#include <functional>

#include "sentinel/errors.hpp"

namespace sentinel {

AnalysisEngine::AnalysisEngine(Store& store) : store_(store) {
    for (const auto& attack : store_.query(Collection::Attacks))
        attack_ids_.advance_past(attack.at("attack_id").get<std::string>());
}

std::unique_lock<std::mutex> AnalysisEngine::lock_user(const UserKey& user) {
    return std::unique_lock(user_locks_[std::hash<std::string>{}(user.str()) % user_locks_.size()]);
}

DetectionPoint AnalysisEngine::detection_point(std::string_view id) const {
    const auto doc = store_.get(Collection::DetectionPoints, id);
    if (!doc) throw ConfigError("unknown detection point '" + std::string(id) + "'");
    return doc->get<DetectionPoint>();
}

AnalysisOutcome AnalysisEngine::analyze_event(const SuspiciousEvent& event, Timestamp now) {
    const auto point = detection_point(event.detection_point_id);
    const auto user = event.user_key();
    auto lock = lock_user(user);

    AnalysisOutcome outcome;
    outcome.attack = rule_check(user, point, now);
    // Weight is recorded even when the rule fired; the threshold is only
    // consulted when it did not.
    add_reputation(user, severity_weight(point.severity), now);
    if (!outcome.attack) outcome.attack = reputation_attack_check(user, now);
    if (outcome.attack) store_.put(Collection::Attacks, Document(*outcome.attack));
    outcome.effective_reputation_after = current_reputation(user, now);
    return outcome;
}

std::optional<AttackRecord> AnalysisEngine::rule_check(const UserKey& user, const DetectionPoint& point,
                                                       Timestamp now) {
    auto window = store_.query(Collection::Events,
                               {{"user_key", {Document(user)}},
                                {"detection_point_id", {point.id}},
                                {"consumed_by_rule", {false}}},
                               TimeRange{now - point.rule_window, now});
    if (static_cast<std::int64_t>(window.size()) < point.rule_threshold) return std::nullopt;

    AttackRecord attack;
    attack.attack_id = attack_ids_.next();
    attack.user_key = user;
    attack.mechanism = Mechanism::Rule;
    attack.detection_point_id = point.id;
    attack.detected_at = now;
    for (auto& doc : window) {
        attack.contributing_event_ids.push_back(doc.at("event_id").get<std::string>());
        doc["consumed_by_rule"] = true;
        store_.upsert(Collection::Events, std::move(doc));
    }
    return attack;
}

std::optional<ReputationLedger> AnalysisEngine::ledger(const UserKey& user) const {
    const auto doc = store_.get(Collection::Reputations, user.str());
    if (!doc) return std::nullopt;
    return doc->get<ReputationLedger>();
}

std::int64_t AnalysisEngine::add_reputation(const UserKey& user, std::int64_t weight, Timestamp now) {
    auto current = ledger(user).value_or(ReputationLedger{user, 0, now});
    auto next = current.folded(now);
    next.raw_score += weight;
    store_.upsert(Collection::Reputations, Document(next));
    return next.effective(now);
}

std::int64_t AnalysisEngine::current_reputation(const UserKey& user, Timestamp now) const {
    const auto current = ledger(user);
    return current ? current->effective(now) : 0;
}

std::optional<AttackRecord> AnalysisEngine::reputation_attack_check(const UserKey& user, Timestamp now) {
    if (current_reputation(user, now) <= kReputationThreshold) return std::nullopt;

    store_.upsert(Collection::Reputations, Document(ReputationLedger{user, 0, now}));

    AttackRecord attack;
    attack.attack_id = attack_ids_.next();
    attack.user_key = user;
    attack.mechanism = Mechanism::Reputation;
    attack.detection_point_id = std::string(kReputationPointId);
    attack.detected_at = now;
    for (const auto& doc : store_.query(Collection::Events, {{"user_key", {Document(user)}}},
                                        TimeRange{now - kEscalationWindow, now}))
        attack.contributing_event_ids.push_back(doc.at("event_id").get<std::string>());
    return attack;
}

} // namespace sentinel
