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

#include "sentinel/response.hpp"

#include <algorithm>

#include "sentinel/errors.hpp"

namespace sentinel {

ResponseEngine::ResponseEngine(Store& store, FeedHub* feed, std::vector<ResponseKind> reputation_ladder)
    : store_(store), feed_(feed), reputation_ladder_(std::move(reputation_ladder)) {
    if (reputation_ladder_.empty()) throw ConfigError("reputation_ladder: must list at least one response");
    for (const auto& doc : store_.query(Collection::Responses))
        response_ids_.advance_past(doc.at("response_id").get<std::string>());
}

std::vector<ResponseKind> ResponseEngine::ladder_for(std::string_view point_id) const {
    if (point_id == kReputationPointId) return reputation_ladder_;
    const auto doc = store_.get(Collection::DetectionPoints, point_id);
    if (!doc) throw ConfigError("no response ladder for detection point '" + std::string(point_id) + "'");
    auto ladder = doc->get<DetectionPoint>().responses;
    if (ladder.empty()) throw ConfigError("empty response ladder for '" + std::string(point_id) + "'");
    return ladder;
}

std::int64_t ResponseEngine::prior_attacks(const UserKey& user, std::string_view point_id, Timestamp now,
                                           std::string_view exclude_attack_id) const {
    const auto attacks = store_.query(Collection::Attacks,
                                      {{"user_key", {Document(user)}}, {"detection_point_id", {point_id}}},
                                      TimeRange{now - kEscalationWindow, now - 1});
    return std::count_if(attacks.begin(), attacks.end(), [&](const Document& doc) {
        return doc.at("attack_id").get_ref<const std::string&>() != exclude_attack_id;
    });
}

ResponseDirective ResponseEngine::select_response(const AttackRecord& attack, Timestamp now) {
    const auto ladder = ladder_for(attack.detection_point_id);
    const auto prior = prior_attacks(attack.user_key, attack.detection_point_id, now, attack.attack_id);
    const auto level = std::min<std::int64_t>(prior, static_cast<std::int64_t>(ladder.size()) - 1);

    AttackRecord recorded = attack;
    recorded.escalation_level = level;
    store_.upsert(Collection::Attacks, Document(recorded));

    ResponseDirective directive;
    directive.response_id = response_ids_.next();
    directive.user_key = attack.user_key;
    directive.kind = ladder[static_cast<std::size_t>(level)];
    directive.payload = default_payload(directive.kind);
    directive.created_at = now;
    directive.source_attack_id = attack.attack_id;
    return directive;
}

void ResponseEngine::enqueue_response(const ResponseDirective& directive, Timestamp now) {
    Document doc = directive;
    store_.put(Collection::Responses, doc);
    if (feed_ != nullptr) feed_->publish({FeedKind::Response, std::move(doc), now});
}

std::vector<ResponseDirective> ResponseEngine::fetch_and_clear(const std::optional<std::string>& username,
                                                               const std::optional<std::string>& session_id) {
    std::vector<Document> keys;
    if (username && !username->empty()) keys.emplace_back(UserKey{UserKey::Kind::Username, *username});
    if (session_id && !session_id->empty()) keys.emplace_back(UserKey{UserKey::Kind::SessionId, *session_id});
    if (keys.empty()) throw IdentityMissing();

    std::vector<ResponseDirective> out;
    for (const auto& doc : store_.take_where(Collection::Responses, {{"user_key", std::move(keys)}}))
        out.push_back(doc.get<ResponseDirective>());
    return out;
}

} // namespace sentinel
