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

#include <optional>
#include <string>
#include <vector>

#include "sentinel/feed.hpp"
#include "sentinel/ids.hpp"
#include "sentinel/model.hpp"
#include "sentinel/store.hpp"

namespace sentinel {

// Turns attacks into directives with incremental escalation and serves
// delete-on-fetch retrieval. Escalation history is the persisted attacks
// collection itself.
class ResponseEngine {
public:
    ResponseEngine(Store& store, FeedHub* feed, std::vector<ResponseKind> reputation_ladder = default_reputation_ladder());

    // Picks the ladder entry for the attack and writes the chosen level back
    // onto the stored attack record.
    ResponseDirective select_response(const AttackRecord& attack, Timestamp now);

    // Prior attacks by this user at this point with detected_at in [now - 1800, now).
    std::int64_t prior_attacks(const UserKey& user, std::string_view point_id, Timestamp now,
                               std::string_view exclude_attack_id = {}) const;

    std::vector<ResponseKind> ladder_for(std::string_view point_id) const;

    // ConflictError on a reused response_id.
    void enqueue_response(const ResponseDirective& directive, Timestamp now);

    // Atomically returns and deletes every directive keyed by either identity,
    // ordered by created_at. IdentityMissing when both are absent.
    std::vector<ResponseDirective> fetch_and_clear(const std::optional<std::string>& username,
                                                   const std::optional<std::string>& session_id);

    std::string next_response_id() { return response_ids_.next(); }

private:
    Store& store_;
    FeedHub* feed_;
    std::vector<ResponseKind> reputation_ladder_;
    IdSource response_ids_{"rsp"};
};

} // namespace sentinel
