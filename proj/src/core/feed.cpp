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

#include "sentinel/feed.hpp"

#include "sentinel/errors.hpp"

namespace sentinel {

std::string_view to_string(FeedKind kind) noexcept {
    switch (kind) {
    case FeedKind::Event: return "event";
    case FeedKind::Attack: return "attack";
    case FeedKind::Response: return "response";
    case FeedKind::DetectionPointChange: return "detection_point_change";
    }
    return "event";
}

std::optional<FeedKind> parse_feed_kind(std::string_view text) noexcept {
    for (auto k : {FeedKind::Event, FeedKind::Attack, FeedKind::Response, FeedKind::DetectionPointChange})
        if (to_string(k) == text) return k;
    return std::nullopt;
}

void to_json(Document& doc, const FeedEnvelope& envelope) {
    doc = Document{{"kind", to_string(envelope.kind)},
                   {"payload", envelope.payload},
                   {"emitted_at", envelope.emitted_at}};
}

void from_json(const Document& doc, FeedEnvelope& envelope) {
    const auto kind = parse_feed_kind(doc.at("kind").get<std::string>());
    if (!kind) throw ValidationError("kind: unknown feed envelope kind");
    envelope.kind = *kind;
    envelope.payload = doc.at("payload");
    envelope.emitted_at = doc.at("emitted_at").get<Timestamp>();
}

FeedHub::SubscriptionId FeedHub::subscribe(std::shared_ptr<FeedSubscriber> subscriber) {
    std::lock_guard lock(mutex_);
    const auto id = next_id_++;
    subscribers_.emplace(id, std::move(subscriber));
    return id;
}

void FeedHub::unsubscribe(SubscriptionId id) {
    std::lock_guard lock(mutex_);
    subscribers_.erase(id);
}

void FeedHub::publish(const FeedEnvelope& envelope) {
    auto message = std::make_shared<const std::string>(Document(envelope).dump());
    std::lock_guard lock(mutex_);
    for (auto it = subscribers_.begin(); it != subscribers_.end();) {
        if (it->second->offer(message)) ++it;
        else it = subscribers_.erase(it);
    }
}

std::size_t FeedHub::subscriber_count() const {
    std::lock_guard lock(mutex_);
    return subscribers_.size();
}

} // namespace sentinel
