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

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "sentinel/model.hpp"
#include "sentinel/wire.hpp"

namespace sentinel {

enum class FeedKind { Event, Attack, Response, DetectionPointChange };

std::string_view to_string(FeedKind kind) noexcept;
std::optional<FeedKind> parse_feed_kind(std::string_view text) noexcept;

struct FeedEnvelope {
    FeedKind kind = FeedKind::Event;
    Document payload;
    Timestamp emitted_at = 0;
};

void to_json(Document& doc, const FeedEnvelope& envelope);
void from_json(const Document& doc, FeedEnvelope& envelope);

// Receives serialized envelopes. offer() must not block; returning false
// tells the hub the subscriber is gone or too slow and drops it.
class FeedSubscriber {
public:
    virtual ~FeedSubscriber() = default;
    virtual bool offer(std::shared_ptr<const std::string> message) = 0;
};

// Fan-out of envelopes to live subscribers in publish order.
class FeedHub {
public:
    using SubscriptionId = std::uint64_t;

    SubscriptionId subscribe(std::shared_ptr<FeedSubscriber> subscriber);
    void unsubscribe(SubscriptionId id);
    void publish(const FeedEnvelope& envelope);
    std::size_t subscriber_count() const;

private:
    mutable std::mutex mutex_;
    SubscriptionId next_id_ = 1;
    std::map<SubscriptionId, std::shared_ptr<FeedSubscriber>> subscribers_;
};

} // namespace sentinel
