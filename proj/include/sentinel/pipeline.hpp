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
#include <chrono>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "sentinel/analysis.hpp"
#include "sentinel/clock.hpp"
#include "sentinel/feed.hpp"
#include "sentinel/ids.hpp"
#include "sentinel/logging.hpp"
#include "sentinel/response.hpp"
#include "sentinel/sharded_queue.hpp"
#include "sentinel/store.hpp"

namespace sentinel {

// Body of POST /api/v1/events, decoded.
struct EventSubmission {
    std::optional<std::string> username;
    std::optional<std::string> session_id;
    std::string ip_address;
    std::string detection_point_id;
    std::optional<Timestamp> occurred_at;
};

// {"user": {"username"?, "session_id"?, "ip_address"}, "detection_point": {"id"}, "occurred_at"?}
// Throws ValidationError on shape errors; identity and IP are checked by Pipeline::accept.
EventSubmission parse_event_submission(const Document& body);
Document to_document(const EventSubmission& submission);

struct ProcessResult {
    AnalysisOutcome analysis;
    std::optional<ResponseDirective> directive;
};

// validate -> persist -> analyze -> respond, plus detection point admin.
class Pipeline {
public:
    struct Options {
        // 0 analyzes inline on the ingesting thread.
        std::size_t analysis_workers = 2;
        // Artificial delay before each asynchronous analysis (tests only).
        std::chrono::milliseconds analysis_delay{0};
    };

    Pipeline(Store& store, const Clock& clock, FeedHub& feed, std::shared_ptr<const Logger> logger,
             std::vector<ResponseKind> reputation_ladder, Options options);
    Pipeline(Store& store, const Clock& clock, FeedHub& feed, std::shared_ptr<const Logger> logger)
        : Pipeline(store, clock, feed, std::move(logger), default_reputation_ladder(), Options{}) {}
    ~Pipeline();

    // Validates identity, IP and detection point, stores the event and
    // publishes it. ValidationError / IdentityMissing on bad input.
    SuspiciousEvent accept(const EventSubmission& submission);
    // accept() and hand the event to a background analysis worker.
    SuspiciousEvent ingest(const EventSubmission& submission);
    // Analysis and response selection on the calling thread.
    ProcessResult process(const SuspiciousEvent& event);
    // Waits for queued analyses to finish.
    void drain();

    DetectionPoint create_detection_point(DetectionPoint point);
    void delete_detection_point(std::string_view id);
    std::vector<DetectionPoint> list_detection_points() const;
    // Creates any seed whose id is not configured yet.
    void seed_detection_points(const std::vector<DetectionPoint>& points);

    std::vector<ResponseDirective> fetch_responses(const std::optional<std::string>& username,
                                                   const std::optional<std::string>& session_id);

    // {event_count, attack_count, response_count, attacks_by_detection_point}
    Document summary() const;

    AnalysisEngine& analysis() { return analysis_; }
    ResponseEngine& responses() { return responses_; }
    Store& store() { return store_; }

private:
    void analyze_queued(SuspiciousEvent& event);

    Store& store_;
    const Clock& clock_;
    FeedHub& feed_;
    std::shared_ptr<const Logger> logger_;
    Options options_;
    AnalysisEngine analysis_;
    ResponseEngine responses_;
    IdSource event_ids_{"evt"};
    std::array<std::mutex, 64> ingest_locks_;
    std::unique_ptr<ShardedQueue<SuspiciousEvent>> queue_;
};

} // namespace sentinel
