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

#include "sentinel/pipeline.hpp"

#include <functional>
#include <map>
#include <thread>

#include "sentinel/errors.hpp"

namespace sentinel {

namespace {

std::optional<std::string> optional_text(const Document& object, const char* key) {
    const auto it = object.find(key);
    if (it == object.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) throw ValidationError(std::string("user.") + key + ": expected a string");
    return it->get<std::string>();
}

std::size_t shard_of(const UserKey& user) { return std::hash<std::string>{}(user.str()); }

} // namespace

EventSubmission parse_event_submission(const Document& body) {
    if (!body.is_object()) throw ValidationError("body: expected an object");
    const auto user = body.find("user");
    if (user == body.end() || !user->is_object()) throw ValidationError("user: required object");
    const auto point = body.find("detection_point");
    if (point == body.end() || !point->is_object()) throw ValidationError("detection_point: required object");

    EventSubmission out;
    out.username = optional_text(*user, "username");
    out.session_id = optional_text(*user, "session_id");
    const auto ip = user->find("ip_address");
    if (ip == user->end() || !ip->is_string()) throw ValidationError("user.ip_address: required string");
    out.ip_address = ip->get<std::string>();
    const auto id = point->find("id");
    if (id == point->end() || !id->is_string()) throw ValidationError("detection_point.id: required string");
    out.detection_point_id = id->get<std::string>();
    if (const auto at = body.find("occurred_at"); at != body.end() && !at->is_null()) {
        if (!at->is_number_integer()) throw ValidationError("occurred_at: expected integer seconds");
        out.occurred_at = at->get<Timestamp>();
    }
    return out;
}

Document to_document(const EventSubmission& submission) {
    Document user = Document::object();
    if (submission.username) user["username"] = *submission.username;
    if (submission.session_id) user["session_id"] = *submission.session_id;
    user["ip_address"] = submission.ip_address;
    Document body{{"user", std::move(user)}, {"detection_point", {{"id", submission.detection_point_id}}}};
    if (submission.occurred_at) body["occurred_at"] = *submission.occurred_at;
    return body;
}

Pipeline::Pipeline(Store& store, const Clock& clock, FeedHub& feed, std::shared_ptr<const Logger> logger,
                   std::vector<ResponseKind> reputation_ladder, Options options)
    : store_(store),
      clock_(clock),
      feed_(feed),
      logger_(logger ? std::move(logger) : Logger::null()),
      options_(options),
      analysis_(store),
      responses_(store, &feed, std::move(reputation_ladder)) {
    for (const auto& doc : store_.query(Collection::Events))
        event_ids_.advance_past(doc.at("event_id").get<std::string>());
    if (options_.analysis_workers > 0)
        queue_ = std::make_unique<ShardedQueue<SuspiciousEvent>>(
            options_.analysis_workers, [this](SuspiciousEvent& event) { analyze_queued(event); });
}

Pipeline::~Pipeline() {
    if (queue_) queue_->drain();
    queue_.reset();
}

SuspiciousEvent Pipeline::accept(const EventSubmission& submission) {
    SuspiciousEvent event;
    event.username = submission.username;
    event.session_id = submission.session_id;
    const auto user = event.user_key();
    if (!validate_ipv4(submission.ip_address))
        throw ValidationError("user.ip_address: invalid IPv4 address '" + submission.ip_address + "'");
    if (!store_.get(Collection::DetectionPoints, submission.detection_point_id))
        throw ValidationError("detection_point.id: unknown detection point '" + submission.detection_point_id + "'");
    event.ip_address = submission.ip_address;
    event.detection_point_id = submission.detection_point_id;
    event.occurred_at = submission.occurred_at.value_or(clock_.now());
    event.event_id = event_ids_.next();

    Document doc = event;
    store_.put(Collection::Events, doc);
    feed_.publish({FeedKind::Event, std::move(doc), clock_.now()});
    logger_->debug("ingest", "event accepted",
                   {{"event_id", event.event_id}, {"user", user.str()}, {"detection_point", event.detection_point_id}});
    return event;
}

SuspiciousEvent Pipeline::ingest(const EventSubmission& submission) {
    // Identity first so the ordering lock is per user.
    const auto user = resolve_user_key(submission.username, submission.session_id);
    const auto shard = shard_of(user);
    std::lock_guard lock(ingest_locks_[shard % ingest_locks_.size()]);
    auto event = accept(submission);
    if (queue_) queue_->push(shard, event);
    else analyze_queued(event);
    return event;
}

void Pipeline::analyze_queued(SuspiciousEvent& event) {
    if (options_.analysis_delay.count() > 0) std::this_thread::sleep_for(options_.analysis_delay);
    try {
        process(event);
    } catch (const std::exception& e) {
        logger_->error("analysis", "event analysis failed", {{"event_id", event.event_id}, {"error", e.what()}});
    }
}

ProcessResult Pipeline::process(const SuspiciousEvent& event) {
    const Timestamp now = event.occurred_at;
    ProcessResult result;
    result.analysis = analysis_.analyze_event(event, now);
    if (!result.analysis.attack) return result;

    const auto& attack = *result.analysis.attack;
    auto directive = responses_.select_response(attack, now);
    auto recorded = store_.get(Collection::Attacks, attack.attack_id);
    if (recorded) result.analysis.attack = recorded->get<AttackRecord>();
    logger_->info("analysis", "attack detected",
                  {{"attack_id", attack.attack_id},
                   {"user", attack.user_key.str()},
                   {"mechanism", std::string(to_string(attack.mechanism))},
                   {"detection_point", attack.detection_point_id},
                   {"escalation_level", std::to_string(result.analysis.attack->escalation_level)}});
    feed_.publish({FeedKind::Attack, Document(*result.analysis.attack), clock_.now()});

    responses_.enqueue_response(directive, clock_.now());
    logger_->info("response", "response queued",
                  {{"response_id", directive.response_id},
                   {"attack_id", attack.attack_id},
                   {"kind", directive.kind.spelling()}});
    result.directive = std::move(directive);
    return result;
}

void Pipeline::drain() {
    if (queue_) queue_->drain();
}

DetectionPoint Pipeline::create_detection_point(DetectionPoint point) {
    validate_detection_point(point);
    store_.put(Collection::DetectionPoints, Document(point));
    feed_.publish({FeedKind::DetectionPointChange, {{"action", "created"}, {"detection_point", point}}, clock_.now()});
    logger_->info("admin", "detection point created", {{"id", point.id}});
    return point;
}

void Pipeline::delete_detection_point(std::string_view id) {
    const auto doc = store_.get(Collection::DetectionPoints, id);
    if (!doc || !store_.erase(Collection::DetectionPoints, id))
        throw NotFoundError("unknown detection point '" + std::string(id) + "'");
    feed_.publish({FeedKind::DetectionPointChange, {{"action", "deleted"}, {"detection_point", *doc}}, clock_.now()});
    logger_->info("admin", "detection point deleted", {{"id", std::string(id)}});
}

std::vector<DetectionPoint> Pipeline::list_detection_points() const {
    std::vector<DetectionPoint> out;
    for (const auto& doc : store_.query(Collection::DetectionPoints)) out.push_back(doc.get<DetectionPoint>());
    return out;
}

void Pipeline::seed_detection_points(const std::vector<DetectionPoint>& points) {
    for (const auto& point : points)
        if (!store_.get(Collection::DetectionPoints, point.id)) create_detection_point(point);
}

std::vector<ResponseDirective> Pipeline::fetch_responses(const std::optional<std::string>& username,
                                                         const std::optional<std::string>& session_id) {
    auto out = responses_.fetch_and_clear(username, session_id);
    if (!out.empty())
        logger_->debug("response", "responses fetched",
                       {{"count", std::to_string(out.size())}, {"user", out.front().user_key.str()}});
    return out;
}

Document Pipeline::summary() const {
    std::map<std::string, std::int64_t> by_point;
    for (const auto& doc : store_.query(Collection::Attacks))
        ++by_point[doc.at("detection_point_id").get<std::string>()];
    return Document{{"event_count", store_.count(Collection::Events)},
                    {"attack_count", store_.count(Collection::Attacks)},
                    {"response_count", store_.count(Collection::Responses)},
                    {"attacks_by_detection_point", by_point}};
}

} // namespace sentinel
