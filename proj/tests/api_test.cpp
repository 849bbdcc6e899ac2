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

#include <doctest.h>

#include <algorithm>
#include <thread>

#include "sentinel/errors.hpp"
#include "support.hpp"

using namespace sentinel;
using namespace std::chrono_literals;
using testing::event_body;
using testing::FeedClient;
using testing::kT0;
using testing::LiveService;
using testing::make_point;

namespace {

struct RouterFixture {
    RouterFixture() : pipeline(store, clock, feed, nullptr, default_reputation_ladder(), {0, {}}), router(pipeline, nullptr) {
        pipeline.seed_detection_points({make_point("login", SeverityRating::VeryLow, 3, 30)});
    }
    InMemoryStore store;
    ManualClock clock{kT0};
    FeedHub feed;
    Pipeline pipeline;
    ApiRouter router;
};

const char* kPointBody =
    R"({"id":"upload","label":"Upload","severity":"High","rule_threshold":3,"rule_window":300,"responses":["logout","custom:disable-account"]})";

} // namespace

TEST_CASE("POST /events accepts a well-formed event") {
    RouterFixture f;
    const auto reply = f.router.handle("POST", "/api/v1/events", event_body("bob", std::nullopt, "10.0.0.7", "login"));
    CHECK(reply.status == 200);
    CHECK(reply.body == Document(kEventAccepted));
    const auto events = f.store.query(Collection::Events);
    REQUIRE(events.size() == 1);
    CHECK(events[0]["occurred_at"] == kT0);
    CHECK(events[0]["ip_address"] == "10.0.0.7");
    CHECK(events[0]["username"] == "bob");
}

TEST_CASE("POST /events rejects every malformed shape with the same body") {
    RouterFixture f;
    const std::vector<std::string> bad = {
        "",
        "{not json",
        "[]",
        R"({"detection_point":{"id":"login"}})",
        R"({"user":{"username":"bob","ip_address":"10.0.0.1"}})",
        event_body(std::nullopt, std::nullopt, "10.0.0.1", "login"),
        event_body("bob", std::nullopt, "256.1.1.1", "login"),
        event_body("bob", std::nullopt, "1.2.3", "login"),
        event_body("bob", std::nullopt, "10.0.0.1", "nope"),
        R"({"user":{"username":7,"ip_address":"10.0.0.1"},"detection_point":{"id":"login"}})",
        R"({"user":{"username":"bob","ip_address":"10.0.0.1"},"detection_point":{"id":"login"},"occurred_at":"soon"})",
    };
    for (const auto& body : bad) {
        INFO(body);
        const auto reply = f.router.handle("POST", "/api/v1/events", body);
        CHECK(reply.status == 400);
        CHECK(reply.body == Document(kEventRejected));
    }
    CHECK(f.store.count(Collection::Events) == 0);
}

TEST_CASE("GET /responses drains by either identity") {
    RouterFixture f;
    for (int i = 0; i < 3; ++i)
        CHECK(f.router.handle("POST", "/api/v1/events", event_body("bob", "s9", "10.0.0.1", "login", kT0 + i)).status == 200);

    CHECK(f.router.handle("GET", "/api/v1/responses", "").status == 400);
    CHECK(f.router.handle("GET", "/api/v1/responses?username=&session_id=", "").body.contains("error"));

    const auto first = f.router.handle("GET", "/api/v1/responses?username=bob", "");
    CHECK(first.status == 200);
    REQUIRE(first.body.is_array());
    REQUIRE(first.body.size() == 1);
    CHECK(first.body[0]["kind"] == "warn");
    CHECK(first.body[0]["user_key"] == Document{{"kind", "username"}, {"value", "bob"}});
    CHECK(first.body[0]["payload"] == "Suspicious activity detected");

    const auto second = f.router.handle("GET", "/api/v1/responses?username=bob&session_id=s9", "");
    CHECK(second.status == 200);
    CHECK(second.body == Document::array());
}

TEST_CASE("query strings are percent-decoded") {
    CHECK(url_decode("a%20b+c", true) == "a b c");
    CHECK(url_decode("a+b", false) == "a+b");
    CHECK_FALSE(url_decode("%2", true));
    CHECK_FALSE(url_decode("%zz", true));
    const auto q = parse_query("username=J%C3%BCrgen&session_id=&x");
    CHECK(q.at("username") == "J\xC3\xBCrgen");
    CHECK(q.at("session_id").empty());
    CHECK(q.at("x").empty());
}

TEST_CASE("detection point administration") {
    RouterFixture f;
    auto sub = std::make_shared<testing::RecordingSubscriber>();
    f.feed.subscribe(sub);

    const auto created = f.router.handle("POST", "/api/v1/detection-points", kPointBody);
    CHECK(created.status == 201);
    CHECK(created.body["id"] == "upload");
    CHECK(created.body["responses"][1] == "custom:disable-account");

    CHECK(f.router.handle("POST", "/api/v1/detection-points", kPointBody).status == 409);
    CHECK(f.router.handle("POST", "/api/v1/detection-points", "{").status == 400);
    CHECK(f.router
              .handle("POST", "/api/v1/detection-points",
                      R"({"id":"reputation","label":"r","severity":"High","rule_threshold":3,"rule_window":10,"responses":["warn"]})")
              .status == 400);
    CHECK(f.router
              .handle("POST", "/api/v1/detection-points",
                      R"({"id":"x","label":"x","severity":"High","rule_threshold":1,"rule_window":10,"responses":["warn"]})")
              .status == 400);

    const auto listed = f.router.handle("GET", "/api/v1/detection-points", "");
    CHECK(listed.status == 200);
    CHECK(listed.body.size() == 2);

    CHECK(f.router.handle("DELETE", "/api/v1/detection-points/upload", "").status == 200);
    CHECK(f.router.handle("DELETE", "/api/v1/detection-points/upload", "").status == 404);
    CHECK(f.router.handle("GET", "/api/v1/detection-points", "").body.size() == 1);

    const auto messages = sub->messages();
    REQUIRE(messages.size() == 2);
    CHECK(messages[0]["kind"] == "detection_point_change");
    CHECK(messages[0]["payload"]["action"] == "created");
    CHECK(messages[1]["payload"]["action"] == "deleted");
    CHECK(messages[1]["payload"]["detection_point"]["id"] == "upload");
}

TEST_CASE("summary counts and unknown routes") {
    RouterFixture f;
    for (int i = 0; i < 4; ++i) f.router.handle("POST", "/api/v1/events", event_body("bob", std::nullopt, "10.0.0.1", "login", kT0 + i));
    const auto summary = f.router.handle("GET", "/api/v1/summary", "");
    CHECK(summary.status == 200);
    CHECK(summary.body["event_count"] == 4);
    CHECK(summary.body["attack_count"] == 1);
    CHECK(summary.body["response_count"] == 1);
    CHECK(summary.body["attacks_by_detection_point"] == Document{{"login", 1}});

    f.router.handle("GET", "/api/v1/responses?username=bob", "");
    CHECK(f.router.handle("GET", "/api/v1/summary", "").body["response_count"] == 0);

    CHECK(f.router.handle("GET", "/nowhere", "").status == 404);
    CHECK(f.router.handle("GET", "/api/v1/nowhere", "").status == 404);
    CHECK(f.router.handle("PUT", "/api/v1/events", "").status == 405);
    CHECK(f.router.handle("GET", "/api/v1/feed", "").status == 400);
}

TEST_CASE("live service over HTTP") {
    LiveService service({make_point("login", SeverityRating::VeryLow, 3, 30)});
    auto http = service.http();

    auto posted = http.Post("/api/v1/events", event_body("bob", std::nullopt, "10.0.0.1", "login"), "application/json");
    REQUIRE(posted);
    CHECK(posted->status == 200);
    CHECK(posted->get_header_value("Content-Type") == "application/json");
    CHECK(Document::parse(posted->body) == Document(kEventAccepted));

    auto rejected = http.Post("/api/v1/events", "garbage", "application/json");
    REQUIRE(rejected);
    CHECK(rejected->status == 400);
    CHECK(Document::parse(rejected->body) == Document(kEventRejected));

    auto plain_feed = http.Get("/api/v1/feed");
    REQUIRE(plain_feed);
    CHECK(plain_feed->status == 400);

    auto created = http.Post("/api/v1/detection-points", kPointBody, "application/json");
    REQUIRE(created);
    CHECK(created->status == 201);
    auto removed = http.Delete("/api/v1/detection-points/upload");
    REQUIRE(removed);
    CHECK(removed->status == 200);

    service.pipeline.drain();
    auto summary = http.Get("/api/v1/summary");
    REQUIRE(summary);
    CHECK(Document::parse(summary->body)["event_count"] == 1);
}

TEST_CASE("feed streams one envelope per event") {
    LiveService service({make_point("login", SeverityRating::VeryLow, 3, 30)});
    FeedClient feed(service.server.port());
    auto http = service.http();
    REQUIRE(http.Post("/api/v1/events", event_body("bob", std::nullopt, "10.0.0.1", "login"), "application/json"));

    const auto envelope = feed.next(5s);
    REQUIRE(envelope);
    CHECK((*envelope)["kind"] == "event");
    CHECK((*envelope)["payload"]["username"] == "bob");
    CHECK((*envelope)["emitted_at"] == kT0);
    service.pipeline.drain();
    CHECK_FALSE(feed.next(300ms));
}

TEST_CASE("feed orders event, attack and response envelopes") {
    LiveService service({make_point("login", SeverityRating::VeryLow, 3, 30)});
    FeedClient feed(service.server.port());
    auto http = service.http();
    for (int i = 0; i < 3; ++i)
        REQUIRE(http.Post("/api/v1/events", event_body("bob", std::nullopt, "10.0.0.1", "login", kT0 + i), "application/json"));

    std::vector<std::string> kinds;
    Document attack, response;
    for (int i = 0; i < 5; ++i) {
        const auto envelope = feed.next(5s);
        REQUIRE(envelope);
        kinds.push_back((*envelope)["kind"]);
        if (kinds.back() == "attack") attack = (*envelope)["payload"];
        if (kinds.back() == "response") response = (*envelope)["payload"];
    }
    CHECK(kinds == std::vector<std::string>{"event", "event", "event", "attack", "response"});
    CHECK(attack["contributing_event_ids"].size() == 3);
    CHECK(response["source_attack_id"] == attack["attack_id"]);
}

TEST_CASE("feed answers ping and stays quiet without activity") {
    LiveService service({});
    FeedClient feed(service.server.port());
    CHECK_FALSE(feed.next(300ms));
    feed.send(R"({"kind":"ping"})");
    const auto pong = feed.next(5s);
    REQUIRE(pong);
    CHECK((*pong)["kind"] == "pong");
}

TEST_CASE("feed carries detection point changes") {
    LiveService service({});
    FeedClient feed(service.server.port());
    auto http = service.http();
    REQUIRE(http.Post("/api/v1/detection-points", kPointBody, "application/json"));
    const auto envelope = feed.next(5s);
    REQUIRE(envelope);
    CHECK((*envelope)["kind"] == "detection_point_change");
    CHECK((*envelope)["payload"]["detection_point"]["id"] == "upload");
}

TEST_CASE("slow analysis does not delay acknowledgements") {
    LiveService service({make_point("login", SeverityRating::VeryLow, 3, 30)}, Pipeline::Options{1, 1000ms});
    auto http = service.http();
    const auto start = std::chrono::steady_clock::now();
    auto posted = http.Post("/api/v1/events", event_body("bob", std::nullopt, "10.0.0.1", "login"), "application/json");
    const auto elapsed = std::chrono::steady_clock::now() - start;
    REQUIRE(posted);
    CHECK(posted->status == 200);
    CHECK(elapsed < 500ms);
    CHECK(service.store.count(Collection::Events) == 1);
    service.pipeline.drain();
}

TEST_CASE("per-user envelopes stay ordered under concurrent posting") {
    LiveService service({make_point("p", SeverityRating::VeryLow, 1'000'000, 30)}, Pipeline::Options{2, {}});
    auto sub = std::make_shared<testing::RecordingSubscriber>();
    service.feed.subscribe(sub);
    std::vector<std::jthread> posters;
    for (int u = 0; u < 4; ++u)
        posters.emplace_back([&, u] {
            auto http = service.http();
            for (int i = 0; i < 25; ++i)
                http.Post("/api/v1/events", event_body("u" + std::to_string(u), std::nullopt, "10.0.0.1", "p", kT0 + i),
                          "application/json");
        });
    posters.clear();
    service.pipeline.drain();

    std::map<std::string, std::vector<std::int64_t>> times;
    std::map<std::string, std::size_t> attacks;
    for (const auto& m : sub->messages()) {
        if (m["kind"] == "event") times[m["payload"]["username"]].push_back(m["payload"]["occurred_at"]);
        if (m["kind"] == "attack") ++attacks[m["payload"]["user_key"]["value"]];
    }
    REQUIRE(times.size() == 4);
    for (const auto& [user, seq] : times) {
        CHECK(seq.size() == 25);
        CHECK(std::is_sorted(seq.begin(), seq.end()));
        CHECK(attacks[user] == 2);
    }
}
