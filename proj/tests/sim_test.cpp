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

#include <filesystem>

#include "sentinel/client.hpp"
#include "sentinel/errors.hpp"
#include "sentinel/scenario.hpp"
#include "support.hpp"

using namespace sentinel;
using namespace sentinel::sim;

namespace {

const std::filesystem::path kScenarioDir = SENTINEL_SOURCE_DIR "/scenarios";

std::vector<std::filesystem::path> bundled() {
    std::vector<std::filesystem::path> out;
    for (const auto& entry : std::filesystem::directory_iterator(kScenarioDir))
        if (entry.path().extension() == ".json") out.push_back(entry.path());
    std::sort(out.begin(), out.end());
    return out;
}

const char* kMinimal = R"({
  "name": "mini",
  "detection_points": [{"id":"p","label":"p","severity":"VeryLow","rule_threshold":2,"rule_window":10,"responses":["warn","logout"]}],
  "timeline": [
    {"offset": 0, "username": "a", "ip_address": "10.0.0.1", "detection_point_id": "p", "label": "malicious"},
    {"offset": 5, "username": "a", "ip_address": "10.0.0.1", "detection_point_id": "p", "label": "malicious"}
  ],
  "expected": {"attacks": [{"offset": 5, "user": {"kind": "username", "value": "a"}, "mechanism": "rule", "detection_point_id": "p"}]}
})";

std::string error_of(std::string_view text) {
    try {
        parse_scenario(text, "s.json");
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

Document without_start(Document doc) {
    doc.erase("start");
    return doc;
}

} // namespace

TEST_CASE("bundled scenarios load and pass") {
    const auto files = bundled();
    CHECK(files.size() >= 5);
    for (const auto& file : files) {
        INFO(file.string());
        const auto scenario = load_scenario(file);
        CHECK_FALSE(scenario.timeline.empty());
        const auto report = run_scenario(scenario, testing::kT0);
        const auto diff = diff_expected(report, scenario);
        CHECK(diff.exit_code == 0);
        CHECK(report.false_positives == 0);
        CHECK(report.false_negatives == 0);
        CHECK(report.attacks.matched == scenario.expected_attacks.size());
    }
}

TEST_CASE("scenario validation errors") {
    CHECK(error_of("{").find("s.json") != std::string::npos);
    auto decreasing = Document::parse(kMinimal);
    decreasing["timeline"][0]["offset"] = 9;
    CHECK(error_of(decreasing.dump()).find("timeline[1]") != std::string::npos);

    auto unknown = Document::parse(kMinimal);
    unknown["timeline"][0]["detection_point_id"] = "ghost";
    CHECK(error_of(unknown.dump()).find("timeline[0]") != std::string::npos);

    auto bad_label = Document::parse(kMinimal);
    bad_label["timeline"][0]["label"] = "maybe";
    CHECK(error_of(bad_label.dump()).find("label") != std::string::npos);

    CHECK_THROWS_AS(load_scenario("/nonexistent.json"), ConfigError);
}

TEST_CASE("diff reports missing and unexpected attacks") {
    auto scenario = parse_scenario(kMinimal);
    CHECK(diff_expected(run_scenario(scenario, 0), scenario).exit_code == 0);

    scenario.expected_attacks.push_back({9, {UserKey::Kind::Username, "a"}, Mechanism::Rule, "p"});
    auto diff = diff_expected(run_scenario(scenario, 0), scenario);
    CHECK(diff.exit_code == 1);
    CHECK(diff.text.find("missing") != std::string::npos);

    scenario.expected_attacks.clear();
    const auto report = run_scenario(scenario, 0);
    diff = diff_expected(report, scenario);
    CHECK(diff.exit_code == 1);
    CHECK(diff.text.find("unexpected") != std::string::npos);
    CHECK(report.false_positives == 0);
    CHECK(report.attacks.unexpected == 1);
}

TEST_CASE("directive expectations are checked when present") {
    auto scenario = parse_scenario(kMinimal);
    scenario.expected_directives = std::vector<ExpectedDirective>{{5, {UserKey::Kind::Username, "a"}, "logout"}};
    const auto report = run_scenario(scenario, 0);
    CHECK(diff_expected(report, scenario).exit_code == 1);
    REQUIRE(report.directives);
    CHECK(report.directives->missing == 1);
    CHECK(report.directives->unexpected == 1);
}

TEST_CASE("replay is byte-identical and shift invariant") {
    for (const auto& file : bundled()) {
        INFO(file.string());
        const auto scenario = load_scenario(file);
        const auto a = run_scenario(scenario, testing::kT0);
        const auto b = run_scenario(scenario, testing::kT0);
        CHECK(to_document(a).dump() == to_document(b).dump());
        CHECK(format_report(a) == format_report(b));
        const auto shifted = run_scenario(scenario, testing::kT0 + 86'400 * 3 + 17);
        CHECK(without_start(to_document(a)) == without_start(to_document(shifted)));
    }
}

TEST_CASE("simulator matches a live service driven over HTTP") {
    for (const auto& file : bundled()) {
        INFO(file.string());
        const auto scenario = load_scenario(file);
        const auto report = run_scenario(scenario, testing::kT0);

        InMemoryStore store;
        ManualClock clock(testing::kT0);
        FeedHub feed;
        Pipeline pipeline(store, clock, feed, nullptr, scenario.reputation_ladder, {0, {}});
        pipeline.seed_detection_points(scenario.detection_points);
        HttpServer server(pipeline, feed, nullptr, {"127.0.0.1", 0, 2});
        server.start();
        client::Client reporter("http://127.0.0.1:" + std::to_string(server.port()));

        for (const auto& entry : scenario.timeline) {
            if (entry.ping_input && client::classify_ping_input(*entry.ping_input) != client::PingInputClass::Suspicious)
                continue;
            clock.set(testing::kT0 + entry.offset);
            CHECK(reporter.report_event(entry.username, entry.session_id, entry.ip_address, entry.detection_point_id)
                      .accepted());
        }
        server.stop();

        std::vector<ExpectedAttack> live;
        for (const auto& doc : store.query(Collection::Attacks)) {
            const auto a = doc.get<AttackRecord>();
            live.push_back({a.detected_at - testing::kT0, a.user_key, a.mechanism, a.detection_point_id});
        }
        std::vector<ExpectedAttack> simulated;
        for (const auto& a : report.attacks_detected) simulated.push_back(a.key);
        std::sort(live.begin(), live.end());
        std::sort(simulated.begin(), simulated.end());
        CHECK(live == simulated);
    }
}
