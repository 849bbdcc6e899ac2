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

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sentinel/model.hpp"
#include "sentinel/wire.hpp"

namespace sentinel::sim {

enum class Label { Malicious, Benign };

struct TimelineEntry {
    Timestamp offset = 0;
    std::optional<std::string> username;
    std::optional<std::string> session_id;
    std::string ip_address;
    std::string detection_point_id;
    // Raw value typed into an IP field; when set, the entry is only reported
    // if the client prefilter classifies it as suspicious.
    std::optional<std::string> ping_input;
    Label label = Label::Benign;
};

struct ExpectedAttack {
    Timestamp offset = 0;
    UserKey user;
    Mechanism mechanism = Mechanism::Rule;
    std::string detection_point_id;

    friend auto operator<=>(const ExpectedAttack&, const ExpectedAttack&) = default;
};

struct ExpectedDirective {
    Timestamp offset = 0;
    UserKey user;
    std::string kind; // ladder spelling

    friend auto operator<=>(const ExpectedDirective&, const ExpectedDirective&) = default;
};

struct Scenario {
    std::string name;
    std::string description;
    std::vector<DetectionPoint> detection_points;
    std::vector<ResponseKind> reputation_ladder = default_reputation_ladder();
    std::vector<TimelineEntry> timeline;
    std::vector<ExpectedAttack> expected_attacks;
    // Unset when the scenario does not constrain directives.
    std::optional<std::vector<ExpectedDirective>> expected_directives;
};

// Throws ConfigError naming the origin and the field path.
Scenario parse_scenario(std::string_view text, std::string_view origin = "scenario");
Scenario load_scenario(const std::filesystem::path& path);

struct DetectedAttack {
    ExpectedAttack key;
    std::string attack_id;
    std::size_t contributing_events = 0;
    std::int64_t escalation_level = 0;
    bool all_benign = false;
};

struct Tally {
    std::size_t expected = 0;
    std::size_t matched = 0;
    std::size_t missing = 0;
    std::size_t unexpected = 0;
};

struct ScenarioReport {
    std::string scenario;
    Timestamp start = 0;
    std::size_t events_sent = 0;
    std::size_t events_filtered = 0;
    std::size_t events_rejected = 0;
    std::vector<DetectedAttack> attacks_detected;
    std::vector<ExpectedDirective> directives_issued;
    Tally attacks;
    std::optional<Tally> directives;
    std::vector<ExpectedAttack> missing_attacks;
    std::vector<ExpectedAttack> unexpected_attacks;
    std::vector<ExpectedDirective> missing_directives;
    std::vector<ExpectedDirective> unexpected_directives;
    std::size_t false_positives = 0;
    std::size_t false_negatives = 0;
};

// Replays the timeline through validate -> analyze -> respond on a virtual
// clock starting at `start`. Single-threaded and deterministic.
ScenarioReport run_scenario(const Scenario& scenario, Timestamp start);

Document to_document(const ScenarioReport& report);

struct Diff {
    int exit_code = 0;
    std::string text;
};

// exit 0 iff detected attacks (and directives, when constrained) equal the expectations.
Diff diff_expected(const ScenarioReport& report, const Scenario& scenario);

std::string format_report(const ScenarioReport& report);

} // namespace sentinel::sim
