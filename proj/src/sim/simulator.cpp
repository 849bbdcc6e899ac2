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

#include "sentinel/scenario.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "sentinel/client.hpp"
#include "sentinel/clock.hpp"
#include "sentinel/config.hpp"
#include "sentinel/errors.hpp"
#include "sentinel/feed.hpp"
#include "sentinel/pipeline.hpp"
#include "sentinel/store.hpp"

namespace sentinel::sim {

namespace {

class ScenarioParser {
public:
    explicit ScenarioParser(std::string_view origin) : origin_(origin) {}

    [[noreturn]] void fail(const std::string& where, const std::string& what) const {
        throw ConfigError(std::string(origin_) + ": " + where + ": " + what);
    }

    const Document& require(const Document& doc, const char* key, const std::string& where) const {
        if (!doc.is_object()) fail(where, "expected an object");
        const auto it = doc.find(key);
        if (it == doc.end() || it->is_null()) fail(where + "." + key, "required");
        return *it;
    }

    std::string text(const Document& doc, const char* key, const std::string& where) const {
        const auto& v = require(doc, key, where);
        if (!v.is_string()) fail(where + "." + key, "expected a string");
        return v.get<std::string>();
    }

    std::optional<std::string> optional_text(const Document& doc, const char* key, const std::string& where) const {
        const auto it = doc.find(key);
        if (it == doc.end() || it->is_null()) return std::nullopt;
        if (!it->is_string()) fail(where + "." + key, "expected a string");
        return it->get<std::string>();
    }

    Timestamp offset(const Document& doc, const std::string& where) const {
        const auto& v = require(doc, "offset", where);
        if (!v.is_number_integer() || v.get<Timestamp>() < 0) fail(where + ".offset", "expected a non-negative integer");
        return v.get<Timestamp>();
    }

    UserKey user(const Document& doc, const std::string& where) const {
        try {
            return require(doc, "user", where).get<UserKey>();
        } catch (const ValidationError& e) {
            fail(where + ".user", e.what());
        }
    }

private:
    std::string_view origin_;
};

std::string describe(const ExpectedAttack& a) {
    return "offset=" + std::to_string(a.offset) + " user=" + a.user.str() +
           " mechanism=" + std::string(to_string(a.mechanism)) + " detection_point=" + a.detection_point_id;
}

std::string describe(const ExpectedDirective& d) {
    return "offset=" + std::to_string(d.offset) + " user=" + d.user.str() + " kind=" + d.kind;
}

// Multiset difference on sorted copies.
template <typename T>
Tally compare(std::vector<T> expected, std::vector<T> detected, std::vector<T>& missing, std::vector<T>& unexpected) {
    std::sort(expected.begin(), expected.end());
    std::sort(detected.begin(), detected.end());
    std::set_difference(expected.begin(), expected.end(), detected.begin(), detected.end(), std::back_inserter(missing));
    std::set_difference(detected.begin(), detected.end(), expected.begin(), expected.end(), std::back_inserter(unexpected));
    Tally t;
    t.expected = expected.size();
    t.missing = missing.size();
    t.unexpected = unexpected.size();
    t.matched = expected.size() - missing.size();
    return t;
}

Document tally_document(const Tally& t) {
    return {{"expected", t.expected}, {"matched", t.matched}, {"missing", t.missing}, {"unexpected", t.unexpected}};
}

Document attack_key_document(const ExpectedAttack& a) {
    return {{"offset", a.offset},
            {"user", a.user},
            {"mechanism", to_string(a.mechanism)},
            {"detection_point_id", a.detection_point_id}};
}

Document directive_document(const ExpectedDirective& d) {
    return {{"offset", d.offset}, {"user", d.user}, {"kind", d.kind}};
}

} // namespace

Scenario parse_scenario(std::string_view text, std::string_view origin) {
    const ScenarioParser p(origin);
    Document doc;
    try {
        doc = Document::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        const auto [line, column] = line_and_column(text, e.byte > 0 ? e.byte - 1 : 0);
        p.fail("line " + std::to_string(line) + ", column " + std::to_string(column), "syntax error");
    }

    Scenario s;
    s.name = p.text(doc, "name", "(root)");
    s.description = p.optional_text(doc, "description", "(root)").value_or("");

    const auto& points = p.require(doc, "detection_points", "(root)");
    if (!points.is_array()) p.fail("detection_points", "expected an array");
    std::set<std::string> point_ids;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto where = "detection_points[" + std::to_string(i) + "]";
        try {
            auto point = points[i].get<DetectionPoint>();
            validate_detection_point(point);
            if (!point_ids.insert(point.id).second) p.fail(where + ".id", "duplicate id '" + point.id + "'");
            s.detection_points.push_back(std::move(point));
        } catch (const ValidationError& e) {
            p.fail(where, e.what());
        }
    }

    if (doc.contains("reputation_ladder")) {
        const auto& ladder = doc.at("reputation_ladder");
        if (!ladder.is_array() || ladder.empty()) p.fail("reputation_ladder", "expected a non-empty array");
        s.reputation_ladder.clear();
        for (std::size_t i = 0; i < ladder.size(); ++i) {
            try {
                s.reputation_ladder.push_back(ladder[i].get<ResponseKind>());
            } catch (const ValidationError& e) {
                p.fail("reputation_ladder[" + std::to_string(i) + "]", e.what());
            }
        }
    }

    const auto& timeline = p.require(doc, "timeline", "(root)");
    if (!timeline.is_array()) p.fail("timeline", "expected an array");
    Timestamp previous = 0;
    for (std::size_t i = 0; i < timeline.size(); ++i) {
        const auto where = "timeline[" + std::to_string(i) + "]";
        const auto& item = timeline[i];
        TimelineEntry entry;
        entry.offset = p.offset(item, where);
        if (entry.offset < previous)
            p.fail(where + ".offset", "offsets must be non-decreasing (" + std::to_string(entry.offset) + " after " +
                                          std::to_string(previous) + ")");
        previous = entry.offset;
        entry.username = p.optional_text(item, "username", where);
        entry.session_id = p.optional_text(item, "session_id", where);
        if (!(entry.username && !entry.username->empty()) && !(entry.session_id && !entry.session_id->empty()))
            p.fail(where, "username or session_id required");
        entry.ip_address = p.text(item, "ip_address", where);
        entry.detection_point_id = p.text(item, "detection_point_id", where);
        if (!point_ids.contains(entry.detection_point_id))
            p.fail(where + ".detection_point_id", "unknown detection point '" + entry.detection_point_id + "'");
        entry.ping_input = p.optional_text(item, "ping_input", where);
        const auto label = p.text(item, "label", where);
        if (label == "malicious") entry.label = Label::Malicious;
        else if (label == "benign") entry.label = Label::Benign;
        else p.fail(where + ".label", "expected 'malicious' or 'benign'");
        s.timeline.push_back(std::move(entry));
    }

    const auto& expected = p.require(doc, "expected", "(root)");
    const auto& attacks = p.require(expected, "attacks", "expected");
    if (!attacks.is_array()) p.fail("expected.attacks", "expected an array");
    for (std::size_t i = 0; i < attacks.size(); ++i) {
        const auto where = "expected.attacks[" + std::to_string(i) + "]";
        ExpectedAttack a;
        a.offset = p.offset(attacks[i], where);
        a.user = p.user(attacks[i], where);
        const auto mechanism = parse_mechanism(p.text(attacks[i], "mechanism", where));
        if (!mechanism) p.fail(where + ".mechanism", "expected 'rule' or 'reputation'");
        a.mechanism = *mechanism;
        a.detection_point_id = a.mechanism == Mechanism::Reputation
                                   ? p.optional_text(attacks[i], "detection_point_id", where)
                                         .value_or(std::string(kReputationPointId))
                                   : p.text(attacks[i], "detection_point_id", where);
        s.expected_attacks.push_back(std::move(a));
    }
    if (expected.contains("directives")) {
        const auto& directives = expected.at("directives");
        if (!directives.is_array()) p.fail("expected.directives", "expected an array");
        s.expected_directives.emplace();
        for (std::size_t i = 0; i < directives.size(); ++i) {
            const auto where = "expected.directives[" + std::to_string(i) + "]";
            ExpectedDirective d;
            d.offset = p.offset(directives[i], where);
            d.user = p.user(directives[i], where);
            d.kind = p.text(directives[i], "kind", where);
            try {
                d.kind = parse_response_kind(d.kind).spelling();
            } catch (const ValidationError& e) {
                p.fail(where + ".kind", e.what());
            }
            s.expected_directives->push_back(std::move(d));
        }
    }
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    return parse_scenario(read_text_file(path), path.string());
}

ScenarioReport run_scenario(const Scenario& scenario, Timestamp start) {
    InMemoryStore store;
    ManualClock clock(start);
    FeedHub feed;
    Pipeline pipeline(store, clock, feed, Logger::null(), scenario.reputation_ladder, Pipeline::Options{0, {}});
    pipeline.seed_detection_points(scenario.detection_points);

    ScenarioReport report;
    report.scenario = scenario.name;
    report.start = start;

    std::map<std::string, Label> labels;
    for (const auto& entry : scenario.timeline) {
        clock.set(start + entry.offset);
        if (entry.ping_input &&
            client::classify_ping_input(*entry.ping_input) != client::PingInputClass::Suspicious) {
            ++report.events_filtered;
            continue;
        }
        EventSubmission submission{entry.username, entry.session_id, entry.ip_address, entry.detection_point_id,
                                   start + entry.offset};
        SuspiciousEvent event;
        try {
            event = pipeline.accept(submission);
        } catch (const Error&) {
            ++report.events_rejected;
            continue;
        }
        ++report.events_sent;
        labels.emplace(event.event_id, entry.label);

        const auto result = pipeline.process(event);
        if (!result.analysis.attack) continue;
        const auto& attack = *result.analysis.attack;
        DetectedAttack detected;
        detected.key = {attack.detected_at - start, attack.user_key, attack.mechanism, attack.detection_point_id};
        detected.attack_id = attack.attack_id;
        detected.contributing_events = attack.contributing_event_ids.size();
        detected.escalation_level = attack.escalation_level;
        detected.all_benign = std::all_of(attack.contributing_event_ids.begin(), attack.contributing_event_ids.end(),
                                          [&](const std::string& id) { return labels.at(id) == Label::Benign; });
        report.attacks_detected.push_back(std::move(detected));
        if (result.directive)
            report.directives_issued.push_back(
                {result.directive->created_at - start, result.directive->user_key, result.directive->kind.spelling()});
    }

    std::vector<ExpectedAttack> detected_keys;
    for (const auto& a : report.attacks_detected) detected_keys.push_back(a.key);
    report.attacks = compare(scenario.expected_attacks, detected_keys, report.missing_attacks, report.unexpected_attacks);
    if (scenario.expected_directives)
        report.directives = compare(*scenario.expected_directives, report.directives_issued, report.missing_directives,
                                    report.unexpected_directives);
    report.false_positives = static_cast<std::size_t>(std::count_if(
        report.attacks_detected.begin(), report.attacks_detected.end(), [](const auto& a) { return a.all_benign; }));
    report.false_negatives = report.attacks.missing;
    return report;
}

Document to_document(const ScenarioReport& report) {
    Document attacks = Document::array();
    for (const auto& a : report.attacks_detected) {
        auto doc = attack_key_document(a.key);
        doc["attack_id"] = a.attack_id;
        doc["contributing_events"] = a.contributing_events;
        doc["escalation_level"] = a.escalation_level;
        doc["all_benign"] = a.all_benign;
        attacks.push_back(std::move(doc));
    }
    Document directives = Document::array();
    for (const auto& d : report.directives_issued) directives.push_back(directive_document(d));

    auto list = [](const auto& items, auto encode) {
        Document out = Document::array();
        for (const auto& item : items) out.push_back(encode(item));
        return out;
    };

    Document doc{{"scenario", report.scenario},
                 {"start", report.start},
                 {"events", {{"sent", report.events_sent},
                             {"filtered", report.events_filtered},
                             {"rejected", report.events_rejected}}},
                 {"attacks_detected", std::move(attacks)},
                 {"directives_issued", std::move(directives)},
                 {"attacks", tally_document(report.attacks)},
                 {"missing_attacks", list(report.missing_attacks, attack_key_document)},
                 {"unexpected_attacks", list(report.unexpected_attacks, attack_key_document)},
                 {"false_positives", report.false_positives},
                 {"false_negatives", report.false_negatives}};
    if (report.directives) {
        doc["directives"] = tally_document(*report.directives);
        doc["missing_directives"] = list(report.missing_directives, directive_document);
        doc["unexpected_directives"] = list(report.unexpected_directives, directive_document);
    }
    return doc;
}

Diff diff_expected(const ScenarioReport& report, const Scenario& scenario) {
    std::vector<ExpectedAttack> missing_attacks, unexpected_attacks;
    std::vector<ExpectedAttack> detected_keys;
    for (const auto& a : report.attacks_detected) detected_keys.push_back(a.key);
    compare(scenario.expected_attacks, detected_keys, missing_attacks, unexpected_attacks);

    std::vector<ExpectedDirective> missing_directives, unexpected_directives;
    if (scenario.expected_directives)
        compare(*scenario.expected_directives, report.directives_issued, missing_directives, unexpected_directives);

    std::ostringstream out;
    for (const auto& a : missing_attacks) out << "missing attack: " << describe(a) << '\n';
    for (const auto& a : unexpected_attacks) out << "unexpected attack: " << describe(a) << '\n';
    for (const auto& d : missing_directives) out << "missing directive: " << describe(d) << '\n';
    for (const auto& d : unexpected_directives) out << "unexpected directive: " << describe(d) << '\n';

    Diff diff;
    diff.text = out.str();
    diff.exit_code = diff.text.empty() ? 0 : 1;
    return diff;
}

std::string format_report(const ScenarioReport& report) {
    std::ostringstream out;
    out << "scenario " << report.scenario << " (start " << report.start << ")\n";
    out << "  events: " << report.events_sent << " sent, " << report.events_filtered << " filtered, "
        << report.events_rejected << " rejected\n";
    for (const auto& a : report.attacks_detected)
        out << "  attack " << a.attack_id << ": " << describe(a.key) << " events=" << a.contributing_events
            << " level=" << a.escalation_level << '\n';
    for (const auto& d : report.directives_issued) out << "  directive: " << describe(d) << '\n';
    out << "  attacks: " << report.attacks.matched << "/" << report.attacks.expected << " matched, "
        << report.attacks.missing << " missing, " << report.attacks.unexpected << " unexpected\n";
    if (report.directives)
        out << "  directives: " << report.directives->matched << "/" << report.directives->expected << " matched, "
            << report.directives->missing << " missing, " << report.directives->unexpected << " unexpected\n";
    out << "  false positives: " << report.false_positives << ", false negatives: " << report.false_negatives << '\n';
    return out.str();
}

} // namespace sentinel::sim
