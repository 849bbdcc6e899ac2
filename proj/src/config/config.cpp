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

#include "sentinel/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "sentinel/errors.hpp"
#include "sentinel/wire.hpp"

namespace sentinel {

namespace {

[[noreturn]] void fail(std::string_view origin, const std::string& where, const std::string& what) {
    throw ConfigError(std::string(origin) + ": " + where + ": " + what);
}

std::string string_setting(const Document& doc, const char* key, std::string_view origin) {
    const auto& v = doc.at(key);
    if (!v.is_string()) fail(origin, key, "expected a string");
    return v.get<std::string>();
}

} // namespace

std::pair<std::size_t, std::size_t> line_and_column(std::string_view text, std::size_t offset) {
    offset = std::min(offset, text.size());
    const auto before = text.substr(0, offset);
    const auto line = static_cast<std::size_t>(std::count(before.begin(), before.end(), '\n')) + 1;
    const auto last_nl = before.rfind('\n');
    const auto column = last_nl == std::string_view::npos ? offset + 1 : offset - last_nl;
    return {line, column};
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path.string() + ": cannot open");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

ServiceConfig parse_config(std::string_view text, std::string_view origin) {
    ServiceConfig config;
    if (std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); })) return config;

    Document doc;
    try {
        doc = Document::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        const auto [line, column] = line_and_column(text, e.byte > 0 ? e.byte - 1 : 0);
        fail(origin, "line " + std::to_string(line) + ", column " + std::to_string(column), "syntax error");
    }
    if (!doc.is_object()) fail(origin, "(root)", "expected an object");

    static const std::set<std::string> known{"listen", "store", "log_level", "detection_points", "reputation_ladder"};
    for (const auto& [key, value] : doc.items())
        if (!known.contains(key)) fail(origin, key, "unknown setting");

    if (doc.contains("listen")) {
        config.listen = string_setting(doc, "listen", origin);
        const auto colon = config.listen.rfind(':');
        const auto port = colon == std::string::npos ? std::string() : config.listen.substr(colon + 1);
        if (colon == 0 || port.empty() || port.size() > 5 || !std::all_of(port.begin(), port.end(), [](unsigned char c) { return std::isdigit(c) != 0; }) ||
            std::stoul(port) > 65535)
            fail(origin, "listen", "expected host:port");
    }
    if (doc.contains("store")) {
        config.store = string_setting(doc, "store", origin);
        if (config.store != "memory" && !(config.store.starts_with("file:") && config.store.size() > 5))
            fail(origin, "store", "expected 'memory' or 'file:PATH'");
    }
    if (doc.contains("log_level")) {
        const auto level = parse_log_level(string_setting(doc, "log_level", origin));
        if (!level) fail(origin, "log_level", "expected error, warn, info or debug");
        config.log_level = *level;
    }
    if (doc.contains("detection_points")) {
        const auto& seeds = doc.at("detection_points");
        if (!seeds.is_array()) fail(origin, "detection_points", "expected an array");
        std::set<std::string> seen;
        for (std::size_t i = 0; i < seeds.size(); ++i) {
            const auto where = "detection_points[" + std::to_string(i) + "]";
            try {
                auto point = seeds[i].get<DetectionPoint>();
                validate_detection_point(point);
                if (!seen.insert(point.id).second) fail(origin, where + ".id", "duplicate id '" + point.id + "'");
                config.detection_points.push_back(std::move(point));
            } catch (const ValidationError& e) {
                fail(origin, where, e.what());
            }
        }
    }
    if (doc.contains("reputation_ladder")) {
        const auto& ladder = doc.at("reputation_ladder");
        if (!ladder.is_array() || ladder.empty()) fail(origin, "reputation_ladder", "expected a non-empty array");
        config.reputation_ladder.clear();
        for (std::size_t i = 0; i < ladder.size(); ++i) {
            try {
                config.reputation_ladder.push_back(ladder[i].get<ResponseKind>());
            } catch (const ValidationError& e) {
                fail(origin, "reputation_ladder[" + std::to_string(i) + "]", e.what());
            }
        }
    }
    return config;
}

ServiceConfig load_config(const std::filesystem::path& path) {
    return parse_config(read_text_file(path), path.string());
}

} // namespace sentinel
