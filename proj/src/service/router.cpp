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

#include <charconv>

#include "sentinel/errors.hpp"
#include "sentinel/server.hpp"

namespace sentinel {

namespace {

constexpr std::string_view kApiPrefix = "/api/v1";

ApiReply error_reply(unsigned status, std::string message) { return {status, {{"error", std::move(message)}}}; }

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

std::optional<std::string> non_empty(const std::map<std::string, std::string>& query, const char* key) {
    const auto it = query.find(key);
    if (it == query.end() || it->second.empty()) return std::nullopt;
    return it->second;
}

} // namespace

std::optional<std::string> url_decode(std::string_view text, bool plus_as_space) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '%') {
            if (i + 2 >= text.size()) return std::nullopt;
            const int hi = hex_value(text[i + 1]);
            const int lo = hex_value(text[i + 2]);
            if (hi < 0 || lo < 0) return std::nullopt;
            out.push_back(static_cast<char>(hi * 16 + lo));
            i += 2;
        } else if (c == '+' && plus_as_space) {
            out.push_back(' ');
        } else {
            out.push_back(c);
        }
    }
    return out;
}

std::map<std::string, std::string> parse_query(std::string_view query) {
    std::map<std::string, std::string> out;
    while (!query.empty()) {
        const auto amp = query.find('&');
        const auto pair = query.substr(0, amp);
        query = amp == std::string_view::npos ? std::string_view{} : query.substr(amp + 1);
        if (pair.empty()) continue;
        const auto eq = pair.find('=');
        auto key = url_decode(pair.substr(0, eq), true);
        auto value = eq == std::string_view::npos ? std::optional<std::string>("") : url_decode(pair.substr(eq + 1), true);
        if (key && value) out.insert_or_assign(std::move(*key), std::move(*value));
    }
    return out;
}

std::pair<std::string, std::uint16_t> parse_listen_address(std::string_view text) {
    const auto colon = text.rfind(':');
    if (colon == std::string_view::npos || colon == 0 || colon + 1 == text.size())
        throw ConfigError("listen: expected host:port, got '" + std::string(text) + "'");
    const auto port_text = text.substr(colon + 1);
    unsigned port = 0;
    const auto [end, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
    if (ec != std::errc{} || end != port_text.data() + port_text.size() || port > 65535)
        throw ConfigError("listen: invalid port '" + std::string(port_text) + "'");
    return {std::string(text.substr(0, colon)), static_cast<std::uint16_t>(port)};
}

ApiRouter::ApiRouter(Pipeline& pipeline, std::shared_ptr<const Logger> logger)
    : pipeline_(pipeline), logger_(logger ? std::move(logger) : Logger::null()) {}

ApiReply ApiRouter::handle(std::string_view method, std::string_view target, std::string_view body) {
    const auto qmark = target.find('?');
    const auto path = target.substr(0, qmark);
    const auto query = qmark == std::string_view::npos ? std::string_view{} : target.substr(qmark + 1);

    if (!path.starts_with(kApiPrefix)) return error_reply(404, "not found");
    const auto route = path.substr(kApiPrefix.size());

    try {
        if (route == "/events") {
            if (method == "POST") return post_event(body);
        } else if (route == "/responses") {
            if (method == "GET") return get_responses(parse_query(query));
        } else if (route == "/detection-points") {
            if (method == "POST") return create_detection_point(body);
            if (method == "GET") return list_detection_points();
        } else if (route.starts_with("/detection-points/")) {
            const auto id = url_decode(route.substr(18), false);
            if (!id || id->empty()) return error_reply(400, "malformed detection point id");
            if (method == "DELETE") return delete_detection_point(*id);
        } else if (route == "/summary") {
            if (method == "GET") return get_summary();
        } else if (route == "/feed") {
            return error_reply(400, "feed requires a websocket upgrade");
        } else {
            return error_reply(404, "not found");
        }
        return error_reply(405, "method not allowed");
    } catch (const StorageError& e) {
        logger_->error("api", "storage failure", {{"error", e.what()}});
        return error_reply(500, "internal error");
    }
}

ApiReply ApiRouter::post_event(std::string_view body) {
    try {
        const auto submission = parse_event_submission(Document::parse(body));
        pipeline_.ingest(submission);
        return {200, kEventAccepted};
    } catch (const nlohmann::json::parse_error& e) {
        logger_->warn("api", "malformed POST rejected", {{"reason", "unparseable body"}});
    } catch (const ValidationError& e) {
        logger_->warn("api", "malformed POST rejected", {{"reason", e.what()}});
    } catch (const IdentityMissing& e) {
        logger_->warn("api", "malformed POST rejected", {{"reason", e.what()}});
    }
    return {400, kEventRejected};
}

ApiReply ApiRouter::get_responses(const std::map<std::string, std::string>& query) {
    const auto username = non_empty(query, "username");
    const auto session_id = non_empty(query, "session_id");
    if (!username && !session_id) return error_reply(400, "username or session_id required");
    return {200, pipeline_.fetch_responses(username, session_id)};
}

ApiReply ApiRouter::create_detection_point(std::string_view body) {
    try {
        const auto doc = Document::parse(body);
        auto point = pipeline_.create_detection_point(doc.get<DetectionPoint>());
        return {201, point};
    } catch (const nlohmann::json::exception&) {
        return error_reply(400, "malformed detection point document");
    } catch (const ValidationError& e) {
        return error_reply(400, e.what());
    } catch (const ConflictError& e) {
        return error_reply(409, e.what());
    }
}

ApiReply ApiRouter::list_detection_points() { return {200, pipeline_.list_detection_points()}; }

ApiReply ApiRouter::delete_detection_point(std::string_view id) {
    try {
        pipeline_.delete_detection_point(id);
        return {200, {{"deleted", id}}};
    } catch (const NotFoundError& e) {
        return error_reply(404, e.what());
    }
}

ApiReply ApiRouter::get_summary() { return {200, pipeline_.summary()}; }

} // namespace sentinel
