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

#include "sentinel/client.hpp"

#include <httplib.h>

#include <algorithm>

#include "sentinel/pipeline.hpp"
#include "sentinel/wire.hpp"

namespace sentinel::client {

namespace {

bool short_digit_field(std::string_view field) {
    return !field.empty() && field.size() <= 3 &&
           std::all_of(field.begin(), field.end(), [](char c) { return c >= '0' && c <= '9'; });
}

// Four 1-3 digit fields, any of which is above 255.
bool out_of_range_quad(std::string_view text) {
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (true) {
        const auto dot = text.find('.', pos);
        fields.push_back(text.substr(pos, dot == std::string_view::npos ? std::string_view::npos : dot - pos));
        if (dot == std::string_view::npos || fields.size() > 4) break;
        pos = dot + 1;
    }
    if (fields.size() != 4 || !std::all_of(fields.begin(), fields.end(), short_digit_field)) return false;
    return std::any_of(fields.begin(), fields.end(), [](std::string_view field) {
        int value = 0;
        for (char c : field) value = value * 10 + (c - '0');
        return value > 255;
    });
}

std::string decoded_message(const std::string& body) {
    const auto doc = Document::parse(body, nullptr, false);
    if (doc.is_string()) return doc.get<std::string>();
    if (doc.is_object() && doc.contains("error") && doc["error"].is_string()) return doc["error"].get<std::string>();
    return body;
}

httplib::Client make_http(const std::string& endpoint, std::chrono::milliseconds timeout) {
    httplib::Client http(endpoint);
    http.set_connection_timeout(timeout);
    http.set_read_timeout(timeout);
    http.set_write_timeout(timeout);
    return http;
}

} // namespace

PingInputClass classify_ping_input(std::string_view raw_input) noexcept {
    if (validate_ipv4(raw_input)) return PingInputClass::Legitimate;
    if (out_of_range_quad(raw_input)) return PingInputClass::UserError;
    return PingInputClass::Suspicious;
}

std::string_view to_string(PingInputClass value) noexcept {
    switch (value) {
    case PingInputClass::Legitimate: return "legitimate";
    case PingInputClass::UserError: return "user_error";
    case PingInputClass::Suspicious: return "suspicious";
    }
    return "suspicious";
}

Client::Client(std::string endpoint, Options options) : endpoint_(std::move(endpoint)), options_(options) {}

Delivery Client::report_event(const std::optional<std::string>& username, const std::optional<std::string>& session_id,
                              std::string_view ip_address, std::string_view detection_point_id) const noexcept {
    Delivery out;
    try {
        EventSubmission submission;
        submission.username = username;
        submission.session_id = session_id;
        submission.ip_address = std::string(ip_address);
        submission.detection_point_id = std::string(detection_point_id);

        auto http = make_http(endpoint_, options_.timeout);
        const auto result = http.Post("/api/v1/events", to_document(submission).dump(), "application/json");
        if (!result) {
            out.message = "delivery failed: " + httplib::to_string(result.error());
            return out;
        }
        out.http_status = result->status;
        out.body = result->body;
        out.message = decoded_message(result->body);
        out.status = result->status == 200 ? Delivery::Status::Accepted : Delivery::Status::Rejected;
    } catch (const std::exception& e) {
        out.status = Delivery::Status::DeliveryFailed;
        out.message = std::string("delivery failed: ") + e.what();
    } catch (...) {
        out.status = Delivery::Status::DeliveryFailed;
        out.message = "delivery failed";
    }
    return out;
}

PollResult Client::poll_responses(const std::optional<std::string>& username,
                                  const std::optional<std::string>& session_id) const noexcept {
    PollResult out;
    try {
        httplib::Params params;
        if (username) params.emplace("username", *username);
        if (session_id) params.emplace("session_id", *session_id);
        auto http = make_http(endpoint_, options_.timeout);
        const auto result = http.Get("/api/v1/responses", params, httplib::Headers{});
        if (!result) {
            out.delivery_failed = true;
            out.error = "delivery failed: " + httplib::to_string(result.error());
            return out;
        }
        if (result->status != 200) {
            out.delivery_failed = true;
            out.error = decoded_message(result->body);
            return out;
        }
        for (const auto& doc : Document::parse(result->body)) out.directives.push_back(doc.get<ResponseDirective>());
    } catch (const std::exception& e) {
        out.directives.clear();
        out.delivery_failed = true;
        out.error = std::string("delivery failed: ") + e.what();
    } catch (...) {
        out.directives.clear();
        out.delivery_failed = true;
        out.error = "delivery failed";
    }
    return out;
}

} // namespace sentinel::client
