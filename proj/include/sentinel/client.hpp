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

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sentinel/model.hpp"

namespace sentinel::client {

// Triage of a value typed into an "IP address" field before deciding
// whether it is worth reporting.
enum class PingInputClass {
    Legitimate, // a valid address
    UserError,  // dotted quad of 1-3 digit fields with a field above 255; not reported
    Suspicious, // anything else; report it
};

PingInputClass classify_ping_input(std::string_view raw_input) noexcept;
std::string_view to_string(PingInputClass value) noexcept;

struct Delivery {
    enum class Status { Accepted, Rejected, DeliveryFailed };

    Status status = Status::DeliveryFailed;
    int http_status = 0;
    std::string body;    // raw response body
    std::string message; // decoded message, or the transport error

    bool accepted() const noexcept { return status == Status::Accepted; }
};

struct PollResult {
    std::vector<ResponseDirective> directives;
    bool delivery_failed = false;
    std::string error;
};

// Instrumentation handle for a protected application. Calls never throw;
// failures come back as values so the host keeps running.
class Client {
public:
    struct Options {
        std::chrono::milliseconds timeout{2000};
    };

    // `endpoint` like "http://127.0.0.1:8047".
    explicit Client(std::string endpoint) : Client(std::move(endpoint), Options{}) {}
    Client(std::string endpoint, Options options);

    Delivery report_event(const std::optional<std::string>& username, const std::optional<std::string>& session_id,
                          std::string_view ip_address, std::string_view detection_point_id) const noexcept;

    PollResult poll_responses(const std::optional<std::string>& username,
                              const std::optional<std::string>& session_id) const noexcept;

    const std::string& endpoint() const noexcept { return endpoint_; }

private:
    std::string endpoint_;
    Options options_;
};

} // namespace sentinel::client
