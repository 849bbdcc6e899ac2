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

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "sentinel/feed.hpp"
#include "sentinel/logging.hpp"
#include "sentinel/pipeline.hpp"

namespace sentinel {

inline constexpr std::string_view kEventAccepted = "Event is being added";
inline constexpr std::string_view kEventRejected = "Incorrect formatting within POST request";
inline constexpr std::string_view kJsonContentType = "application/json";

struct ApiReply {
    unsigned status = 200;
    Document body;
};

// Maps HTTP requests onto the pipeline. Transport independent.
class ApiRouter {
public:
    ApiRouter(Pipeline& pipeline, std::shared_ptr<const Logger> logger);

    // `target` is the raw request target including any query string.
    ApiReply handle(std::string_view method, std::string_view target, std::string_view body);

    ApiReply post_event(std::string_view body);
    ApiReply get_responses(const std::map<std::string, std::string>& query);
    ApiReply create_detection_point(std::string_view body);
    ApiReply list_detection_points();
    ApiReply delete_detection_point(std::string_view id);
    ApiReply get_summary();

private:
    Pipeline& pipeline_;
    std::shared_ptr<const Logger> logger_;
};

// Percent-decoding ('+' as space in query strings).
std::optional<std::string> url_decode(std::string_view text, bool plus_as_space);
std::map<std::string, std::string> parse_query(std::string_view query);

// "host:port"; throws ConfigError.
std::pair<std::string, std::uint16_t> parse_listen_address(std::string_view text);

// HTTP/1.1 + WebSocket feed on one port.
//   POST   /api/v1/events
//   GET    /api/v1/responses?username=&session_id=
//   POST   /api/v1/detection-points
//   GET    /api/v1/detection-points
//   DELETE /api/v1/detection-points/{id}
//   GET    /api/v1/summary
//   GET    /api/v1/feed  (upgrade)
class HttpServer {
public:
    struct Options {
        std::string address = "127.0.0.1";
        std::uint16_t port = 8047; // 0 picks a free port
        std::size_t threads = 4;
        // Feed messages buffered per subscriber before it is dropped.
        std::size_t feed_queue_limit = 4096;
    };

    HttpServer(Pipeline& pipeline, FeedHub& feed, std::shared_ptr<const Logger> logger, Options options);
    ~HttpServer();

    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    void start();
    void stop();
    // Blocks until stop() is called from another thread or a signal handler.
    void wait();
    std::uint16_t port() const noexcept;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace sentinel
