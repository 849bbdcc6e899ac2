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

#include <httplib.h>

#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include <chrono>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "sentinel/clock.hpp"
#include "sentinel/feed.hpp"
#include "sentinel/pipeline.hpp"
#include "sentinel/server.hpp"
#include "sentinel/store.hpp"

namespace testing {

using namespace sentinel;

inline constexpr Timestamp kT0 = 1'700'000'000;

inline DetectionPoint make_point(std::string id, SeverityRating severity, std::int64_t threshold, Timestamp window,
                                 std::vector<ResponseKind> ladder = {ResponseKind::warn(), ResponseKind::logout()}) {
    DetectionPoint p;
    p.id = std::move(id);
    p.label = p.id;
    p.severity = severity;
    p.rule_threshold = threshold;
    p.rule_window = window;
    p.responses = std::move(ladder);
    return p;
}

class RecordingSubscriber final : public FeedSubscriber {
public:
    bool offer(std::shared_ptr<const std::string> message) override {
        std::lock_guard lock(mutex_);
        messages_.push_back(Document::parse(*message));
        return true;
    }
    std::vector<Document> messages() const {
        std::lock_guard lock(mutex_);
        return messages_;
    }
    std::vector<std::string> kinds() const {
        std::vector<std::string> out;
        for (const auto& m : messages()) out.push_back(m.at("kind").get<std::string>());
        return out;
    }

private:
    mutable std::mutex mutex_;
    std::vector<Document> messages_;
};

// In-process pipeline on a virtual clock, analysis inline.
struct Harness {
    explicit Harness(std::vector<DetectionPoint> points, std::vector<ResponseKind> ladder = default_reputation_ladder())
        : pipeline(store, clock, feed, nullptr, std::move(ladder), Pipeline::Options{0, {}}) {
        pipeline.seed_detection_points(points);
    }

    SuspiciousEvent accept(std::optional<std::string> username, std::optional<std::string> session,
                           const std::string& point, Timestamp t) {
        clock.set(t);
        return pipeline.accept({std::move(username), std::move(session), "10.0.0.1", point, t});
    }

    ProcessResult submit(std::optional<std::string> username, std::optional<std::string> session,
                         const std::string& point, Timestamp t) {
        return pipeline.process(accept(std::move(username), std::move(session), point, t));
    }

    InMemoryStore store;
    ManualClock clock{kT0};
    FeedHub feed;
    Pipeline pipeline;
};

// Full service on an ephemeral port.
struct LiveService {
    explicit LiveService(std::vector<DetectionPoint> points, Pipeline::Options options = {2, {}},
                         std::shared_ptr<const Logger> logger = nullptr)
        : pipeline(store, clock, feed, logger, default_reputation_ladder(), options),
          server(pipeline, feed, logger, HttpServer::Options{"127.0.0.1", 0, 4}) {
        pipeline.seed_detection_points(points);
        server.start();
    }

    std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(server.port()); }
    httplib::Client http() const {
        httplib::Client c("127.0.0.1", server.port());
        c.set_read_timeout(std::chrono::seconds(5));
        return c;
    }

    InMemoryStore store;
    ManualClock clock{kT0};
    FeedHub feed;
    Pipeline pipeline;
    HttpServer server;
};

inline std::string event_body(const std::optional<std::string>& username, const std::optional<std::string>& session,
                              const std::string& ip, const std::string& point,
                              std::optional<Timestamp> at = std::nullopt) {
    return to_document(EventSubmission{username, session, ip, point, at}).dump();
}

// Synchronous feed client. The constructor returns only once the server
// side subscription is live (ping/pong round trip).
class FeedClient {
public:
    explicit FeedClient(std::uint16_t port) : ws_(ioc_) {
        namespace net = boost::asio;
        net::ip::tcp::resolver resolver(ioc_);
        boost::beast::get_lowest_layer(ws_).connect(*resolver.resolve("127.0.0.1", std::to_string(port)).begin());
        ws_.handshake("127.0.0.1", "/api/v1/feed");
        ws_.write(boost::asio::buffer(std::string(R"({"kind":"ping"})")));
        auto pong = next(std::chrono::seconds(5));
        if (!pong || pong->value("kind", "") != "pong") throw std::runtime_error("feed: no pong");
    }

    void send(const std::string& text) { ws_.write(boost::asio::buffer(text)); }

    // A read stays outstanding across calls; cancelling it would close the stream.
    std::optional<Document> next(std::chrono::milliseconds timeout) {
        if (!reading_) {
            reading_ = true;
            ws_.async_read(buffer_, [this](boost::beast::error_code ec, std::size_t) {
                reading_ = false;
                if (ec) return;
                ready_ = Document::parse(boost::beast::buffers_to_string(buffer_.data()));
                buffer_.consume(buffer_.size());
            });
        }
        ioc_.restart();
        ioc_.run_for(timeout);
        auto out = std::move(ready_);
        ready_.reset();
        return out;
    }

private:
    boost::asio::io_context ioc_;
    boost::beast::websocket::stream<boost::beast::tcp_stream> ws_;
    boost::beast::flat_buffer buffer_;
    bool reading_ = false;
    std::optional<Document> ready_;
};

} // namespace testing
