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

#include <boost/asio/dispatch.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/post.hpp>
#include <boost/asio/strand.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <atomic>
#include <condition_variable>
#include <deque>
#include <thread>
#include <vector>

#include "sentinel/errors.hpp"
#include "sentinel/server.hpp"

namespace sentinel {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

namespace {

constexpr std::size_t kBodyLimit = 1 << 20;
constexpr auto kIdleTimeout = std::chrono::seconds(30);

class FeedSession : public std::enable_shared_from_this<FeedSession> {
public:
    FeedSession(tcp::socket&& socket, FeedHub& hub, std::shared_ptr<const Logger> logger, std::size_t limit)
        : ws_(std::move(socket)), hub_(hub), logger_(std::move(logger)), limit_(limit) {}

    void run(http::request<http::string_body> request) {
        ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
        ws_.async_accept(request, beast::bind_front_handler(&FeedSession::on_accept, shared_from_this()));
    }

    // Called from publishing threads.
    bool offer(std::shared_ptr<const std::string> message) {
        if (closed_.load()) return false;
        if (queued_.fetch_add(1) >= limit_) {
            logger_->warn("feed", "slow subscriber disconnected");
            net::post(ws_.get_executor(), [self = shared_from_this()] { self->shut(); });
            return false;
        }
        net::post(ws_.get_executor(), [self = shared_from_this(), message = std::move(message)]() mutable {
            self->send(std::move(message));
        });
        return true;
    }

private:
    class Subscriber final : public FeedSubscriber {
    public:
        explicit Subscriber(std::weak_ptr<FeedSession> session) : session_(std::move(session)) {}
        bool offer(std::shared_ptr<const std::string> message) override {
            auto session = session_.lock();
            return session && session->offer(std::move(message));
        }

    private:
        std::weak_ptr<FeedSession> session_;
    };

    void on_accept(beast::error_code ec) {
        if (ec) {
            logger_->warn("feed", "handshake failed", {{"error", ec.message()}});
            return;
        }
        ws_.text(true);
        subscription_ = hub_.subscribe(std::make_shared<Subscriber>(weak_from_this()));
        logger_->debug("feed", "subscriber connected");
        read();
    }

    void read() {
        ws_.async_read(inbound_, beast::bind_front_handler(&FeedSession::on_read, shared_from_this()));
    }

    void on_read(beast::error_code ec, std::size_t) {
        if (ec) {
            closed_ = true;
            if (subscription_) hub_.unsubscribe(*std::exchange(subscription_, std::nullopt));
            return;
        }
        const auto text = beast::buffers_to_string(inbound_.data());
        inbound_.consume(inbound_.size());
        const auto doc = Document::parse(text, nullptr, false);
        if (doc.is_object() && doc.value("kind", "") == "ping") {
            ++queued_;
            send(std::make_shared<const std::string>(Document{{"kind", "pong"}}.dump()));
        }
        read();
    }

    void send(std::shared_ptr<const std::string> message) {
        if (closed_) return;
        outbound_.push_back(std::move(message));
        if (outbound_.size() == 1) write();
    }

    void write() {
        ws_.async_write(net::buffer(*outbound_.front()),
                        beast::bind_front_handler(&FeedSession::on_write, shared_from_this()));
    }

    void on_write(beast::error_code ec, std::size_t) {
        --queued_;
        if (ec) {
            shut();
            return;
        }
        outbound_.pop_front();
        if (!outbound_.empty()) write();
    }

    void shut() {
        closed_ = true;
        beast::error_code ignored;
        beast::get_lowest_layer(ws_).socket().shutdown(tcp::socket::shutdown_both, ignored);
        beast::get_lowest_layer(ws_).close();
    }

    websocket::stream<beast::tcp_stream> ws_;
    FeedHub& hub_;
    std::shared_ptr<const Logger> logger_;
    std::size_t limit_;
    std::optional<FeedHub::SubscriptionId> subscription_;
    beast::flat_buffer inbound_;
    std::deque<std::shared_ptr<const std::string>> outbound_;
    std::atomic<std::size_t> queued_{0};
    std::atomic<bool> closed_{false};
};

class HttpSession : public std::enable_shared_from_this<HttpSession> {
public:
    HttpSession(tcp::socket&& socket, ApiRouter& router, FeedHub& hub, std::shared_ptr<const Logger> logger,
                std::size_t feed_limit)
        : stream_(std::move(socket)), router_(router), hub_(hub), logger_(std::move(logger)), feed_limit_(feed_limit) {}

    void run() {
        net::dispatch(stream_.get_executor(), beast::bind_front_handler(&HttpSession::read, shared_from_this()));
    }

private:
    void read() {
        parser_.emplace();
        parser_->body_limit(kBodyLimit);
        stream_.expires_after(kIdleTimeout);
        http::async_read(stream_, buffer_, *parser_, beast::bind_front_handler(&HttpSession::on_read, shared_from_this()));
    }

    void on_read(beast::error_code ec, std::size_t) {
        if (ec == http::error::end_of_stream) return close();
        if (ec) return;

        auto request = parser_->release();
        if (websocket::is_upgrade(request)) {
            if (request.target() == "/api/v1/feed") {
                stream_.expires_never();
                std::make_shared<FeedSession>(stream_.release_socket(), hub_, logger_, feed_limit_)
                    ->run(std::move(request));
                return;
            }
            return reply(request.version(), request.keep_alive(), {404, {{"error", "not found"}}});
        }

        const auto method = std::string(request.method_string());
        const auto target = std::string(request.target());
        auto result = router_.handle(method, target, request.body());
        logger_->debug("api", "request", {{"method", method}, {"target", target}, {"status", std::to_string(result.status)}});
        reply(request.version(), request.keep_alive(), std::move(result));
    }

    void reply(unsigned version, bool keep_alive, ApiReply result) {
        auto response = std::make_shared<http::response<http::string_body>>(
            static_cast<http::status>(result.status), version);
        response->set(http::field::server, "sentinel");
        response->set(http::field::content_type, std::string(kJsonContentType));
        response->keep_alive(keep_alive);
        response->body() = result.body.dump();
        response->prepare_payload();
        http::async_write(stream_, *response,
                          [self = shared_from_this(), response](beast::error_code ec, std::size_t) {
                              if (ec) return;
                              if (!response->keep_alive()) return self->close();
                              self->read();
                          });
    }

    void close() {
        beast::error_code ignored;
        stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
    }

    beast::tcp_stream stream_;
    beast::flat_buffer buffer_;
    std::optional<http::request_parser<http::string_body>> parser_;
    ApiRouter& router_;
    FeedHub& hub_;
    std::shared_ptr<const Logger> logger_;
    std::size_t feed_limit_;
};

} // namespace

struct HttpServer::Impl {
    Impl(Pipeline& pipeline, FeedHub& hub, std::shared_ptr<const Logger> log, Options opts)
        : router(pipeline, log), feed(hub), logger(std::move(log)), options(std::move(opts)),
          ioc(static_cast<int>(options.threads)), acceptor(net::make_strand(ioc)) {}

    void accept() {
        acceptor.async_accept(net::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
            if (ec) {
                if (ec == net::error::operation_aborted) return;
                logger->warn("api", "accept failed", {{"error", ec.message()}});
            } else {
                std::make_shared<HttpSession>(std::move(socket), router, feed, logger, options.feed_queue_limit)->run();
            }
            accept();
        });
    }

    ApiRouter router;
    FeedHub& feed;
    std::shared_ptr<const Logger> logger;
    Options options;
    net::io_context ioc;
    tcp::acceptor acceptor;
    std::vector<std::thread> threads;
    std::uint16_t bound_port = 0;
    std::mutex mutex;
    std::condition_variable stopped_cv;
    bool stopped = false;
};

HttpServer::HttpServer(Pipeline& pipeline, FeedHub& feed, std::shared_ptr<const Logger> logger, Options options)
    : impl_(std::make_unique<Impl>(pipeline, feed, logger ? std::move(logger) : Logger::null(), std::move(options))) {}

HttpServer::~HttpServer() { stop(); }

void HttpServer::start() {
    auto& im = *impl_;
    beast::error_code ec;
    const auto address = net::ip::make_address(im.options.address, ec);
    if (ec) throw ConfigError("listen: invalid address '" + im.options.address + "'");
    const tcp::endpoint endpoint{address, im.options.port};
    im.acceptor.open(endpoint.protocol(), ec);
    if (!ec) im.acceptor.set_option(net::socket_base::reuse_address(true), ec);
    if (!ec) im.acceptor.bind(endpoint, ec);
    if (!ec) im.acceptor.listen(net::socket_base::max_listen_connections, ec);
    if (ec) throw ConfigError("listen " + im.options.address + ":" + std::to_string(im.options.port) + ": " + ec.message());
    im.bound_port = im.acceptor.local_endpoint().port();
    im.accept();
    for (std::size_t i = 0; i < std::max<std::size_t>(1, im.options.threads); ++i)
        im.threads.emplace_back([&im] { im.ioc.run(); });
    im.logger->info("api", "listening", {{"address", im.options.address}, {"port", std::to_string(im.bound_port)}});
}

void HttpServer::stop() {
    auto& im = *impl_;
    {
        std::lock_guard lock(im.mutex);
        if (im.stopped) return;
        im.stopped = true;
    }
    im.ioc.stop();
    for (auto& t : im.threads)
        if (t.joinable()) t.join();
    im.threads.clear();
    im.stopped_cv.notify_all();
}

void HttpServer::wait() {
    std::unique_lock lock(impl_->mutex);
    impl_->stopped_cv.wait(lock, [this] { return impl_->stopped; });
}

std::uint16_t HttpServer::port() const noexcept { return impl_->bound_port; }

} // namespace sentinel
