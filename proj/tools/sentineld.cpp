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

#include <CLI11.hpp>

#include <csignal>
#include <cstdlib>
#include <iostream>

#include "sentinel/clock.hpp"
#include "sentinel/config.hpp"
#include "sentinel/errors.hpp"
#include "sentinel/feed.hpp"
#include "sentinel/pipeline.hpp"
#include "sentinel/server.hpp"
#include "sentinel/store.hpp"

int main(int argc, char** argv) {
    using namespace sentinel;

    CLI::App app{"sentineld: attack-awareness service"};
    std::string listen;
    std::string store_spec;
    std::string config_path;
    std::string log_level;
    std::size_t threads = 4;
    std::size_t workers = 2;
    app.add_option("--listen", listen, "Listen address host:port (default 127.0.0.1:8047)");
    app.add_option("--store", store_spec, "memory | file:PATH (default memory)");
    app.add_option("--config", config_path, "Detection point seed / service config file")->check(CLI::ExistingFile);
    app.add_option("--log-level", log_level, "error | warn | info | debug")
        ->check(CLI::IsMember({"error", "warn", "info", "debug"}));
    app.add_option("--threads", threads, "HTTP worker threads")->check(CLI::Range(1, 256));
    app.add_option("--analysis-workers", workers, "Background analysis workers")->check(CLI::Range(1, 256));
    CLI11_PARSE(app, argc, argv);

    try {
        ServiceConfig config = config_path.empty() ? ServiceConfig{} : load_config(config_path);
        if (!listen.empty()) config.listen = listen;
        if (const char* env = std::getenv("SENTINEL_LISTEN"); env != nullptr && *env != '\0') config.listen = env;
        if (!store_spec.empty()) config.store = store_spec;
        if (!log_level.empty()) config.log_level = *parse_log_level(log_level);

        const auto logger = Logger::to_stderr(config.log_level);
        const auto [host, port] = parse_listen_address(config.listen);

        // Signals are taken synchronously on the main thread.
        sigset_t signals;
        sigemptyset(&signals);
        sigaddset(&signals, SIGINT);
        sigaddset(&signals, SIGTERM);
        pthread_sigmask(SIG_BLOCK, &signals, nullptr);

        auto store = open_store(config.store);
        SystemClock clock;
        FeedHub feed;
        Pipeline pipeline(*store, clock, feed, logger, config.reputation_ladder, Pipeline::Options{workers, {}});
        pipeline.seed_detection_points(config.detection_points);

        HttpServer server(pipeline, feed, logger, HttpServer::Options{host, port, threads});
        server.start();
        logger->info("main", "service started",
                     {{"listen", host + ":" + std::to_string(server.port())},
                      {"store", config.store},
                      {"detection_points", std::to_string(pipeline.list_detection_points().size())}});

        int received = 0;
        sigwait(&signals, &received);
        logger->info("main", "shutting down", {{"signal", std::to_string(received)}});
        server.stop();
        pipeline.drain();
    } catch (const Error& e) {
        std::cerr << "sentineld: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
