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

#include "sentinel/logging.hpp"

#include <spdlog/sinks/null_sink.h>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <array>

namespace sentinel {

namespace {

constexpr std::array<std::pair<LogLevel, std::string_view>, 4> kLevelNames{{
    {LogLevel::Error, "error"},
    {LogLevel::Warn, "warn"},
    {LogLevel::Info, "info"},
    {LogLevel::Debug, "debug"},
}};

std::shared_ptr<spdlog::logger> configure(std::shared_ptr<spdlog::logger> logger) {
    logger->set_pattern("%Y-%m-%dT%H:%M:%S.%eZ %v", spdlog::pattern_time_type::utc);
    logger->set_level(spdlog::level::trace);
    logger->flush_on(spdlog::level::trace);
    return logger;
}

void append_token(std::string& out, std::string_view text) {
    const bool quote = text.empty() || std::any_of(text.begin(), text.end(), [](char c) {
                           return c == ' ' || c == '=' || c == '"' || c == '\n' || c == '\t';
                       });
    if (!quote) {
        out += text;
        return;
    }
    out += '"';
    for (char c : text) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    out += '"';
}

} // namespace

std::string_view to_string(LogLevel level) noexcept {
    for (const auto& [l, name] : kLevelNames)
        if (l == level) return name;
    return "info";
}

std::optional<LogLevel> parse_log_level(std::string_view text) noexcept {
    for (const auto& [l, name] : kLevelNames)
        if (name == text) return l;
    return std::nullopt;
}

Logger::Logger(std::shared_ptr<spdlog::logger> sink, LogLevel threshold)
    : sink_(std::move(sink)), threshold_(threshold) {}

std::shared_ptr<Logger> Logger::to_stderr(LogLevel threshold) {
    auto sink = std::make_shared<spdlog::sinks::stderr_sink_mt>();
    return std::shared_ptr<Logger>(new Logger(configure(std::make_shared<spdlog::logger>("sentinel", sink)), threshold));
}

std::shared_ptr<Logger> Logger::to_stream(std::ostream& out, LogLevel threshold) {
    auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(out, true);
    return std::shared_ptr<Logger>(new Logger(configure(std::make_shared<spdlog::logger>("sentinel", sink)), threshold));
}

std::shared_ptr<Logger> Logger::null() {
    auto sink = std::make_shared<spdlog::sinks::null_sink_mt>();
    return std::shared_ptr<Logger>(new Logger(std::make_shared<spdlog::logger>("sentinel", sink), LogLevel::Error));
}

std::string Logger::format(LogLevel level, std::string_view component, std::string_view message,
                           const LogFields& fields) {
    std::string out(to_string(level));
    out += ' ';
    append_token(out, component);
    out += ' ';
    append_token(out, message);
    for (const auto& [key, value] : fields) {
        out += ' ';
        out += key;
        out += '=';
        append_token(out, value);
    }
    return out;
}

void Logger::record(LogLevel level, std::string_view component, std::string_view message,
                    const LogFields& fields) const {
    if (!enabled(level)) return;
    sink_->info(format(level, component, message, fields));
}

} // namespace sentinel
