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

#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace spdlog {
class logger;
}

namespace sentinel {

enum class LogLevel { Error, Warn, Info, Debug };

std::string_view to_string(LogLevel level) noexcept;
std::optional<LogLevel> parse_log_level(std::string_view text) noexcept;

using LogFields = std::vector<std::pair<std::string, std::string>>;

// Emits `ts level component msg key=value...` lines. Records above the
// threshold are dropped. Thread-safe.
class Logger {
public:
    static std::shared_ptr<Logger> to_stderr(LogLevel threshold);
    static std::shared_ptr<Logger> to_stream(std::ostream& out, LogLevel threshold);
    static std::shared_ptr<Logger> null();

    void record(LogLevel level, std::string_view component, std::string_view message,
                const LogFields& fields = {}) const;

    void error(std::string_view component, std::string_view message, const LogFields& fields = {}) const {
        record(LogLevel::Error, component, message, fields);
    }
    void warn(std::string_view component, std::string_view message, const LogFields& fields = {}) const {
        record(LogLevel::Warn, component, message, fields);
    }
    void info(std::string_view component, std::string_view message, const LogFields& fields = {}) const {
        record(LogLevel::Info, component, message, fields);
    }
    void debug(std::string_view component, std::string_view message, const LogFields& fields = {}) const {
        record(LogLevel::Debug, component, message, fields);
    }

    bool enabled(LogLevel level) const noexcept { return level <= threshold_; }

    // Body of a line after the timestamp.
    static std::string format(LogLevel level, std::string_view component, std::string_view message,
                              const LogFields& fields);

private:
    Logger(std::shared_ptr<spdlog::logger> sink, LogLevel threshold);

    std::shared_ptr<spdlog::logger> sink_;
    LogLevel threshold_;
};

} // namespace sentinel
