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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "sentinel/logging.hpp"
#include "sentinel/model.hpp"

namespace sentinel {

struct ServiceConfig {
    std::string listen = "127.0.0.1:8047";
    std::string store = "memory";
    LogLevel log_level = LogLevel::Info;
    std::vector<DetectionPoint> detection_points;
    std::vector<ResponseKind> reputation_ladder = default_reputation_ladder();

    friend bool operator==(const ServiceConfig&, const ServiceConfig&) = default;
};

// Empty or whitespace-only text yields the defaults. Throws ConfigError
// naming `origin` and the offending field path (or line for syntax errors).
ServiceConfig parse_config(std::string_view text, std::string_view origin = "config");
ServiceConfig load_config(const std::filesystem::path& path);

// Reads a whole file; ConfigError when unreadable.
std::string read_text_file(const std::filesystem::path& path);

// Line and column of a byte offset, 1-based, for syntax error messages.
std::pair<std::size_t, std::size_t> line_and_column(std::string_view text, std::size_t offset);

} // namespace sentinel
