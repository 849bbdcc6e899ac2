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

#include <atomic>
#include <cstdint>
#include <string>
#include <string_view>

namespace sentinel {

// Monotonic ids of the form "<prefix>-000000000042". Zero padding keeps
// lexicographic order equal to issue order.
class IdSource {
public:
    explicit IdSource(std::string prefix, std::uint64_t next = 1) : prefix_(std::move(prefix)), next_(next) {}

    std::string next();
    // Ensures later ids sort after `id` when it carries this prefix.
    void advance_past(std::string_view id);

private:
    std::string prefix_;
    std::atomic<std::uint64_t> next_;
};

} // namespace sentinel
