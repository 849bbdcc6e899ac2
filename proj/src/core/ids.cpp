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

#include "sentinel/ids.hpp"

#include <charconv>
#include <cstdio>

namespace sentinel {

std::string IdSource::next() {
    const auto n = next_.fetch_add(1);
    char digits[24];
    std::snprintf(digits, sizeof digits, "%012llu", static_cast<unsigned long long>(n));
    return prefix_ + "-" + digits;
}

void IdSource::advance_past(std::string_view id) {
    if (!id.starts_with(prefix_) || id.size() <= prefix_.size() + 1 || id[prefix_.size()] != '-') return;
    const auto digits = id.substr(prefix_.size() + 1);
    std::uint64_t n = 0;
    const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
    if (ec != std::errc{} || end != digits.data() + digits.size()) return;
    auto current = next_.load();
    while (current <= n && !next_.compare_exchange_weak(current, n + 1)) {
    }
}

} // namespace sentinel
