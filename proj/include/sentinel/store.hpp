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

#include <array>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "sentinel/model.hpp"
#include "sentinel/wire.hpp"

namespace sentinel {

enum class Collection { Events, Attacks, Responses, DetectionPoints, Reputations };

inline constexpr std::array kAllCollections{Collection::Events, Collection::Attacks, Collection::Responses,
                                            Collection::DetectionPoints, Collection::Reputations};

std::string_view collection_name(Collection collection) noexcept;
// Throws ConfigError for unknown names.
Collection collection_from_name(std::string_view name);

// Field holding the record id, and the field records are ordered by
// (nullptr when the collection is ordered by id only).
std::string_view id_field(Collection collection) noexcept;
const char* timestamp_field(Collection collection) noexcept;

// Matches when record[field] equals any of the listed values.
struct FieldMatch {
    std::string field;
    std::vector<Document> any_of;
};
using Filter = std::vector<FieldMatch>;

// Inclusive at both ends.
struct TimeRange {
    Timestamp from = 0;
    Timestamp to = 0;
};

// Five named document collections with unique ids. Safe for concurrent
// readers and writers. Query results are sorted by timestamp, then id.
class Store {
public:
    virtual ~Store() = default;

    Store(const Store&) = delete;
    Store& operator=(const Store&) = delete;

    // ConflictError when the id is taken.
    void put(Collection collection, Document record);
    void upsert(Collection collection, Document record);

    std::optional<Document> get(Collection collection, std::string_view id) const;
    std::vector<Document> query(Collection collection, const Filter& filter = {},
                                std::optional<TimeRange> range = std::nullopt) const;
    std::size_t count(Collection collection) const;

    bool erase(Collection collection, std::string_view id);
    std::size_t delete_where(Collection collection, const Filter& filter);
    // query + delete_where as one atomic step.
    std::vector<Document> take_where(Collection collection, const Filter& filter);

    // Every collection, for differential comparison and dumps.
    std::map<std::string, std::vector<Document>> snapshot() const;

protected:
    Store() = default;

    // Called with the write lock held, before the in-memory change.
    virtual void journal_put(Collection, const std::string&, const Document&) {}
    virtual void journal_delete(Collection, const std::string&) {}

    // Replays a recovered record without journaling.
    void apply_put(Collection collection, std::string id, Document body);
    void apply_delete(Collection collection, const std::string& id);

private:
    using Table = std::map<std::string, Document, std::less<>>;

    std::string checked_id(Collection collection, const Document& record) const;
    void check_filter(Collection collection, const Filter& filter) const;
    std::vector<Document> collect(Collection collection, const Filter& filter,
                                  std::optional<TimeRange> range) const;

    mutable std::shared_mutex mutex_;
    std::array<Table, kAllCollections.size()> tables_;
};

class InMemoryStore final : public Store {
public:
    InMemoryStore() = default;
};

// Append-only log, one JSON document per line:
//   {"op":"put"|"delete","collection":...,"id":...,"body":...,"ts":...}
// Full state is rebuilt on open. A torn final line is truncated away.
class FileStore final : public Store {
public:
    enum class Durability { Fsync, Flush };

    explicit FileStore(std::filesystem::path path, Durability durability = Durability::Fsync);
    ~FileStore() override;

    const std::filesystem::path& path() const noexcept { return path_; }

protected:
    void journal_put(Collection collection, const std::string& id, const Document& body) override;
    void journal_delete(Collection collection, const std::string& id) override;

private:
    void recover();
    void append(const Document& line);

    std::filesystem::path path_;
    Durability durability_;
    int fd_ = -1;
};

// "memory" or "file:PATH".
std::unique_ptr<Store> open_store(std::string_view spec);

} // namespace sentinel
