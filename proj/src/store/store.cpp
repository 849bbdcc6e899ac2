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

#include "sentinel/store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <initializer_list>
#include <mutex>

#include "sentinel/errors.hpp"

namespace sentinel {

namespace {

std::size_t index(Collection collection) { return static_cast<std::size_t>(collection); }

bool in_schema(Collection collection, std::string_view field) {
    static const std::array<std::initializer_list<std::string_view>, kAllCollections.size()> schema{{
        {"event_id", "username", "session_id", "ip_address", "detection_point_id", "occurred_at",
         "consumed_by_rule", "user_key"},
        {"attack_id", "user_key", "mechanism", "detection_point_id", "contributing_event_ids", "detected_at",
         "escalation_level"},
        {"response_id", "user_key", "kind", "label", "payload", "created_at", "source_attack_id"},
        {"id", "label", "severity", "rule_threshold", "rule_window", "responses"},
        {"id", "user_key", "raw_score", "anchor"},
    }};
    const auto& fields = schema[index(collection)];
    return std::find(fields.begin(), fields.end(), field) != fields.end();
}

Timestamp timestamp_of(Collection collection, const Document& record) {
    const char* field = timestamp_field(collection);
    if (field == nullptr) return 0;
    const auto it = record.find(field);
    return it != record.end() && it->is_number_integer() ? it->get<Timestamp>() : 0;
}

bool matches(const Document& record, const Filter& filter) {
    static const Document null_value;
    for (const auto& m : filter) {
        const auto it = record.find(m.field);
        const Document& value = it == record.end() ? null_value : *it;
        if (std::find(m.any_of.begin(), m.any_of.end(), value) == m.any_of.end()) return false;
    }
    return true;
}

} // namespace

std::string_view collection_name(Collection collection) noexcept {
    switch (collection) {
    case Collection::Events: return "events";
    case Collection::Attacks: return "attacks";
    case Collection::Responses: return "responses";
    case Collection::DetectionPoints: return "detection_points";
    case Collection::Reputations: return "reputations";
    }
    return "events";
}

Collection collection_from_name(std::string_view name) {
    for (auto c : kAllCollections)
        if (collection_name(c) == name) return c;
    throw ConfigError("unknown collection '" + std::string(name) + "'");
}

std::string_view id_field(Collection collection) noexcept {
    switch (collection) {
    case Collection::Events: return "event_id";
    case Collection::Attacks: return "attack_id";
    case Collection::Responses: return "response_id";
    default: return "id";
    }
}

const char* timestamp_field(Collection collection) noexcept {
    switch (collection) {
    case Collection::Events: return "occurred_at";
    case Collection::Attacks: return "detected_at";
    case Collection::Responses: return "created_at";
    case Collection::Reputations: return "anchor";
    case Collection::DetectionPoints: return nullptr;
    }
    return nullptr;
}

std::string Store::checked_id(Collection collection, const Document& record) const {
    const auto field = id_field(collection);
    if (!record.is_object()) throw ValidationError("record must be an object");
    const auto it = record.find(field);
    if (it == record.end() || !it->is_string() || it->get_ref<const std::string&>().empty())
        throw ValidationError(std::string(collection_name(collection)) + " record needs a string '" +
                              std::string(field) + "'");
    return it->get<std::string>();
}

void Store::check_filter(Collection collection, const Filter& filter) const {
    for (const auto& m : filter)
        if (!in_schema(collection, m.field))
            throw ConfigError("collection '" + std::string(collection_name(collection)) + "' has no field '" +
                              m.field + "'");
}

void Store::put(Collection collection, Document record) {
    auto id = checked_id(collection, record);
    std::unique_lock lock(mutex_);
    auto& table = tables_[index(collection)];
    if (table.contains(id))
        throw ConflictError(std::string(collection_name(collection)) + ": duplicate id '" + id + "'");
    journal_put(collection, id, record);
    table.emplace(std::move(id), std::move(record));
}

void Store::upsert(Collection collection, Document record) {
    auto id = checked_id(collection, record);
    std::unique_lock lock(mutex_);
    journal_put(collection, id, record);
    tables_[index(collection)].insert_or_assign(std::move(id), std::move(record));
}

std::optional<Document> Store::get(Collection collection, std::string_view id) const {
    std::shared_lock lock(mutex_);
    const auto& table = tables_[index(collection)];
    const auto it = table.find(id);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

std::vector<Document> Store::collect(Collection collection, const Filter& filter,
                                     std::optional<TimeRange> range) const {
    std::vector<std::pair<Timestamp, const Table::value_type*>> hits;
    for (const auto& entry : tables_[index(collection)]) {
        const Timestamp ts = timestamp_of(collection, entry.second);
        if (range && (ts < range->from || ts > range->to)) continue;
        if (!matches(entry.second, filter)) continue;
        hits.emplace_back(ts, &entry);
    }
    // Table iteration is already id-ordered, so a stable sort on ts gives the id tie-break.
    std::stable_sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Document> out;
    out.reserve(hits.size());
    for (const auto& [ts, entry] : hits) out.push_back(entry->second);
    return out;
}

std::vector<Document> Store::query(Collection collection, const Filter& filter,
                                   std::optional<TimeRange> range) const {
    check_filter(collection, filter);
    std::shared_lock lock(mutex_);
    return collect(collection, filter, range);
}

std::size_t Store::count(Collection collection) const {
    std::shared_lock lock(mutex_);
    return tables_[index(collection)].size();
}

bool Store::erase(Collection collection, std::string_view id) {
    std::unique_lock lock(mutex_);
    auto& table = tables_[index(collection)];
    const auto it = table.find(id);
    if (it == table.end()) return false;
    journal_delete(collection, it->first);
    table.erase(it);
    return true;
}

std::size_t Store::delete_where(Collection collection, const Filter& filter) {
    return take_where(collection, filter).size();
}

std::vector<Document> Store::take_where(Collection collection, const Filter& filter) {
    check_filter(collection, filter);
    std::unique_lock lock(mutex_);
    auto taken = collect(collection, filter, std::nullopt);
    auto& table = tables_[index(collection)];
    const auto field = std::string(id_field(collection));
    for (const auto& record : taken) {
        const auto& id = record.at(field).get_ref<const std::string&>();
        journal_delete(collection, id);
        table.erase(id);
    }
    return taken;
}

std::map<std::string, std::vector<Document>> Store::snapshot() const {
    std::shared_lock lock(mutex_);
    std::map<std::string, std::vector<Document>> out;
    for (auto c : kAllCollections) out.emplace(collection_name(c), collect(c, {}, std::nullopt));
    return out;
}

void Store::apply_put(Collection collection, std::string id, Document body) {
    tables_[index(collection)].insert_or_assign(std::move(id), std::move(body));
}

void Store::apply_delete(Collection collection, const std::string& id) { tables_[index(collection)].erase(id); }

FileStore::FileStore(std::filesystem::path path, Durability durability)
    : path_(std::move(path)), durability_(durability) {
    recover();
    fd_ = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
    if (fd_ < 0) throw StorageError("open " + path_.string() + ": " + std::strerror(errno));
}

FileStore::~FileStore() {
    if (fd_ >= 0) ::close(fd_);
}

void FileStore::recover() {
    std::ifstream in(path_, std::ios::binary);
    if (!in) return;
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();

    std::size_t pos = 0;
    std::size_t line_no = 0;
    std::size_t good_end = 0;
    while (pos < content.size()) {
        ++line_no;
        const auto nl = content.find('\n', pos);
        const bool last = nl == std::string::npos || nl + 1 == content.size();
        const auto line = std::string_view(content).substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
        try {
            if (nl == std::string::npos) throw StorageError("unterminated record");
            const auto doc = Document::parse(line);
            const auto collection = collection_from_name(doc.at("collection").get<std::string>());
            auto id = doc.at("id").get<std::string>();
            const auto op = doc.at("op").get<std::string>();
            if (op == "put") apply_put(collection, std::move(id), doc.at("body"));
            else if (op == "delete") apply_delete(collection, id);
            else throw StorageError("unknown op '" + op + "'");
        } catch (const std::exception& e) {
            if (!last)
                throw StorageError(path_.string() + ":" + std::to_string(line_no) + ": corrupt record: " + e.what());
            // Torn tail from an interrupted append.
            std::filesystem::resize_file(path_, good_end);
            return;
        }
        pos = nl + 1;
        good_end = pos;
    }
}

void FileStore::append(const Document& line) {
    std::string text = line.dump();
    text.push_back('\n');
    std::size_t written = 0;
    while (written < text.size()) {
        const auto n = ::write(fd_, text.data() + written, text.size() - written);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw StorageError("write " + path_.string() + ": " + std::strerror(errno));
        }
        written += static_cast<std::size_t>(n);
    }
    if (durability_ == Durability::Fsync && ::fdatasync(fd_) != 0)
        throw StorageError("fdatasync " + path_.string() + ": " + std::strerror(errno));
}

void FileStore::journal_put(Collection collection, const std::string& id, const Document& body) {
    const char* ts_field = timestamp_field(collection);
    Document ts = nullptr;
    if (ts_field != nullptr && body.contains(ts_field)) ts = body.at(ts_field);
    append(Document{{"op", "put"}, {"collection", collection_name(collection)}, {"id", id}, {"body", body}, {"ts", ts}});
}

void FileStore::journal_delete(Collection collection, const std::string& id) {
    append(Document{{"op", "delete"}, {"collection", collection_name(collection)}, {"id", id}, {"body", nullptr},
                    {"ts", nullptr}});
}

std::unique_ptr<Store> open_store(std::string_view spec) {
    if (spec == "memory") return std::make_unique<InMemoryStore>();
    if (spec.starts_with("file:") && spec.size() > 5)
        return std::make_unique<FileStore>(std::filesystem::path(std::string(spec.substr(5))));
    throw ConfigError("store: expected 'memory' or 'file:PATH', got '" + std::string(spec) + "'");
}

} // namespace sentinel
