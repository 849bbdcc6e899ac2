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

#include <doctest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <thread>

#include "sentinel/errors.hpp"
#include "sentinel/store.hpp"

using namespace sentinel;

namespace {

struct TempDir {
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("sentinel-store-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::filesystem::path path;
    static inline int counter = 0;
};

Document event_doc(const std::string& id, const std::string& user, const std::string& point, Timestamp t) {
    return {{"event_id", id},
            {"user_key", {{"kind", "username"}, {"value", user}}},
            {"detection_point_id", point},
            {"occurred_at", t},
            {"consumed_by_rule", false}};
}

} // namespace

TEST_CASE("put and get") {
    InMemoryStore store;
    const auto e1 = event_doc("e1", "bob", "login", 10);
    store.put(Collection::Events, e1);
    CHECK(store.get(Collection::Events, "e1") == e1);
    CHECK_FALSE(store.get(Collection::Events, "e2"));
    CHECK_THROWS_AS(store.put(Collection::Events, e1), ConflictError);
    CHECK_THROWS_AS(store.put(Collection::Events, Document{{"occurred_at", 1}}), ValidationError);
    CHECK(store.count(Collection::Events) == 1);
}

TEST_CASE("query filters, orders and ranges") {
    InMemoryStore store;
    store.put(Collection::Events, event_doc("e3", "bob", "login", 20));
    store.put(Collection::Events, event_doc("e1", "bob", "login", 10));
    store.put(Collection::Events, event_doc("e2", "bob", "search", 10));
    store.put(Collection::Events, event_doc("e4", "amy", "login", 15));
    store.put(Collection::Events, event_doc("e0", "bob", "login", 20));

    const auto all = store.query(Collection::Events);
    REQUIRE(all.size() == 5);
    std::vector<std::string> ids;
    for (const auto& d : all) ids.push_back(d["event_id"]);
    CHECK(ids == std::vector<std::string>{"e1", "e2", "e4", "e0", "e3"});

    const Document bob = {{"kind", "username"}, {"value", "bob"}};
    const auto window = store.query(Collection::Events, {{"user_key", {bob}}, {"detection_point_id", {"login"}}},
                                    TimeRange{20 - 10, 20});
    CHECK(window.size() == 3);
    // Linear-scan oracle.
    std::size_t expected = 0;
    for (const auto& d : all)
        expected += d["user_key"] == bob && d["detection_point_id"] == "login" && d["occurred_at"] >= 10 &&
                    d["occurred_at"] <= 20;
    CHECK(window.size() == expected);

    CHECK(store.query(Collection::Events, {}, TimeRange{100, 200}).empty());
    CHECK(store.query(Collection::Events, {{"detection_point_id", {"login", "search"}}}).size() == 5);
    CHECK_THROWS_AS(store.query(Collection::Events, {{"no_such_field", {1}}}), ConfigError);
    CHECK_THROWS_AS(collection_from_name("users"), ConfigError);
    CHECK(collection_from_name("responses") == Collection::Responses);
}

TEST_CASE("delete_where and take_where") {
    InMemoryStore store;
    const Document s1 = {{"kind", "session_id"}, {"value", "s1"}};
    for (int i = 0; i < 3; ++i)
        store.put(Collection::Responses, {{"response_id", "r" + std::to_string(i)}, {"user_key", s1}, {"created_at", i}});
    store.put(Collection::Responses, {{"response_id", "other"}, {"user_key", {{"kind", "session_id"}, {"value", "s2"}}},
                                      {"created_at", 0}});
    const auto pending = store.query(Collection::Responses, {{"user_key", {s1}}}).size();
    CHECK(store.delete_where(Collection::Responses, {{"user_key", {s1}}}) == pending);
    CHECK(store.delete_where(Collection::Responses, {{"user_key", {s1}}}) == 0);
    CHECK(store.take_where(Collection::Responses, {}).size() == 1);
    CHECK(store.count(Collection::Responses) == 0);
}

TEST_CASE("file store survives reopen") {
    TempDir dir;
    const auto path = dir.path / "store.log";
    const auto e1 = event_doc("e1", "bob", "login", 10);
    {
        FileStore store(path);
        store.put(Collection::Events, e1);
        store.put(Collection::Events, event_doc("e2", "bob", "login", 11));
        store.upsert(Collection::DetectionPoints, {{"id", "login"}, {"severity", "Low"}});
        CHECK(store.erase(Collection::Events, "e2"));
    }
    FileStore reopened(path);
    CHECK(reopened.get(Collection::Events, "e1") == e1);
    CHECK_FALSE(reopened.get(Collection::Events, "e2"));
    CHECK(reopened.count(Collection::DetectionPoints) == 1);

    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    const auto first = Document::parse(line);
    CHECK(first["op"] == "put");
    CHECK(first["collection"] == "events");
    CHECK(first["id"] == "e1");
    CHECK(first["body"] == e1);
    CHECK(first["ts"] == 10);
}

TEST_CASE("file store truncates a torn final record and rejects interior corruption") {
    TempDir dir;
    const auto path = dir.path / "store.log";
    {
        FileStore store(path);
        store.put(Collection::Events, event_doc("e1", "bob", "login", 10));
    }
    {
        std::ofstream out(path, std::ios::app);
        out << R"({"op":"put","collection":"events","id":"e2","bo)";
    }
    {
        FileStore store(path);
        CHECK(store.count(Collection::Events) == 1);
        store.put(Collection::Events, event_doc("e3", "bob", "login", 12));
    }
    CHECK(FileStore(path).count(Collection::Events) == 2);

    {
        std::ofstream out(path, std::ios::trunc);
        out << "garbage\n" << Document{{"op", "delete"}, {"collection", "events"}, {"id", "x"}}.dump() << "\n";
    }
    CHECK_THROWS_AS(FileStore{path}, StorageError);
}

TEST_CASE("open_store specs") {
    CHECK(dynamic_cast<InMemoryStore*>(open_store("memory").get()) != nullptr);
    CHECK_THROWS_AS(open_store("redis://x"), ConfigError);
    TempDir dir;
    CHECK(dynamic_cast<FileStore*>(open_store("file:" + (dir.path / "s.log").string()).get()) != nullptr);
}

TEST_CASE("in-memory and file-backed stores are observationally equivalent") {
    TempDir dir;
    std::mt19937 rng(2024);
    const Document users[] = {{{"kind", "username"}, {"value", "a"}}, {{"kind", "session_id"}, {"value", "b"}}};
    for (int seq = 0; seq < 1000; ++seq) {
        const auto path = dir.path / ("seq-" + std::to_string(seq) + ".log");
        InMemoryStore memory;
        {
            FileStore file(path, FileStore::Durability::Flush);
            const int steps = 1 + static_cast<int>(rng() % 25);
            for (int s = 0; s < steps; ++s) {
                const auto id = "r" + std::to_string(rng() % 8);
                const auto& user = users[rng() % 2];
                const Document doc = {{"response_id", id}, {"user_key", user}, {"created_at", rng() % 5}};
                const Filter filter = {{"user_key", {user}}};
                switch (rng() % 5) {
                case 0: {
                    bool m = false, f = false;
                    try { memory.put(Collection::Responses, doc); } catch (const ConflictError&) { m = true; }
                    try { file.put(Collection::Responses, doc); } catch (const ConflictError&) { f = true; }
                    CHECK(m == f);
                    break;
                }
                case 1:
                    memory.upsert(Collection::Responses, doc);
                    file.upsert(Collection::Responses, doc);
                    break;
                case 2: CHECK(memory.erase(Collection::Responses, id) == file.erase(Collection::Responses, id)); break;
                case 3:
                    CHECK(memory.take_where(Collection::Responses, filter) == file.take_where(Collection::Responses, filter));
                    break;
                default:
                    CHECK(memory.query(Collection::Responses, filter, TimeRange{1, 3}) ==
                          file.query(Collection::Responses, filter, TimeRange{1, 3}));
                }
            }
            CHECK(memory.snapshot() == file.snapshot());
        }
        CHECK(FileStore(path).snapshot() == memory.snapshot());
    }
}

TEST_CASE("concurrent take_where returns each record once") {
    InMemoryStore store;
    const Document user = {{"kind", "session_id"}, {"value", "s1"}};
    constexpr int kRecords = 2000;
    std::atomic<int> taken{0};
    std::atomic<bool> done{false};
    std::vector<std::jthread> racers;
    for (int r = 0; r < 4; ++r)
        racers.emplace_back([&] {
            while (!done.load() || store.count(Collection::Responses) > 0)
                taken += static_cast<int>(store.take_where(Collection::Responses, {{"user_key", {user}}}).size());
        });
    for (int i = 0; i < kRecords; ++i)
        store.put(Collection::Responses, {{"response_id", "r" + std::to_string(i)}, {"user_key", user}, {"created_at", i}});
    done = true;
    racers.clear();
    CHECK(taken.load() == kRecords);
}
