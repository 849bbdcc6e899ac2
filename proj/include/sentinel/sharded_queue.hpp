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

#include <condition_variable>
#include <cstddef>
#include <deque>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace sentinel {

// Fixed set of worker threads, each draining its own FIFO. Items pushed
// with the same shard key are handled in push order by one worker.
template <typename Item>
class ShardedQueue {
public:
    using Handler = std::function<void(Item&)>;

    ShardedQueue(std::size_t workers, Handler handler) : handler_(std::move(handler)), shards_(workers ? workers : 1) {
        for (std::size_t i = 0; i < shards_.size(); ++i)
            threads_.emplace_back([this, i](std::stop_token stop) { run(shards_[i], stop); });
    }

    ~ShardedQueue() {
        for (auto& t : threads_) t.request_stop();
        for (auto& s : shards_) {
            std::lock_guard lock(s.mutex);
            s.ready.notify_all();
        }
    }

    ShardedQueue(const ShardedQueue&) = delete;
    ShardedQueue& operator=(const ShardedQueue&) = delete;

    void push(std::size_t shard_key, Item item) {
        {
            std::lock_guard lock(pending_mutex_);
            ++pending_;
        }
        auto& shard = shards_[shard_key % shards_.size()];
        {
            std::lock_guard lock(shard.mutex);
            shard.items.push_back(std::move(item));
        }
        shard.ready.notify_one();
    }

    // Blocks until every pushed item has been handled.
    void drain() {
        std::unique_lock lock(pending_mutex_);
        idle_.wait(lock, [this] { return pending_ == 0; });
    }

    std::size_t pending() const {
        std::lock_guard lock(pending_mutex_);
        return pending_;
    }

private:
    struct Shard {
        std::mutex mutex;
        std::condition_variable_any ready;
        std::deque<Item> items;
    };

    void run(Shard& shard, std::stop_token stop) {
        while (true) {
            Item item;
            {
                std::unique_lock lock(shard.mutex);
                if (!shard.ready.wait(lock, stop, [&] { return !shard.items.empty(); })) return;
                item = std::move(shard.items.front());
                shard.items.pop_front();
            }
            handler_(item);
            std::lock_guard lock(pending_mutex_);
            if (--pending_ == 0) idle_.notify_all();
        }
    }

    Handler handler_;
    std::vector<Shard> shards_;
    mutable std::mutex pending_mutex_;
    std::condition_variable idle_;
    std::size_t pending_ = 0;
    std::vector<std::jthread> threads_; // last: joined before the shards go away
};

} // namespace sentinel
