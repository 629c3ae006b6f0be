// Copyright (c) 2026 The cavred authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0.txt
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cavred/numerics.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace cavred::numerics {

  namespace {
    std::atomic<int> g_thread_limit{1};
    // Nested calls run inline so an outer parallel loop does not multiply threads.
    thread_local bool t_inside_worker = false;
  }

  void set_thread_limit(int threads) {
    if (threads < 1) throw DomainError("threads must be >= 1");
    g_thread_limit.store(threads);
  }

  int thread_limit() { return g_thread_limit.load(); }

  void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(thread_limit()), count);
    if (workers <= 1 || t_inside_worker) {
      for (std::size_t i = 0; i < count; ++i) body(i);
      return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
      const bool was_inside = t_inside_worker;
      t_inside_worker = true;
      struct Restore {
        bool value;
        ~Restore() { t_inside_worker = value; }
      } restore{was_inside};
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next.store(count);
          return;
        }
      }
    };
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(work);
    work();
    pool.clear();
    if (failure) std::rethrow_exception(failure);
  }

} // namespace cavred::numerics
