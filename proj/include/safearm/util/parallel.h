// Copyright 2026 The safearm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SAFEARM_UTIL_PARALLEL_H_
#define SAFEARM_UTIL_PARALLEL_H_

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace safearm::util {

inline int ResolveThreads(int num_threads) {
  if (num_threads > 0) return num_threads;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

// Calls fn(i) for i in [0, count). num_threads <= 0 means one per core;
// 1 runs inline in index order. The first exception (by worker) is rethrown
// after all workers finish.
template <typename Fn>
void ParallelFor(int count, int num_threads, Fn&& fn) {
  num_threads = std::min(ResolveThreads(num_threads), count);
  if (num_threads <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(num_threads);
  for (int w = 0; w < num_threads; ++w) {
    workers.emplace_back([&, w] {
      try {
        for (int i = next++; i < count; i = next++) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : workers) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace safearm::util

#endif  // SAFEARM_UTIL_PARALLEL_H_
